// Command-line front end. Every report is JSON (or CSV for tallies) with
// exact decimal strings and the seed of the run.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lgct/gamma.hpp"
#include "lgct/kronecker.hpp"
#include "lgct/latin.hpp"
#include "lgct/orbit.hpp"
#include "lgct/tensor.hpp"

namespace {

using nlohmann::json;
using namespace lgct;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInput = 3;

struct Config {
  unsigned threads = 1;
  double budget = 1e9;
  std::uint64_t seed = 0;
  std::string out;
  std::string checkpoint;
  std::string format = "json";
  std::size_t stop_after = 0;
  std::size_t candidates = 64;
  int a = 0;
  int b = 0;
};

struct Report {
  std::string text;
  int status = kExitPass;
};

void emit(const Config& cfg, const std::string& text) {
  const char* end = !text.empty() && text.back() == '\n' ? "" : "\n";
  if (cfg.out.empty()) {
    std::cout << text << end;
    return;
  }
  std::ofstream f(cfg.out, std::ios::trunc);
  if (!f) throw InputError("cannot write " + cfg.out);
  f << text << end;
}

TallyOptions tally_options(const Config& cfg) {
  TallyOptions o;
  o.threads = cfg.threads;
  if (!cfg.checkpoint.empty()) o.checkpoint = cfg.checkpoint;
  if (cfg.stop_after) o.stop_after_blocks = cfg.stop_after;
  return o;
}

GammaOptions gamma_options(const Config& cfg) { return {cfg.budget, cfg.threads}; }

json progress(const TallyRun& run) {
  return {{"complete", run.complete},
          {"blocks_total", run.blocks_total},
          {"blocks_resumed", run.blocks_resumed},
          {"blocks_computed", run.blocks_computed}};
}

Report cmd_tally(const Config& cfg) {
  TallyRun run = run_signed_tally(cfg.a, cfg.b, tally_options(cfg));
  const int status = run.complete ? kExitPass : kExitFail;
  if (cfg.format == "csv")
    return {"# seed=" + std::to_string(cfg.seed) + "\n" + tally_to_csv(run.tally), status};
  json j = json::parse(tally_to_json(run.tally));
  j["command"] = "tally";
  j["seed"] = cfg.seed;
  j["total"] = to_string(run.tally.total());
  j["run"] = progress(run);
  return {j.dump(), status};
}

Report cmd_alon_tarsi(const Config& cfg) {
  TallyRun run = run_signed_tally(cfg.a, cfg.a, tally_options(cfg));
  SignCounts sum;
  for (const auto& [_, c] : run.tally.patterns) sum += c;
  json j = {{"command", "alon-tarsi"},
            {"m", cfg.a},
            {"seed", cfg.seed},
            {"even", to_string(sum.plus)},
            {"odd", to_string(sum.minus)},
            {"difference", to_string(sum.imbalance())},
            {"run", progress(run)}};
  return {j.dump(), run.complete ? kExitPass : kExitFail};
}

Report cmd_prop20(const Config& cfg) {
  const Rational lhs = prop20_lhs(cfg.a, cfg.b, Expansion::LatinRestricted, cfg.threads);
  const Rational rhs = prop20_rhs(cfg.a, cfg.b, cfg.threads);
  json j = {{"command", "prop20"},      {"i", cfg.a},         {"m", cfg.b},
            {"seed", cfg.seed},         {"lhs", to_string(lhs)}, {"rhs", to_string(rhs)},
            {"verdict", lhs == rhs ? "equal" : "differ"}};
  return {j.dump(), lhs == rhs ? kExitPass : kExitFail};
}

Report cmd_sign_sum(const Config& cfg) {
  const int m = cfg.a;
  const BigInt pairing = latin_sign_sum_pairing(m, m <= 4 ? Expansion::Full : Expansion::LatinRestricted);
  const BigInt diff = alon_tarsi_difference(m, tally_options(cfg));
  json j = {{"command", "sign-sum"},
            {"m", m},
            {"seed", cfg.seed},
            {"route", m <= 4 ? "tensor" : "latin-restricted"},
            {"pairing", to_string(pairing)},
            {"alon_tarsi_difference", to_string(diff)},
            {"verdict", pairing == diff ? "equal" : "differ"}};
  return {j.dump(), pairing == diff ? kExitPass : kExitFail};
}

Report cmd_gamma_check(const Config& cfg) {
  const PowerSumCheck c = gamma_power_sum_check(cfg.a, cfg.b, gamma_options(cfg));
  json j = {{"command", "gamma-check"},
            {"m", cfg.a},
            {"i", cfg.b},
            {"seed", cfg.seed},
            {"computed", to_string(c.computed)},
            {"closed_form", to_string(c.closed_form)},
            {"verdict", c.equal() ? "equal" : "differ"}};
  return {j.dump(), c.equal() ? kExitPass : kExitFail};
}

Report cmd_witness(const Config& cfg) {
  WitnessOptions o{cfg.candidates, cfg.seed, gamma_options(cfg)};
  auto w = witness_search(cfg.a, cfg.b, o);
  if (!w) {
    json j = {{"command", "witness"}, {"m", cfg.a}, {"i", cfg.b}, {"seed", cfg.seed},
              {"found", false},       {"candidates", cfg.candidates}};
    return {j.dump(), kExitFail};
  }
  return {witness_to_json(cfg.a, cfg.b, *w), kExitPass};
}

Report cmd_kronecker(const Config& cfg) {
  const Corollary35Report r = check_corollary35(cfg.a, cfg.b);
  json j = {{"command", "kronecker"},
            {"m", cfg.a},
            {"d", cfg.b},
            {"seed", cfg.seed},
            {"entries", json::parse(corollary35_to_json(r))},
            {"all_positive", r.all_positive()}};
  return {j.dump(), r.all_positive() ? kExitPass : kExitFail};
}

// One named check of verify-all. A check that throws InfeasibleError is
// reported as skipped and does not fail the run.
struct CheckResult {
  std::string name;
  std::string status;
  json detail;
};

CheckResult run_check(const std::string& name, const std::function<std::pair<bool, json>()>& fn) {
  try {
    auto [ok, detail] = fn();
    return {name, ok ? "pass" : "fail", std::move(detail)};
  } catch (const InfeasibleError& e) {
    return {name, "skipped", {{"reason", e.what()}}};
  }
}

Report cmd_verify_all(const Config& cfg) {
  const int m = cfg.a;
  if (m < 2 || m % 2) throw InputError("verify-all needs an even m >= 2");
  if (m > 6) throw InfeasibleError("verify-all supports m <= 6", m);
  std::vector<CheckResult> checks;
  const GammaOptions gopt = gamma_options(cfg);

  BigInt diff = 0;
  checks.push_back(run_check("latin squares: signed difference nonzero in two orders", [&] {
    TallyOptions full;
    full.threads = cfg.threads;
    TallyOptions reduced = full;
    reduced.fix_first_row = true;
    const BigInt d_reduced = alon_tarsi_difference(m, reduced);
    diff = m <= 4 ? alon_tarsi_difference(m, full) : d_reduced;
    return std::pair{diff != 0 && diff == d_reduced,
                     json{{"full", to_string(diff)}, {"first_row_fixed", to_string(d_reduced)}}};
  }));

  for (int i = 1; i <= std::min(m, 2); ++i) {
    checks.push_back(run_check("tensor pairing equals squared pattern imbalance, i=" + std::to_string(i), [&] {
      const Rational lhs = prop20_lhs(i, m, Expansion::LatinRestricted, cfg.threads);
      const Rational rhs = prop20_rhs(i, m, cfg.threads);
      return std::pair{lhs == rhs, json{{"lhs", to_string(lhs)}, {"rhs", to_string(rhs)}}};
    }));
  }

  checks.push_back(run_check("symmetrized pairing equals signed difference", [&] {
    const BigInt p = latin_sign_sum_pairing(m, Expansion::LatinRestricted);
    json detail{{"pairing", to_string(p)}, {"difference", to_string(diff)}};
    bool ok = p == diff;
    if (m <= 4) {
      const BigInt full = latin_sign_sum_pairing(m, Expansion::Full);
      detail["tensor_route"] = to_string(full);
      ok = ok && full == p;
    }
    return std::pair{ok, detail};
  }));

  if (m == 2) {
    checks.push_back(run_check("translated pairings take values in {0, +D, -D}", [&] {
      const auto taus = all_permutations(m * m);
      const TranslateScanReport r = translate_pairing_scan(m, taus);
      return std::pair{r.pass(), json{{"reference", to_string(r.reference)}, {"violations", r.violations}}};
    }));
  }

  for (int i = 1; i <= m; ++i) {
    checks.push_back(run_check("gamma power-sum closed form, i=" + std::to_string(i), [&] {
      const PowerSumCheck c = gamma_power_sum_check(m, i, gopt);
      return std::pair{c.equal(), json{{"computed", to_string(c.computed)}, {"closed_form", to_string(c.closed_form)}}};
    }));
  }

  for (int i = 1; i <= std::min(m, 2); ++i) {
    checks.push_back(run_check("nonvanishing witness, i=" + std::to_string(i), [&] {
      auto w = witness_search(m, i, {cfg.candidates, cfg.seed, gopt});
      if (!w) return std::pair{false, json{{"found", false}}};
      return std::pair{true, json::parse(witness_to_json(m, i, *w))};
    }));
  }

  for (int d = 1; d * m <= 8; ++d) {
    checks.push_back(run_check("symmetric Kronecker positivity, d=" + std::to_string(d), [&] {
      const Corollary35Report r = check_corollary35(m, d);
      return std::pair{r.all_positive(), json::parse(corollary35_to_json(r))};
    }));
  }

  if (m <= 4) {
    for (int i = 2; i <= m; ++i) {
      checks.push_back(run_check("sign factorization over last-row projection, i=" + std::to_string(i), [&] {
        const FactorizationReport r = verify_sign_factorization(i, m);
        return std::pair{r.pass, json{{"rectangles", r.rectangles}, {"pattern_pairs", r.pattern_pairs}}};
      }));
    }
  }

  bool pass = true;
  json arr = json::array();
  for (const auto& c : checks) {
    pass = pass && c.status != "fail";
    arr.push_back({{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
  }
  json j = {{"command", "verify-all"}, {"m", m}, {"seed", cfg.seed}, {"checks", arr}, {"pass", pass}};
  return {j.dump(), pass ? kExitPass : kExitFail};
}

json error_json(const std::string& kind, const std::string& message, const Config& cfg) {
  return {{"error", kind}, {"message", message}, {"seed", cfg.seed}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed Latin rectangles, tensor pairings and the gamma invariant"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--budget", cfg.budget, "Determinant budget for gamma evaluation")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for randomized candidates");
  app.add_option("--out", cfg.out, "Write the report here instead of stdout");
  app.add_option("--checkpoint", cfg.checkpoint, "Checkpoint file for tally and alon-tarsi");
  app.add_option("--format", cfg.format, "Tally output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--candidates", cfg.candidates, "Witness schedule length")->check(CLI::PositiveNumber);
  app.add_option("--stop-after", cfg.stop_after, "Stop after this many new blocks")->group("");

  std::function<Report(const Config&)> handler;
  auto sub = [&](const char* name, const char* help, const char* first, const char* second,
                 Report (*fn)(const Config&)) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option(first, cfg.a)->required();
    if (second) s->add_option(second, cfg.b)->required();
    s->callback([&handler, fn] { handler = fn; });
  };
  sub("tally", "Per-pattern signed counts of Latin i x m rectangles", "i", "m", cmd_tally);
  sub("alon-tarsi", "Column-even minus column-odd Latin squares of order m", "m", nullptr, cmd_alon_tarsi);
  sub("prop20", "Tensor pairing against squared pattern imbalances", "i", "m", cmd_prop20);
  sub("sign-sum", "Symmetrized pairing against the signed difference", "m", nullptr, cmd_sign_sum);
  sub("gamma-check", "gamma on the power sum against its closed form", "m", "i", cmd_gamma_check);
  sub("witness", "Search for A with gamma(theta(A)) != 0", "m", "i", cmd_witness);
  sub("kronecker", "Symmetric Kronecker positivity for m and d", "m", "d", cmd_kronecker);
  sub("verify-all", "Run every check for an even m", "m", nullptr, cmd_verify_all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    Report r = handler(cfg);
    emit(cfg, r.text);
    return r.status;
  } catch (const InputError& e) {
    std::cout << error_json("input", e.what(), cfg).dump() << '\n';
    return kExitInput;
  } catch (const InfeasibleError& e) {
    json j = error_json("infeasible", e.what(), cfg);
    j["estimate"] = e.estimate();
    std::cout << j.dump() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cout << error_json("internal", e.what(), cfg).dump() << '\n';
    return kExitFail;
  }
}
