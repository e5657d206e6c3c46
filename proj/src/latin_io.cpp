#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lgct/latin.hpp"

namespace lgct {

using nlohmann::json;

namespace {

json patterns_json(const SignedTally& tally) {
  json arr = json::array();
  for (const auto& [pattern, counts] : tally.patterns) {
    arr.push_back({{"pattern", pattern.to_one_based()},
                   {"plus", to_string(counts.plus)},
                   {"minus", to_string(counts.minus)}});
  }
  return arr;
}

void read_patterns(const json& arr, SignedTally& tally) {
  for (const auto& entry : arr) {
    Pattern p = Pattern::from_one_based(entry.at("pattern").get<std::vector<std::vector<int>>>());
    if (p.subset_size() != tally.rows || p.cols() != tally.cols)
      throw InputError("pattern shape does not match the tally");
    tally.patterns[p] += SignCounts{parse_bigint(entry.at("plus").get<std::string>()),
                                    parse_bigint(entry.at("minus").get<std::string>())};
  }
}

std::string subset_string(const std::vector<int>& s) {
  std::string out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(s[k]);
  }
  return out;
}

}  // namespace

std::string tally_to_json(const SignedTally& tally) {
  json j = {{"i", tally.rows}, {"m", tally.cols}, {"patterns", patterns_json(tally)}};
  return j.dump();
}

std::string tally_to_csv(const SignedTally& tally) {
  // One row per pattern; subsets are space-separated and joined by '|'.
  std::ostringstream out;
  out << "i,m,pattern,plus,minus\n";
  for (const auto& [pattern, counts] : tally.patterns) {
    std::string cell;
    for (const auto& s : pattern.to_one_based()) {
      if (!cell.empty()) cell += '|';
      cell += subset_string(s);
    }
    out << tally.rows << ',' << tally.cols << ",\"" << cell << "\"," << to_string(counts.plus) << ','
        << to_string(counts.minus) << '\n';
  }
  return out.str();
}

SignedTally tally_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed tally JSON: ") + e.what());
  }
  SignedTally t;
  try {
    t.rows = j.at("i").get<int>();
    t.cols = j.at("m").get<int>();
    read_patterns(j.at("patterns"), t);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed tally JSON: ") + e.what());
  }
  return t;
}

std::string checkpoint_line(const CheckpointRecord& record) {
  BigInt plus = 0, minus = 0;
  for (const auto& [_, c] : record.block.patterns) {
    plus += c.plus;
    minus += c.minus;
  }
  json j = {{"prefix", record.prefix}, {"plus", to_string(plus)}, {"minus", to_string(minus)}};
  // Rectangles with fewer rows than columns span several patterns; the
  // per-pattern breakdown is needed to rebuild the tally on resume.
  if (record.block.rows != record.block.cols) j["patterns"] = patterns_json(record.block);
  return j.dump();
}

std::vector<CheckpointRecord> read_checkpoint(const std::filesystem::path& path, int rows, int cols) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read checkpoint file " + path.string());
  std::vector<CheckpointRecord> out;
  std::set<std::vector<std::vector<int>>> seen;
  const std::size_t prefix_rows = rows == 1 ? 1 : 2;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      CheckpointRecord rec;
      rec.prefix = j.at("prefix").get<std::vector<std::vector<int>>>();
      if (rec.prefix.size() != prefix_rows) continue;
      bool shape_ok = true;
      for (const auto& r : rec.prefix) shape_ok = shape_ok && static_cast<int>(r.size()) == cols;
      if (!shape_ok) continue;
      if (!seen.insert(rec.prefix).second) continue;
      rec.block.rows = rows;
      rec.block.cols = cols;
      if (j.contains("patterns")) {
        read_patterns(j.at("patterns"), rec.block);
      } else {
        if (rows != cols) continue;
        std::vector<std::uint64_t> masks(static_cast<std::size_t>(cols),
                                         cols == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cols) - 1);
        SignCounts c{parse_bigint(j.at("plus").get<std::string>()),
                     parse_bigint(j.at("minus").get<std::string>())};
        if (c.plus + c.minus > 0) rec.block.patterns[pattern_from_masks_unchecked(rows, masks)] = c;
      }
      out.push_back(std::move(rec));
    } catch (const std::exception&) {
      // torn or foreign line
    }
  }
  return out;
}

}  // namespace lgct
