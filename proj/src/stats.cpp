#include "affectlog/stats.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace affectlog {

std::string_view to_string(UnitKind kind) {
  return kind == UnitKind::Story ? "story" : "sentence";
}

UnitKind unit_kind_from_string(std::string_view s) {
  if (s == "story" || s == "STORY") return UnitKind::Story;
  if (s == "sentence" || s == "SENTENCE") return UnitKind::Sentence;
  throw std::invalid_argument("unknown unit kind '" + std::string(s) + "'");
}

void ThresholdParams::validate() const {
  if (theta_f < 1)
    throw std::invalid_argument("theta_f must be >= 1");
  if (!(theta_p >= 0.0 && theta_p <= 1.0))
    throw std::invalid_argument("theta_p must be in [0, 1]");
  if (theta_n < 1)
    throw std::invalid_argument("theta_n must be >= 1");
}

const PatternStats* StatsTable::find(std::string_view key) const {
  auto it = entries.find(key);
  return it == entries.end() ? nullptr : &it->second;
}

StatsTable collect_stats(std::span<const LabeledUnit> units, UnitKind kind) {
  StatsTable table;
  table.unit_kind = kind;
  for (const LabeledUnit& unit : units) {
    if (unit.label != Polarity::Pos && unit.label != Polarity::Neg)
      throw std::invalid_argument(
          "collect_stats requires units labeled pos or neg");
    for (const std::string& key : unit.keys) {
      PatternStats& ps = table.entries[key];
      if (unit.label == Polarity::Pos) ++ps.pos_count;
      else ++ps.neg_count;
    }
  }
  return table;
}

StatsTable merge_stats(const StatsTable& a, const StatsTable& b) {
  if (a.unit_kind != b.unit_kind)
    throw std::invalid_argument("cannot merge stats of different unit kinds");
  StatsTable out = a;
  for (const auto& [key, ps] : b.entries) {
    PatternStats& dst = out.entries[key];
    dst.pos_count += ps.pos_count;
    dst.neg_count += ps.neg_count;
  }
  return out;
}

std::uint64_t qualifying_hits(std::span<const std::string> keys,
                              const StatsTable& table, Polarity cls,
                              const ThresholdParams& params) {
  if (cls != Polarity::Pos && cls != Polarity::Neg)
    throw std::invalid_argument("qualifying_hits requires pos or neg");
  std::uint64_t hits = 0;
  for (const std::string& key : keys) {
    const PatternStats* ps = table.find(key);
    if (ps == nullptr || ps->freq() < params.theta_f) continue;
    const double p = cls == Polarity::Pos ? ps->p_pos() : ps->p_neg();
    if (p >= params.theta_p) ++hits;
  }
  return hits;
}

Polarity classify_threshold(std::span<const std::string> keys,
                            const StatsTable& table,
                            const ThresholdParams& pos,
                            const ThresholdParams& neg) {
  pos.validate();
  neg.validate();
  const bool pos_fires =
      qualifying_hits(keys, table, Polarity::Pos, pos) >= pos.theta_n;
  const bool neg_fires =
      qualifying_hits(keys, table, Polarity::Neg, neg) >= neg.theta_n;
  if (pos_fires && !neg_fires) return Polarity::Pos;
  if (neg_fires && !pos_fires) return Polarity::Neg;
  return Polarity::Neutral;
}

void save_stats_jsonl(const StatsTable& table, std::ostream& out) {
  for (const auto& [key, ps] : table.entries) {
    nlohmann::json j;
    j["key"] = key;
    j["freq"] = ps.freq();
    j["pos_count"] = ps.pos_count;
    j["neg_count"] = ps.neg_count;
    out << j.dump() << '\n';
  }
}

StatsTable load_stats_jsonl(std::istream& in, UnitKind kind) {
  StatsTable table;
  table.unit_kind = kind;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("stats line " + std::to_string(line_no) +
                               ": " + e.what());
    }
    if (!j.is_object() || !j.contains("key") || !j.contains("freq") ||
        !j.contains("pos_count") || !j.contains("neg_count"))
      throw std::runtime_error("stats line " + std::to_string(line_no) +
                               ": expected {key, freq, pos_count, neg_count}");
    const std::string key = j["key"].get<std::string>();
    PatternStats ps;
    ps.pos_count = j["pos_count"].get<std::uint64_t>();
    ps.neg_count = j["neg_count"].get<std::uint64_t>();
    if (j["freq"].get<std::uint64_t>() != ps.freq())
      throw std::runtime_error("stats line " + std::to_string(line_no) +
                               ": freq != pos_count + neg_count for '" + key +
                               "'");
    if (!table.entries.emplace(key, ps).second)
      throw std::runtime_error("stats line " + std::to_string(line_no) +
                               ": duplicate key '" + key + "'");
  }
  return table;
}

}  // namespace affectlog
