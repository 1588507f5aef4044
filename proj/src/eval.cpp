#include "affectlog/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "affectlog/parallel.hpp"
#include "json_util.hpp"

namespace affectlog {

namespace {

std::size_t gold_slot(Polarity p) {
  if (p == Polarity::Pos) return 0;
  if (p == Polarity::Neg) return 1;
  throw std::invalid_argument("gold labels must be pos or neg");
}

std::size_t pred_slot(Polarity p) {
  switch (p) {
    case Polarity::Pos: return 0;
    case Polarity::Neg: return 1;
    case Polarity::Neutral: return 2;
    default:
      throw std::invalid_argument("predictions must be pos, neg, or neutral");
  }
}

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0
                  : static_cast<double>(num) / static_cast<double>(den);
}

ClassMetrics metrics_for(const EvalReport& r, std::size_t cls) {
  const std::uint64_t tp = r.counts[cls][cls];
  const std::uint64_t fp = r.counts[1 - cls][cls];
  const std::uint64_t gold_total =
      r.counts[cls][0] + r.counts[cls][1] + r.counts[cls][2];
  ClassMetrics m;
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, gold_total);
  const double pr = m.precision + m.recall;
  m.f1 = pr == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / pr;
  return m;
}

void finalize(EvalReport& r) {
  r.pos = metrics_for(r, 0);
  r.neg = metrics_for(r, 1);
  r.macro_f = (r.pos.f1 + r.neg.f1) / 2.0;
}

void check_class_grid(const ClassGrid& g, const char* cls) {
  if (g.theta_f.empty() || g.theta_p.empty() || g.theta_n.empty())
    throw std::invalid_argument(std::string("tune grid for ") + cls +
                                " has an empty dimension");
  for (std::uint64_t f : g.theta_f)
    if (f < 1)
      throw std::invalid_argument(std::string(cls) + " theta_f must be >= 1");
  for (double p : g.theta_p)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument(std::string(cls) +
                                  " theta_p must be in [0, 1]");
  for (std::uint64_t n : g.theta_n)
    if (n < 1)
      throw std::invalid_argument(std::string(cls) + " theta_n must be >= 1");
}

// Total preference order over tune candidates. Positive-class settings are
// compared before negative-class ones.
bool prefer(double macro_a, const ThresholdParams& pa,
            const ThresholdParams& na, double macro_b,
            const ThresholdParams& pb, const ThresholdParams& nb) {
  if (macro_a != macro_b) return macro_a > macro_b;
  if (pa.theta_p != pb.theta_p) return pa.theta_p > pb.theta_p;
  if (pa.theta_f != pb.theta_f) return pa.theta_f > pb.theta_f;
  if (pa.theta_n != pb.theta_n) return pa.theta_n < pb.theta_n;
  if (na.theta_p != nb.theta_p) return na.theta_p > nb.theta_p;
  if (na.theta_f != nb.theta_f) return na.theta_f > nb.theta_f;
  if (na.theta_n != nb.theta_n) return na.theta_n < nb.theta_n;
  return false;
}

std::vector<std::uint64_t> class_grid_from_json(const nlohmann::json& j,
                                                const char* field) {
  std::vector<std::uint64_t> out;
  for (const nlohmann::json& v : j.at(field)) out.push_back(v.get<std::uint64_t>());
  return out;
}

}  // namespace

std::uint64_t EvalReport::count(Polarity gold, Polarity pred) const {
  return counts[gold_slot(gold)][pred_slot(pred)];
}

std::uint64_t EvalReport::total() const {
  std::uint64_t sum = 0;
  for (const auto& row : counts)
    for (std::uint64_t c : row) sum += c;
  return sum;
}

EvalReport evaluate(std::span<const Polarity> pred,
                    std::span<const Polarity> gold) {
  if (pred.size() != gold.size())
    throw std::invalid_argument("prediction/gold length mismatch");
  EvalReport r;
  for (std::size_t i = 0; i < gold.size(); ++i)
    ++r.counts[gold_slot(gold[i])][pred_slot(pred[i])];
  finalize(r);
  return r;
}

void TuneGrid::validate() const {
  check_class_grid(pos, "pos");
  check_class_grid(neg, "neg");
}

TuneResult tune_thresholds(std::span<const LabeledUnit> dev,
                           const StatsTable& table, const TuneGrid& grid) {
  grid.validate();
  if (dev.empty())
    throw std::invalid_argument("tune requires a non-empty dev set");
  bool has_pos = false;
  bool has_neg = false;
  for (const LabeledUnit& u : dev) {
    if (u.label == Polarity::Pos) has_pos = true;
    else if (u.label == Polarity::Neg) has_neg = true;
    else throw std::invalid_argument("dev units must be labeled pos or neg");
  }
  if (!has_pos || !has_neg)
    throw std::invalid_argument("tune requires both classes in the dev set");

  // Hit counts depend only on (theta_f, theta_p); theta_n just thresholds
  // them. Precompute per unit for every (f, p) pair of each class.
  struct FpPair {
    std::uint64_t theta_f;
    double theta_p;
  };
  std::vector<FpPair> pos_fp;
  for (std::uint64_t f : grid.pos.theta_f)
    for (double p : grid.pos.theta_p) pos_fp.push_back({f, p});
  std::vector<FpPair> neg_fp;
  for (std::uint64_t f : grid.neg.theta_f)
    for (double p : grid.neg.theta_p) neg_fp.push_back({f, p});

  std::vector<std::vector<std::uint64_t>> hits_pos(dev.size());
  std::vector<std::vector<std::uint64_t>> hits_neg(dev.size());
  parallel_for(dev.size(), [&](std::size_t u) {
    hits_pos[u].reserve(pos_fp.size());
    for (const FpPair& fp : pos_fp)
      hits_pos[u].push_back(qualifying_hits(
          dev[u].keys, table, Polarity::Pos, {fp.theta_f, fp.theta_p, 1}));
    hits_neg[u].reserve(neg_fp.size());
    for (const FpPair& fp : neg_fp)
      hits_neg[u].push_back(qualifying_hits(
          dev[u].keys, table, Polarity::Neg, {fp.theta_f, fp.theta_p, 1}));
  });

  struct Candidate {
    bool valid = false;
    double macro = -1.0;
    ThresholdParams pos;
    ThresholdParams neg;
    EvalReport report;
  };

  // One best-so-far slot per positive (f, p) pair; the inner loops cover
  // positive theta_n and the whole negative grid.
  std::vector<Candidate> best_per_pos(pos_fp.size());
  parallel_for(pos_fp.size(), [&](std::size_t pi) {
    Candidate best;
    for (std::uint64_t pn : grid.pos.theta_n) {
      const ThresholdParams pos_params{pos_fp[pi].theta_f,
                                       pos_fp[pi].theta_p, pn};
      for (std::size_t ni = 0; ni < neg_fp.size(); ++ni) {
        for (std::uint64_t nn : grid.neg.theta_n) {
          const ThresholdParams neg_params{neg_fp[ni].theta_f,
                                           neg_fp[ni].theta_p, nn};
          EvalReport r;
          for (std::size_t u = 0; u < dev.size(); ++u) {
            const bool pos_fires = hits_pos[u][pi] >= pn;
            const bool neg_fires = hits_neg[u][ni] >= nn;
            Polarity pred = Polarity::Neutral;
            if (pos_fires && !neg_fires) pred = Polarity::Pos;
            else if (neg_fires && !pos_fires) pred = Polarity::Neg;
            ++r.counts[gold_slot(dev[u].label)][pred_slot(pred)];
          }
          finalize(r);
          if (!best.valid ||
              prefer(r.macro_f, pos_params, neg_params, best.macro,
                     best.pos, best.neg)) {
            best = Candidate{true, r.macro_f, pos_params, neg_params, r};
          }
        }
      }
    }
    best_per_pos[pi] = std::move(best);
  });

  Candidate winner;
  for (const Candidate& c : best_per_pos) {
    if (!c.valid) continue;
    if (!winner.valid || prefer(c.macro, c.pos, c.neg, winner.macro,
                                winner.pos, winner.neg))
      winner = c;
  }
  return TuneResult{winner.pos, winner.neg, winner.report};
}

TuneGrid load_tune_grid(const std::filesystem::path& path) {
  const nlohmann::json j = detail::parse_json_file(path);
  TuneGrid grid;
  auto fill = [&j](const char* cls, ClassGrid& target) {
    const nlohmann::json& cj = j.at(cls);
    target.theta_f = class_grid_from_json(cj, "theta_f");
    for (const nlohmann::json& v : cj.at("theta_p"))
      target.theta_p.push_back(v.get<double>());
    target.theta_n = class_grid_from_json(cj, "theta_n");
  };
  try {
    fill("pos", grid.pos);
    fill("neg", grid.neg);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad tune grid " + path.string() + ": " +
                             e.what());
  }
  grid.validate();
  return grid;
}

void write_eval_report_json(const EvalReport& report, std::ostream& out) {
  nlohmann::json j;
  j["pos"] = {{"precision", report.pos.precision},
              {"recall", report.pos.recall},
              {"f1", report.pos.f1}};
  j["neg"] = {{"precision", report.neg.precision},
              {"recall", report.neg.recall},
              {"f1", report.neg.f1}};
  j["macro_f"] = report.macro_f;
  j["counts"] = {
      {"gold_pos",
       {{"pos", report.counts[0][0]},
        {"neg", report.counts[0][1]},
        {"neutral", report.counts[0][2]}}},
      {"gold_neg",
       {{"pos", report.counts[1][0]},
        {"neg", report.counts[1][1]},
        {"neutral", report.counts[1][2]}}}};
  out << j.dump(2) << '\n';
}

void write_results_table(std::span<const NamedReport> rows,
                         std::ostream& out) {
  std::size_t width = std::string("classifier").size();
  for (const NamedReport& row : rows) width = std::max(width, row.name.size());
  auto pad = [&](const std::string& s) {
    std::string padded = s;
    padded.resize(width, ' ');
    return padded;
  };
  out << pad("classifier") << "  pos_f1  neg_f1  macro_f\n";
  char buf[64];
  for (const NamedReport& row : rows) {
    std::snprintf(buf, sizeof(buf), "  %6.2f  %6.2f  %7.2f",
                  row.report.pos.f1, row.report.neg.f1, row.report.macro_f);
    out << pad(row.name) << buf << '\n';
  }
}

}  // namespace affectlog
