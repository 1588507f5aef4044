#include "affectlog/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "affectlog/patterns.hpp"
#include "test_util.hpp"

using namespace affectlog;
using namespace affectlog::testutil;

namespace {

StatsTable make_table(
    UnitKind kind,
    const std::map<std::string, std::pair<std::uint64_t, std::uint64_t>>&
        counts) {
  StatsTable t;
  t.unit_kind = kind;
  for (const auto& [key, pn] : counts)
    t.entries[key] = PatternStats{pn.first, pn.second};
  return t;
}

// Reference implementation of the hit rule, kept deliberately naive.
Polarity oracle_classify(const std::vector<std::string>& keys,
                         const StatsTable& table, const ThresholdParams& pos,
                         const ThresholdParams& neg) {
  std::uint64_t pos_hits = 0;
  std::uint64_t neg_hits = 0;
  for (const std::string& key : keys) {
    auto it = table.entries.find(key);
    if (it == table.entries.end()) continue;
    const PatternStats& ps = it->second;
    if (ps.freq() >= pos.theta_f && ps.p_pos() >= pos.theta_p) ++pos_hits;
    if (ps.freq() >= neg.theta_f && ps.p_neg() >= neg.theta_p) ++neg_hits;
  }
  const bool p = pos_hits >= pos.theta_n;
  const bool n = neg_hits >= neg.theta_n;
  if (p && !n) return Polarity::Pos;
  if (n && !p) return Polarity::Neg;
  return Polarity::Neutral;
}

std::vector<LabeledUnit> story_units(const std::vector<Document>& docs) {
  std::vector<LabeledUnit> units;
  for (const Document& d : docs)
    units.push_back(LabeledUnit{story_keys(d), d.label});
  return units;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("unit kind strings round-trip") {
  CHECK(to_string(UnitKind::Story) == "story");
  CHECK(to_string(UnitKind::Sentence) == "sentence");
  CHECK(unit_kind_from_string("story") == UnitKind::Story);
  CHECK(unit_kind_from_string("sentence") == UnitKind::Sentence);
  CHECK_THROWS_AS(unit_kind_from_string("paragraph"), std::invalid_argument);
}

TEST_CASE("pattern stats derive probabilities from counts") {
  const PatternStats ps{7, 3};
  CHECK(ps.freq() == 10);
  CHECK(ps.p_pos() == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(ps.p_neg() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(std::abs(ps.p_pos() + ps.p_neg() - 1.0) <= 1e-12);
  const PatternStats empty;
  CHECK(empty.freq() == 0);
  CHECK(empty.p_pos() == 0.0);
  CHECK(empty.p_neg() == 0.0);
}

TEST_CASE("collect_stats tallies occurrences per class with multiplicity") {
  const std::vector<LabeledUnit> units = {
      {{"A", "A", "B"}, Polarity::Pos},
      {{"A"}, Polarity::Neg},
  };
  const StatsTable t = collect_stats(units, UnitKind::Story);
  CHECK(t.unit_kind == UnitKind::Story);
  REQUIRE(t.entries.size() == 2);
  CHECK(t.entries.at("A") == PatternStats{2, 1});
  CHECK(t.entries.at("B") == PatternStats{1, 0});
  CHECK(t.find("A") != nullptr);
  CHECK(t.find("C") == nullptr);
}

TEST_CASE("collect_stats rejects units without a pos/neg label") {
  CHECK(collect_stats({}, UnitKind::Sentence).entries.empty());
  const std::vector<LabeledUnit> neutral = {{{"A"}, Polarity::Neutral}};
  CHECK_THROWS_AS(collect_stats(neutral, UnitKind::Story),
                  std::invalid_argument);
  const std::vector<LabeledUnit> unlabeled = {{{"A"}, Polarity::Unlabeled}};
  CHECK_THROWS_AS(collect_stats(unlabeled, UnitKind::Story),
                  std::invalid_argument);
}

TEST_CASE("collect_stats matches a brute-force recount on the fixture") {
  const auto docs = load_fixture("stories6.conllu");
  const StatsTable t = collect_stats(story_units(docs), UnitKind::Story);

  std::map<std::string, PatternStats> recount;
  for (const Document& d : docs)
    for (const Sentence& s : d.sentences)
      for (const PatternInstance& p : extract_patterns(s)) {
        PatternStats& ps = recount[canonical_key(p)];
        if (d.label == Polarity::Pos) ++ps.pos_count;
        else ++ps.neg_count;
      }

  REQUIRE(t.entries.size() == recount.size());
  for (const auto& [key, ps] : recount) {
    CAPTURE(key);
    REQUIRE(t.find(key) != nullptr);
    CHECK(*t.find(key) == ps);
    CHECK(std::abs(t.find(key)->p_pos() + t.find(key)->p_neg() - 1.0) <=
          1e-12);
  }
  // The fixture is engineered to exercise both classes and negated keys.
  CHECK(t.find("ACTVP_DOBJ:HAVE") != nullptr);
  CHECK(t.entries.at("ACTVP_DOBJ:HAVE").pos_count == 4);
  CHECK(t.entries.at("ACTVP_DOBJ:HAVE").neg_count == 2);
  CHECK(t.entries.at("ACTVP_DOBJ:HAVE_FUN") == PatternStats{3, 1});
  bool negated_key_seen = false;
  for (const auto& [key, ps] : t.entries)
    negated_key_seen |= key.starts_with("NOT_");
  CHECK(negated_key_seen);
}

TEST_CASE("merge_stats sums counts and preserves identities") {
  const auto docs = load_fixture("stories6.conllu");
  const auto units = story_units(docs);
  const std::vector<LabeledUnit> first(units.begin(), units.begin() + 2);
  const std::vector<LabeledUnit> second(units.begin() + 2, units.begin() + 4);
  const std::vector<LabeledUnit> third(units.begin() + 4, units.end());

  const StatsTable a = collect_stats(first, UnitKind::Story);
  const StatsTable b = collect_stats(second, UnitKind::Story);
  const StatsTable c = collect_stats(third, UnitKind::Story);
  const StatsTable whole = collect_stats(units, UnitKind::Story);

  const StatsTable empty = collect_stats({}, UnitKind::Story);
  CHECK(merge_stats(a, empty).entries == a.entries);
  CHECK(merge_stats(a, b).entries == merge_stats(b, a).entries);
  CHECK(merge_stats(merge_stats(a, b), c).entries ==
        merge_stats(a, merge_stats(b, c)).entries);
  CHECK(merge_stats(merge_stats(a, b), c).entries == whole.entries);

  StatsTable sentence_kind;
  sentence_kind.unit_kind = UnitKind::Sentence;
  CHECK_THROWS_AS(merge_stats(a, sentence_kind), std::invalid_argument);
}

TEST_CASE("threshold params validate their ranges") {
  auto validate = [](std::uint64_t f, double p, std::uint64_t n) {
    ThresholdParams{f, p, n}.validate();
  };
  CHECK_NOTHROW(validate(1, 0.0, 1));
  CHECK_NOTHROW(validate(10, 1.0, 4));
  CHECK_THROWS_AS(validate(0, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(validate(1, -0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(validate(1, 1.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(validate(1, 0.5, 0), std::invalid_argument);
}

TEST_CASE("classify_threshold implements the qualifying-hit rule") {
  const StatsTable t = make_table(
      UnitKind::Story,
      {{"POSKEY", {10, 0}}, {"NEGKEY", {0, 10}}, {"WEAK", {1, 1}}});
  const ThresholdParams pos{10, 0.7, 3};
  const ThresholdParams neg{10, 0.85, 4};

  // Four qualifying negative hits under the high-precision settings.
  const std::vector<std::string> four_neg = {"NEGKEY", "NEGKEY", "NEGKEY",
                                             "NEGKEY"};
  CHECK(classify_threshold(four_neg, t, pos, neg) == Polarity::Neg);
  // One short of theta_n stays neutral: occurrences count with multiplicity.
  const std::vector<std::string> three_neg = {"NEGKEY", "NEGKEY", "NEGKEY"};
  CHECK(classify_threshold(three_neg, t, pos, neg) == Polarity::Neutral);

  CHECK(classify_threshold({}, t, pos, neg) == Polarity::Neutral);
  const std::vector<std::string> three_pos = {"POSKEY", "POSKEY", "POSKEY"};
  CHECK(classify_threshold(three_pos, t, pos, neg) == Polarity::Pos);

  std::vector<std::string> both = three_pos;
  both.insert(both.end(), four_neg.begin(), four_neg.end());
  CHECK(classify_threshold(both, t, pos, neg) == Polarity::Neutral);

  // Patterns failing theta_f or unknown to the table never qualify.
  const std::vector<std::string> weak = {"WEAK", "WEAK", "WEAK", "WEAK",
                                         "GHOST"};
  CHECK(classify_threshold(weak, t, pos, neg) == Polarity::Neutral);

  CHECK(qualifying_hits(four_neg, t, Polarity::Neg, neg) == 4);
  CHECK(qualifying_hits(four_neg, t, Polarity::Pos, pos) == 0);
  CHECK_THROWS_AS(qualifying_hits(four_neg, t, Polarity::Neutral, neg),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      classify_threshold(four_neg, t, ThresholdParams{0, 0.5, 1}, neg),
      std::invalid_argument);
}

TEST_CASE("classify_threshold agrees with the naive rule on the fixture") {
  const auto docs = load_fixture("stories6.conllu");
  const auto units = story_units(docs);
  const StatsTable t = collect_stats(units, UnitKind::Story);
  const std::vector<std::pair<ThresholdParams, ThresholdParams>> settings = {
      {{10, 0.7, 3}, {10, 0.85, 4}},
      {{1, 0.0, 1}, {1, 0.0, 1}},
      {{2, 0.6, 1}, {2, 0.6, 1}},
      {{3, 0.75, 2}, {4, 0.75, 1}},
  };
  for (const auto& [pos, neg] : settings)
    for (const LabeledUnit& u : units)
      CHECK(classify_threshold(u.keys, t, pos, neg) ==
            oracle_classify(u.keys, t, pos, neg));
}

TEST_CASE("raising any threshold never grows a labeled set") {
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> count_dist(0, 12);
  std::uniform_int_distribution<int> key_dist(0, 19);
  std::uniform_int_distribution<int> len_dist(0, 8);
  std::uniform_real_distribution<double> p_dist(0.0, 1.0);

  for (int corpus = 0; corpus < 60; ++corpus) {
    StatsTable t;
    t.unit_kind = UnitKind::Story;
    for (int k = 0; k < 20; ++k)
      t.entries["K" + std::to_string(k)] =
          PatternStats{static_cast<std::uint64_t>(count_dist(rng)),
                       static_cast<std::uint64_t>(count_dist(rng))};
    std::vector<std::vector<std::string>> units(20);
    for (auto& u : units)
      for (int i = len_dist(rng); i > 0; --i)
        u.push_back("K" + std::to_string(key_dist(rng)));

    const ThresholdParams pos{1 + static_cast<std::uint64_t>(count_dist(rng)),
                              p_dist(rng),
                              1 + static_cast<std::uint64_t>(count_dist(rng)) %
                                      4};
    const ThresholdParams neg{1 + static_cast<std::uint64_t>(count_dist(rng)),
                              p_dist(rng),
                              1 + static_cast<std::uint64_t>(count_dist(rng)) %
                                      4};

    auto labeled_set = [&](Polarity cls, const ThresholdParams& p,
                           const ThresholdParams& n) {
      std::set<std::size_t> out;
      for (std::size_t i = 0; i < units.size(); ++i)
        if (classify_threshold(units[i], t, p, n) == cls) out.insert(i);
      return out;
    };
    auto subset = [](const std::set<std::size_t>& a,
                     const std::set<std::size_t>& b) {
      return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };

    const auto base_pos = labeled_set(Polarity::Pos, pos, neg);
    const auto base_neg = labeled_set(Polarity::Neg, pos, neg);

    for (int dim = 0; dim < 3; ++dim) {
      ThresholdParams bumped_pos = pos;
      ThresholdParams bumped_neg = neg;
      if (dim == 0) {
        bumped_pos.theta_f += 3;
        bumped_neg.theta_f += 3;
      } else if (dim == 1) {
        bumped_pos.theta_p = std::min(1.0, bumped_pos.theta_p + 0.2);
        bumped_neg.theta_p = std::min(1.0, bumped_neg.theta_p + 0.2);
      } else {
        bumped_pos.theta_n += 1;
        bumped_neg.theta_n += 1;
      }
      // Raising the positive-class thresholds only.
      CHECK(subset(labeled_set(Polarity::Pos, bumped_pos, neg), base_pos));
      // Raising the negative-class thresholds only.
      CHECK(subset(labeled_set(Polarity::Neg, pos, bumped_neg), base_neg));
    }
  }
}

TEST_CASE("stats tables serialize to JSON Lines and back") {
  const StatsTable t = make_table(
      UnitKind::Sentence,
      {{"SUBJ_ACTVP:CRY", {1, 5}}, {"ACTVP_DOBJ:HAVE_FUN", {3, 1}}});
  std::ostringstream os;
  save_stats_jsonl(t, os);
  // Map iteration order makes the output deterministic and key-sorted.
  {
    std::istringstream lines(os.str());
    std::string line;
    std::vector<std::string> keys;
    while (std::getline(lines, line)) {
      const auto j = nlohmann::json::parse(line);
      keys.push_back(j.at("key").get<std::string>());
      CHECK(j.at("freq").get<std::uint64_t>() ==
            j.at("pos_count").get<std::uint64_t>() +
                j.at("neg_count").get<std::uint64_t>());
    }
    CHECK(keys == std::vector<std::string>{"ACTVP_DOBJ:HAVE_FUN",
                                           "SUBJ_ACTVP:CRY"});
  }

  std::istringstream is(os.str());
  const StatsTable back = load_stats_jsonl(is, UnitKind::Sentence);
  CHECK(back.unit_kind == UnitKind::Sentence);
  CHECK(back.entries == t.entries);
}

TEST_CASE("load_stats_jsonl rejects corrupt rows") {
  auto load = [](const std::string& text) {
    std::istringstream is(text);
    return load_stats_jsonl(is, UnitKind::Story);
  };
  CHECK_THROWS_AS(load("not json\n"), std::runtime_error);
  CHECK_THROWS_AS(load("{\"key\":\"A\",\"freq\":1}\n"), std::runtime_error);
  CHECK_THROWS_AS(
      load("{\"key\":\"A\",\"freq\":3,\"pos_count\":1,\"neg_count\":1}\n"),
      std::runtime_error);
  CHECK_THROWS_AS(
      load("{\"key\":\"A\",\"freq\":2,\"pos_count\":1,\"neg_count\":1}\n"
           "{\"key\":\"A\",\"freq\":2,\"pos_count\":1,\"neg_count\":1}\n"),
      std::runtime_error);
}

}  // TEST_SUITE("stats")
