#pragma once

#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "affectlog/stats.hpp"

namespace affectlog {

// Binary affect value; possession composition has no neutral case.
enum class AffectValue { Plus, Minus };

enum class PossessionPredicate { Have, Lack };

std::string_view to_string(AffectValue v);
std::string_view to_string(PossessionPredicate p);

// Affect of "X has/lacks Y" toward the possessor's interests: having
// something of like polarity is good, lacking it is bad, and vice versa.
AffectValue compose_possession(AffectValue x, AffectValue y,
                               PossessionPredicate pred);

// Inverse on the object argument with a first-person (Plus) subject: given
// the polarity of the possession event, recover the object's polarity.
AffectValue first_person_object_affect(AffectValue event,
                                       PossessionPredicate pred);

struct AffectReportOptions {
  // Minimum class-conditional probability for a pattern to induce a value.
  double min_probability = 0.7;
  std::uint64_t min_freq = 1;
  // Verb lemmas treated as possession-gaining vs possession-losing.
  std::set<std::string> have_verbs = {"have", "get", "got", "own", "receive"};
  std::set<std::string> lack_verbs = {"lose", "lack", "miss"};
};

struct InducedAffect {
  std::string object_lemma;
  PossessionPredicate predicate = PossessionPredicate::Have;
  AffectValue affect = AffectValue::Plus;
  std::string pattern_key;
  double p_class = 0.0;

  friend bool operator==(const InducedAffect&,
                         const InducedAffect&) = default;
};

// Scans object-lexicalized verb-object keys whose verb is a possession verb
// and whose class probability clears the cutoff, then inverts the
// composition to assign the object a polarity. Negated keys flip the
// predicate (not having = lacking). Rows come out sorted by pattern key.
std::vector<InducedAffect> induce_object_affect(
    const StatsTable& table, const AffectReportOptions& opts = {});

// TSV: object, predicate, affect, pattern key, probability.
void write_affect_report_tsv(std::span<const InducedAffect> rows,
                             std::ostream& out);

}  // namespace affectlog
