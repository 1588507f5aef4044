#include "affectlog/affect.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "affectlog/patterns.hpp"

namespace affectlog {

std::string_view to_string(AffectValue v) {
  return v == AffectValue::Plus ? "PLUS" : "MINUS";
}

std::string_view to_string(PossessionPredicate p) {
  return p == PossessionPredicate::Have ? "HAVE" : "LACK";
}

AffectValue compose_possession(AffectValue x, AffectValue y,
                               PossessionPredicate pred) {
  const bool same = x == y;
  const bool plus = pred == PossessionPredicate::Have ? same : !same;
  return plus ? AffectValue::Plus : AffectValue::Minus;
}

AffectValue first_person_object_affect(AffectValue event,
                                       PossessionPredicate pred) {
  if (pred == PossessionPredicate::Have) return event;
  return event == AffectValue::Plus ? AffectValue::Minus : AffectValue::Plus;
}

std::vector<InducedAffect> induce_object_affect(
    const StatsTable& table, const AffectReportOptions& opts) {
  std::vector<InducedAffect> rows;
  for (const auto& [key, ps] : table.entries) {
    PatternInstance inst;
    try {
      inst = parse_canonical_key(key);
    } catch (const std::invalid_argument&) {
      continue;  // foreign key in a loaded table; not a learned pattern
    }
    if (inst.template_id != TemplateId::ActVpDobj ||
        inst.anchors.size() != 2)
      continue;

    PossessionPredicate pred;
    if (opts.have_verbs.contains(inst.anchors[0]))
      pred = PossessionPredicate::Have;
    else if (opts.lack_verbs.contains(inst.anchors[0]))
      pred = PossessionPredicate::Lack;
    else
      continue;
    // "did not have" asserts a lack, and conversely.
    if (inst.negated)
      pred = pred == PossessionPredicate::Have ? PossessionPredicate::Lack
                                               : PossessionPredicate::Have;

    if (ps.freq() < opts.min_freq) continue;
    const double pp = ps.p_pos();
    const double pn = ps.p_neg();
    if (pp == pn) continue;
    const AffectValue event = pp > pn ? AffectValue::Plus : AffectValue::Minus;
    const double p_class = pp > pn ? pp : pn;
    if (p_class < opts.min_probability) continue;

    rows.push_back(InducedAffect{inst.anchors[1], pred,
                                 first_person_object_affect(event, pred), key,
                                 p_class});
  }
  return rows;
}

void write_affect_report_tsv(std::span<const InducedAffect> rows,
                             std::ostream& out) {
  out << "object\tpredicate\taffect\tpattern\tp_class\n";
  char buf[32];
  for (const InducedAffect& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", row.p_class);
    out << row.object_lemma << '\t' << to_string(row.predicate) << '\t'
        << to_string(row.affect) << '\t' << row.pattern_key << '\t' << buf
        << '\n';
  }
}

}  // namespace affectlog
