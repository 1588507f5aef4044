#include "affectlog/patterns.hpp"

#include <array>
#include <cctype>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace affectlog {

namespace {

constexpr std::array<std::string_view, kTemplateCount> kTags = {
    "SUBJ_ACTVP",     "SUBJ_ACTINFVP",      "SUBJ_AUXVP_DOBJ",
    "ACTVP_DOBJ",     "PASSINFVP_DOBJ",     "SUBJ_AUXVP_DOBJ_OBJ",
    "NP_PREP",        "ACTVP_PREP",         "INFVP_PREP"};

constexpr std::array<std::string_view, kTemplateCount> kNames = {
    "SUBJ_ACTVP",     "SUBJ_ACTINFVP",      "SUBJ_AUXVP_DOBJ",
    "ACTVP_DOBJ",     "PASSINFVP_DOBJ",     "SUBJ_AUXVP_DOBJ_OBJ",
    "NP_PREP_NP",     "ACTVP_PREP_NP",      "INFVP_PREP_NP"};

std::string upper_escaped(std::string_view lemma) {
  std::string out;
  out.reserve(lemma.size());
  for (char c : lemma) {
    if (c == '_') out += "__";
    else out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

bool is_nominal(const Token& t) {
  return t.upos == "NOUN" || t.upos == "PROPN" || t.upos == "PRON" ||
         t.upos == "NUM";
}

// Per-sentence view with canonicalized relations and child lists.
class TreeView {
 public:
  TreeView(const Sentence& s, const DeprelAliases& aliases) : sentence_(s) {
    rels_.reserve(s.tokens.size());
    children_.resize(s.tokens.size());
    for (const Token& t : s.tokens)
      rels_.push_back(canonical_deprel(t.deprel, aliases));
    for (const Token& t : s.tokens)
      if (t.head >= 1 && t.head <= static_cast<int>(s.tokens.size()))
        children_[static_cast<std::size_t>(t.head) - 1].push_back(t.index);
  }

  const Sentence& sentence() const { return sentence_; }
  const Token& token(int index) const {
    return sentence_.tokens[static_cast<std::size_t>(index) - 1];
  }
  const std::string& rel(int index) const {
    return rels_[static_cast<std::size_t>(index) - 1];
  }
  // Child token indices in surface order.
  const std::vector<int>& children(int index) const {
    return children_[static_cast<std::size_t>(index) - 1];
  }

  std::vector<int> children_with_rel(int index, std::string_view rel) const {
    std::vector<int> out;
    for (int c : children(index))
      if (this->rel(c) == rel) out.push_back(c);
    return out;
  }

  int first_child_with_rel(int index, std::string_view rel) const {
    for (int c : children(index))
      if (this->rel(c) == rel) return c;
    return 0;
  }

  bool has_child_rel(int index, std::string_view rel) const {
    return first_child_with_rel(index, rel) != 0;
  }

  // "to"-marked infinitive. VerbForm=Inf alone does not count: do-support
  // and modal clauses ("did not come") carry it on a finite-behaving verb.
  bool infinitival(int index) const {
    for (int c : children(index))
      if (rel(c) == "mark" && token(c).lemma == "to") return true;
    return false;
  }

  bool participle(int index) const {
    const Token& t = token(index);
    auto form = t.feats.find("VerbForm");
    if (form != t.feats.end() && form->second == "Part") return true;
    if (t.upos != "VERB" && t.upos != "ADJ") return false;
    return t.surface.size() > 2 && (t.surface.ends_with("ed") ||
                                    t.surface.ends_with("en"));
  }

  bool passive(int index) const {
    return has_child_rel(index, "aux:pass") ||
           has_child_rel(index, "nsubj:pass");
  }

  // Finite-or-gerund active verb: the anchor of the ActVP templates.
  bool active_vp(int index) const {
    const Token& t = token(index);
    return t.upos == "VERB" && !infinitival(index) && !passive(index) &&
           !has_child_rel(index, "cop");
  }

  int copula_of(int index) const {
    return first_child_with_rel(index, "cop");
  }

 private:
  const Sentence& sentence_;
  std::vector<std::string> rels_;
  std::vector<std::vector<int>> children_;
};

}  // namespace

std::string_view template_tag(TemplateId id) {
  return kTags[static_cast<std::size_t>(id)];
}

std::string_view template_name(TemplateId id) {
  return kNames[static_cast<std::size_t>(id)];
}

TemplateId template_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kTemplateCount; ++i)
    if (s == kTags[i] || s == kNames[i]) return static_cast<TemplateId>(i);
  throw std::invalid_argument("unknown template '" + std::string(s) + "'");
}

const ExtractOptions& default_extract_options() {
  static const ExtractOptions opts;
  return opts;
}

std::vector<PatternInstance> extract_patterns(const Sentence& s,
                                              const ExtractOptions& opts) {
  TreeView tree(s, opts.deprel_aliases);
  std::vector<PatternInstance> out;
  const int n = static_cast<int>(s.tokens.size());

  auto negated_any = [&](std::initializer_list<int> indices) {
    for (int i : indices)
      if (has_negation_dependent(s, i, opts.deprel_aliases)) return true;
    return false;
  };
  auto emit = [&](TemplateId id, std::vector<std::string> anchors, bool neg,
                  const std::string& slot) {
    out.push_back(PatternInstance{id, std::move(anchors), neg, slot});
  };

  for (int v = 1; v <= n; ++v) {
    const Token& tok = tree.token(v);

    if (tree.active_vp(v)) {
      const bool neg_v = negated_any({v});
      // <subj> ActVP
      for (int subj : tree.children_with_rel(v, "nsubj"))
        emit(TemplateId::SubjActVp, {tok.lemma}, neg_v,
             tree.token(subj).lemma);
      // <subj> ActInfVP
      for (int subj : tree.children_with_rel(v, "nsubj")) {
        for (int inf : tree.children_with_rel(v, "xcomp")) {
          if (tree.token(inf).upos != "VERB" || !tree.infinitival(inf))
            continue;
          emit(TemplateId::SubjActInfVp, {tok.lemma, tree.token(inf).lemma},
               neg_v || negated_any({inf}), tree.token(subj).lemma);
        }
      }
      // ActVP <dobj>
      for (int obj : tree.children_with_rel(v, "obj")) {
        emit(TemplateId::ActVpDobj, {tok.lemma}, neg_v,
             tree.token(obj).lemma);
        if (opts.lexicalize_objects)
          emit(TemplateId::ActVpDobj, {tok.lemma, tree.token(obj).lemma},
               neg_v, tree.token(obj).lemma);
      }
    }

    // ActVP Prep <np> / InfVP Prep <np>: preposition, bare oblique, or
    // verb-particle realizations.
    if (tok.upos == "VERB" && !tree.passive(v) &&
        !tree.has_child_rel(v, "cop")) {
      const bool inf_vp = tree.infinitival(v);
      const TemplateId id =
          inf_vp ? TemplateId::InfVpPrepNp : TemplateId::ActVpPrepNp;
      const bool neg_v = negated_any({v});
      for (int dep : tree.children(v)) {
        const std::string& rel = tree.rel(dep);
        if (rel != "obl" && rel != "nmod") continue;
        const Token& np = tree.token(dep);
        if (int prep = tree.first_child_with_rel(dep, "case"); prep != 0) {
          emit(id, {tok.lemma, tree.token(prep).lemma}, neg_v, np.lemma);
        } else if (rel == "obl" &&
                   (np.upos == "NOUN" || np.upos == "PROPN")) {
          // Bare adverbial NP ("come home"): lexicalize the NP head itself.
          emit(id, {tok.lemma, np.lemma}, neg_v, np.lemma);
        }
      }
      if (int prt = tree.first_child_with_rel(v, "compound:prt"); prt != 0)
        for (int obj : tree.children_with_rel(v, "obj"))
          emit(id, {tok.lemma, tree.token(prt).lemma}, neg_v,
               tree.token(obj).lemma);
    }

    // PassInfVP <dobj>: passive or be-auxiliaried participle governing an
    // infinitive whose object is the slot.
    if ((tree.passive(v) ||
         (tree.participle(v) && tree.copula_of(v) != 0 &&
          tree.token(tree.copula_of(v)).lemma == "be")) &&
        tok.upos != "AUX") {
      for (int inf : tree.children_with_rel(v, "xcomp")) {
        if (tree.token(inf).upos != "VERB" || !tree.infinitival(inf))
          continue;
        for (int obj : tree.children_with_rel(inf, "obj"))
          emit(TemplateId::PassInfVpDobj, {tok.lemma, tree.token(inf).lemma},
               negated_any({v, inf}), tree.token(obj).lemma);
      }
    }

    // Copular clause: both the subject-extracting and the
    // predicate-extracting template instantiate on it.
    if (int cop = tree.copula_of(v); cop != 0) {
      const bool neg_v = negated_any({v});
      for (int subj : tree.children_with_rel(v, "nsubj")) {
        // <subj> AuxVP Dobj: anchor = predicate head.
        emit(TemplateId::SubjAuxVpDobj, {tok.lemma}, neg_v,
             tree.token(subj).lemma);
        if (opts.lexicalize_objects)
          emit(TemplateId::SubjAuxVpDobj,
               {tree.token(cop).lemma, tok.lemma}, neg_v,
               tree.token(subj).lemma);
        // Subj AuxVP <dobj>: anchor = subject head, predicate is the slot.
        emit(TemplateId::SubjAuxVpDobjObj, {tree.token(subj).lemma}, neg_v,
             tok.lemma);
      }
    }

    // NP Prep <np>
    if (is_nominal(tok)) {
      for (int dep : tree.children_with_rel(v, "nmod")) {
        int prep = tree.first_child_with_rel(dep, "case");
        if (prep == 0) continue;
        emit(TemplateId::NpPrepNp, {tok.lemma, tree.token(prep).lemma},
             negated_any({v}), tree.token(dep).lemma);
      }
    }
  }
  return out;
}

std::string canonical_key(const PatternInstance& p) {
  std::string key;
  if (p.negated) key += "NOT_";
  key += template_tag(p.template_id);
  key += ':';
  bool first = true;
  for (const std::string& anchor : p.anchors) {
    if (!first) key += '_';
    key += upper_escaped(anchor);
    first = false;
  }
  return key;
}

PatternInstance parse_canonical_key(std::string_view key) {
  PatternInstance p;
  std::string_view rest = key;
  if (rest.starts_with("NOT_")) {
    p.negated = true;
    rest.remove_prefix(4);
  }
  std::size_t colon = rest.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("pattern key lacks ':': " + std::string(key));
  p.template_id = template_from_string(rest.substr(0, colon));
  rest.remove_prefix(colon + 1);
  if (rest.empty())
    throw std::invalid_argument("pattern key has no anchors: " +
                                std::string(key));
  std::string anchor;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (rest[i] == '_') {
      if (i + 1 < rest.size() && rest[i + 1] == '_') {
        anchor += '_';
        ++i;
      } else {
        p.anchors.push_back(anchor);
        anchor.clear();
      }
    } else {
      anchor += static_cast<char>(
          std::tolower(static_cast<unsigned char>(rest[i])));
    }
  }
  p.anchors.push_back(anchor);
  for (const std::string& a : p.anchors)
    if (a.empty())
      throw std::invalid_argument("pattern key has an empty anchor: " +
                                  std::string(key));
  return p;
}

std::vector<std::string> pattern_keys(const Sentence& s,
                                      const ExtractOptions& opts) {
  std::vector<std::string> keys;
  for (const PatternInstance& p : extract_patterns(s, opts))
    keys.push_back(canonical_key(p));
  return keys;
}

std::vector<std::string> story_keys(const Document& d,
                                    const ExtractOptions& opts) {
  std::vector<std::string> keys;
  for (const Sentence& s : d.sentences)
    for (const PatternInstance& p : extract_patterns(s, opts))
      keys.push_back(canonical_key(p));
  return keys;
}

void write_pattern_jsonl(std::span<const PatternOccurrence> occurrences,
                         std::ostream& out) {
  for (const PatternOccurrence& occ : occurrences) {
    nlohmann::json j;
    j["key"] = canonical_key(occ.instance);
    j["template"] = template_name(occ.instance.template_id);
    j["anchors"] = occ.instance.anchors;
    j["negated"] = occ.instance.negated;
    j["slot_filler"] = occ.instance.slot_filler;
    j["doc_id"] = occ.doc_id;
    j["sent_id"] = occ.sent_id;
    out << j.dump() << '\n';
  }
}

std::vector<PatternOccurrence> extract_corpus_patterns(
    std::span<const Document> docs, const ExtractOptions& opts) {
  std::vector<PatternOccurrence> out;
  for (const Document& d : docs)
    for (const Sentence& s : d.sentences)
      for (PatternInstance& p : extract_patterns(s, opts))
        out.push_back(PatternOccurrence{std::move(p), d.doc_id, s.sent_id});
  return out;
}

}  // namespace affectlog
