#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "affectlog/corpus.hpp"

namespace affectlog {

// The nine extraction templates, one per syntactic schema. The slot (the
// constituent the pattern extracts) is never part of the learned unit; the
// anchors are.
enum class TemplateId {
  SubjActVp,         // <subj> cried
  SubjActInfVp,      // <subj> got to swim
  SubjAuxVpDobj,     // <subj> was ... molar
  ActVpDobj,         // used <dobj>
  PassInfVpDobj,     // were surprised to find <dobj>
  SubjAuxVpDobjObj,  // relationship was <pred>
  NpPrepNp,          // care for <np>
  ActVpPrepNp,       // cheated on <np>
  InfVpPrepNp,       // to offer ... to <np>
};

inline constexpr std::size_t kTemplateCount = 9;

// Short tag used inside canonical keys, e.g. "ACTVP_PREP".
std::string_view template_tag(TemplateId id);
// Long descriptive name used in dumps, e.g. "ACTVP_PREP_NP".
std::string_view template_name(TemplateId id);
// Accepts either the tag or the long name.
TemplateId template_from_string(std::string_view s);

struct PatternInstance {
  TemplateId template_id = TemplateId::SubjActVp;
  // Lowercased lemmas. First anchor is the verbal/nominal head; the optional
  // second anchor is a direct-object head, preposition, particle, or bare
  // oblique head, depending on the template.
  std::vector<std::string> anchors;
  bool negated = false;
  // Head lemma of the extracted constituent. Recorded for analysis only;
  // never part of the canonical key.
  std::string slot_filler;

  friend bool operator==(const PatternInstance&,
                         const PatternInstance&) = default;
};

struct ExtractOptions {
  // Additionally emit object-lexicalized variants (HAVE -> HAVE_FUN) for
  // ActVpDobj and SubjAuxVpDobj so both granularities compete on statistics.
  bool lexicalize_objects = true;
  DeprelAliases deprel_aliases = default_deprel_aliases();
};

const ExtractOptions& default_extract_options();

// Instantiates every template that matches the sentence's dependency tree.
// Pure and deterministic; unmatched sentences yield an empty list.
std::vector<PatternInstance> extract_patterns(
    const Sentence& s, const ExtractOptions& opts = default_extract_options());

// Uppercase key: optional NOT_ prefix, template tag, anchors joined by '_'
// (e.g. "ACTVP_PREP:CHEAT_ON", "NOT_SUBJ_ACTVP:COME"). Underscores inside an
// anchor are doubled so distinct anchor lists never collide.
std::string canonical_key(const PatternInstance& p);

// Inverse of canonical_key over (template, anchors, negated); the slot filler
// is not recoverable. Throws std::invalid_argument on malformed keys.
PatternInstance parse_canonical_key(std::string_view key);

// Keys of all instances extracted from one sentence, in extraction order.
std::vector<std::string> pattern_keys(
    const Sentence& s, const ExtractOptions& opts = default_extract_options());

// Keys of all instances across a whole story, sentence by sentence.
std::vector<std::string> story_keys(
    const Document& d, const ExtractOptions& opts = default_extract_options());

struct PatternOccurrence {
  PatternInstance instance;
  std::string doc_id;
  std::string sent_id;
};

// JSON Lines: {key, template, anchors, negated, slot_filler, doc_id, sent_id}.
void write_pattern_jsonl(std::span<const PatternOccurrence> occurrences,
                         std::ostream& out);

std::vector<PatternOccurrence> extract_corpus_patterns(
    std::span<const Document> docs,
    const ExtractOptions& opts = default_extract_options());

}  // namespace affectlog
