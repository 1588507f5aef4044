#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace affectlog {

// Gold story labels are Pos/Neg/Unlabeled. Neutral only ever appears as a
// classifier prediction.
enum class Polarity { Pos, Neg, Neutral, Unlabeled };

std::string_view to_string(Polarity p);
Polarity polarity_from_string(std::string_view s);

struct Token {
  int index = 0;  // 1-based position within the sentence
  std::string surface;
  std::string lemma;  // lowercased; parser falls back to lowercased surface
  std::string upos;
  int head = 0;  // 0 = syntactic root
  std::string deprel;
  std::map<std::string, std::string> feats;
};

struct Sentence {
  std::vector<Token> tokens;
  std::string text;
  std::string doc_id;
  std::string sent_id;

  // nullptr for index 0 (root) or out of range.
  const Token* token_at(int index) const;
};

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;
  Polarity label = Polarity::Unlabeled;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class TreeError : public std::runtime_error {
 public:
  TreeError(const std::string& what, const std::string& sent_id);
  const std::string& sent_id() const { return sent_id_; }

 private:
  std::string sent_id_;
};

// Reads the CoNLL-U dialect documented in the README: ten tab-separated
// columns, `# newdoc id = <id>` document boundaries, optional
// `# label = pos|neg` document polarity, `# sent_id` / `# text` comments,
// blank-line sentence separators. Multiword-token ranges (1-2) and empty
// nodes (1.1) are skipped. Every sentence must form a single-rooted tree.
std::vector<Document> parse_conllu(std::istream& in);

void serialize_conllu(std::span<const Document> docs, std::ostream& out);

// Collapses tagset-specific dependency labels onto the Universal Dependencies
// names the matching rules are written against. Unknown subtypes ("obl:tmod")
// reduce to their base relation; passive and particle subtypes survive.
using DeprelAliases = std::map<std::string, std::string>;
const DeprelAliases& default_deprel_aliases();
std::string canonical_deprel(
    std::string_view deprel,
    const DeprelAliases& aliases = default_deprel_aliases());

// True if the token at token_index carries a direct negation dependent
// (deprel "neg", or an adverbial "not"/"never"/"n't"/Polarity=Neg).
bool has_negation_dependent(
    const Sentence& s, int token_index,
    const DeprelAliases& aliases = default_deprel_aliases());

// A sentence counts as first-person when it contains an explicit first-person
// marker (i, we, me, my, us, our, mine, ours, myself, ourselves), when it
// opens with a progressive verb, or when it opens with a pleonastic "it".
bool is_first_person(const Sentence& s);

// Propagates the story label onto each sentence, optionally keeping only
// first-person sentences. The document must be labeled Pos or Neg.
// Returned pointers alias into `d`.
std::vector<std::pair<const Sentence*, Polarity>> inherit_labels(
    const Document& d, bool first_person_only);

}  // namespace affectlog
