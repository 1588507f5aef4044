#include "affectlog/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace affectlog {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  int value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    if (value > (std::numeric_limits<int>::max() - (c - '0')) / 10) return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

std::map<std::string, std::string> parse_feats(std::string_view col,
                                               std::size_t line_no) {
  std::map<std::string, std::string> feats;
  if (col == "_" || col.empty()) return feats;
  std::size_t start = 0;
  while (start <= col.size()) {
    std::size_t bar = col.find('|', start);
    std::string_view item = col.substr(
        start, bar == std::string_view::npos ? std::string_view::npos
                                             : bar - start);
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ParseError("malformed FEATS item '" + std::string(item) + "'",
                       line_no);
    feats[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return feats;
}

void validate_tree(const Sentence& s) {
  const int n = static_cast<int>(s.tokens.size());
  int roots = 0;
  for (const Token& t : s.tokens) {
    if (t.head < 0 || t.head > n)
      throw TreeError("head index " + std::to_string(t.head) +
                          " out of range for " + std::to_string(n) + " tokens",
                      s.sent_id);
    if (t.head == t.index)
      throw TreeError("token " + std::to_string(t.index) + " is its own head",
                      s.sent_id);
    if (t.head == 0) ++roots;
  }
  if (roots != 1)
    throw TreeError("expected exactly one root, found " +
                        std::to_string(roots),
                    s.sent_id);
  for (const Token& t : s.tokens) {
    int node = t.index;
    for (int steps = 0; steps <= n; ++steps) {
      node = s.tokens[static_cast<std::size_t>(node) - 1].head;
      if (node == 0) break;
      if (node == t.index)
        throw TreeError("cyclic head chain through token " +
                            std::to_string(t.index),
                        s.sent_id);
    }
  }
}

struct ReaderState {
  std::vector<Document> docs;
  bool in_doc = false;
  bool label_seen = false;
  std::set<std::string> doc_ids;
  std::set<std::string> sent_ids;  // within the current document

  std::vector<Token> tokens;
  std::string pending_sent_id;
  std::string pending_text;
  std::size_t sentence_start_line = 0;

  void finish_sentence(std::size_t line_no) {
    const bool has_comments =
        !pending_sent_id.empty() || !pending_text.empty();
    if (tokens.empty()) {
      if (has_comments)
        throw ParseError("sentence with zero tokens", line_no);
      return;
    }
    Document& doc = docs.back();
    Sentence s;
    s.doc_id = doc.doc_id;
    s.sent_id = pending_sent_id.empty()
                    ? doc.doc_id + "-s" +
                          std::to_string(doc.sentences.size() + 1)
                    : pending_sent_id;
    if (!sent_ids.insert(s.sent_id).second)
      throw ParseError("duplicate sent_id '" + s.sent_id + "'", line_no);
    s.tokens = std::move(tokens);
    if (pending_text.empty()) {
      std::string joined;
      for (const Token& t : s.tokens) {
        if (!joined.empty()) joined += ' ';
        joined += t.surface;
      }
      s.text = joined;
    } else {
      s.text = pending_text;
    }
    validate_tree(s);
    doc.sentences.push_back(std::move(s));
    tokens.clear();
    pending_sent_id.clear();
    pending_text.clear();
  }

  void start_document(const std::string& id, std::size_t line_no) {
    finish_sentence(line_no);
    if (!doc_ids.insert(id).second)
      throw ParseError("duplicate doc_id '" + id + "'", line_no);
    Document d;
    d.doc_id = id;
    docs.push_back(std::move(d));
    in_doc = true;
    label_seen = false;
    sent_ids.clear();
  }
};

}  // namespace

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::Pos: return "pos";
    case Polarity::Neg: return "neg";
    case Polarity::Neutral: return "neutral";
    case Polarity::Unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

Polarity polarity_from_string(std::string_view s) {
  if (s == "pos") return Polarity::Pos;
  if (s == "neg") return Polarity::Neg;
  if (s == "neutral") return Polarity::Neutral;
  if (s == "unlabeled") return Polarity::Unlabeled;
  throw std::invalid_argument("unknown polarity '" + std::string(s) + "'");
}

const Token* Sentence::token_at(int index) const {
  if (index < 1 || index > static_cast<int>(tokens.size())) return nullptr;
  return &tokens[static_cast<std::size_t>(index) - 1];
}

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

TreeError::TreeError(const std::string& what, const std::string& sent_id)
    : std::runtime_error("sentence '" + sent_id + "': " + what),
      sent_id_(sent_id) {}

std::vector<Document> parse_conllu(std::istream& in) {
  ReaderState state;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      state.finish_sentence(line_no);
      continue;
    }
    if (line[0] == '#') {
      if (!state.tokens.empty())
        throw ParseError("comment inside a sentence block", line_no);
      std::string_view body = trim(std::string_view(line).substr(1));
      std::size_t eq = body.find('=');
      if (eq == std::string_view::npos) continue;  // free-form comment
      std::string key(trim(body.substr(0, eq)));
      std::string value(trim(body.substr(eq + 1)));
      if (key == "newdoc id") {
        state.start_document(value, line_no);
      } else if (key == "label") {
        if (!state.in_doc)
          throw ParseError("label comment outside a document", line_no);
        if (state.label_seen)
          throw ParseError("duplicate label for document '" +
                               state.docs.back().doc_id + "'",
                           line_no);
        std::string lowered = ascii_lower(value);
        if (lowered != "pos" && lowered != "neg")
          throw ParseError("label must be pos or neg, got '" + value + "'",
                           line_no);
        state.docs.back().label =
            lowered == "pos" ? Polarity::Pos : Polarity::Neg;
        state.label_seen = true;
      } else if (key == "sent_id") {
        state.pending_sent_id = value;
      } else if (key == "text") {
        state.pending_text = value;
      }
      // Other comment keys pass through unharmed.
      continue;
    }
    // Token line.
    if (!state.in_doc)
      throw ParseError("token line outside any document (missing newdoc id)",
                       line_no);
    std::vector<std::string_view> cols = split_tabs(line);
    if (cols.size() != 10)
      throw ParseError("expected 10 tab-separated columns, found " +
                           std::to_string(cols.size()),
                       line_no);
    std::string_view id_col = cols[0];
    if (id_col.find('-') != std::string_view::npos ||
        id_col.find('.') != std::string_view::npos)
      continue;  // multiword-token range or empty node
    Token t;
    if (!parse_int(id_col, t.index) || t.index < 1)
      throw ParseError("bad token id '" + std::string(id_col) + "'", line_no);
    if (t.index != static_cast<int>(state.tokens.size()) + 1)
      throw ParseError("token ids must be contiguous from 1, got " +
                           std::to_string(t.index),
                       line_no);
    if (cols[1].empty() || cols[1] == "_")
      throw ParseError("empty FORM column", line_no);
    t.surface = std::string(cols[1]);
    t.lemma = (cols[2] == "_" || cols[2].empty()) ? ascii_lower(t.surface)
                                                  : ascii_lower(cols[2]);
    t.upos = cols[3] == "_" ? std::string() : std::string(cols[3]);
    t.feats = parse_feats(cols[5], line_no);
    if (!parse_int(cols[6], t.head))
      throw ParseError("bad HEAD value '" + std::string(cols[6]) + "'",
                       line_no);
    t.deprel = cols[7] == "_" ? std::string() : std::string(cols[7]);
    state.tokens.push_back(std::move(t));
  }
  state.finish_sentence(line_no + 1);
  return std::move(state.docs);
}

void serialize_conllu(std::span<const Document> docs, std::ostream& out) {
  for (const Document& d : docs) {
    out << "# newdoc id = " << d.doc_id << '\n';
    if (d.label == Polarity::Pos || d.label == Polarity::Neg)
      out << "# label = " << to_string(d.label) << '\n';
    for (const Sentence& s : d.sentences) {
      out << "# sent_id = " << s.sent_id << '\n';
      std::string text = s.text;
      std::replace(text.begin(), text.end(), '\n', ' ');
      out << "# text = " << text << '\n';
      for (const Token& t : s.tokens) {
        out << t.index << '\t' << t.surface << '\t' << t.lemma << '\t'
            << (t.upos.empty() ? "_" : t.upos) << "\t_\t";
        if (t.feats.empty()) {
          out << '_';
        } else {
          bool first = true;
          for (const auto& [k, v] : t.feats) {
            if (!first) out << '|';
            out << k << '=' << v;
            first = false;
          }
        }
        out << '\t' << t.head << '\t' << (t.deprel.empty() ? "_" : t.deprel)
            << "\t_\t_\n";
      }
      out << '\n';
    }
  }
}

const DeprelAliases& default_deprel_aliases() {
  static const DeprelAliases aliases = {
      {"dobj", "obj"},          {"nsubjpass", "nsubj:pass"},
      {"auxpass", "aux:pass"},  {"csubjpass", "csubj:pass"},
      {"prt", "compound:prt"},
  };
  return aliases;
}

std::string canonical_deprel(std::string_view deprel,
                             const DeprelAliases& aliases) {
  std::string rel = ascii_lower(deprel);
  if (auto it = aliases.find(rel); it != aliases.end()) return it->second;
  static const std::set<std::string> keep_subtypes = {
      "nsubj:pass", "csubj:pass", "aux:pass", "compound:prt"};
  if (keep_subtypes.count(rel)) return rel;
  if (std::size_t colon = rel.find(':'); colon != std::string::npos)
    rel.resize(colon);
  return rel;
}

bool has_negation_dependent(const Sentence& s, int token_index,
                            const DeprelAliases& aliases) {
  static const std::set<std::string> neg_words = {"not", "never", "n't",
                                                  "n’t"};
  for (const Token& t : s.tokens) {
    if (t.head != token_index) continue;
    std::string rel = canonical_deprel(t.deprel, aliases);
    if (rel == "neg") return true;
    if (rel == "advmod") {
      auto polarity = t.feats.find("Polarity");
      if (polarity != t.feats.end() && polarity->second == "Neg") return true;
      if (neg_words.count(t.lemma) || neg_words.count(ascii_lower(t.surface)))
        return true;
    }
  }
  return false;
}

bool is_first_person(const Sentence& s) {
  static const std::set<std::string> markers = {
      "i",    "we",   "me",     "my",        "us",
      "our",  "mine", "ours",   "myself",    "ourselves"};
  for (const Token& t : s.tokens)
    if (markers.count(ascii_lower(t.surface))) return true;

  const Token* first = nullptr;
  for (const Token& t : s.tokens) {
    if (t.upos == "PUNCT") continue;
    first = &t;
    break;
  }
  if (first == nullptr) return false;

  if (first->upos == "VERB") {
    auto form = first->feats.find("VerbForm");
    auto tense = first->feats.find("Tense");
    if (form != first->feats.end() && form->second == "Part" &&
        tense != first->feats.end() && tense->second == "Pres")
      return true;
    std::string lowered = ascii_lower(first->surface);
    if (lowered.size() > 3 && lowered.ends_with("ing")) return true;
  }

  if (ascii_lower(first->surface) == "it" && first->head != 0) {
    static const std::set<std::string> core_roles = {
        "nsubj", "nsubj:pass", "obj", "iobj", "csubj", "csubj:pass", "expl"};
    std::string role = canonical_deprel(first->deprel);
    if (core_roles.count(role)) {
      bool contested = false;
      for (const Token& t : s.tokens) {
        if (t.index == first->index || t.head != first->head) continue;
        if (canonical_deprel(t.deprel) == role) {
          contested = true;
          break;
        }
      }
      if (!contested) return true;
    }
  }
  return false;
}

std::vector<std::pair<const Sentence*, Polarity>> inherit_labels(
    const Document& d, bool first_person_only) {
  if (d.label != Polarity::Pos && d.label != Polarity::Neg)
    throw std::invalid_argument("document '" + d.doc_id +
                                "' has no pos/neg label to inherit");
  std::vector<std::pair<const Sentence*, Polarity>> out;
  for (const Sentence& s : d.sentences) {
    if (first_person_only && !is_first_person(s)) continue;
    out.emplace_back(&s, d.label);
  }
  return out;
}

}  // namespace affectlog
