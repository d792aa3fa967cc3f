#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hitex/cefr.hpp"

namespace hitex {

struct Token {
  int index = 0;                 // 1-based position in the sentence
  std::string form;
  std::optional<std::string> lemma;  // absent = non-lemmatized
  std::string pos;
  std::string msd;               // morphosyntactic features; empty when "_"
  std::string deprel;
  int head = 0;                  // 0 = root

  bool operator==(const Token&) const = default;
};

// Inclusive 1-based token range.
struct Span {
  int first = 0;
  int last = 0;

  int size() const { return last - first + 1; }
  bool contains(int index) const { return index >= first && index <= last; }
  bool operator==(const Span&) const = default;
};

struct AnnotatedSentence {
  std::string id;
  std::vector<Token> tokens;
  std::string source;
  std::vector<Span> match_spans;

  std::size_t size() const { return tokens.size(); }
  // `index` is 1-based, matching Token::index.
  const Token& token(int index) const { return tokens.at(static_cast<std::size_t>(index - 1)); }
};

enum class MatchKind { wordform, lemma, pos_pattern };

std::string_view to_string(MatchKind kind);
std::optional<MatchKind> parse_match_kind(std::string_view text);

struct SearchQuery {
  std::string term;
  MatchKind match_kind = MatchKind::lemma;
  std::optional<std::string> pos;
  CefrLevel target_level = CefrLevel::B1;
  int max_candidates = 300;
};

// Throws hitex::Error when the query violates its invariants.
void validate_query(const SearchQuery& query);

// Reads 10-column CoNLL-U. `source` names the corpus and seeds synthesized ids
// ("<source>:<ordinal>") for blocks without a `# sent_id =` comment.
std::vector<AnnotatedSentence> parse_conllu(std::string_view text, std::string_view source = "input");
std::vector<AnnotatedSentence> read_conllu_file(const std::string& path);

std::string write_conllu(const std::vector<AnnotatedSentence>& sentences);

// Space-joined forms with no space before closing punctuation.
std::string surface_text(const std::vector<std::string>& forms);
std::string surface_text(const AnnotatedSentence& sentence);

// Non-overlapping matches of `query` in `sentence`, scanned left to right.
std::vector<Span> find_matches(const AnnotatedSentence& sentence, const SearchQuery& query);

// Matching sentences in corpus order with match_spans filled, capped at
// query.max_candidates.
std::vector<AnnotatedSentence> concordance_search(const std::vector<AnnotatedSentence>& corpus,
                                                  const SearchQuery& query);

}  // namespace hitex
