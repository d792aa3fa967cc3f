#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hitex/corpus.hpp"
#include "hitex/lexicons.hpp"
#include "hitex/tagset.hpp"

namespace hitex {

// Declaration order doubles as the canonical output order.
enum class CriterionId {
  search_absence,
  match_count,
  term_position,
  dep_root,
  ellipsis,
  incompleteness,
  non_lemmatized,
  non_alpha,
  struct_connective,
  pron_anaphora,
  adv_anaphora,
  l2_level,
  negation,
  interrogative,
  direct_speech,
  closed_answer,
  modal_verb,
  sent_length,
  difficult_vocab,
  word_freq,
  oov,
  sensitive,
  typicality,
  proper_name,
  abbreviation,
};

inline constexpr std::size_t kCriterionCount = 25;

enum class CriterionCategory { search_term, wellformedness, context_independence, l2_complexity, structural, lexical };

struct CriterionInfo {
  CriterionId id;
  std::string_view name;
  int number;  // 1..25
  CriterionCategory category;
  bool binary_only;  // may only be used as a filter
  bool positive;     // ranks ascending (higher value = better)
  bool count;        // value == |evidence|
  std::string_view description;
};

const std::array<CriterionInfo, kCriterionCount>& criterion_catalog();
const CriterionInfo& info(CriterionId id);
std::string_view to_string(CriterionId id);
std::string_view to_string(CriterionCategory category);
std::optional<CriterionId> parse_criterion(std::string_view name);

struct CriterionValue {
  CriterionId id = CriterionId::search_absence;
  double value = 0.0;
  bool triggered = false;
  std::vector<int> evidence;  // 1-based token indices, ascending

  bool operator==(const CriterionValue&) const = default;
};

enum class TermPosition { any, forbid_edges, forbid_start, forbid_end };

std::string_view to_string(TermPosition p);
std::optional<TermPosition> parse_term_position(std::string_view text);

// Numeric parameters of every rule-based criterion, plus the L2 tolerance.
// Count criteria trigger when their count exceeds `max_count(id)`.
struct CriteriaParams {
  int max_matches = 1;
  TermPosition term_position = TermPosition::forbid_edges;
  double max_nonlemma_ratio = 0.30;
  double max_nonalpha_ratio = 0.30;
  int l2_tolerance = 0;
  int min_len = 6;
  int max_len = 20;
  double min_word_freq = 0.0;
  double min_typicality = 0.0;
  std::set<std::string> sensitive_topics;  // empty = every topic
  std::array<int, kCriterionCount> count_limits{};

  int max_count(CriterionId id) const { return count_limits[static_cast<std::size_t>(id)]; }
  void set_max_count(CriterionId id, int limit) { count_limits[static_cast<std::size_t>(id)] = limit; }

  bool operator==(const CriteriaParams&) const = default;
};

// search-term group; needs match_spans from concordance_search
std::vector<CriterionValue> eval_search_term(const AnnotatedSentence& s, const SearchQuery& q,
                                             const CriteriaParams& params, const TagsetConfig& tags);
// well-formedness
std::vector<CriterionValue> eval_wellformedness(const AnnotatedSentence& s, const CriteriaParams& params,
                                                const TagsetConfig& tags);
// context independence
std::vector<CriterionValue> eval_context_independence(const AnnotatedSentence& s, const CriteriaParams& params,
                                                      const TagsetConfig& tags, const AuxLists& aux);
// structure
std::vector<CriterionValue> eval_structural(const AnnotatedSentence& s, const CriteriaParams& params,
                                            const TagsetConfig& tags, const AuxLists& aux);
// lexical criteria
std::vector<CriterionValue> eval_lexical(const AnnotatedSentence& s, const SearchQuery& q,
                                         const CriteriaParams& params, const TagsetConfig& tags,
                                         const Lexicons& lexicons);

struct CriterionContext {
  const SearchQuery& query;
  const CriteriaParams& params;
  const TagsetConfig& tags;
  const Lexicons& lexicons;
};

// Any rule-based criterion; l2_level needs a classifier and is rejected here.
CriterionValue evaluate_criterion(CriterionId id, const AnnotatedSentence& s, const CriterionContext& ctx);

// Finite verbs that are the root or attach through a clausal relation.
int clause_count(const AnnotatedSentence& s, const TagsetConfig& tags);

}  // namespace hitex
