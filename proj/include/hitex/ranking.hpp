#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hitex/classifier.hpp"
#include "hitex/corpus.hpp"
#include "hitex/criteria.hpp"
#include "hitex/lexicons.hpp"
#include "hitex/tagset.hpp"

namespace hitex {

enum class CriterionMode { off, filter, ranker };

std::string_view to_string(CriterionMode mode);
std::optional<CriterionMode> parse_mode(std::string_view text);

struct CriterionConfig {
  CriterionMode mode = CriterionMode::off;
  int weight = 1;  // ranker weight; goodness stays integral

  bool operator==(const CriterionConfig&) const = default;
};

struct SelectionConfig {
  std::array<CriterionConfig, kCriterionCount> criteria{};
  CriteriaParams params;
  TagsetConfig tags;
  bool retain_suboptimal = false;
  std::optional<int> top_k;
  SearchQuery query;
  std::string profile;  // base profile name, echoed in results

  CriterionMode mode(CriterionId id) const { return criteria[static_cast<std::size_t>(id)].mode; }
  CriterionConfig& at(CriterionId id) { return criteria[static_cast<std::size_t>(id)]; }
  const CriterionConfig& at(CriterionId id) const { return criteria[static_cast<std::size_t>(id)]; }
  std::vector<CriterionId> enabled() const;
  std::vector<CriterionId> rankers() const;
};

struct EvaluatedSentence {
  AnnotatedSentence sentence;
  std::vector<CriterionValue> values;  // enabled criteria in id order
  std::optional<Classification> classification;

  const CriterionValue* value(CriterionId id) const;
};

struct SelectionResult {
  AnnotatedSentence sentence;
  int rank = 0;  // 0 = unranked
  long goodness = 0;
  std::map<CriterionId, long> subscores;
  std::vector<CriterionValue> criterion_values;
  std::vector<CriterionId> filtered_by;
  std::optional<CefrLevel> predicted_level;

  const std::string& id() const { return sentence.id; }
};

struct FilterOutcome {
  std::vector<EvaluatedSentence> passed;
  std::vector<EvaluatedSentence> rejected;
  std::vector<std::vector<CriterionId>> rejected_by;  // parallel to `rejected`
};

enum class SelectionStatus { ok, no_matches };

struct SelectionOutput {
  SelectionStatus status = SelectionStatus::ok;
  std::vector<SelectionResult> results;
  std::vector<SelectionResult> rejected;
};

// Evaluates every enabled criterion for every sentence. l2_level needs `model`.
// Errors carry the offending sentence id.
std::vector<EvaluatedSentence> evaluate_all(const std::vector<AnnotatedSentence>& sentences,
                                            const SelectionConfig& config, const Lexicons& lexicons,
                                            const CefrModel* model);

FilterOutcome apply_filters(std::vector<EvaluatedSentence> evaluated, const SelectionConfig& config);

// Per ranker, distinct values are ordered from worst to best and a sentence's
// subscore is the 1-based position of its value; goodness is the weighted sum.
// Output is in descending goodness, ties by ascending id, ranks 1..n.
std::vector<SelectionResult> rank(const std::vector<EvaluatedSentence>& passed, const SelectionConfig& config);

// Filtered-out sentences: with retain_suboptimal they are ranked by ascending
// number of triggered filters, then goodness; otherwise unranked in input order.
std::vector<SelectionResult> rank_rejected(const FilterOutcome& outcome, const SelectionConfig& config);

// concordance_search -> evaluate_all -> apply_filters -> rank, then top_k.
SelectionOutput select(const std::vector<AnnotatedSentence>& corpus, const SelectionConfig& config,
                       const Lexicons& lexicons, const CefrModel* model);

// One query per term with otherwise shared settings; keeps the best candidate per term.
std::vector<std::pair<std::string, std::optional<SelectionResult>>> select_best_per_term(
    const std::vector<AnnotatedSentence>& corpus, const SelectionConfig& config,
    const std::vector<std::string>& terms, const Lexicons& lexicons, const CefrModel* model);

nlohmann::json to_json(const CriterionValue& v);
nlohmann::json to_json(const SelectionResult& r);
// {status, query, config_echo, results, rejected}
nlohmann::json to_json(const SelectionOutput& out, const SelectionConfig& config);

}  // namespace hitex
