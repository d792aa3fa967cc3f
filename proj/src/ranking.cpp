#include "hitex/ranking.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "hitex/config.hpp"
#include "hitex/error.hpp"

namespace hitex {

namespace {

constexpr std::size_t kParallelThreshold = 64;

EvaluatedSentence evaluate_one(const AnnotatedSentence& s, const SelectionConfig& config, const Lexicons& lexicons,
                               const CefrModel* model, const std::vector<CriterionId>& enabled) {
  EvaluatedSentence out{s, {}, std::nullopt};
  CriterionContext ctx{config.query, config.params, config.tags, lexicons};
  for (CriterionId id : enabled) {
    if (id == CriterionId::l2_level) {
      auto c = classify(*model, extract_features(s, config.query.target_level, lexicons, config.tags));
      int distance = level_distance(c.level, config.query.target_level);
      out.values.push_back({id, static_cast<double>(distance), distance > config.params.l2_tolerance, {}});
      out.classification = std::move(c);
    } else {
      out.values.push_back(evaluate_criterion(id, s, ctx));
    }
  }
  return out;
}

// Worst-to-best distinct values for one ranker.
std::vector<double> value_ladder(std::vector<double> values, bool positive) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (!positive) std::reverse(values.begin(), values.end());
  return values;
}

long position_in(const std::vector<double>& ladder, double value, bool positive) {
  auto it = positive ? std::lower_bound(ladder.begin(), ladder.end(), value)
                     : std::lower_bound(ladder.begin(), ladder.end(), value, std::greater<double>());
  return static_cast<long>(it - ladder.begin()) + 1;
}

// Fills subscores and goodness of `results` from their criterion values.
void score(std::vector<SelectionResult>& results, const SelectionConfig& config) {
  for (CriterionId id : config.rankers()) {
    const bool positive = info(id).positive;
    std::vector<double> values;
    values.reserve(results.size());
    auto value_of = [id](const SelectionResult& r) {
      for (const auto& v : r.criterion_values) {
        if (v.id == id) return v.value;
      }
      return 0.0;
    };
    for (const auto& r : results) values.push_back(value_of(r));
    auto ladder = value_ladder(values, positive);
    const long weight = config.at(id).weight;
    for (auto& r : results) {
      long sub = position_in(ladder, value_of(r), positive);
      r.subscores[id] = sub;
      r.goodness += weight * sub;
    }
  }
}

SelectionResult to_result(const EvaluatedSentence& e) {
  SelectionResult r;
  r.sentence = e.sentence;
  r.criterion_values = e.values;
  if (e.classification) r.predicted_level = e.classification->level;
  return r;
}

}  // namespace

std::string_view to_string(CriterionMode mode) {
  switch (mode) {
    case CriterionMode::off: return "off";
    case CriterionMode::filter: return "filter";
    case CriterionMode::ranker: return "ranker";
  }
  return "?";
}

std::optional<CriterionMode> parse_mode(std::string_view text) {
  if (text == "off") return CriterionMode::off;
  if (text == "filter") return CriterionMode::filter;
  if (text == "ranker") return CriterionMode::ranker;
  return std::nullopt;
}

std::vector<CriterionId> SelectionConfig::enabled() const {
  std::vector<CriterionId> out;
  for (const auto& c : criterion_catalog()) {
    if (mode(c.id) != CriterionMode::off) out.push_back(c.id);
  }
  return out;
}

std::vector<CriterionId> SelectionConfig::rankers() const {
  std::vector<CriterionId> out;
  for (const auto& c : criterion_catalog()) {
    if (mode(c.id) == CriterionMode::ranker) out.push_back(c.id);
  }
  return out;
}

const CriterionValue* EvaluatedSentence::value(CriterionId id) const {
  for (const auto& v : values) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

std::vector<EvaluatedSentence> evaluate_all(const std::vector<AnnotatedSentence>& sentences,
                                            const SelectionConfig& config, const Lexicons& lexicons,
                                            const CefrModel* model) {
  const auto enabled = config.enabled();
  if (config.mode(CriterionId::l2_level) != CriterionMode::off && model == nullptr) {
    throw Error("l2_level is enabled but no CEFR model is loaded");
  }
  std::vector<EvaluatedSentence> out(sentences.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out[i] = evaluate_one(sentences[i], config, lexicons, model, enabled);
      } catch (const std::exception& e) {
        throw Error("sentence '" + sentences[i].id + "': " + e.what());
      }
    }
  };

  const std::size_t n = sentences.size();
  const std::size_t threads = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), 8);
  if (n < kParallelThreshold || threads == 1) {
    work(0, n);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    std::size_t begin = t * chunk, end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, t, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

FilterOutcome apply_filters(std::vector<EvaluatedSentence> evaluated, const SelectionConfig& config) {
  FilterOutcome out;
  for (auto& e : evaluated) {
    std::vector<CriterionId> hits;
    for (const auto& v : e.values) {
      if (config.mode(v.id) == CriterionMode::filter && v.triggered) hits.push_back(v.id);
    }
    if (hits.empty()) {
      out.passed.push_back(std::move(e));
    } else {
      out.rejected.push_back(std::move(e));
      out.rejected_by.push_back(std::move(hits));
    }
  }
  return out;
}

std::vector<SelectionResult> rank(const std::vector<EvaluatedSentence>& passed, const SelectionConfig& config) {
  std::vector<SelectionResult> results;
  results.reserve(passed.size());
  for (const auto& e : passed) results.push_back(to_result(e));
  score(results, config);
  std::sort(results.begin(), results.end(), [](const SelectionResult& a, const SelectionResult& b) {
    if (a.goodness != b.goodness) return a.goodness > b.goodness;
    return a.id() < b.id();
  });
  for (std::size_t i = 0; i < results.size(); ++i) results[i].rank = static_cast<int>(i + 1);
  return results;
}

std::vector<SelectionResult> rank_rejected(const FilterOutcome& outcome, const SelectionConfig& config) {
  std::vector<SelectionResult> results;
  for (std::size_t i = 0; i < outcome.rejected.size(); ++i) {
    auto r = to_result(outcome.rejected[i]);
    r.filtered_by = outcome.rejected_by[i];
    results.push_back(std::move(r));
  }
  if (!config.retain_suboptimal) return results;
  score(results, config);
  std::sort(results.begin(), results.end(), [](const SelectionResult& a, const SelectionResult& b) {
    if (a.filtered_by.size() != b.filtered_by.size()) return a.filtered_by.size() < b.filtered_by.size();
    if (a.goodness != b.goodness) return a.goodness > b.goodness;
    return a.id() < b.id();
  });
  for (std::size_t i = 0; i < results.size(); ++i) results[i].rank = static_cast<int>(i + 1);
  return results;
}

SelectionOutput select(const std::vector<AnnotatedSentence>& corpus, const SelectionConfig& config,
                       const Lexicons& lexicons, const CefrModel* model) {
  validate_query(config.query);
  SelectionOutput out;
  auto candidates = concordance_search(corpus, config.query);
  if (candidates.empty()) {
    out.status = SelectionStatus::no_matches;
    return out;
  }
  auto outcome = apply_filters(evaluate_all(candidates, config, lexicons, model), config);
  out.results = rank(outcome.passed, config);
  out.rejected = rank_rejected(outcome, config);
  if (config.top_k && static_cast<int>(out.results.size()) > *config.top_k) {
    out.results.resize(static_cast<std::size_t>(*config.top_k));
  }
  return out;
}

std::vector<std::pair<std::string, std::optional<SelectionResult>>> select_best_per_term(
    const std::vector<AnnotatedSentence>& corpus, const SelectionConfig& config,
    const std::vector<std::string>& terms, const Lexicons& lexicons, const CefrModel* model) {
  std::vector<std::pair<std::string, std::optional<SelectionResult>>> out;
  for (const auto& term : terms) {
    SelectionConfig per_term = config;
    per_term.query.term = term;
    auto result = select(corpus, per_term, lexicons, model);
    if (result.results.empty()) {
      out.emplace_back(term, std::nullopt);
    } else {
      out.emplace_back(term, std::move(result.results.front()));
    }
  }
  return out;
}

nlohmann::json to_json(const CriterionValue& v) {
  return {{"id", std::string(to_string(v.id))}, {"value", v.value}, {"triggered", v.triggered}, {"evidence", v.evidence}};
}

nlohmann::json to_json(const SelectionResult& r) {
  nlohmann::json j;
  j["id"] = r.id();
  j["text"] = surface_text(r.sentence);
  j["rank"] = r.rank > 0 ? nlohmann::json(r.rank) : nlohmann::json(nullptr);
  j["goodness"] = r.goodness;
  nlohmann::json subs = nlohmann::json::object();
  for (const auto& [id, sub] : r.subscores) subs[std::string(to_string(id))] = sub;
  j["subscores"] = subs;
  auto criteria = nlohmann::json::array();
  for (const auto& v : r.criterion_values) criteria.push_back(to_json(v));
  j["criteria"] = criteria;
  auto filtered = nlohmann::json::array();
  for (auto id : r.filtered_by) filtered.push_back(std::string(to_string(id)));
  j["filtered_by"] = filtered;
  auto spans = nlohmann::json::array();
  for (const auto& s : r.sentence.match_spans) spans.push_back({s.first, s.last});
  j["match_spans"] = spans;
  if (r.predicted_level) j["predicted_level"] = std::string(to_string(*r.predicted_level));
  return j;
}

nlohmann::json to_json(const SelectionOutput& out, const SelectionConfig& config) {
  nlohmann::json j;
  j["status"] = out.status == SelectionStatus::ok ? "ok" : "no matches";
  j["query"] = query_to_json(config.query);
  j["config_echo"] = config_to_json(config);
  auto results = nlohmann::json::array();
  for (const auto& r : out.results) results.push_back(to_json(r));
  j["results"] = results;
  auto rejected = nlohmann::json::array();
  for (const auto& r : out.rejected) rejected.push_back(to_json(r));
  j["rejected"] = rejected;
  return j;
}

}  // namespace hitex
