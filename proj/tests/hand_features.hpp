#pragma once

// Feature values worked out by hand from the token tables of five fixture
// sentences, shared by the unit tests and the acceptance run.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "hitex/features.hpp"
#include "support.hpp"

namespace hand {

struct FeatureCase {
  std::string id;
  std::map<std::string, double> expected;  // evaluated at target level A1
};

inline const std::vector<FeatureCase>& feature_cases() {
  static const std::vector<FeatureCase> cases = {
      {"s01",
       {
           {"sentence_length", 6},
           {"n_characters", 20},
           {"avg_token_length", 20.0 / 6},
           {"lix", 5},
           {"bilog_ttr", 1},
           {"root_ttr", std::sqrt(5.0)},
           {"avg_deparc_len", 2},
           {"max_deparc_len", 4},
           {"deparc_gt5_is", 0},
           {"right_arc_ratio", 0.6},
           {"left_arc_ratio", 0.4},
           {"n_is", 2000.0 / 6},
           {"v_is", 1000.0 / 6},
           {"punct_is", 1000.0 / 6},
           {"pr_to_n", 0.5},
           {"n_to_v", 2},
           {"lex_to_tokens", 0.5},
           {"lex_to_nonlex", 1},
           {"difficult_w_is", 0},
           {"pres_v_to_v", 1},
           {"avg_senses_per_token", 1.8},
           {"n_senses_per_n", 2.5},
       }},
      {"s24",
       {
           {"sentence_length", 7},
           {"n_characters", 54},
           {"avg_token_length", 54.0 / 7},
           {"lix", 106},
           {"bilog_ttr", 1},
           {"root_ttr", std::sqrt(6.0)},
           {"avg_deparc_len", 16.0 / 6},
           {"max_deparc_len", 5},
           {"deparc_gt5_is", 0},
           {"right_arc_ratio", 0.5},
           {"difficult_w_is", 5000.0 / 7},
           {"difficult_nv_is", 3000.0 / 7},
           {"a1_lemma_is", 1000.0 / 7},
           {"b1_lemma_is", 1000.0 / 7},
           {"b2_lemma_is", 3000.0 / 7},
           {"c1_lemma_is", 1000.0 / 7},
           {"oov_is", 0},
           {"premod_is", 1000.0 / 7},
           {"postmod_is", 0},
           {"modifier_var", 1.0 / 6},
           {"adj_var", 1.0 / 6},
           {"n_var", 0.5},
       }},
      {"s18",
       {
           {"sentence_length", 8},
           {"no_lemma_is", 375},
           {"lix", 6 + 100.0 / 6},
           {"root_ttr", std::sqrt(6.0)},
           {"avg_deparc_len", 16.0 / 7},
           {"max_deparc_len", 6},
           {"deparc_gt5_is", 125},
           {"right_arc_ratio", 4.0 / 7},
           {"left_arc_ratio", 3.0 / 7},
           {"n_to_v", 3},
           {"cj_sj_is", 125},
           {"punct_is", 250},
           {"lex_to_tokens", 0.5},
           {"avg_senses_per_token", 7.0 / 6},
           {"n_senses_per_n", 4.0 / 3},
       }},
      {"s19",
       {
           {"sentence_length", 7},
           {"lix", 6 + 100.0 / 6},
           {"bilog_ttr", 1},
           {"avg_deparc_len", 13.0 / 6},
           {"max_deparc_len", 5},
           {"right_arc_ratio", 4.0 / 6},
           {"neuter_n_is", 1000.0 / 7},
           {"past_v_to_v", 1},
           {"function_w_is", 3000.0 / 7},
           {"lex_to_nonlex", 0.75},
           {"n_is", 2000.0 / 7},
       }},
      {"s46",
       {
           {"sentence_length", 8},
           {"lix", 7 + 200.0 / 7},
           {"root_ttr", std::sqrt(7.0)},
           {"avg_deparc_len", 12.0 / 7},
           {"max_deparc_len", 3},
           {"right_arc_ratio", 4.0 / 7},
           {"left_arc_ratio", 3.0 / 7},
           {"subjunction_is", 125},
           {"pron3sg_is", 125},
           {"past_v_to_v", 1},
           {"pr_to_n", 0},
           {"n_var", 0},
           {"adj_var", 0.25},
           {"nominal_ratio", 0},
           {"lex_to_nonlex", 1},
       }},
  };
  return cases;
}

inline const FeatureCase& feature_case(const std::string& id) {
  for (const auto& c : feature_cases()) {
    if (c.id == id) return c;
  }
  throw std::runtime_error("no hand case " + id);
}

// Names whose value differs from the hand value by more than 1e-12 (relative above 1).
inline std::vector<std::string> feature_mismatches(const FeatureCase& c) {
  auto fv = hitex::extract_features(fixture::sentence(c.id), hitex::CefrLevel::A1, fixture::lexicons());
  std::vector<std::string> bad;
  for (const auto& [name, want] : c.expected) {
    double got = fv.get(name);
    if (!(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)))) bad.push_back(name);
  }
  return bad;
}

// Duplicates the sentence: the copy's indices and heads shift by the length.
inline hitex::AnnotatedSentence doubled(const hitex::AnnotatedSentence& s) {
  hitex::AnnotatedSentence d = s;
  const int n = static_cast<int>(s.size());
  for (auto t : s.tokens) {
    t.index += n;
    if (t.head != 0) t.head += n;
    d.tokens.push_back(t);
  }
  return d;
}

}  // namespace hand
