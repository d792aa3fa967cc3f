#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "hitex/cefr.hpp"
#include "hitex/corpus.hpp"
#include "hitex/lexicons.hpp"
#include "hitex/tagset.hpp"

namespace hitex {

inline constexpr std::size_t kFeatureCount = 61;

enum class FeatureGroup { count, lexical, morph, syntactic, semantic };

// Feature names in vector order, grouped count(7), lexical(11), morph(30),
// syntactic(11), semantic(2).
const std::array<std::string_view, kFeatureCount>& feature_names();
FeatureGroup feature_group(std::size_t index);
std::optional<std::size_t> feature_index(std::string_view name);

struct FeatureVector {
  std::array<double, kFeatureCount> values{};

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  // Throws std::out_of_range for an unknown name.
  double get(std::string_view name) const;

  bool operator==(const FeatureVector&) const = default;
};

struct FeatureOptions {
  // DepArc length > 5 as a per-1000-token incidence (true) or a raw count.
  bool deparc_gt5_as_incidence = true;
};

// Incidence scores are count * 1000 / token count; every ratio with a zero
// denominator is 0.
FeatureVector extract_features(const AnnotatedSentence& s, CefrLevel target_level, const Lexicons& lexicons,
                               const TagsetConfig& tags = {}, const FeatureOptions& options = {});

}  // namespace hitex
