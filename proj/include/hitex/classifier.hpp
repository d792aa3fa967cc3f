#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hitex/cefr.hpp"
#include "hitex/features.hpp"

namespace hitex {

struct TrainingHyperparams {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  int epochs = 500;
  double gradient_tolerance = 0.0;  // stop early below this gradient norm; 0 = never

  bool operator==(const TrainingHyperparams&) const = default;
};

struct LabeledVector {
  std::vector<double> features;
  CefrLevel level = CefrLevel::A1;
};

// Multinomial logistic regression over standardized features. Weights are
// row-major, one row per label, `dim + 1` columns with the bias last.
struct CefrModel {
  static constexpr int kFormatVersion = 1;

  std::vector<CefrLevel> labels{kClassifiedLevels.begin(), kClassifiedLevels.end()};
  std::size_t dim = kFeatureCount;
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> scales;
  TrainingHyperparams hyperparams;

  std::size_t stride() const { return dim + 1; }
  std::span<const double> row(std::size_t k) const { return {weights.data() + k * stride(), dim}; }
  double bias(std::size_t k) const { return weights[k * stride() + dim]; }

  // All weights zero, identity standardization.
  static CefrModel zero(std::size_t dim = kFeatureCount);

  nlohmann::json to_json() const;
  static CefrModel from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static CefrModel load(const std::string& path);
};

struct Classification {
  CefrLevel level = CefrLevel::A1;
  std::vector<double> probabilities;  // aligned with CefrModel::labels
};

// Deterministic full-batch gradient descent from zero weights on mean
// cross-entropy plus (l2 / 2) * ||W||^2 (bias unpenalized).
CefrModel train(const std::vector<LabeledVector>& data, const TrainingHyperparams& hp = {});

Classification classify(const CefrModel& model, std::span<const double> features);
Classification classify(const CefrModel& model, const FeatureVector& fv);

// Standardized design matrix and integer labels; exposed for gradient checks.
struct SoftmaxProblem {
  std::size_t classes = 0;
  std::size_t dim = 0;
  std::vector<double> x;  // rows x dim
  std::vector<int> y;
  double l2 = 0.0;

  std::size_t rows() const { return y.size(); }
};

// Returns the loss; writes d loss / d weights (same layout as CefrModel) to `grad`.
double loss_and_gradient(const SoftmaxProblem& problem, std::span<const double> weights, std::span<double> grad);

double within_distance_accuracy(const std::vector<CefrLevel>& predicted, const std::vector<CefrLevel>& gold,
                                int distance);

// Training file: TSV with a `level` column plus either every feature column by
// name or a `conllu_ref` column ("file.conllu#sent_id", relative to the TSV).
// Referenced sentences are featurized against their own label as target level.
std::vector<LabeledVector> load_training_file(const std::string& path, const Lexicons& lexicons,
                                              const TagsetConfig& tags = {});
std::vector<LabeledVector> parse_training_table(std::string_view text, const std::string& base_dir,
                                                const Lexicons& lexicons, const TagsetConfig& tags = {});

}  // namespace hitex
