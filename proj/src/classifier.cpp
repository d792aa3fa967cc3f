#include "hitex/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "hitex/error.hpp"
#include "hitex/kernels.hpp"

namespace hitex {

namespace {

int label_index(const std::vector<CefrLevel>& labels, CefrLevel level) {
  auto it = std::find(labels.begin(), labels.end(), level);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

std::string feature_label(std::size_t dim, std::size_t j) {
  if (dim == kFeatureCount) return std::string(feature_names()[j]);
  return "feature " + std::to_string(j);
}

// Stable softmax of `logits` in place.
void softmax(std::span<double> logits) {
  double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& v : logits) {
    v = std::exp(v - peak);
    total += v;
  }
  for (double& v : logits) v /= total;
}

void standardize_row(const CefrModel& m, std::span<const double> raw, std::span<double> out) {
  for (std::size_t j = 0; j < m.dim; ++j) out[j] = (raw[j] - m.means[j]) / m.scales[j];
}

}  // namespace

CefrModel CefrModel::zero(std::size_t dim) {
  CefrModel m;
  m.dim = dim;
  m.weights.assign(m.labels.size() * (dim + 1), 0.0);
  m.means.assign(dim, 0.0);
  m.scales.assign(dim, 1.0);
  return m;
}

nlohmann::json CefrModel::to_json() const {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  std::vector<std::string> names;
  for (auto l : labels) names.emplace_back(to_string(l));
  j["labels"] = names;
  j["dim"] = dim;
  if (dim == kFeatureCount) {
    std::vector<std::string> fnames(feature_names().begin(), feature_names().end());
    j["feature_names"] = fnames;
  }
  auto rows = nlohmann::json::array();
  for (std::size_t k = 0; k < labels.size(); ++k) {
    rows.push_back(std::vector<double>(weights.begin() + k * stride(), weights.begin() + (k + 1) * stride()));
  }
  j["weights"] = rows;
  j["means"] = means;
  j["scales"] = scales;
  j["hyperparams"] = {{"learning_rate", hyperparams.learning_rate},
                      {"l2", hyperparams.l2},
                      {"epochs", hyperparams.epochs},
                      {"gradient_tolerance", hyperparams.gradient_tolerance}};
  return j;
}

CefrModel CefrModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw Error("unsupported model format version " + j.at("format_version").dump());
    }
    CefrModel m;
    m.labels.clear();
    for (const auto& l : j.at("labels")) m.labels.push_back(parse_cefr_or_throw(l.get<std::string>()));
    m.dim = j.at("dim").get<std::size_t>();
    m.weights.clear();
    const auto& rows = j.at("weights");
    if (rows.size() != m.labels.size()) throw Error("model has " + std::to_string(rows.size()) + " weight rows");
    for (const auto& r : rows) {
      auto row = r.get<std::vector<double>>();
      if (row.size() != m.dim + 1) throw Error("model weight row has wrong length");
      m.weights.insert(m.weights.end(), row.begin(), row.end());
    }
    m.means = j.at("means").get<std::vector<double>>();
    m.scales = j.at("scales").get<std::vector<double>>();
    if (m.means.size() != m.dim || m.scales.size() != m.dim) throw Error("standardization length mismatch");
    for (double s : m.scales) {
      if (!(s > 0.0) || !std::isfinite(s)) throw Error("standardization scales must be positive");
    }
    for (double w : m.weights) {
      if (!std::isfinite(w)) throw Error("model weights must be finite");
    }
    const auto& hp = j.at("hyperparams");
    m.hyperparams.learning_rate = hp.at("learning_rate").get<double>();
    m.hyperparams.l2 = hp.at("l2").get<double>();
    m.hyperparams.epochs = hp.at("epochs").get<int>();
    m.hyperparams.gradient_tolerance = hp.value("gradient_tolerance", 0.0);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model: ") + e.what());
  }
}

void CefrModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model to '" + path + "'");
  out << to_json().dump(2) << '\n';
}

CefrModel CefrModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open model '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError("model '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

double loss_and_gradient(const SoftmaxProblem& p, std::span<const double> weights, std::span<double> grad) {
  const std::size_t stride = p.dim + 1;
  const std::size_t n = p.rows();
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<double> probs(p.classes);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> xi(p.x.data() + i * p.dim, p.dim);
    for (std::size_t k = 0; k < p.classes; ++k) {
      probs[k] = kernels::dot(weights.subspan(k * stride, p.dim), xi) + weights[k * stride + p.dim];
    }
    softmax(probs);
    loss -= std::log(std::max(probs[static_cast<std::size_t>(p.y[i])], 1e-300));
    for (std::size_t k = 0; k < p.classes; ++k) {
      double residual = probs[k] - (static_cast<int>(k) == p.y[i] ? 1.0 : 0.0);
      kernels::axpy(residual, xi, grad.subspan(k * stride, p.dim));
      grad[k * stride + p.dim] += residual;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  loss *= inv_n;
  for (double& g : grad) g *= inv_n;
  double penalty = 0.0;
  for (std::size_t k = 0; k < p.classes; ++k) {
    for (std::size_t j = 0; j < p.dim; ++j) {
      double w = weights[k * stride + j];
      penalty += w * w;
      grad[k * stride + j] += p.l2 * w;
    }
  }
  return loss + 0.5 * p.l2 * penalty;
}

CefrModel train(const std::vector<LabeledVector>& data, const TrainingHyperparams& hp) {
  if (data.empty()) throw TrainingError("training set is empty");
  const std::size_t dim = data.front().features.size();
  if (dim == 0) throw TrainingError("training vectors have no features");
  if (!(hp.learning_rate > 0.0) || hp.epochs < 0 || hp.l2 < 0.0) throw TrainingError("invalid hyperparameters");

  CefrModel model = CefrModel::zero(dim);
  model.hyperparams = hp;
  SoftmaxProblem problem;
  problem.classes = model.labels.size();
  problem.dim = dim;
  problem.l2 = hp.l2;

  std::map<CefrLevel, std::size_t> seen;
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto& row = data[r];
    if (row.features.size() != dim) {
      throw TrainingError("row " + std::to_string(r + 1) + " has " + std::to_string(row.features.size()) +
                          " features, expected " + std::to_string(dim));
    }
    for (std::size_t j = 0; j < dim; ++j) {
      if (!std::isfinite(row.features[j])) {
        throw TrainingError("non-finite value for " + feature_label(dim, j) + " in row " + std::to_string(r + 1));
      }
    }
    int k = label_index(model.labels, row.level);
    if (k < 0) throw TrainingError("row " + std::to_string(r + 1) + " has unsupported level " +
                                   std::string(to_string(row.level)));
    problem.y.push_back(k);
    ++seen[row.level];
  }
  if (seen.size() < 2) throw TrainingError("training needs at least two distinct levels");

  const double n = static_cast<double>(data.size());
  for (std::size_t j = 0; j < dim; ++j) {
    double mean = 0.0;
    for (const auto& row : data) mean += row.features[j];
    mean /= n;
    double var = 0.0;
    for (const auto& row : data) var += (row.features[j] - mean) * (row.features[j] - mean);
    double sd = std::sqrt(var / n);
    model.means[j] = mean;
    model.scales[j] = sd > 1e-12 ? sd : 1.0;
  }
  problem.x.resize(data.size() * dim);
  for (std::size_t r = 0; r < data.size(); ++r) {
    standardize_row(model, data[r].features, std::span<double>(problem.x.data() + r * dim, dim));
  }

  std::vector<double> grad(model.weights.size());
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    loss_and_gradient(problem, model.weights, grad);
    if (hp.gradient_tolerance > 0.0) {
      double norm = std::sqrt(kernels::dot(grad, grad));
      if (norm < hp.gradient_tolerance) break;
    }
    kernels::axpy(-hp.learning_rate, grad, model.weights);
  }
  return model;
}

Classification classify(const CefrModel& model, std::span<const double> features) {
  if (features.size() != model.dim) {
    throw Error("feature vector has " + std::to_string(features.size()) + " values, model expects " +
                std::to_string(model.dim));
  }
  std::vector<double> z(model.dim);
  standardize_row(model, features, z);
  Classification out;
  out.probabilities.resize(model.labels.size());
  for (std::size_t k = 0; k < model.labels.size(); ++k) {
    out.probabilities[k] = kernels::dot(model.row(k), z) + model.bias(k);
  }
  softmax(out.probabilities);
  std::size_t best = 0;
  for (std::size_t k = 1; k < out.probabilities.size(); ++k) {
    if (out.probabilities[k] > out.probabilities[best]) best = k;
  }
  out.level = model.labels[best];
  return out;
}

Classification classify(const CefrModel& model, const FeatureVector& fv) {
  return classify(model, std::span<const double>(fv.values.data(), fv.values.size()));
}

double within_distance_accuracy(const std::vector<CefrLevel>& predicted, const std::vector<CefrLevel>& gold,
                                int distance) {
  if (predicted.size() != gold.size()) {
    throw Error("prediction and gold lists differ in length (" + std::to_string(predicted.size()) + " vs " +
                std::to_string(gold.size()) + ")");
  }
  if (predicted.empty()) throw Error("no predictions to score");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (level_distance(predicted[i], gold[i]) <= distance) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

std::vector<LabeledVector> parse_training_table(std::string_view text, const std::string& base_dir,
                                                const Lexicons& lexicons, const TagsetConfig& tags) {
  auto table = parse_tsv(text);
  auto c_level = table.column("level");
  std::vector<LabeledVector> out;
  auto ref_col = table.find_column("conllu_ref");
  std::map<std::string, std::vector<AnnotatedSentence>> cache;

  std::vector<std::size_t> feature_cols;
  if (!ref_col) {
    for (auto name : feature_names()) feature_cols.push_back(table.column(name));
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "line " + std::to_string(table.row_lines[r]);
    auto level = parse_cefr(row[c_level]);
    if (!level) throw LoadError(where + ": unknown level '" + row[c_level] + "'");
    LabeledVector lv;
    lv.level = *level;
    if (ref_col) {
      const std::string& ref = row[*ref_col];
      auto hash = ref.find('#');
      if (hash == std::string::npos) throw LoadError(where + ": conllu_ref must look like file#sent_id");
      auto file = (std::filesystem::path(base_dir) / ref.substr(0, hash)).string();
      auto id = ref.substr(hash + 1);
      auto it = cache.find(file);
      if (it == cache.end()) it = cache.emplace(file, read_conllu_file(file)).first;
      auto s = std::find_if(it->second.begin(), it->second.end(), [&](const auto& x) { return x.id == id; });
      if (s == it->second.end()) throw LoadError(where + ": sentence '" + id + "' not found in " + file);
      auto fv = extract_features(*s, *level, lexicons, tags);
      lv.features.assign(fv.values.begin(), fv.values.end());
    } else {
      for (std::size_t j = 0; j < feature_cols.size(); ++j) {
        const auto& cell = row[feature_cols[j]];
        char* end = nullptr;
        double v = std::strtod(cell.c_str(), &end);
        if (cell.empty() || end != cell.c_str() + cell.size()) {
          throw LoadError(where + ": feature '" + std::string(feature_names()[j]) + "' is not a number");
        }
        lv.features.push_back(v);
      }
    }
    out.push_back(std::move(lv));
  }
  return out;
}

std::vector<LabeledVector> load_training_file(const std::string& path, const Lexicons& lexicons,
                                              const TagsetConfig& tags) {
  auto dir = std::filesystem::path(path).parent_path().string();
  return parse_training_table(read_text_file(path), dir, lexicons, tags);
}

}  // namespace hitex
