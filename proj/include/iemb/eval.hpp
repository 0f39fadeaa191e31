#pragma once

// Link-prediction and node-classification protocols for embedding quality.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "iemb/embedder.hpp"
#include "iemb/graph_store.hpp"

namespace iemb {

using Edge = std::pair<NodeId, NodeId>;

// --- edge features ---------------------------------------------------------

enum class EdgeStrategy { kDot, kCosine, kHadamard, kAverage, kL1, kL2 };

inline constexpr EdgeStrategy kAllStrategies[] = {EdgeStrategy::kDot,      EdgeStrategy::kCosine,
                                                  EdgeStrategy::kHadamard, EdgeStrategy::kAverage,
                                                  EdgeStrategy::kL1,       EdgeStrategy::kL2};

std::string_view strategy_name(EdgeStrategy s);
EdgeStrategy parse_strategy(std::string_view name);
/// Dot and cosine produce a score directly; the rest produce d-vectors.
bool is_scalar(EdgeStrategy s);

using EdgeFeature = std::variant<double, std::vector<double>>;

EdgeFeature edge_feature(std::span<const double> wu, std::span<const double> wv, EdgeStrategy s);

// --- metrics ---------------------------------------------------------------

struct ScoredLabel {
  double score;
  bool positive;
};

/// Mann-Whitney AUC; tied scores count 1/2. Requires both classes.
double roc_auc(std::span<const ScoredLabel> scored);

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
};

/// Micro F1 pools TP/FP/FN over all classes; macro averages per-class F1 over
/// all `num_classes` classes, counting a class with no truth and no
/// predictions as 0.
F1Scores f1_scores(std::span<const std::vector<std::uint32_t>> predicted,
                   std::span<const std::vector<std::uint32_t>> truth, std::uint32_t num_classes);

// --- logistic regression ---------------------------------------------------

struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<double> row(std::size_t i) { return std::span<double>(data).subspan(i * cols, cols); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data).subspan(i * cols, cols);
  }
};

struct LogRegOptions {
  double l2 = 1.0;
  int max_iterations = 5000;
  /// Stop once max_j |dL/dw_j| / rows falls below this.
  double gradient_tolerance = 1e-4;
};

struct LogRegModel {
  std::vector<double> weights;
  double bias = 0.0;
  double l2 = 1.0;
  int iterations = 0;
  double final_loss = 0.0;
  std::vector<double> loss_history;

  double decision(std::span<const double> x) const;
  double probability(std::span<const double> x) const;
};

/// Objective sum_i log(1 + exp(-y_i (w.x_i + b))) + l2/2 |w|^2 with
/// y in {-1, +1}; the bias is not regularized. Gradient is written to
/// `grad_w` / `grad_b` when non-null.
double logistic_loss(const FeatureMatrix& x, std::span<const std::uint8_t> labels,
                     std::span<const double> w, double b, double l2,
                     std::span<double> grad_w = {}, double* grad_b = nullptr);

/// Full-batch gradient descent from zero with Armijo backtracking (trial step
/// from the Barzilai-Borwein ratio). Stops when the per-example gradient
/// max-norm drops below the tolerance or after max_iterations. `seed` is
/// recorded only; the procedure is deterministic.
LogRegModel train_logreg(const FeatureMatrix& x, std::span<const std::uint8_t> labels,
                         const LogRegOptions& options = {}, std::uint64_t seed = 0);

/// One binary model per class. A class with no positive (or no negative)
/// training example gets a constant probability of 0 (or 1).
struct OneVsRest {
  std::vector<std::optional<LogRegModel>> models;
  std::vector<double> constant;

  std::vector<double> probabilities(std::span<const double> x) const;
};

OneVsRest train_one_vs_rest(const FeatureMatrix& x,
                            std::span<const std::vector<std::uint32_t>> labels,
                            std::uint32_t num_classes, const LogRegOptions& options = {});

/// Labels of the K largest probabilities, ties broken toward lower ids,
/// returned in ascending id order.
std::vector<std::uint32_t> classify_topk(const OneVsRest& models, std::span<const double> w,
                                         std::size_t k);

// --- data ------------------------------------------------------------------

struct SplitFractions {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct EdgeSplit {
  Graph train_graph;
  std::vector<Edge> validation_positive;
  std::vector<Edge> validation_negative;
  std::vector<Edge> test_positive;
  std::vector<Edge> test_negative;
  std::uint64_t seed = 0;
};

/// Uniform edge split; self-loops stay in the training graph. Negatives are
/// distinct uniformly sampled non-edges of the full graph.
EdgeSplit split_edges(const Graph& g, const SplitFractions& fractions, std::uint64_t seed);

struct LabelSet {
  std::vector<std::vector<std::uint32_t>> labels;  ///< per node, sorted, may be empty
  std::uint32_t num_classes = 0;
};

/// Lines "<node_id> <label_id>"; repeated nodes accumulate labels.
LabelSet load_labels(const std::filesystem::path& path, std::uint64_t node_count);
LabelSet parse_labels(std::string_view text, std::uint64_t node_count);

// --- protocols -------------------------------------------------------------

struct Summary {
  std::vector<double> values;
  double mean = 0.0;
  double half_width_90 = 0.0;  ///< Student-t 90% interval half-width

  static Summary of(std::vector<double> values);
};

struct LinkPredConfig {
  EmbedConfig embed;
  unsigned workers = 1;
  int repeats = 3;
  std::uint64_t seed = kDefaultSeed;
  std::vector<EdgeStrategy> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
  LogRegOptions logreg;
};

struct StrategyResult {
  EdgeStrategy strategy;
  Summary test_auc;
  Summary validation_auc;
};

struct LinkPredReport {
  std::vector<StrategyResult> strategies;
  std::string best_on_validation;
  Summary best_test_auc;
  Summary shuffled_dot_auc;  ///< dot scores against permuted test labels
};

/// Repeat r splits with seed mix64(seed + r) and hashes with master seed
/// seed + r. Dot/cosine rank pairs directly; vector strategies score with a
/// logistic regression trained on the validation pairs (validation AUC for
/// those strategies is 2-fold cross-validated).
LinkPredReport run_link_prediction(const Graph& g, const LinkPredConfig& cfg);

struct ClassifyConfig {
  EmbedConfig embed;
  unsigned workers = 1;
  int repeats = 3;
  double train_fraction = 0.1;
  std::uint64_t seed = kDefaultSeed;
  LogRegOptions logreg;
};

struct ClassifyReport {
  Summary micro_f1;
  Summary macro_f1;
  std::uint64_t train_nodes = 0;
  std::uint64_t test_nodes = 0;
};

/// One-vs-rest top-K protocol; K is each test node's true label count.
ClassifyReport run_classification(const Graph& g, const LabelSet& labels, const ClassifyConfig& cfg);

}  // namespace iemb
