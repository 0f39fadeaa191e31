#include "iemb/eval.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <set>

#include "iemb/errors.hpp"
#include "iemb/feature_hashing.hpp"
#include "iemb/random.hpp"

namespace iemb {

// --- edge features ---------------------------------------------------------

std::string_view strategy_name(EdgeStrategy s) {
  switch (s) {
    case EdgeStrategy::kDot: return "dot";
    case EdgeStrategy::kCosine: return "cosine";
    case EdgeStrategy::kHadamard: return "hadamard";
    case EdgeStrategy::kAverage: return "average";
    case EdgeStrategy::kL1: return "l1";
    case EdgeStrategy::kL2: return "l2";
  }
  return "unknown";
}

EdgeStrategy parse_strategy(std::string_view name) {
  for (EdgeStrategy s : kAllStrategies) {
    if (strategy_name(s) == name) return s;
  }
  throw DomainError("unknown edge strategy '" + std::string(name) + "'");
}

bool is_scalar(EdgeStrategy s) { return s == EdgeStrategy::kDot || s == EdgeStrategy::kCosine; }

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

void fill_vector_feature(std::span<const double> a, std::span<const double> b, EdgeStrategy s,
                         std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    switch (s) {
      case EdgeStrategy::kHadamard: out[i] = a[i] * b[i]; break;
      case EdgeStrategy::kAverage: out[i] = 0.5 * (a[i] + b[i]); break;
      case EdgeStrategy::kL1: out[i] = std::abs(diff); break;
      case EdgeStrategy::kL2: out[i] = diff * diff; break;
      default: throw DomainError("strategy does not produce a vector feature");
    }
  }
}

double scalar_feature(std::span<const double> a, std::span<const double> b, EdgeStrategy s) {
  const double d = dot(a, b);
  if (s == EdgeStrategy::kDot) return d;
  const double norms = std::sqrt(dot(a, a)) * std::sqrt(dot(b, b));
  return norms == 0.0 ? 0.0 : d / norms;
}

}  // namespace

EdgeFeature edge_feature(std::span<const double> wu, std::span<const double> wv, EdgeStrategy s) {
  if (wu.size() != wv.size()) throw DomainError("edge_feature: dimension mismatch");
  if (is_scalar(s)) return scalar_feature(wu, wv, s);
  std::vector<double> out(wu.size());
  fill_vector_feature(wu, wv, s, out);
  return out;
}

// --- metrics ---------------------------------------------------------------

double roc_auc(std::span<const ScoredLabel> scored) {
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scored[a].score < scored[b].score; });

  double positives = 0.0;
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scored[order[j]].score == scored[order[i]].score) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1 .. j
    for (std::size_t k = i; k < j; ++k) {
      if (scored[order[k]].positive) {
        positives += 1.0;
        positive_rank_sum += avg_rank;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(scored.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw DomainError("roc_auc needs both positive and negative examples");
  }
  const double u = positive_rank_sum - positives * (positives + 1.0) / 2.0;
  return u / (positives * negatives);
}

F1Scores f1_scores(std::span<const std::vector<std::uint32_t>> predicted,
                   std::span<const std::vector<std::uint32_t>> truth, std::uint32_t num_classes) {
  if (predicted.size() != truth.size()) throw DomainError("f1_scores: misaligned inputs");
  if (predicted.empty()) throw DomainError("f1_scores: empty input");
  std::vector<std::uint64_t> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    std::set<std::uint32_t> pred(predicted[i].begin(), predicted[i].end());
    std::set<std::uint32_t> real(truth[i].begin(), truth[i].end());
    for (auto c : pred) {
      if (c >= num_classes) throw DomainError("f1_scores: label out of range");
      (real.contains(c) ? tp : fp)[c]++;
    }
    for (auto c : real) {
      if (c >= num_classes) throw DomainError("f1_scores: label out of range");
      if (!pred.contains(c)) fn[c]++;
    }
  }
  auto f1 = [](double t, double p, double n) {
    const double denom = 2.0 * t + p + n;
    return denom == 0.0 ? 0.0 : 2.0 * t / denom;
  };
  double t_sum = 0, p_sum = 0, n_sum = 0, macro = 0;
  for (std::uint32_t c = 0; c < num_classes; ++c) {
    t_sum += static_cast<double>(tp[c]);
    p_sum += static_cast<double>(fp[c]);
    n_sum += static_cast<double>(fn[c]);
    macro += f1(static_cast<double>(tp[c]), static_cast<double>(fp[c]), static_cast<double>(fn[c]));
  }
  return {f1(t_sum, p_sum, n_sum), num_classes == 0 ? 0.0 : macro / num_classes};
}

// --- logistic regression ---------------------------------------------------

double LogRegModel::decision(std::span<const double> x) const { return dot(weights, x) + bias; }
double LogRegModel::probability(std::span<const double> x) const { return sigmoid(decision(x)); }

double logistic_loss(const FeatureMatrix& x, std::span<const std::uint8_t> labels,
                     std::span<const double> w, double b, double l2, std::span<double> grad_w,
                     double* grad_b) {
  const bool want_grad = !grad_w.empty();
  if (want_grad) std::fill(grad_w.begin(), grad_w.end(), 0.0);
  double gb = 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto row = x.row(i);
    const double y = labels[i] ? 1.0 : -1.0;
    const double margin = y * (dot(w, row) + b);
    loss += softplus(-margin);
    if (want_grad) {
      const double c = -y * sigmoid(-margin);
      for (std::size_t j = 0; j < x.cols; ++j) grad_w[j] += c * row[j];
      gb += c;
    }
  }
  double w2 = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    w2 += w[j] * w[j];
    if (want_grad) grad_w[j] += l2 * w[j];
  }
  if (grad_b != nullptr) *grad_b = gb;
  return loss + 0.5 * l2 * w2;
}

LogRegModel train_logreg(const FeatureMatrix& x, std::span<const std::uint8_t> labels,
                         const LogRegOptions& options, std::uint64_t /*seed*/) {
  if (x.rows != labels.size()) throw DomainError("train_logreg: label count != rows");
  if (x.rows < 2) throw DomainError("train_logreg: need at least 2 examples");
  const auto positives = std::count_if(labels.begin(), labels.end(), [](auto l) { return l != 0; });
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(x.rows)) {
    throw DomainError("train_logreg: both classes must be present");
  }

  const std::size_t d = x.cols;
  LogRegModel model;
  model.l2 = options.l2;
  model.weights.assign(d, 0.0);
  std::vector<double> grad(d), prev_grad(d), trial(d), trial_grad(d);
  double grad_b = 0.0, prev_grad_b = 0.0, trial_b = 0.0, trial_grad_b = 0.0;
  std::vector<double> prev_w(d, 0.0);
  double prev_b = 0.0;

  double loss = logistic_loss(x, labels, model.weights, model.bias, options.l2, grad, &grad_b);
  model.loss_history.push_back(loss);
  double step = 0.0;

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    double g2 = grad_b * grad_b;
    double g_max = std::abs(grad_b);
    for (double g : grad) {
      g2 += g * g;
      g_max = std::max(g_max, std::abs(g));
    }
    if (g_max < options.gradient_tolerance * static_cast<double>(x.rows)) break;

    if (iter == 0) {
      step = 1.0 / std::sqrt(g2);
    } else {
      // Barzilai-Borwein trial step s.s / s.y
      double ss = 0.0, sy = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double s = model.weights[j] - prev_w[j];
        ss += s * s;
        sy += s * (grad[j] - prev_grad[j]);
      }
      const double sb = model.bias - prev_b;
      ss += sb * sb;
      sy += sb * (grad_b - prev_grad_b);
      step = sy > 0.0 ? ss / sy : 2.0 * step;
    }

    bool accepted = false;
    double trial_loss = loss;
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (std::size_t j = 0; j < d; ++j) trial[j] = model.weights[j] - step * grad[j];
      trial_b = model.bias - step * grad_b;
      trial_loss = logistic_loss(x, labels, trial, trial_b, options.l2, trial_grad, &trial_grad_b);
      if (trial_loss <= loss - 1e-4 * step * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no representable descent step left

    prev_w.swap(model.weights);
    model.weights.swap(trial);
    prev_b = model.bias;
    model.bias = trial_b;
    prev_grad.swap(grad);
    grad.swap(trial_grad);
    prev_grad_b = grad_b;
    grad_b = trial_grad_b;
    loss = trial_loss;
    model.loss_history.push_back(loss);
  }
  model.iterations = iter;
  model.final_loss = loss;
  return model;
}

std::vector<double> OneVsRest::probabilities(std::span<const double> x) const {
  std::vector<double> out(models.size());
  for (std::size_t c = 0; c < models.size(); ++c) {
    out[c] = models[c] ? models[c]->probability(x) : constant[c];
  }
  return out;
}

OneVsRest train_one_vs_rest(const FeatureMatrix& x,
                            std::span<const std::vector<std::uint32_t>> labels,
                            std::uint32_t num_classes, const LogRegOptions& options) {
  if (labels.size() != x.rows) throw DomainError("train_one_vs_rest: label count != rows");
  OneVsRest ovr;
  ovr.models.resize(num_classes);
  ovr.constant.assign(num_classes, 0.0);
  std::vector<std::uint8_t> binary(x.rows);
  for (std::uint32_t c = 0; c < num_classes; ++c) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < x.rows; ++i) {
      binary[i] = std::find(labels[i].begin(), labels[i].end(), c) != labels[i].end();
      pos += binary[i];
    }
    if (pos == 0) {
      ovr.constant[c] = 0.0;
    } else if (pos == x.rows) {
      ovr.constant[c] = 1.0;
    } else {
      ovr.models[c] = train_logreg(x, binary, options);
    }
  }
  return ovr;
}

std::vector<std::uint32_t> classify_topk(const OneVsRest& models, std::span<const double> w,
                                         std::size_t k) {
  const auto probs = models.probabilities(w);
  if (k > probs.size()) throw DomainError("classify_topk: K exceeds class count");
  std::vector<std::uint32_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return probs[a] > probs[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

// --- data ------------------------------------------------------------------

EdgeSplit split_edges(const Graph& g, const SplitFractions& fractions, std::uint64_t seed) {
  const double sum = fractions.train + fractions.validation + fractions.test;
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("split fractions must sum to 1");
  if (fractions.train <= 0.0 || fractions.validation < 0.0 || fractions.test <= 0.0) {
    throw DomainError("split fractions must be positive");
  }

  std::vector<Edge> edges;
  std::vector<Edge> loops;
  for (const auto& e : g.edges()) (e.first == e.second ? loops : edges).push_back(e);
  const std::uint64_t m = edges.size();
  if (m < 10) throw DomainError("split_edges needs at least 10 edges");

  Rng rng(seed);
  rng.shuffle(std::span<Edge>(edges));
  const auto n_test = static_cast<std::size_t>(std::llround(fractions.test * static_cast<double>(m)));
  const auto n_val =
      static_cast<std::size_t>(std::llround(fractions.validation * static_cast<double>(m)));

  EdgeSplit split;
  split.seed = seed;
  split.test_positive.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(n_test));
  split.validation_positive.assign(edges.begin() + static_cast<std::ptrdiff_t>(n_test),
                                   edges.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
  std::vector<Edge> train(edges.begin() + static_cast<std::ptrdiff_t>(n_test + n_val), edges.end());
  train.insert(train.end(), loops.begin(), loops.end());
  split.train_graph = Graph::from_edges(g.node_count(), train);

  // Negatives: distinct non-edges u < v of the full graph.
  const std::uint64_t n = g.node_count();
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const std::size_t needed = n_test + n_val;
  if (pairs - static_cast<double>(m) < static_cast<double>(needed)) {
    throw DomainError("split_edges: too few non-edges for negative sampling");
  }
  std::set<Edge> taken;
  auto draw = [&](std::vector<Edge>& out, std::size_t count) {
    std::uint64_t attempts = 0;
    const std::uint64_t max_attempts = 1000 * (count + 1) + 100000;
    while (out.size() < count) {
      if (++attempts > max_attempts) throw DomainError("split_edges: negative sampling stalled");
      NodeId u = rng.below(n);
      NodeId v = rng.below(n);
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (g.has_edge(u, v)) continue;
      if (!taken.insert({u, v}).second) continue;
      out.emplace_back(u, v);
    }
  };
  draw(split.test_negative, n_test);
  draw(split.validation_negative, n_val);
  return split;
}

LabelSet parse_labels(std::string_view text, std::uint64_t node_count) {
  LabelSet out;
  out.labels.resize(node_count);
  std::uint32_t max_label = 0;
  bool any = false;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#' || line[first] == '%') continue;

    std::uint64_t node = 0;
    std::uint32_t label = 0;
    const char* p = line.data() + first;
    const char* end = line.data() + line.size();
    auto r1 = std::from_chars(p, end, node);
    p = r1.ptr;
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    auto r2 = std::from_chars(p, end, label);
    p = r2.ptr;
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (r1.ec != std::errc() || r2.ec != std::errc() || p != end) {
      throw FormatError("label file line " + std::to_string(line_no) + ": expected '<node> <label>'");
    }
    if (node >= node_count) {
      throw DomainError("label file line " + std::to_string(line_no) + ": node id out of range");
    }
    auto& set = out.labels[node];
    if (std::find(set.begin(), set.end(), label) == set.end()) set.push_back(label);
    max_label = std::max(max_label, label);
    any = true;
  }
  for (auto& set : out.labels) std::sort(set.begin(), set.end());
  out.num_classes = any ? max_label + 1 : 0;
  return out;
}

LabelSet load_labels(const std::filesystem::path& path, std::uint64_t node_count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open label file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_labels(text, node_count);
}

// --- protocols -------------------------------------------------------------

Summary Summary::of(std::vector<double> values) {
  Summary s;
  s.values = std::move(values);
  const auto k = static_cast<double>(s.values.size());
  if (s.values.empty()) return s;
  s.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / k;
  if (s.values.size() > 1) {
    double ss = 0.0;
    for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
    const double sd = std::sqrt(ss / (k - 1.0));
    boost::math::students_t dist(k - 1.0);
    s.half_width_90 = boost::math::quantile(dist, 0.95) * sd / std::sqrt(k);
  }
  return s;
}

namespace {

EmbedConfig with_seed(const EmbedConfig& base, std::uint64_t master_seed) {
  EmbedConfig cfg = base;
  cfg.seeds = HashSeeds(master_seed, base.dim());
  return cfg;
}

struct PairSet {
  std::vector<Edge> pairs;
  std::vector<std::uint8_t> labels;
};

PairSet combine(const std::vector<Edge>& pos, const std::vector<Edge>& neg) {
  PairSet s;
  s.pairs = pos;
  s.pairs.insert(s.pairs.end(), neg.begin(), neg.end());
  s.labels.assign(pos.size(), 1);
  s.labels.insert(s.labels.end(), neg.size(), 0);
  return s;
}

FeatureMatrix vector_features(const EmbeddingMatrix& emb, const std::vector<Edge>& pairs,
                              EdgeStrategy s) {
  FeatureMatrix x(pairs.size(), emb.dim);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    fill_vector_feature(emb.row(pairs[i].first), emb.row(pairs[i].second), s, x.row(i));
  }
  return x;
}

FeatureMatrix take_rows(const FeatureMatrix& x, std::span<const std::size_t> rows) {
  FeatureMatrix out(rows.size(), x.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(x.row(rows[i]).begin(), x.cols, out.row(i).begin());
  }
  return out;
}

double auc_of(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  std::vector<ScoredLabel> scored(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) scored[i] = {scores[i], labels[i] != 0};
  return roc_auc(scored);
}

// Held-out AUC with two folds split by index parity.
double two_fold_auc(const FeatureMatrix& x, std::span<const std::uint8_t> labels,
                    const LogRegOptions& options) {
  std::vector<double> scores(x.rows);
  for (std::size_t fold = 0; fold < 2; ++fold) {
    std::vector<std::size_t> train_rows, held_rows;
    for (std::size_t i = 0; i < x.rows; ++i) (i % 2 == fold ? held_rows : train_rows).push_back(i);
    std::vector<std::uint8_t> train_labels;
    for (auto i : train_rows) train_labels.push_back(labels[i]);
    const auto model = train_logreg(take_rows(x, train_rows), train_labels, options);
    for (auto i : held_rows) scores[i] = model.decision(x.row(i));
  }
  return auc_of(scores, labels);
}

}  // namespace

LinkPredReport run_link_prediction(const Graph& g, const LinkPredConfig& cfg) {
  if (cfg.repeats < 1) throw DomainError("repeats must be >= 1");
  if (cfg.strategies.empty()) throw DomainError("no edge strategies selected");
  cfg.embed.validate();

  std::vector<std::vector<double>> test_auc(cfg.strategies.size());
  std::vector<std::vector<double>> val_auc(cfg.strategies.size());
  std::vector<double> shuffled;

  for (int r = 0; r < cfg.repeats; ++r) {
    const std::uint64_t split_seed = mix64(cfg.seed + static_cast<std::uint64_t>(r));
    const EdgeSplit split = split_edges(g, {}, split_seed);
    const auto handle = GraphHandle::in_memory(split.train_graph);
    const auto emb = graph_embedding(handle, with_seed(cfg.embed, cfg.seed + static_cast<std::uint64_t>(r)),
                                     cfg.workers);

    const PairSet val = combine(split.validation_positive, split.validation_negative);
    const PairSet test = combine(split.test_positive, split.test_negative);

    for (std::size_t si = 0; si < cfg.strategies.size(); ++si) {
      const EdgeStrategy s = cfg.strategies[si];
      if (is_scalar(s)) {
        auto score_all = [&](const PairSet& set) {
          std::vector<double> scores(set.pairs.size());
          for (std::size_t i = 0; i < set.pairs.size(); ++i) {
            scores[i] = scalar_feature(emb.row(set.pairs[i].first), emb.row(set.pairs[i].second), s);
          }
          return scores;
        };
        const auto test_scores = score_all(test);
        val_auc[si].push_back(auc_of(score_all(val), val.labels));
        test_auc[si].push_back(auc_of(test_scores, test.labels));
        if (s == EdgeStrategy::kDot) {
          std::vector<std::uint8_t> permuted = test.labels;
          Rng rng(split_seed ^ kGoldenGamma);
          rng.shuffle(std::span<std::uint8_t>(permuted));
          shuffled.push_back(auc_of(test_scores, permuted));
        }
      } else {
        const auto x_val = vector_features(emb, val.pairs, s);
        const auto x_test = vector_features(emb, test.pairs, s);
        const auto model = train_logreg(x_val, val.labels, cfg.logreg);
        std::vector<double> scores(x_test.rows);
        for (std::size_t i = 0; i < x_test.rows; ++i) scores[i] = model.decision(x_test.row(i));
        test_auc[si].push_back(auc_of(scores, test.labels));
        val_auc[si].push_back(two_fold_auc(x_val, val.labels, cfg.logreg));
      }
    }
    if (shuffled.size() < static_cast<std::size_t>(r + 1)) {
      // dot not selected: still report the shuffled baseline on dot scores
      std::vector<double> scores(test.pairs.size());
      for (std::size_t i = 0; i < test.pairs.size(); ++i) {
        scores[i] = dot(emb.row(test.pairs[i].first), emb.row(test.pairs[i].second));
      }
      std::vector<std::uint8_t> permuted = test.labels;
      Rng rng(split_seed ^ kGoldenGamma);
      rng.shuffle(std::span<std::uint8_t>(permuted));
      shuffled.push_back(auc_of(scores, permuted));
    }
  }

  LinkPredReport report;
  std::size_t best = 0;
  for (std::size_t si = 0; si < cfg.strategies.size(); ++si) {
    report.strategies.push_back(
        {cfg.strategies[si], Summary::of(test_auc[si]), Summary::of(val_auc[si])});
    if (report.strategies[si].validation_auc.mean > report.strategies[best].validation_auc.mean) {
      best = si;
    }
  }
  report.best_on_validation = std::string(strategy_name(cfg.strategies[best]));
  report.best_test_auc = report.strategies[best].test_auc;
  report.shuffled_dot_auc = Summary::of(shuffled);
  return report;
}

ClassifyReport run_classification(const Graph& g, const LabelSet& labels, const ClassifyConfig& cfg) {
  if (cfg.repeats < 1) throw DomainError("repeats must be >= 1");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    throw DomainError("train fraction must lie in (0, 1)");
  }
  if (labels.labels.size() != g.node_count()) throw DomainError("label set does not match graph");
  cfg.embed.validate();

  std::vector<NodeId> labeled;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!labels.labels[v].empty()) labeled.push_back(v);
  }
  if (labeled.size() < 2) throw DomainError("need at least 2 labeled nodes");
  const auto n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(labeled.size()))),
      1, labeled.size() - 1);

  const auto handle = GraphHandle::in_memory(g);
  std::vector<double> micro, macro;
  for (int r = 0; r < cfg.repeats; ++r) {
    const auto rs = static_cast<std::uint64_t>(r);
    const auto emb = graph_embedding(handle, with_seed(cfg.embed, cfg.seed + rs), cfg.workers);
    std::vector<NodeId> order = labeled;
    Rng rng(mix64(cfg.seed + rs));
    rng.shuffle(std::span<NodeId>(order));

    FeatureMatrix x(n_train, emb.dim);
    std::vector<std::vector<std::uint32_t>> train_labels(n_train);
    for (std::size_t i = 0; i < n_train; ++i) {
      std::copy_n(emb.row(order[i]).begin(), emb.dim, x.row(i).begin());
      train_labels[i] = labels.labels[order[i]];
    }
    const auto ovr = train_one_vs_rest(x, train_labels, labels.num_classes, cfg.logreg);

    std::vector<std::vector<std::uint32_t>> predicted, truth;
    for (std::size_t i = n_train; i < order.size(); ++i) {
      const auto& real = labels.labels[order[i]];
      predicted.push_back(classify_topk(ovr, emb.row(order[i]), real.size()));
      truth.push_back(real);
    }
    const auto f1 = f1_scores(predicted, truth, labels.num_classes);
    micro.push_back(f1.micro);
    macro.push_back(f1.macro);
  }
  ClassifyReport report;
  report.micro_f1 = Summary::of(std::move(micro));
  report.macro_f1 = Summary::of(std::move(macro));
  report.train_nodes = n_train;
  report.test_nodes = labeled.size() - n_train;
  return report;
}

}  // namespace iemb
