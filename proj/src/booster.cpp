// Copyright 2026 The RBoost Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rboost/booster.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rboost/errors.hpp"
#include "rboost/eval.hpp"
#include "rboost/loss.hpp"
#include "rboost/parallel.hpp"

namespace rboost {

namespace {

// Per-worker buffers reused across tree fits.
struct FitScratch {
  TreeWorkspace tree_ws;
  std::vector<WorkingSample> ws;
  std::vector<double> leaf_w;
  Matrix cand_scores;
  std::vector<double> prob_buf;
};

int argmax_row(std::span<const double> row) {
  int best = 0;
  for (std::size_t k = 1; k < row.size(); ++k) {
    if (row[k] > row[best]) best = static_cast<int>(k);
  }
  return best;
}

// Fits one weighted regression tree and assigns its leaf values as
// scale * (sum zw)/(sum leaf weight) over each region, clipped to the
// configured magnitude.
GrownTree fit_valued_tree(const Dataset& data, const FeatureColumnIndex& index,
                          FitScratch& scratch, const TrainConfig& config,
                          double scale) {
  GrownTree grown = build_tree(data, index, scratch.ws, config.n_leaves,
                               config.min_leaf, scratch.tree_ws);
  for (const LeafRegion& leaf : grown.leaves) {
    double sum_zw = 0.0;
    double sum_w = 0.0;
    for (int32_t id : leaf.samples) {
      sum_zw += scratch.ws[id].zw;
      sum_w += scratch.leaf_w[id];
    }
    const double value = leaf_value(sum_zw, sum_w, scale);
    grown.tree.nodes[leaf.node].value =
        std::min(std::max(value, -config.leaf_clip), config.leaf_clip);
  }
  return grown;
}

void refresh_probs(BoostState& state) {
  for (std::size_t i = 0; i < state.scores.rows(); ++i) {
    softmax_row(state.scores.row(i), state.probs.row(i));
  }
}

void check_iterate_inputs(const BoostState& state, const Dataset& data,
                          const TrainConfig& config) {
  if (state.scores.rows() != data.n_samples || state.scores.cols() != data.n_classes) {
    throw std::invalid_argument("boost state does not match the dataset shape");
  }
  if (config.n_leaves < 2) throw std::invalid_argument("n_leaves must be >= 2");
  if (config.min_leaf < 1) throw std::invalid_argument("min_leaf must be >= 1");
}

}  // namespace

std::optional<Algorithm> parse_algorithm(std::string_view token) {
  if (token == "mart") return Algorithm::mart;
  if (token == "logit") return Algorithm::logit;
  if (token == "abc-mart") return Algorithm::abc_mart;
  if (token == "abc-logit") return Algorithm::abc_logit;
  return std::nullopt;
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::mart: return "mart";
    case Algorithm::logit: return "logit";
    case Algorithm::abc_mart: return "abc-mart";
    case Algorithm::abc_logit: return "abc-logit";
  }
  return "?";
}

bool is_abc(Algorithm a) {
  return a == Algorithm::abc_mart || a == Algorithm::abc_logit;
}

SplitCriterion criterion_of(Algorithm a) {
  return (a == Algorithm::mart || a == Algorithm::abc_mart) ? SplitCriterion::mart
                                                            : SplitCriterion::logit;
}

BoostState BoostState::initial(std::size_t n_samples, std::size_t n_classes) {
  BoostState state;
  state.scores = Matrix(n_samples, n_classes, 0.0);
  state.probs = Matrix(n_samples, n_classes, 1.0 / static_cast<double>(n_classes));
  state.completed = 0;
  state.train_loss = static_cast<double>(n_samples) * std::log(static_cast<double>(n_classes));
  return state;
}

PlainStep iterate_plain(BoostState& state, const Dataset& data,
                        const FeatureColumnIndex& index, const TrainConfig& config,
                        SplitCriterion criterion) {
  check_iterate_inputs(state, data, config);
  const std::size_t n = data.n_samples;
  const std::size_t n_classes = data.n_classes;
  const double scale = (static_cast<double>(n_classes) - 1.0) / static_cast<double>(n_classes);
  const bool hessian_weights = criterion == SplitCriterion::logit;

  const std::size_t workers = worker_count(n_classes);
  std::vector<FitScratch> scratch(workers);
  std::vector<TaggedTree> trees(n_classes);

  // Each class reads the iteration-start probabilities and writes only its
  // own score column, so class fits are independent.
  parallel_for(n_classes, workers, [&](std::size_t k, std::size_t w) {
    FitScratch& s = scratch[w];
    s.ws.resize(n);
    s.leaf_w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = data.labels[i] == static_cast<int>(k) ? 1.0 : 0.0;
      const GradPair d = grads_plain(r, state.probs(i, k));
      s.ws[i] = {d.g, hessian_weights ? d.h : 1.0};
      s.leaf_w[i] = d.h;
    }
    GrownTree grown = fit_valued_tree(data, index, s, config, scale);
    for (const LeafRegion& leaf : grown.leaves) {
      const double step = config.shrinkage * grown.tree.nodes[leaf.node].value;
      for (int32_t id : leaf.samples) state.scores(id, k) += step;
    }
    trees[k] = {static_cast<int>(k), std::move(grown.tree)};
  });

  refresh_probs(state);
  state.train_loss = total_loss(state.probs, data.labels);
  ++state.completed;
  return {std::move(trees)};
}

AbcStep iterate_abc(BoostState& state, const Dataset& data,
                    const FeatureColumnIndex& index, const TrainConfig& config,
                    SplitCriterion criterion) {
  check_iterate_inputs(state, data, config);
  const std::size_t n = data.n_samples;
  const std::size_t n_classes = data.n_classes;
  const bool hessian_weights = criterion == SplitCriterion::logit;

  const std::size_t workers = worker_count(n_classes);
  std::vector<FitScratch> scratch(workers);
  std::vector<double> candidate_losses(n_classes);
  std::vector<std::vector<TaggedTree>> candidate_trees(n_classes);

  parallel_for(n_classes, workers, [&](std::size_t b, std::size_t w) {
    FitScratch& s = scratch[w];
    s.ws.resize(n);
    s.leaf_w.resize(n);
    s.prob_buf.resize(n_classes);
    Matrix& cand = s.cand_scores;
    cand = state.scores;

    std::vector<TaggedTree> trees;
    trees.reserve(n_classes - 1);
    for (std::size_t k = 0; k < n_classes; ++k) {
      if (k == b) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const double r_b = data.labels[i] == static_cast<int>(b) ? 1.0 : 0.0;
        const double r_k = data.labels[i] == static_cast<int>(k) ? 1.0 : 0.0;
        const GradPair d = grads_abc(r_b, state.probs(i, b), r_k, state.probs(i, k));
        s.ws[i] = {d.g, hessian_weights ? d.h : 1.0};
        s.leaf_w[i] = d.h;
      }
      GrownTree grown = fit_valued_tree(data, index, s, config, 1.0);
      for (const LeafRegion& leaf : grown.leaves) {
        const double step = config.shrinkage * grown.tree.nodes[leaf.node].value;
        for (int32_t id : leaf.samples) cand(id, k) += step;
      }
      trees.push_back({static_cast<int>(k), std::move(grown.tree)});
    }
    // Base column is minus the sum of the others; then the candidate loss.
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n_classes; ++k) {
        if (k != b) sum += cand(i, k);
      }
      cand(i, b) = -sum;
      softmax_row(cand.row(i), s.prob_buf);
      loss -= std::log(s.prob_buf[static_cast<std::size_t>(data.labels[i])]);
    }
    candidate_losses[b] = loss;
    candidate_trees[b] = std::move(trees);
  });

  std::size_t base = 0;
  for (std::size_t b = 1; b < n_classes; ++b) {
    if (candidate_losses[b] < candidate_losses[base]) base = b;
  }

  // Re-applying the winning trees to the live scores reproduces the
  // candidate's score matrix add for add: every sample lands in the leaf
  // whose region it occupied during the fit.
  for (const TaggedTree& tagged : candidate_trees[base]) {
    const auto k = static_cast<std::size_t>(tagged.class_index);
    for (std::size_t i = 0; i < n; ++i) {
      const double v =
          tagged.tree.predict_with([&](int32_t f) { return data.value(i, static_cast<std::size_t>(f)); });
      state.scores(i, k) += config.shrinkage * v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n_classes; ++k) {
      if (k != base) sum += state.scores(i, k);
    }
    state.scores(i, base) = -sum;
  }
  refresh_probs(state);
  state.train_loss = candidate_losses[base];
  ++state.completed;

  return {static_cast<int>(base), std::move(candidate_trees[base]),
          std::move(candidate_losses)};
}

namespace {

// Adds one committed iteration to a score matrix over a dataset; used to
// track test scores during training with the exact update rule the trainer
// applies to the training scores.
void apply_iteration(const ModelIteration& iteration, const Dataset& data,
                     Matrix& scores, double shrinkage) {
  for (const TaggedTree& tagged : iteration.trees) {
    const auto k = static_cast<std::size_t>(tagged.class_index);
    for (std::size_t i = 0; i < data.n_samples; ++i) {
      const double v =
          tagged.tree.predict_with([&](int32_t f) { return data.value(i, static_cast<std::size_t>(f)); });
      scores(i, k) += shrinkage * v;
    }
  }
  if (iteration.base_class >= 0) {
    const auto base = static_cast<std::size_t>(iteration.base_class);
    for (std::size_t i = 0; i < data.n_samples; ++i) {
      double sum = 0.0;
      for (std::size_t k = 0; k < scores.cols(); ++k) {
        if (k != base) sum += scores(i, k);
      }
      scores(i, base) = -sum;
    }
  }
}

}  // namespace

TrainResult train(const Dataset& train_data, const Dataset* test_data,
                  const TrainConfig& config, const ProgressFn& on_log) {
  if (config.n_leaves < 2) throw std::invalid_argument("n_leaves must be >= 2");
  if (!(config.shrinkage > 0.0) || config.shrinkage > 1.0) {
    throw std::invalid_argument("shrinkage must be in (0, 1]");
  }
  if (config.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (config.min_leaf < 1) throw std::invalid_argument("min_leaf must be >= 1");
  if (!(config.leaf_clip > 0.0)) throw std::invalid_argument("leaf_clip must be > 0");
  if (config.eval_stride < 1) throw std::invalid_argument("eval_stride must be >= 1");
  if (test_data) {
    if (test_data->n_features != train_data.n_features) {
      throw DataError("train/test feature dimensions differ");
    }
    if (test_data->label_names != train_data.label_names) {
      throw DataError("train/test label maps differ");
    }
  }

  const std::size_t n = train_data.n_samples;
  const std::size_t n_classes = train_data.n_classes;
  // Default: stop only once the loss underflows to exactly 0, i.e. every
  // sample's true-class probability rounds to 1 and further iterations
  // cannot change the scores. Reported errors then match running all M
  // iterations.
  const double early_stop = config.early_stop_loss < 0.0
                                ? std::numeric_limits<double>::denorm_min()
                                : config.early_stop_loss;

  const FeatureColumnIndex index = build_sorted_index(train_data);
  BoostState state = BoostState::initial(n, n_classes);

  TrainResult result;
  result.model.algorithm = config.algorithm;
  result.model.n_classes = static_cast<int>(n_classes);
  result.model.n_features = static_cast<int>(train_data.n_features);
  result.model.shrinkage = config.shrinkage;
  result.model.label_names = train_data.label_names;

  Matrix test_scores;
  std::vector<int> test_pred;
  if (test_data) {
    test_scores = Matrix(test_data->n_samples, n_classes, 0.0);
    test_pred.resize(test_data->n_samples);
  }

  const bool abc = is_abc(config.algorithm);
  const SplitCriterion criterion = criterion_of(config.algorithm);
  const auto start = std::chrono::steady_clock::now();

  for (int m = 1; m <= config.max_iterations; ++m) {
    if (abc) {
      AbcStep step = iterate_abc(state, train_data, index, config, criterion);
      result.model.iterations.push_back({step.base_class, std::move(step.trees)});
    } else {
      PlainStep step = iterate_plain(state, train_data, index, config, criterion);
      result.model.iterations.push_back({-1, std::move(step.trees)});
    }
    if (test_data) {
      apply_iteration(result.model.iterations.back(), *test_data, test_scores,
                      config.shrinkage);
    }

    const bool stop = state.train_loss < early_stop;
    const bool last = stop || m == config.max_iterations;
    if (m % config.eval_stride == 0 || last) {
      long long errors = -1;
      if (test_data) {
        for (std::size_t i = 0; i < test_data->n_samples; ++i) {
          test_pred[i] = argmax_row(test_scores.row(i));
        }
        errors = misclassification_count(test_pred, test_data->labels);
      }
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      MetricRow row{m, state.train_loss, errors, seconds};
      result.log.rows.push_back(row);
      if (on_log) on_log(row);
    }
    if (stop) break;
  }
  return result;
}

Prediction predict_model(const BoostModel& model, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(model.n_features)) {
    throw std::invalid_argument("predict_model: feature dimension mismatch");
  }
  const auto n_classes = static_cast<std::size_t>(model.n_classes);
  Prediction out;
  out.scores.assign(n_classes, 0.0);
  for (const ModelIteration& iteration : model.iterations) {
    for (const TaggedTree& tagged : iteration.trees) {
      out.scores[static_cast<std::size_t>(tagged.class_index)] +=
          model.shrinkage * tagged.tree.predict_with([&](int32_t f) { return x[f]; });
    }
    if (iteration.base_class >= 0) {
      const auto base = static_cast<std::size_t>(iteration.base_class);
      double sum = 0.0;
      for (std::size_t k = 0; k < n_classes; ++k) {
        if (k != base) sum += out.scores[k];
      }
      out.scores[base] = -sum;
    }
  }
  out.probabilities = softmax_row(out.scores);
  out.label = argmax_row(out.probabilities);
  return out;
}

}  // namespace rboost
