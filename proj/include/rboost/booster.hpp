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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rboost/dataset.hpp"
#include "rboost/matrix.hpp"
#include "rboost/tree.hpp"

namespace rboost {

// The four trainers factor into two orthogonal switches: the tree-split
// criterion (unit weights vs second-derivative weights) and the base-class
// handling (one tree per class vs K-1 trees against an adaptively chosen
// base).
enum class Algorithm { mart, logit, abc_mart, abc_logit };
enum class SplitCriterion { mart, logit };

std::optional<Algorithm> parse_algorithm(std::string_view token);
std::string_view algorithm_name(Algorithm a);
bool is_abc(Algorithm a);
SplitCriterion criterion_of(Algorithm a);

struct TrainConfig {
  Algorithm algorithm = Algorithm::logit;
  int n_leaves = 20;          // terminal nodes per tree
  double shrinkage = 0.1;     // in (0, 1]
  int max_iterations = 1000;  // >= 1
  // Stop once the training loss drops below this. < 0 selects the default:
  // the smallest positive double, i.e. stop once the loss underflows to
  // exactly 0 (machine accuracy; the model cannot change afterwards).
  double early_stop_loss = -1.0;
  int min_leaf = 1;
  // Leaf values are clipped to [-leaf_clip, leaf_clip]. One-step Newton leaf
  // values are unbounded when the curvature sum vanishes faster than the
  // gradient sum; the abc variants amplify an unbounded leaf through the
  // base-class column and diverge without this guard.
  double leaf_clip = 50.0;
  int eval_stride = 1;
  std::uint64_t seed = 0;
};

// Mutable training state. Between iterations probs is always the row-softmax
// of scores and train_loss the matching loss.
struct BoostState {
  Matrix scores;  // F, n_samples x n_classes
  Matrix probs;   // P
  int completed = 0;
  double train_loss = 0.0;

  static BoostState initial(std::size_t n_samples, std::size_t n_classes);
};

struct TaggedTree {
  int class_index = 0;
  RegressionTree tree;
};

// One boosting iteration of a trained model: K trees (plain) or K-1 trees
// plus the base class whose score is minus the sum of the others (abc).
struct ModelIteration {
  int base_class = -1;  // -1 for plain iterations
  std::vector<TaggedTree> trees;
};

struct BoostModel {
  Algorithm algorithm = Algorithm::logit;
  int n_classes = 0;
  int n_features = 0;
  double shrinkage = 0.1;
  std::vector<std::string> label_names;
  std::vector<ModelIteration> iterations;
};

struct PlainStep {
  std::vector<TaggedTree> trees;  // one per class
};

struct AbcStep {
  int base_class = 0;
  std::vector<TaggedTree> trees;          // K-1, tagged with class != base
  std::vector<double> candidate_losses;   // loss of every candidate base
};

// One iteration with one tree per class: responses r - p, weights p(1-p)
// (logit criterion) or unit weights (mart criterion), leaf scale (K-1)/K.
// All K fits read the iteration-start probabilities; scores and
// probabilities are committed at the end.
PlainStep iterate_plain(BoostState& state, const Dataset& data,
                        const FeatureColumnIndex& index, const TrainConfig& config,
                        SplitCriterion criterion);

// One adaptive-base iteration: for every candidate base the K-1 trees are
// fit (leaf scale 1), candidate scores are assembled with the base score
// forced to minus the sum of the others, and the candidate training loss is
// evaluated; the candidate with minimal loss is committed (ties toward the
// smallest class index). Candidate trees are reused, not refit.
AbcStep iterate_abc(BoostState& state, const Dataset& data,
                    const FeatureColumnIndex& index, const TrainConfig& config,
                    SplitCriterion criterion);

struct MetricRow {
  int iteration = 0;
  double train_loss = 0.0;
  long long test_errors = -1;  // -1 when no test set was given
  double seconds = 0.0;
};

struct MetricLog {
  std::vector<MetricRow> rows;
};

struct TrainResult {
  BoostModel model;
  MetricLog log;
};

using ProgressFn = std::function<void(const MetricRow&)>;

// Runs up to config.max_iterations boosting iterations of the configured
// algorithm, stopping early once the training loss falls below the
// early-stop threshold. Metrics are logged every eval_stride iterations and
// at the final one. test, when given, must share the feature dimension and
// label names of the training data.
TrainResult train(const Dataset& train_data, const Dataset* test_data,
                  const TrainConfig& config, const ProgressFn& on_log = nullptr);

struct Prediction {
  std::vector<double> scores;
  std::vector<double> probabilities;
  int label = 0;  // argmax probability, smallest index on ties
};

Prediction predict_model(const BoostModel& model, std::span<const double> x);

}  // namespace rboost
