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
#include <optional>
#include <span>
#include <vector>

#include "rboost/dataset.hpp"

namespace rboost {

// Weighted-regression target for one sample, kept in product form: zw is
// response*weight and w is the weight. The response itself is never
// materialized, so near-zero weights cannot blow it up; every split and leaf
// statistic is a plain sum of zw and w over a sample set.
struct WorkingSample {
  double zw = 0.0;
  double w = 0.0;
};

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;  // strictly between two distinct observed values
  double gain = 0.0;
  int left_count = 0;
  int right_count = 0;
};

// Reduction in weighted squared error achieved by a split, from the grouped
// sums alone:
//
//   gain = (sum zw)_L^2/(sum w)_L + (sum zw)_R^2/(sum w)_R
//        - (sum zw)_T^2/(sum w)_T
//
// Returns nothing when either weight sum is <= 0 (undefined split; the
// caller must not propose it). The result is >= 0 up to rounding.
std::optional<double> gain_from_sums(double sum_zw_left, double sum_w_left,
                                     double sum_zw_right, double sum_w_right);

// Weighted-mean leaf value scale*(sum zw)/(sum w), with a denominator floor:
// sum_w below 1e-12 yields 0. scale is (K-1)/K or 1 depending on the trainer.
double leaf_value(double sum_zw, double sum_w, double scale);

// Best admissible split of one node along one feature.
//
// sorted_run holds the node's sample ids ascending by column value (ties
// grouped, stable); column is the full feature column indexed by sample id.
// A split is admissible when it falls between two distinct values, both
// sides have >= min_leaf samples, and both weight sums are positive. Returns
// the admissible split with maximal gain, or nothing when no admissible
// split has gain > 0 (gains within fp cancellation noise of zero, at
// 1e-12 relative to the node term, count as zero so constant-response nodes
// are never split). Ties in gain keep the smaller threshold; the caller
// scanning features in ascending order keeps the smaller feature index.
std::optional<SplitCandidate> find_best_split(std::span<const int32_t> sorted_run,
                                              std::span<const double> column,
                                              int feature,
                                              std::span<const WorkingSample> samples,
                                              int min_leaf);

// Binary regression tree with (feature, threshold) internal nodes and
// constant-valued leaves. Routing goes left iff x[feature] <= threshold.
// Immutable once built; safe for concurrent prediction.
struct RegressionTree {
  struct Node {
    int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int32_t left = -1;
    int32_t right = -1;
    double value = 0.0;  // leaf only
  };

  std::vector<Node> nodes;  // nodes[0] is the root

  bool empty() const { return nodes.empty(); }
  int leaf_count() const;

  // Routes by looking feature values up through `value_at(feature)`.
  template <typename ValueAt>
  double predict_with(ValueAt&& value_at) const {
    int32_t at = 0;
    while (nodes[at].feature >= 0) {
      const Node& n = nodes[at];
      at = (value_at(n.feature) <= n.threshold) ? n.left : n.right;
    }
    return nodes[at].value;
  }

  // Leaf index a sample lands in (position in `nodes`).
  template <typename ValueAt>
  int32_t route_with(ValueAt&& value_at) const {
    int32_t at = 0;
    while (nodes[at].feature >= 0) {
      const Node& n = nodes[at];
      at = (value_at(n.feature) <= n.threshold) ? n.left : n.right;
    }
    return at;
  }
};

// Routes x to a leaf and returns its value. Throws std::invalid_argument if
// the tree references a feature index outside x.
double predict_tree(const RegressionTree& tree, std::span<const double> x);

// One terminal region of a freshly grown tree: the samples that reached it
// and their (sum zw, sum w) under the split weighting. Leaf values are not
// assigned by build_tree; the trainer computes them from the regions.
struct LeafRegion {
  int32_t node = 0;  // index into GrownTree::tree.nodes
  double sum_zw = 0.0;
  double sum_w = 0.0;
  std::vector<int32_t> samples;
};

struct GrownTree {
  RegressionTree tree;
  std::vector<LeafRegion> leaves;
};

// Reusable buffers for build_tree; one instance per worker thread.
class TreeWorkspace {
 public:
  TreeWorkspace() = default;

 private:
  friend GrownTree build_tree(const Dataset&, const FeatureColumnIndex&,
                              std::span<const WorkingSample>, int, int,
                              TreeWorkspace&);
  std::vector<int32_t> order;       // n_features * n_samples, node-partitioned
  std::vector<int32_t> region;      // n_samples, canonical node partition
  std::vector<int32_t> scratch;     // partition temp, n_samples
  std::vector<uint8_t> goes_left;   // per sample id, n_samples
};

// Grows a tree over all samples, best-first: repeatedly splits the leaf
// whose best admissible candidate has the largest gain, until max_leaves
// leaves exist or no leaf has a positive-gain split. max_leaves must be
// >= 2. Leaf regions partition the sample set.
GrownTree build_tree(const Dataset& dataset, const FeatureColumnIndex& index,
                     std::span<const WorkingSample> samples, int max_leaves,
                     int min_leaf, TreeWorkspace& workspace);

GrownTree build_tree(const Dataset& dataset, const FeatureColumnIndex& index,
                     std::span<const WorkingSample> samples, int max_leaves,
                     int min_leaf);

}  // namespace rboost
