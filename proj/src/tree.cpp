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

#include "rboost/tree.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rboost {

namespace {

constexpr double kDenominatorFloor = 1e-12;

// Cancellation in the three-term gain leaves residue proportional to the
// node term, so a constant-response node can show gains of a few ulps.
// Gains below this relative floor count as zero and are never proposed.
constexpr double kGainNoiseRelative = 1e-12;

// Threshold strictly inside [lo, hi): routing "x <= t" then sends every
// sample with value lo left and every sample with value hi right.
double split_threshold(double lo, double hi) {
  double t = std::midpoint(lo, hi);
  if (!(t < hi)) t = lo;
  return t;
}

struct BestSplit {
  SplitCandidate candidate;
  double left_zw = 0.0;
  double left_w = 0.0;
};

// Single pass over a node's samples in feature-sorted order. Tied values are
// consumed as one block, so no split can separate them. Node totals are
// passed in; the right-side sums are the node totals minus the prefix. The
// gain is the grouped-sum formula of gain_from_sums with the node term kept
// in its directly accumulated form, so with unit weights the value coincides
// bit for bit with the count-denominator criterion.
//
// *all_tied, when given, is set when the run holds a single value; such a
// feature can never split this node or any descendant.
std::optional<BestSplit> best_split_in_run(std::span<const int32_t> sorted_run,
                                           std::span<const double> column,
                                           int feature,
                                           std::span<const WorkingSample> samples,
                                           int min_leaf, double node_zw,
                                           double node_w, bool* all_tied = nullptr) {
  const std::size_t n = sorted_run.size();
  if (all_tied) {
    *all_tied = n > 0 && column[sorted_run.front()] == column[sorted_run.back()];
  }
  if (n < 2 || !(node_w > 0.0)) return std::nullopt;
  const double node_term = node_zw * node_zw / node_w;
  const double min_gain = kGainNoiseRelative * node_term;

  std::optional<BestSplit> best;
  double left_zw = 0.0;
  double left_w = 0.0;
  std::size_t i = 0;
  while (i < n) {
    const double value = column[sorted_run[i]];
    std::size_t j = i;
    while (j < n && column[sorted_run[j]] == value) {
      const WorkingSample& s = samples[sorted_run[j]];
      left_zw += s.zw;
      left_w += s.w;
      ++j;
    }
    if (j >= n) break;  // no distinct value follows
    const auto left_count = static_cast<int>(j);
    const auto right_count = static_cast<int>(n - j);
    if (left_count >= min_leaf && right_count >= min_leaf) {
      const double right_zw = node_zw - left_zw;
      const double right_w = node_w - left_w;
      if (left_w > 0.0 && right_w > 0.0) {
        const double gain = left_zw * left_zw / left_w +
                            right_zw * right_zw / right_w - node_term;
        if (gain > min_gain && (!best || gain > best->candidate.gain)) {
          best = BestSplit{
              SplitCandidate{feature, split_threshold(value, column[sorted_run[j]]),
                             gain, left_count, right_count},
              left_zw, left_w};
        }
      }
    }
    i = j;
  }
  return best;
}

}  // namespace

std::optional<double> gain_from_sums(double sum_zw_left, double sum_w_left,
                                     double sum_zw_right, double sum_w_right) {
  if (!(sum_w_left > 0.0) || !(sum_w_right > 0.0)) return std::nullopt;
  const double total_zw = sum_zw_left + sum_zw_right;
  const double total_w = sum_w_left + sum_w_right;
  return sum_zw_left * sum_zw_left / sum_w_left +
         sum_zw_right * sum_zw_right / sum_w_right - total_zw * total_zw / total_w;
}

double leaf_value(double sum_zw, double sum_w, double scale) {
  if (sum_w < kDenominatorFloor) return 0.0;
  return scale * (sum_zw / sum_w);
}

std::optional<SplitCandidate> find_best_split(std::span<const int32_t> sorted_run,
                                              std::span<const double> column,
                                              int feature,
                                              std::span<const WorkingSample> samples,
                                              int min_leaf) {
  double node_zw = 0.0;
  double node_w = 0.0;
  for (int32_t id : sorted_run) {
    node_zw += samples[id].zw;
    node_w += samples[id].w;
  }
  auto best = best_split_in_run(sorted_run, column, feature, samples, min_leaf,
                                node_zw, node_w);
  if (!best) return std::nullopt;
  return best->candidate;
}

int RegressionTree::leaf_count() const {
  int count = 0;
  for (const Node& n : nodes) count += (n.feature < 0);
  return count;
}

double predict_tree(const RegressionTree& tree, std::span<const double> x) {
  if (tree.empty()) throw std::invalid_argument("predict_tree: empty tree");
  return tree.predict_with([&](int32_t feature) {
    if (static_cast<std::size_t>(feature) >= x.size()) {
      throw std::invalid_argument("predict_tree: feature dimension mismatch");
    }
    return x[feature];
  });
}

GrownTree build_tree(const Dataset& dataset, const FeatureColumnIndex& index,
                     std::span<const WorkingSample> samples, int max_leaves,
                     int min_leaf, TreeWorkspace& workspace) {
  if (max_leaves < 2) throw std::invalid_argument("build_tree: max_leaves must be >= 2");
  if (min_leaf < 1) throw std::invalid_argument("build_tree: min_leaf must be >= 1");
  const std::size_t n = dataset.n_samples;
  const std::size_t n_features = dataset.n_features;

  workspace.order.resize(n_features * n);
  workspace.region.resize(n);
  workspace.scratch.resize(n);
  workspace.goes_left.resize(n);
  for (std::size_t d = 0; d < n_features; ++d) {
    std::copy(index.order[d].begin(), index.order[d].end(),
              workspace.order.begin() + static_cast<std::ptrdiff_t>(d * n));
  }
  std::iota(workspace.region.begin(), workspace.region.end(), int32_t{0});
  auto feature_run = [&](std::size_t d, std::size_t begin, std::size_t end) {
    return std::span<int32_t>(workspace.order.data() + d * n + begin, end - begin);
  };
  auto region_run = [&](std::size_t begin, std::size_t end) {
    return std::span<int32_t>(workspace.region.data() + begin, end - begin);
  };

  struct OpenLeaf {
    std::size_t begin, end;
    int32_t node;
    double sum_zw, sum_w;
    std::optional<BestSplit> best;
    // features still varying inside this node; constants never come back
    std::vector<int32_t> active_features;
  };

  auto search_leaf = [&](OpenLeaf& leaf) {
    leaf.best = std::nullopt;
    std::size_t kept = 0;
    for (int32_t d : leaf.active_features) {
      bool all_tied = false;
      auto found = best_split_in_run(
          feature_run(static_cast<std::size_t>(d), leaf.begin, leaf.end),
          dataset.columns[static_cast<std::size_t>(d)], d, samples, min_leaf,
          leaf.sum_zw, leaf.sum_w, &all_tied);
      if (!all_tied) leaf.active_features[kept++] = d;
      if (found && (!leaf.best || found->candidate.gain > leaf.best->candidate.gain)) {
        leaf.best = found;
      }
    }
    leaf.active_features.resize(kept);
  };

  GrownTree grown;
  grown.tree.nodes.push_back({});  // root starts as a leaf

  std::vector<OpenLeaf> open;
  {
    OpenLeaf root{0, n, 0, 0.0, 0.0, std::nullopt, {}};
    root.active_features.resize(n_features);
    std::iota(root.active_features.begin(), root.active_features.end(), int32_t{0});
    for (int32_t id : region_run(0, n)) {
      root.sum_zw += samples[id].zw;
      root.sum_w += samples[id].w;
    }
    search_leaf(root);
    open.push_back(std::move(root));
  }

  int leaves = 1;
  while (leaves < max_leaves) {
    // Largest-gain open leaf; earliest-created wins ties for determinism.
    std::size_t pick = open.size();
    for (std::size_t i = 0; i < open.size(); ++i) {
      if (!open[i].best) continue;
      if (pick == open.size() || open[i].best->candidate.gain > open[pick].best->candidate.gain) {
        pick = i;
      }
    }
    if (pick == open.size()) break;

    OpenLeaf leaf = std::move(open[pick]);
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    const SplitCandidate& cand = leaf.best->candidate;

    const auto& split_col = dataset.columns[cand.feature];
    for (int32_t id : region_run(leaf.begin, leaf.end)) {
      workspace.goes_left[id] = split_col[id] <= cand.threshold;
    }
    // Stable two-way partition of the region and of every still-active
    // feature's slice (constant features are never read below this node).
    auto partition_slice = [&](std::span<int32_t> run) {
      std::size_t n_left = 0;
      std::size_t n_right = 0;
      for (int32_t id : run) {
        if (workspace.goes_left[id]) {
          run[n_left++] = id;
        } else {
          workspace.scratch[n_right++] = id;
        }
      }
      std::copy(workspace.scratch.begin(),
                workspace.scratch.begin() + static_cast<std::ptrdiff_t>(n_right),
                run.begin() + static_cast<std::ptrdiff_t>(n_left));
    };
    for (int32_t d : leaf.active_features) {
      partition_slice(feature_run(static_cast<std::size_t>(d), leaf.begin, leaf.end));
    }
    partition_slice(region_run(leaf.begin, leaf.end));

    const auto left_node = static_cast<int32_t>(grown.tree.nodes.size());
    const auto right_node = left_node + 1;
    grown.tree.nodes.push_back({});
    grown.tree.nodes.push_back({});
    RegressionTree::Node& parent = grown.tree.nodes[leaf.node];
    parent.feature = cand.feature;
    parent.threshold = cand.threshold;
    parent.left = left_node;
    parent.right = right_node;

    const std::size_t mid = leaf.begin + static_cast<std::size_t>(cand.left_count);
    OpenLeaf left{leaf.begin, mid, left_node, leaf.best->left_zw, leaf.best->left_w,
                  std::nullopt, leaf.active_features};
    OpenLeaf right{mid, leaf.end, right_node, leaf.sum_zw - leaf.best->left_zw,
                   leaf.sum_w - leaf.best->left_w, std::nullopt,
                   std::move(leaf.active_features)};
    search_leaf(left);
    search_leaf(right);
    open.push_back(std::move(left));
    open.push_back(std::move(right));
    ++leaves;
  }

  grown.leaves.reserve(open.size());
  for (const OpenLeaf& leaf : open) {
    LeafRegion region;
    region.node = leaf.node;
    region.sum_zw = leaf.sum_zw;
    region.sum_w = leaf.sum_w;
    auto run = region_run(leaf.begin, leaf.end);
    region.samples.assign(run.begin(), run.end());
    grown.leaves.push_back(std::move(region));
  }
  return grown;
}

GrownTree build_tree(const Dataset& dataset, const FeatureColumnIndex& index,
                     std::span<const WorkingSample> samples, int max_leaves,
                     int min_leaf) {
  TreeWorkspace workspace;
  return build_tree(dataset, index, samples, max_leaves, min_leaf, workspace);
}

}  // namespace rboost
