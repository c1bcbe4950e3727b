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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rboost {

enum class DataFormat { libsvm, csv };

std::optional<DataFormat> parse_format(std::string_view token);

// Immutable training/test data. Features are stored densely, one column per
// feature (missing sparse entries are 0). Labels are class indices in
// [0, n_classes); label_names[k] is the original label token of class k.
//
// Instances are never mutated after loading, so concurrent reads are safe.
struct Dataset {
  std::size_t n_samples = 0;
  std::size_t n_features = 0;
  std::size_t n_classes = 0;
  std::vector<std::vector<double>> columns;  // columns[d][i]
  std::vector<int> labels;                   // labels[i] in [0, n_classes)
  std::vector<std::string> label_names;      // sorted distinct tokens

  double value(std::size_t sample, std::size_t feature) const {
    return columns[feature][sample];
  }

  // Appends zero-valued columns until n_features == dim. Used to align the
  // feature dimension of libsvm files whose max feature id differs.
  void pad_features(std::size_t dim);
};

// Per-feature sort order of the samples.
//
// order[d] is a permutation of {0..n_samples-1}, ascending by feature value,
// stable with respect to the original sample order within ties.
// run_starts[d] holds the start position of every run of tied values
// (the first entry is always 0); admissible split positions are exactly the
// interior run starts.
struct FeatureColumnIndex {
  std::vector<std::vector<int32_t>> order;
  std::vector<std::vector<int32_t>> run_starts;
};

// Loads a dataset from a file.
//
// libsvm: whitespace-separated "label idx:val ..." entries with 1-based
// feature ids; the feature dimension is the maximum id seen.
// csv: comma-separated cells, the label in the LAST column, optional header
// row (skipped when has_header is set).
//
// Labels are remapped to 0..K-1 by sorted order of the distinct tokens
// (numerically when every token parses as a number, else lexicographically).
// When label_map is given its mapping is reused verbatim so train and test
// splits agree; a file token absent from the map is an error.
//
// Throws DataError on malformed input (the message names the line number).
Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     const std::vector<std::string>* label_map = nullptr,
                     bool has_header = false);

// Same parser over an in-memory buffer; `name` is used in error messages.
Dataset load_dataset_from_string(std::string_view text, DataFormat format,
                                 const std::vector<std::string>* label_map = nullptr,
                                 bool has_header = false,
                                 std::string_view name = "<memory>");

FeatureColumnIndex build_sorted_index(const Dataset& dataset);

}  // namespace rboost
