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

#include "rboost/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "rboost/errors.hpp"

namespace rboost {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && !token.empty();
}

bool has_whitespace(std::string_view token) {
  return token.find_first_of(" \t\r\n\v\f") != std::string_view::npos;
}

[[noreturn]] void fail(std::string_view name, std::size_t line_no, const std::string& what) {
  std::ostringstream os;
  os << std::string(name) << ":" << line_no << ": " << what;
  throw DataError(os.str());
}

struct RawData {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;  // (feature, value)
  std::vector<std::string> label_tokens;
  std::size_t n_features = 0;
};

RawData parse_libsvm(std::string_view text, std::string_view name) {
  RawData raw;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                           : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;

    std::vector<std::pair<std::size_t, double>> row;
    std::string label;
    std::size_t field = 0;
    std::size_t at = 0;
    while (at < line.size()) {
      while (at < line.size() && (line[at] == ' ' || line[at] == '\t')) ++at;
      if (at >= line.size()) break;
      std::size_t end = at;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
      std::string_view token = line.substr(at, end - at);
      at = end;

      if (field == 0) {
        if (token.find(':') != std::string_view::npos) {
          fail(name, line_no, "malformed line: missing label before feature entries");
        }
        label = std::string(token);
      } else {
        const std::size_t colon = token.find(':');
        if (colon == std::string_view::npos || colon == 0 || colon + 1 >= token.size()) {
          fail(name, line_no, "malformed feature entry '" + std::string(token) + "'");
        }
        std::string_view id_part = token.substr(0, colon);
        std::string_view val_part = token.substr(colon + 1);
        std::size_t id = 0;
        auto [p, ec] = std::from_chars(id_part.data(), id_part.data() + id_part.size(), id);
        if (ec != std::errc{} || p != id_part.data() + id_part.size() || id == 0) {
          fail(name, line_no, "malformed feature id '" + std::string(id_part) + "'");
        }
        double value = 0.0;
        if (!parse_double(val_part, value)) {
          fail(name, line_no, "malformed feature value '" + std::string(val_part) + "'");
        }
        if (!std::isfinite(value)) {
          fail(name, line_no, "non-finite feature value '" + std::string(val_part) + "'");
        }
        row.emplace_back(id - 1, value);  // to 0-based
        raw.n_features = std::max(raw.n_features, id);
      }
      ++field;
    }
    raw.rows.push_back(std::move(row));
    raw.label_tokens.push_back(std::move(label));
  }
  return raw;
}

RawData parse_csv(std::string_view text, std::string_view name, bool has_header) {
  RawData raw;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::size_t n_cols = 0;
  bool header_pending = has_header;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                           : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }

    std::vector<std::string_view> cells;
    std::size_t at = 0;
    while (true) {
      const std::size_t comma = line.find(',', at);
      cells.push_back(trim(line.substr(at, comma == std::string_view::npos ? line.size() - at
                                                                           : comma - at)));
      if (comma == std::string_view::npos) break;
      at = comma + 1;
    }
    if (cells.size() < 2) {
      fail(name, line_no, "malformed line: need at least one feature column and a label");
    }
    if (n_cols == 0) {
      n_cols = cells.size();
      raw.n_features = n_cols - 1;
    } else if (cells.size() != n_cols) {
      std::ostringstream os;
      os << "malformed line: expected " << n_cols << " columns, found " << cells.size();
      fail(name, line_no, os.str());
    }

    std::vector<std::pair<std::size_t, double>> row;
    row.reserve(n_cols - 1);
    for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
      double value = 0.0;
      if (!parse_double(cells[c], value)) {
        fail(name, line_no, "malformed feature value '" + std::string(cells[c]) + "'");
      }
      if (!std::isfinite(value)) {
        fail(name, line_no, "non-finite feature value '" + std::string(cells[c]) + "'");
      }
      row.emplace_back(c, value);
    }
    std::string_view label = cells.back();
    if (label.empty()) fail(name, line_no, "empty label cell");
    if (has_whitespace(label)) {
      fail(name, line_no, "label token '" + std::string(label) + "' contains whitespace");
    }
    raw.rows.push_back(std::move(row));
    raw.label_tokens.emplace_back(label);
  }
  return raw;
}

// Distinct tokens sorted numerically when all of them parse as numbers
// (ties broken lexicographically), lexicographically otherwise.
std::vector<std::string> sorted_distinct_labels(const std::vector<std::string>& tokens) {
  std::vector<std::string> distinct(tokens);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  bool all_numeric = true;
  std::vector<double> values(distinct.size());
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    if (!parse_double(distinct[i], values[i])) {
      all_numeric = false;
      break;
    }
  }
  if (all_numeric) {
    std::vector<std::size_t> idx(distinct.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (values[a] != values[b]) return values[a] < values[b];
      return distinct[a] < distinct[b];
    });
    std::vector<std::string> ordered;
    ordered.reserve(distinct.size());
    for (std::size_t i : idx) ordered.push_back(distinct[i]);
    return ordered;
  }
  return distinct;
}

}  // namespace

std::optional<DataFormat> parse_format(std::string_view token) {
  if (token == "libsvm") return DataFormat::libsvm;
  if (token == "csv") return DataFormat::csv;
  return std::nullopt;
}

void Dataset::pad_features(std::size_t dim) {
  while (n_features < dim) {
    columns.emplace_back(n_samples, 0.0);
    ++n_features;
  }
}

Dataset load_dataset_from_string(std::string_view text, DataFormat format,
                                 const std::vector<std::string>* label_map,
                                 bool has_header, std::string_view name) {
  RawData raw = (format == DataFormat::libsvm) ? parse_libsvm(text, name)
                                               : parse_csv(text, name, has_header);
  if (raw.rows.empty()) {
    throw DataError(std::string(name) + ": empty file (no samples)");
  }
  if (raw.n_features == 0) {
    throw DataError(std::string(name) + ": no features found");
  }

  Dataset ds;
  ds.label_names = label_map ? *label_map : sorted_distinct_labels(raw.label_tokens);
  std::map<std::string, int, std::less<>> to_index;
  for (std::size_t k = 0; k < ds.label_names.size(); ++k) {
    to_index.emplace(ds.label_names[k], static_cast<int>(k));
  }
  if (to_index.size() != ds.label_names.size()) {
    throw DataError(std::string(name) + ": duplicate entries in label map");
  }

  ds.n_samples = raw.rows.size();
  ds.n_features = raw.n_features;
  ds.n_classes = ds.label_names.size();
  ds.columns.assign(ds.n_features, std::vector<double>(ds.n_samples, 0.0));
  ds.labels.resize(ds.n_samples);

  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    auto it = to_index.find(raw.label_tokens[i]);
    if (it == to_index.end()) {
      throw DataError(std::string(name) + ": label token '" + raw.label_tokens[i] +
                      "' absent from the supplied label map");
    }
    ds.labels[i] = it->second;
    for (const auto& [feature, value] : raw.rows[i]) {
      ds.columns[feature][i] = value;
    }
  }
  if (ds.n_classes < 2) {
    throw DataError(std::string(name) + ": need at least 2 distinct classes, found " +
                    std::to_string(ds.n_classes));
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     const std::vector<std::string>* label_map, bool has_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open data file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_dataset_from_string(buf.str(), format, label_map, has_header,
                                  path.string());
}

FeatureColumnIndex build_sorted_index(const Dataset& dataset) {
  FeatureColumnIndex index;
  index.order.resize(dataset.n_features);
  index.run_starts.resize(dataset.n_features);
  const auto n = static_cast<int32_t>(dataset.n_samples);
  for (std::size_t d = 0; d < dataset.n_features; ++d) {
    const std::vector<double>& col = dataset.columns[d];
    std::vector<int32_t>& order = index.order[d];
    order.resize(dataset.n_samples);
    std::iota(order.begin(), order.end(), int32_t{0});
    // (value, id) ordering keeps ties in original sample order.
    std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
      if (col[a] != col[b]) return col[a] < col[b];
      return a < b;
    });
    std::vector<int32_t>& runs = index.run_starts[d];
    for (int32_t i = 0; i < n; ++i) {
      if (i == 0 || col[order[i]] != col[order[i - 1]]) runs.push_back(i);
    }
  }
  return index;
}

}  // namespace rboost
