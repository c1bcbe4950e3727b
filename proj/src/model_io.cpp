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

#include "rboost/model_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rboost/errors.hpp"

namespace rboost {

namespace {

void append_real(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_node(std::string& out, const RegressionTree& tree, int32_t at) {
  const RegressionTree::Node& n = tree.nodes[at];
  if (n.feature >= 0) {
    out += "n ";
    out += std::to_string(n.feature);
    out += ' ';
    append_real(out, n.threshold);
    out += '\n';
    append_node(out, tree, n.left);
    append_node(out, tree, n.right);
  } else {
    out += "l ";
    append_real(out, n.value);
    out += '\n';
  }
}

bool token_ok_as_label(const std::string& label) {
  return !label.empty() &&
         label.find_first_of(" \t\r\n\v\f") == std::string::npos;
}

// Whitespace-delimited token reader that remembers byte offsets for error
// messages.
class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  std::size_t offset() const { return pos_; }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  std::string_view next(const char* what) {
    skip_space();
    if (pos_ >= text_.size()) {
      fail(std::string("unexpected end of model file while reading ") + what);
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void expect(std::string_view token, const char* what) {
    const std::size_t at = after_space();
    std::string_view got = next(what);
    if (got != token) {
      fail_at(at, std::string("expected '") + std::string(token) + "' while reading " +
                      what + ", found '" + std::string(got) + "'");
    }
  }

  long long next_int(const char* what) {
    const std::size_t at = after_space();
    std::string_view tok = next(what);
    long long value = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || p != tok.data() + tok.size()) {
      fail_at(at, std::string("malformed integer '") + std::string(tok) + "' in " + what);
    }
    return value;
  }

  double next_real(const char* what) {
    const std::size_t at = after_space();
    std::string_view tok = next(what);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double value = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || p != tok.data() + tok.size() || tok.empty()) {
      fail_at(at, std::string("malformed real '") + std::string(tok) + "' in " + what);
    }
    if (!std::isfinite(value)) {
      fail_at(at, std::string("non-finite value in ") + what);
    }
    return value;
  }

  [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }

  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
    std::ostringstream os;
    os << "model file error at byte " << at << ": " << what;
    throw ModelIoError(os.str());
  }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  }
  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  std::size_t after_space() {
    skip_space();
    return pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

int32_t parse_node(Tokenizer& tk, RegressionTree& tree, int n_features) {
  const auto at = static_cast<int32_t>(tree.nodes.size());
  tree.nodes.push_back({});
  const std::size_t tok_at = tk.offset();
  std::string_view kind = tk.next("tree node");
  if (kind == "n") {
    const long long feature = tk.next_int("split feature");
    if (feature < 0 || feature >= n_features) {
      tk.fail_at(tok_at, "split feature index out of range");
    }
    const double threshold = tk.next_real("split threshold");
    const int32_t left = parse_node(tk, tree, n_features);
    const int32_t right = parse_node(tk, tree, n_features);
    tree.nodes[at].feature = static_cast<int32_t>(feature);
    tree.nodes[at].threshold = threshold;
    tree.nodes[at].left = left;
    tree.nodes[at].right = right;
  } else if (kind == "l") {
    tree.nodes[at].value = tk.next_real("leaf value");
  } else {
    tk.fail_at(tok_at, "expected node marker 'n' or 'l', found '" + std::string(kind) + "'");
  }
  return at;
}

}  // namespace

std::string model_to_string(const BoostModel& model) {
  for (const std::string& label : model.label_names) {
    if (!token_ok_as_label(label)) {
      throw ModelIoError("label token '" + label + "' cannot be serialized");
    }
  }
  std::string out;
  out += "rboost-model v1\n";
  out += "algorithm ";
  out += algorithm_name(model.algorithm);
  out += "\nclasses " + std::to_string(model.n_classes);
  out += "\nfeatures " + std::to_string(model.n_features);
  out += "\nshrinkage ";
  append_real(out, model.shrinkage);
  out += "\nlabels";
  for (const std::string& label : model.label_names) {
    out += ' ';
    out += label;
  }
  out += "\niterations " + std::to_string(model.iterations.size());
  out += '\n';
  for (std::size_t m = 0; m < model.iterations.size(); ++m) {
    const ModelIteration& iteration = model.iterations[m];
    out += "iter " + std::to_string(m + 1);
    if (iteration.base_class >= 0) {
      out += " base " + std::to_string(iteration.base_class);
    } else {
      out += " plain";
    }
    out += '\n';
    for (const TaggedTree& tagged : iteration.trees) {
      out += "tree " + std::to_string(tagged.class_index);
      out += '\n';
      append_node(out, tagged.tree, 0);
    }
  }
  out += "end\n";
  return out;
}

void save_model(const BoostModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelIoError("cannot write model file: " + path.string());
  const std::string text = model_to_string(model);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ModelIoError("error writing model file: " + path.string());
}

BoostModel model_from_string(std::string_view text) {
  Tokenizer tk(text);
  tk.expect("rboost-model", "header");
  {
    const std::size_t at = tk.offset();
    std::string_view version = tk.next("format version");
    if (version != "v1") {
      tk.fail_at(at, "unsupported model version '" + std::string(version) + "'");
    }
  }

  BoostModel model;
  tk.expect("algorithm", "header");
  {
    const std::size_t at = tk.offset();
    std::string_view algo = tk.next("algorithm");
    const auto parsed = parse_algorithm(algo);
    if (!parsed) tk.fail_at(at, "unknown algorithm '" + std::string(algo) + "'");
    model.algorithm = *parsed;
  }

  tk.expect("classes", "header");
  const long long n_classes = tk.next_int("class count");
  if (n_classes < 2) tk.fail("class count must be >= 2");
  model.n_classes = static_cast<int>(n_classes);

  tk.expect("features", "header");
  const long long n_features = tk.next_int("feature count");
  if (n_features < 1) tk.fail("feature count must be >= 1");
  model.n_features = static_cast<int>(n_features);

  tk.expect("shrinkage", "header");
  model.shrinkage = tk.next_real("shrinkage");
  if (!(model.shrinkage > 0.0) || model.shrinkage > 1.0) {
    tk.fail("shrinkage must be in (0, 1]");
  }

  tk.expect("labels", "header");
  model.label_names.reserve(static_cast<std::size_t>(n_classes));
  for (long long k = 0; k < n_classes; ++k) {
    model.label_names.emplace_back(tk.next("label token"));
  }

  tk.expect("iterations", "header");
  const long long n_iterations = tk.next_int("iteration count");
  if (n_iterations < 0) tk.fail("iteration count must be >= 0");

  const bool abc = is_abc(model.algorithm);
  const std::size_t trees_per_iter =
      abc ? static_cast<std::size_t>(n_classes) - 1 : static_cast<std::size_t>(n_classes);
  model.iterations.reserve(static_cast<std::size_t>(n_iterations));
  for (long long m = 1; m <= n_iterations; ++m) {
    tk.expect("iter", "iteration block");
    const long long number = tk.next_int("iteration number");
    if (number != m) tk.fail("iteration blocks out of order");

    ModelIteration iteration;
    const std::size_t kind_at = tk.offset();
    std::string_view kind = tk.next("iteration kind");
    if (kind == "base") {
      if (!abc) tk.fail_at(kind_at, "plain algorithm cannot carry base classes");
      const long long base = tk.next_int("base class");
      if (base < 0 || base >= n_classes) tk.fail("base class out of range");
      iteration.base_class = static_cast<int>(base);
    } else if (kind == "plain") {
      if (abc) tk.fail_at(kind_at, "abc algorithm requires a base class per iteration");
    } else {
      tk.fail_at(kind_at, "expected 'plain' or 'base', found '" + std::string(kind) + "'");
    }

    std::vector<bool> seen(static_cast<std::size_t>(n_classes), false);
    for (std::size_t t = 0; t < trees_per_iter; ++t) {
      tk.expect("tree", "tree block");
      const std::size_t tag_at = tk.offset();
      const long long tag = tk.next_int("tree class tag");
      if (tag < 0 || tag >= n_classes) tk.fail_at(tag_at, "tree class tag out of range");
      if (abc && tag == iteration.base_class) {
        tk.fail_at(tag_at, "tree class tag equals the base class");
      }
      if (seen[static_cast<std::size_t>(tag)]) {
        tk.fail_at(tag_at, "duplicate tree class tag in iteration");
      }
      seen[static_cast<std::size_t>(tag)] = true;

      TaggedTree tagged;
      tagged.class_index = static_cast<int>(tag);
      parse_node(tk, tagged.tree, model.n_features);
      iteration.trees.push_back(std::move(tagged));
    }
    model.iterations.push_back(std::move(iteration));
  }

  tk.expect("end", "trailer");
  if (!tk.at_end()) tk.fail("trailing content after 'end'");
  return model;
}

BoostModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelIoError("cannot open model file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_string(buf.str());
}

}  // namespace rboost
