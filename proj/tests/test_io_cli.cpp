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

#include <doctest.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rboost/booster.hpp"
#include "rboost/cli.hpp"
#include "rboost/errors.hpp"
#include "rboost/model_io.hpp"
#include "synthetic.hpp"

using namespace rboost;
namespace fs = std::filesystem;

namespace {

// Redirects fd 1 into a file for the scope, so std::printf output from the
// CLI can be inspected.
class StdoutCapture {
 public:
  explicit StdoutCapture(const fs::path& path) : path_(path) {
    std::fflush(stdout);
    saved_ = dup(1);
    FILE* f = std::fopen(path_.c_str(), "w");
    dup2(fileno(f), 1);
    std::fclose(f);
  }
  ~StdoutCapture() { release(); }
  std::string take() {
    release();
    std::ifstream in(path_);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

 private:
  void release() {
    if (saved_ >= 0) {
      std::fflush(stdout);
      dup2(saved_, 1);
      close(saved_);
      saved_ = -1;
    }
  }
  fs::path path_;
  int saved_ = -1;
};

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("rboost_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

BoostModel trained_model(Algorithm algorithm, int iterations) {
  const Dataset data = synthetic::blobs(60, 3, 1.5, 1.0, 17);
  TrainConfig config;
  config.algorithm = algorithm;
  config.n_leaves = 4;
  config.shrinkage = 0.1;
  config.max_iterations = iterations;
  return train(data, nullptr, config).model;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Small separable csv dataset for CLI workflows.
std::string tiny_csv(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 0.8);
  std::ostringstream out;
  const char* names[3] = {"red", "green", "blue"};
  for (int i = 0; i < n; ++i) {
    const int k = i % 3;
    out << (2.0 * k + unit(rng)) << "," << unit(rng) << "," << names[k] << "\n";
  }
  return out.str();
}

}  // namespace

TEST_CASE("model serialization roundtrips predictions exactly") {
  for (Algorithm algorithm : {Algorithm::logit, Algorithm::abc_logit}) {
    const BoostModel model = trained_model(algorithm, 12);
    const std::string text = model_to_string(model);
    const BoostModel reloaded = model_from_string(text);

    CHECK(reloaded.algorithm == model.algorithm);
    CHECK(reloaded.n_classes == model.n_classes);
    CHECK(reloaded.n_features == model.n_features);
    CHECK(reloaded.shrinkage == model.shrinkage);
    CHECK(reloaded.label_names == model.label_names);
    CHECK(reloaded.iterations.size() == model.iterations.size());

    std::mt19937 rng(23);
    std::uniform_real_distribution<double> unit(-4.0, 4.0);
    for (int t = 0; t < 100; ++t) {
      const std::vector<double> x{unit(rng), unit(rng)};
      const Prediction a = predict_model(model, x);
      const Prediction b = predict_model(reloaded, x);
      CHECK(a.label == b.label);
      for (std::size_t k = 0; k < a.scores.size(); ++k) {
        CHECK(a.scores[k] == b.scores[k]);  // bit-exact
      }
    }
    // serialization is deterministic
    CHECK(model_to_string(reloaded) == text);
  }
}

TEST_CASE("save_model/load_model roundtrip through files, bitwise stable") {
  TempDir dir;
  const BoostModel model = trained_model(Algorithm::abc_mart, 8);
  const fs::path a = dir.path / "a.model";
  const fs::path b = dir.path / "b.model";
  save_model(model, a);
  save_model(model, b);
  CHECK(read_file(a) == read_file(b));
  const BoostModel reloaded = load_model(a);
  CHECK(model_to_string(reloaded) == model_to_string(model));
}

TEST_CASE("model parser rejects bad headers and versions") {
  CHECK_THROWS_AS((void)model_from_string(""), ModelIoError);
  CHECK_THROWS_AS((void)model_from_string("not-a-model v1\n"), ModelIoError);
  try {
    (void)model_from_string("rboost-model v9\nalgorithm mart\n");
    FAIL("expected ModelIoError");
  } catch (const ModelIoError& e) {
    CHECK(std::string(e.what()).find("version") != std::string::npos);
  }
}

TEST_CASE("model parser reports the byte offset of truncation") {
  const std::string text = model_to_string(trained_model(Algorithm::logit, 3));
  const std::string truncated = text.substr(0, text.size() / 2);
  try {
    (void)model_from_string(truncated);
    FAIL("expected ModelIoError");
  } catch (const ModelIoError& e) {
    CHECK(std::string(e.what()).find("at byte") != std::string::npos);
  }
}

TEST_CASE("model parser rejects non-finite values and malformed blocks") {
  const std::string base =
      "rboost-model v1\nalgorithm mart\nclasses 2\nfeatures 1\nshrinkage 0.1\n"
      "labels a b\niterations 1\niter 1 plain\n";
  CHECK_THROWS_AS((void)model_from_string(base + "tree 0\nl inf\ntree 1\nl 0\nend\n"),
                  ModelIoError);
  CHECK_THROWS_AS((void)model_from_string(base + "tree 0\nx 0.5\ntree 1\nl 0\nend\n"),
                  ModelIoError);
  // split feature out of range
  CHECK_THROWS_AS(
      (void)model_from_string(base + "tree 0\nn 4 0.5\nl 1\nl -1\ntree 1\nl 0\nend\n"),
      ModelIoError);
  // missing trailer
  CHECK_THROWS_AS((void)model_from_string(base + "tree 0\nl 0\ntree 1\nl 0\n"),
                  ModelIoError);
  // abc tags must avoid the base class
  const std::string abc_head =
      "rboost-model v1\nalgorithm abc-mart\nclasses 2\nfeatures 1\nshrinkage 0.1\n"
      "labels a b\niterations 1\niter 1 base 0\n";
  CHECK_THROWS_AS((void)model_from_string(abc_head + "tree 0\nl 0\nend\n"), ModelIoError);
}

TEST_CASE("cli: usage errors exit 1, help exits 0") {
  CHECK(cli_dispatch({"--help"}) == 0);
  CHECK(cli_dispatch({}) == 1);
  CHECK(cli_dispatch({"bogus"}) == 1);
  CHECK(cli_dispatch({"train"}) == 1);  // missing required flags
  CHECK(cli_dispatch({"train", "--data", "x", "--format", "csv", "--algo", "nope",
                      "--trees", "4", "--shrinkage", "0.1", "--iters", "1",
                      "--model-out", "m"}) == 1);
  CHECK(cli_dispatch({"eval"}) == 1);  // neither --pvalue nor model/data
  CHECK(cli_dispatch({"eval", "--pvalue", "0", "0", "100"}) == 1);  // degenerate
}

TEST_CASE("cli: missing files exit 2") {
  TempDir dir;
  CHECK(cli_dispatch({"predict", "--model", (dir.path / "missing.model").string(),
                      "--data", "x.csv", "--format", "csv", "--out",
                      (dir.path / "out.csv").string()}) == 2);
  CHECK(cli_dispatch({"train", "--data", (dir.path / "missing.csv").string(),
                      "--format", "csv", "--algo", "mart", "--trees", "4",
                      "--shrinkage", "0.1", "--iters", "1", "--model-out",
                      (dir.path / "m.model").string()}) == 2);
}

TEST_CASE("cli: train, predict, eval workflow on a small csv") {
  TempDir dir;
  const fs::path train_csv = dir.path / "train.csv";
  const fs::path test_csv = dir.path / "test.csv";
  const fs::path model_path = dir.path / "model.txt";
  const fs::path curves_path = dir.path / "curves.csv";
  const fs::path pred_path = dir.path / "pred.csv";
  write_file(train_csv, tiny_csv(60, 1));
  write_file(test_csv, tiny_csv(30, 2));

  {
    StdoutCapture capture(dir.path / "train_out.txt");
    const int code = cli_dispatch(
        {"train", "--data", train_csv.string(), "--format", "csv", "--algo",
         "abc-logit", "--trees", "4", "--shrinkage", "0.1", "--iters", "12", "--test",
         test_csv.string(), "--eval-stride", "4", "--curves", curves_path.string(),
         "--model-out", model_path.string()});
    const std::string out = capture.take();
    CHECK(code == 0);
    CHECK(out.find("training abc-logit") != std::string::npos);
  }
  CHECK(fs::exists(model_path));
  CHECK(fs::exists(curves_path));

  {
    StdoutCapture capture(dir.path / "predict_out.txt");
    const int code = cli_dispatch({"predict", "--model", model_path.string(), "--data",
                                   test_csv.string(), "--format", "csv", "--out",
                                   pred_path.string()});
    capture.take();
    CHECK(code == 0);
  }
  // one csv row per sample: label token then K probabilities
  std::ifstream pred(pred_path);
  std::string line;
  int rows = 0;
  while (std::getline(pred, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
    const std::string token = line.substr(0, line.find(','));
    CHECK((token == "red" || token == "green" || token == "blue"));
  }
  CHECK(rows == 30);

  {
    StdoutCapture capture(dir.path / "eval_out.txt");
    const int code = cli_dispatch({"eval", "--model", model_path.string(), "--data",
                                   test_csv.string(), "--format", "csv"});
    const std::string out = capture.take();
    CHECK(code == 0);
    CHECK(out.find("errors") != std::string::npos);
    CHECK(out.find("/ 30") != std::string::npos);
  }

  // identical reruns produce identical model files and identical curves
  // (up to the wall-clock seconds column)
  const std::string first = read_file(model_path);
  const fs::path curves2_path = dir.path / "curves2.csv";
  {
    StdoutCapture capture(dir.path / "train_out2.txt");
    const int code = cli_dispatch(
        {"train", "--data", train_csv.string(), "--format", "csv", "--algo",
         "abc-logit", "--trees", "4", "--shrinkage", "0.1", "--iters", "12", "--test",
         test_csv.string(), "--eval-stride", "4", "--curves", curves2_path.string(),
         "--model-out", model_path.string()});
    capture.take();
    CHECK(code == 0);
  }
  CHECK(read_file(model_path) == first);
  {
    std::ifstream a(curves_path), b(curves2_path);
    std::string la, lb;
    while (std::getline(a, la) && std::getline(b, lb)) {
      CHECK(la.substr(0, la.rfind(',')) == lb.substr(0, lb.rfind(',')));
    }
    CHECK_FALSE(std::getline(b, lb));  // same row count
  }
}

TEST_CASE("cli: eval --pvalue prints the reference value") {
  TempDir dir;
  StdoutCapture capture(dir.path / "pvalue_out.txt");
  const int code = cli_dispatch({"eval", "--pvalue", "2815", "2440", "60000"});
  const std::string out = capture.take();
  CHECK(code == 0);
  const double value = std::strtod(out.c_str(), nullptr);
  CHECK(value == doctest::Approx(6.09e-8).epsilon(0.01));
}

TEST_CASE("cli: pvalue mode cannot be mixed with model evaluation") {
  CHECK(cli_dispatch({"eval", "--pvalue", "10", "5", "100", "--model", "m"}) == 1);
}
