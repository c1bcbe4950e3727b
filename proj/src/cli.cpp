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

#include "rboost/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "rboost/booster.hpp"
#include "rboost/dataset.hpp"
#include "rboost/errors.hpp"
#include "rboost/eval.hpp"
#include "rboost/model_io.hpp"

namespace rboost {

namespace {

DataFormat format_or_throw(const std::string& token) {
  const auto format = parse_format(token);
  if (!format) throw std::invalid_argument("unknown format '" + token + "' (use libsvm or csv)");
  return *format;
}

Algorithm algorithm_or_throw(const std::string& token) {
  const auto algorithm = parse_algorithm(token);
  if (!algorithm) {
    throw std::invalid_argument("unknown algorithm '" + token +
                                "' (use mart, logit, abc-mart, or abc-logit)");
  }
  return *algorithm;
}

void align_libsvm_dims(Dataset& a, Dataset& b) {
  const std::size_t dim = std::max(a.n_features, b.n_features);
  a.pad_features(dim);
  b.pad_features(dim);
}

std::vector<double> sample_row(const Dataset& data, std::size_t i) {
  std::vector<double> x(data.n_features);
  for (std::size_t d = 0; d < data.n_features; ++d) x[d] = data.value(i, d);
  return x;
}

void print_progress(const MetricRow& row) {
  if (row.test_errors >= 0) {
    std::printf("iter %6d  train_loss %.6e  test_errors %lld  (%.1fs)\n", row.iteration,
                row.train_loss, row.test_errors, row.seconds);
  } else {
    std::printf("iter %6d  train_loss %.6e  (%.1fs)\n", row.iteration, row.train_loss,
                row.seconds);
  }
  std::fflush(stdout);
}

struct TrainArgs {
  std::string data, format, algo, test, curves, model_out;
  int trees = 0;
  double shrinkage = 0.0;
  int iters = 0;
  int eval_stride = 1;
  int min_leaf = 1;
  double early_stop = -1.0;
  double leaf_clip = 50.0;
  std::uint64_t seed = 0;
  bool csv_header = false;
};

int run_train(const TrainArgs& args) {
  // token validation (usage errors) comes before any file access
  const DataFormat format = format_or_throw(args.format);
  const Algorithm algorithm = algorithm_or_throw(args.algo);

  Dataset train_data = load_dataset(args.data, format, nullptr, args.csv_header);
  std::optional<Dataset> test_data;
  if (!args.test.empty()) {
    test_data = load_dataset(args.test, format, &train_data.label_names, args.csv_header);
    if (format == DataFormat::libsvm) align_libsvm_dims(train_data, *test_data);
  }

  TrainConfig config;
  config.algorithm = algorithm;
  config.n_leaves = args.trees;
  config.shrinkage = args.shrinkage;
  config.max_iterations = args.iters;
  config.early_stop_loss = args.early_stop;
  config.min_leaf = args.min_leaf;
  config.leaf_clip = args.leaf_clip;
  config.eval_stride = args.eval_stride;
  config.seed = args.seed;

  std::printf("training %s: J=%d nu=%g M=%d on %zu samples, %zu features, %zu classes\n",
              std::string(algorithm_name(config.algorithm)).c_str(), config.n_leaves,
              config.shrinkage, config.max_iterations, train_data.n_samples,
              train_data.n_features, train_data.n_classes);
  std::fflush(stdout);

  const TrainResult result =
      train(train_data, test_data ? &*test_data : nullptr, config, print_progress);
  save_model(result.model, args.model_out);
  if (!args.curves.empty()) emit_curves(result.log, args.curves);

  std::printf("done: %zu iterations, final train_loss %.6e, model written to %s\n",
              result.model.iterations.size(),
              result.log.rows.empty() ? 0.0 : result.log.rows.back().train_loss,
              args.model_out.c_str());
  return 0;
}

struct PredictArgs {
  std::string model, data, format, out;
  bool csv_header = false;
};

int run_predict(const PredictArgs& args) {
  const BoostModel model = load_model(args.model);
  const DataFormat format = format_or_throw(args.format);
  Dataset data = load_dataset(args.data, format, nullptr, args.csv_header);
  if (format == DataFormat::libsvm &&
      data.n_features < static_cast<std::size_t>(model.n_features)) {
    data.pad_features(static_cast<std::size_t>(model.n_features));
  }
  if (data.n_features != static_cast<std::size_t>(model.n_features)) {
    throw DataError("data has " + std::to_string(data.n_features) +
                    " features but the model expects " + std::to_string(model.n_features));
  }

  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw DataError("cannot write prediction file: " + args.out);
  char buf[64];
  for (std::size_t i = 0; i < data.n_samples; ++i) {
    const Prediction p = predict_model(model, sample_row(data, i));
    out << model.label_names[static_cast<std::size_t>(p.label)];
    for (double prob : p.probabilities) {
      std::snprintf(buf, sizeof(buf), ",%.17g", prob);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("error writing prediction file: " + args.out);
  std::printf("wrote %zu predictions to %s\n", data.n_samples, args.out.c_str());
  return 0;
}

struct EvalArgs {
  std::string model, data, format;
  std::vector<long long> pvalue;
  bool csv_header = false;
};

int run_eval(const EvalArgs& args) {
  if (!args.pvalue.empty()) {
    if (!args.model.empty() || !args.data.empty()) {
      throw std::invalid_argument("--pvalue cannot be combined with --model/--data");
    }
    const double p = pvalue_two_proportion(args.pvalue[0], args.pvalue[1], args.pvalue[2]);
    std::printf("%.9g\n", p);
    return 0;
  }
  if (args.model.empty() || args.data.empty() || args.format.empty()) {
    throw std::invalid_argument("eval needs either --pvalue A B N or --model/--data/--format");
  }

  const BoostModel model = load_model(args.model);
  const DataFormat format = format_or_throw(args.format);
  Dataset data = load_dataset(args.data, format, &model.label_names, args.csv_header);
  if (format == DataFormat::libsvm &&
      data.n_features < static_cast<std::size_t>(model.n_features)) {
    data.pad_features(static_cast<std::size_t>(model.n_features));
  }
  if (data.n_features != static_cast<std::size_t>(model.n_features)) {
    throw DataError("data has " + std::to_string(data.n_features) +
                    " features but the model expects " + std::to_string(model.n_features));
  }

  std::vector<int> predictions(data.n_samples);
  for (std::size_t i = 0; i < data.n_samples; ++i) {
    predictions[i] = predict_model(model, sample_row(data, i)).label;
  }
  const long long errors = misclassification_count(predictions, data.labels);
  std::printf("errors %lld / %zu  rate %.6f\n", errors, data.n_samples,
              static_cast<double>(errors) / static_cast<double>(data.n_samples));
  return 0;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args) {
  CLI::App app{"gradient boosted trees for multi-class classification "
               "(mart, logit, abc-mart, abc-logit)"};
  app.name("rboost");
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "train a model");
  train_cmd->add_option("--data", train_args.data, "training data file")->required();
  train_cmd->add_option("--format", train_args.format, "data format: libsvm or csv")->required();
  train_cmd->add_option("--algo", train_args.algo,
                        "algorithm: mart, logit, abc-mart, abc-logit")->required();
  train_cmd->add_option("--trees", train_args.trees, "terminal nodes per tree (J)")->required();
  train_cmd->add_option("--shrinkage", train_args.shrinkage, "shrinkage (nu)")->required();
  train_cmd->add_option("--iters", train_args.iters, "boosting iterations (M)")->required();
  train_cmd->add_option("--test", train_args.test, "test data file, evaluated during training");
  train_cmd->add_option("--eval-stride", train_args.eval_stride,
                        "log metrics every this many iterations");
  train_cmd->add_option("--min-leaf", train_args.min_leaf, "minimum samples per leaf");
  train_cmd->add_option("--early-stop", train_args.early_stop,
                        "stop when train loss drops below this "
                        "(default: when it underflows to 0)");
  train_cmd->add_option("--leaf-clip", train_args.leaf_clip,
                        "cap on the magnitude of leaf values");
  train_cmd->add_option("--curves", train_args.curves, "write metric curves CSV here");
  train_cmd->add_option("--model-out", train_args.model_out, "output model path")->required();
  train_cmd->add_option("--seed", train_args.seed, "random seed recorded in the run");
  train_cmd->add_flag("--csv-header", train_args.csv_header, "csv input has a header row");

  PredictArgs predict_args;
  CLI::App* predict_cmd = app.add_subcommand("predict", "write per-sample label and probabilities");
  predict_cmd->add_option("--model", predict_args.model, "model file")->required();
  predict_cmd->add_option("--data", predict_args.data, "data file")->required();
  predict_cmd->add_option("--format", predict_args.format, "data format: libsvm or csv")->required();
  predict_cmd->add_option("--out", predict_args.out, "output CSV path")->required();
  predict_cmd->add_flag("--csv-header", predict_args.csv_header, "csv input has a header row");

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a model or run the two-proportion test");
  eval_cmd->add_option("--model", eval_args.model, "model file");
  eval_cmd->add_option("--data", eval_args.data, "labeled data file");
  eval_cmd->add_option("--format", eval_args.format, "data format: libsvm or csv");
  eval_cmd->add_option("--pvalue", eval_args.pvalue,
                       "err_a err_b n_test: one-sided two-proportion test")
      ->expected(3);
  eval_cmd->add_flag("--csv-header", eval_args.csv_header, "csv input has a header row");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("rboost");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (train_cmd->parsed()) return run_train(train_args);
    if (predict_cmd->parsed()) return run_predict(predict_args);
    if (eval_cmd->parsed()) return run_eval(eval_args);
    std::cerr << "error: no subcommand given\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ModelIoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rboost
