// Copyright 2026 The ocrobust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ocrobust/cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocrobust/align.h"
#include "ocrobust/benchmark.h"
#include "ocrobust/channels.h"
#include "ocrobust/classifier.h"
#include "ocrobust/confusion.h"
#include "ocrobust/corpus.h"
#include "ocrobust/error.h"
#include "ocrobust/eval.h"
#include "ocrobust/trainer.h"

namespace ocrobust::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Config keys whose relative values are resolved against the config file's
// directory.
const std::set<std::string> kPathKeys = {"train", "pairs", "test",  "matrix",
                                         "scorer", "init", "pool", "in",
                                         "model", "out"};

std::string flag_for_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

std::string resolve_path(const std::string& value, const fs::path& base) {
  const auto eq = value.find('=');
  std::string prefix;
  std::string path = value;
  // "name=path" entries (test sets).
  if (eq != std::string::npos && !fs::exists(value)) {
    prefix = value.substr(0, eq + 1);
    path = value.substr(eq + 1);
  }
  if (fs::path(path).is_relative() && !base.empty()) {
    path = (base / path).lexically_normal().string();
  }
  return prefix + path;
}

std::string scalar_to_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
    return buf;
  }
  return v.dump();
}

bool given_on_command_line(const std::vector<std::string>& args,
                           const CLI::Option* opt) {
  for (const std::string& name : opt->get_lnames()) {
    const std::string flag = "--" + name;
    for (const std::string& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
  }
  return false;
}

// Expands `--config file.json` into flags for `sub`. Flags already present in
// `args` win over the file. Nested objects are informational and skipped.
std::vector<std::string> expand_config(std::vector<std::string> args,
                                       CLI::App* sub) {
  std::optional<std::string> config_path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config_path) return rest;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(*config_path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("config " + *config_path + ": " + e.what());
  }
  if (!doc.is_object()) throw DataError("config must be a JSON object");
  const fs::path base = fs::path(*config_path).parent_path();
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) continue;
    const CLI::Option* opt = sub->get_option_no_throw(flag_for_key(key));
    if (opt == nullptr) {
      throw CLI::ExtrasError("unknown config key '" + key + "' in " +
                                 *config_path,
                             CLI::ExitCodes::ExtrasError);
    }
    if (given_on_command_line(rest, opt)) continue;
    const std::string flag = flag_for_key(key);
    if (value.is_boolean()) {
      if (value.get<bool>()) rest.push_back(flag);
      continue;
    }
    const bool is_path = kPathKeys.count(key) != 0;
    auto emit = [&](const nlohmann::json& v) {
      std::string s = scalar_to_string(v);
      if (is_path) s = resolve_path(s, base);
      rest.push_back(flag);
      rest.push_back(s);
    };
    if (value.is_array()) {
      for (const auto& v : value) emit(v);
    } else {
      emit(value);
    }
  }
  return rest;
}

void emit(const std::optional<std::string>& path, const std::string& data,
          std::ostream& out) {
  if (path) {
    write_file(*path, data);
  } else {
    out << data;
  }
}

void write_sidecar(const std::string& path, const Json& config) {
  write_file(path + ".config.json", config.dump(2) + "\n");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

Json metrics_json(const Metrics& m) {
  Json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["fn"] = m.fn;
  j["tn"] = m.tn;
  return j;
}

// Hyper-parameter flags shared by the training subcommands.
struct TrainFlags {
  TrainConfig config;
  std::string stability_on = "representation";

  void add(CLI::App* sub, bool robust) {
    sub->add_option("--seed", config.seed, "Run seed")->required();
    sub->add_option("--epochs", config.epochs, "Training epochs")
        ->capture_default_str();
    sub->add_option("--lr", config.lr, "SGD learning rate")
        ->capture_default_str();
    sub->add_option("--batch-size", config.batch_size)->capture_default_str();
    sub->add_option("--embed-dim", config.dims.embed)->capture_default_str();
    sub->add_option("--hidden-dim", config.dims.hidden)->capture_default_str();
    if (robust) {
      sub->add_option("--alpha", config.alpha, "Weight of the standard loss")
          ->capture_default_str();
      sub->add_option("--beta", config.beta, "Hard-example fraction")
          ->capture_default_str();
      sub->add_option("--stability-on", stability_on,
                      "representation | output")
          ->capture_default_str();
    }
  }

  TrainConfig resolve() {
    config.stability_on = parse_stability_on(stability_on);
    config.validate();
    return config;
  }
};

std::vector<std::pair<std::string, Dataset>> load_test_sets(
    const std::vector<std::string>& specs) {
  std::vector<std::pair<std::string, Dataset>> out;
  for (const std::string& spec : specs) {
    std::string name = "test";
    std::string path = spec;
    if (const auto eq = spec.find('='); eq != std::string::npos &&
                                        !fs::exists(spec)) {
      name = spec.substr(0, eq);
      path = spec.substr(eq + 1);
    }
    out.emplace_back(name, load_dataset(path, infer_dataset_format(path)));
  }
  return out;
}

NoisyPool load_pools(const std::vector<std::string>& paths) {
  NoisyPool pool;
  for (const std::string& p : paths) {
    NoisyPool part = pool_from_jsonl(read_file(p));
    for (auto& e : part.entries) pool.entries.push_back(std::move(e));
  }
  return pool;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"OCR-noise simulation and noise-robust text classification",
               "ocrobust"};
  app.require_subcommand(1);

  // build-confusion
  auto* build = app.add_subcommand(
      "build-confusion", "Estimate a token confusion matrix from parallel text");
  std::string pairs_path, out_path;
  double floor = 0.0;
  unsigned workers = 1;
  bool compact = false;
  build->add_option("--pairs", pairs_path, "clean<TAB>noisy file")->required();
  build->add_option("--out", out_path, "Matrix JSON output")->required();
  build->add_option("--floor,--confusion-floor", floor,
                    "Mass mixed onto the identity outcome")
      ->capture_default_str();
  build->add_option("--workers", workers)->capture_default_str();
  build->add_flag("--compact", compact, "Drop whitespace tokens");

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "Inject noise into a labelled dataset");
  std::string channel_name, in_path, matrix_path, scorer_path, attack_mode = "argmax";
  std::optional<std::string> sim_out;
  std::uint64_t seed = 0;
  double lambda = 0.5, rate = 0.1;
  std::optional<std::size_t> max_edits;
  std::size_t copies = 1;
  simulate->add_option("--channel", channel_name,
                       "rule | attack | context | random | external | identity")
      ->required();
  simulate->add_option("--in", in_path, "Dataset (jsonl or tsv)")->required();
  simulate->add_option("--out", sim_out, "Output jsonl (stdout if absent)");
  simulate->add_option("--seed", seed)->required();
  simulate->add_option("--matrix", matrix_path, "Confusion matrix JSON");
  simulate->add_option("--pairs", pairs_path,
                       "Parallel tsv (context fitting or external copies)");
  simulate->add_option("--context-lambda", lambda)->capture_default_str();
  simulate->add_option("--floor,--confusion-floor", floor)->capture_default_str();
  simulate->add_option("--scorer", scorer_path, "Checkpoint used by the attack");
  simulate->add_option("--max-edits", max_edits);
  simulate->add_option("--attack-mode", attack_mode, "argmax | sample")
      ->capture_default_str();
  simulate->add_option("--rate", rate, "Random channel edit rate")
      ->capture_default_str();
  simulate->add_option("--copies", copies)->capture_default_str();
  simulate->add_option("--workers", workers)->capture_default_str();

  // train-clean
  auto* train_clean_cmd =
      app.add_subcommand("train-clean", "Train a classifier on clean data");
  TrainFlags clean_flags;
  std::string train_path, run_dir;
  train_clean_cmd->add_option("--train", train_path)->required();
  train_clean_cmd->add_option("--out", run_dir, "Run directory")->required();
  clean_flags.add(train_clean_cmd, false);

  // train-robust
  auto* train_robust_cmd = app.add_subcommand(
      "train-robust", "Hard-example mining with the stability loss");
  TrainFlags robust_flags;
  std::vector<std::string> pool_paths;
  std::string init_path;
  train_robust_cmd->add_option("--train", train_path)->required();
  train_robust_cmd->add_option("--pool", pool_paths, "Noisy pool jsonl files")
      ->required();
  train_robust_cmd->add_option("--init", init_path, "Clean checkpoint")
      ->required();
  train_robust_cmd->add_option("--out", run_dir, "Run directory")->required();
  robust_flags.add(train_robust_cmd, true);

  // train-baseline
  auto* train_baseline_cmd = app.add_subcommand(
      "train-baseline", "Naive-merge or random-edit augmentation baselines");
  TrainFlags baseline_flags;
  std::string kind;
  train_baseline_cmd->add_option("--kind", kind, "naive-merge | random")
      ->required();
  train_baseline_cmd->add_option("--train", train_path)->required();
  train_baseline_cmd->add_option("--pool", pool_paths);
  train_baseline_cmd->add_option("--init", init_path)->required();
  train_baseline_cmd->add_option("--rate", rate)->capture_default_str();
  train_baseline_cmd->add_option("--out", run_dir)->required();
  baseline_flags.add(train_baseline_cmd, false);

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Precision/recall/F1");
  std::string model_path, test_path;
  std::optional<std::string> eval_out;
  evaluate_cmd->add_option("--model", model_path)->required();
  evaluate_cmd->add_option("--test", test_path)->required();
  evaluate_cmd->add_option("--out", eval_out);

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "F1 under increasing random-edit noise");
  std::vector<double> rates{0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40};
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> sweep_out;
  sweep_cmd->add_option("--model", model_path)->required();
  sweep_cmd->add_option("--test", test_path)->required();
  sweep_cmd->add_option("--rates", rates)->capture_default_str();
  sweep_cmd->add_option("--seeds", seeds)->required();
  sweep_cmd->add_option("--out", sweep_out);
  sweep_cmd->add_option("--workers", workers)->capture_default_str();

  // ablate
  auto* ablate_cmd = app.add_subcommand(
      "ablate", "Compare baselines and framework variants over seeds");
  AblationConfig ablation;
  TrainFlags ablate_flags;
  ablate_flags.config = ablation.train;
  ablate_flags.stability_on = stability_on_name(ablation.train.stability_on);
  std::vector<std::string> test_specs, variant_names, channel_names;
  std::optional<std::string> ablate_out;
  ablate_cmd->add_option("--train", train_path)->required();
  ablate_cmd->add_option("--pairs", pairs_path)->required();
  ablate_cmd->add_option("--test", test_specs, "name=path test sets")
      ->required();
  ablate_cmd->add_option("--seeds", ablation.seeds)->required();
  ablate_cmd->add_option("--variants", variant_names);
  ablate_cmd->add_option("--channels", channel_names);
  ablate_cmd->add_option("--clean-epochs", ablation.clean_epochs)
      ->capture_default_str();
  ablate_cmd->add_option("--clean-lr", ablation.clean_lr)->capture_default_str();
  ablate_cmd->add_option("--copies-per-channel", ablation.copies_per_channel)
      ->capture_default_str();
  ablate_cmd->add_option("--random-rate", ablation.random_rate)
      ->capture_default_str();
  ablate_cmd->add_option("--context-lambda", ablation.context_lambda)
      ->capture_default_str();
  ablate_cmd->add_option("--confusion-floor", ablation.confusion_floor)
      ->capture_default_str();
  ablate_cmd->add_option("--workers", ablation.workers)->capture_default_str();
  ablate_cmd->add_option("--out", ablate_out, "Report directory");
  ablate_flags.add(ablate_cmd, true);
  // Seeds come from --seeds.
  ablate_cmd->get_option("--seed")->required(false);

  // gen-benchmark
  auto* gen_cmd = app.add_subcommand(
      "gen-benchmark", "Write the synthetic benchmark and its ablate config");
  BenchmarkSpec bench_spec;
  std::string bench_dir;
  gen_cmd->add_option("--out", bench_dir)->required();
  gen_cmd->add_option("--seed", bench_spec.seed)->required();
  gen_cmd->add_option("--train-size", bench_spec.train_size)
      ->capture_default_str();
  gen_cmd->add_option("--test-size", bench_spec.test_size)
      ->capture_default_str();
  gen_cmd->add_option("--parallel-size", bench_spec.parallel_size)
      ->capture_default_str();

  try {
    std::vector<std::string> args = raw_args;
    if (!args.empty()) {
      if (CLI::App* sub = app.get_subcommand_no_throw(args[0])) {
        std::vector<std::string> rest(args.begin() + 1, args.end());
        rest = expand_config(std::move(rest), sub);
        rest.insert(rest.begin(), args[0]);
        args = std::move(rest);
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << app.help();
      return kOk;
    }
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  }

  try {
    if (*build) {
      const auto pairs = load_parallel(
          pairs_path, compact ? TokenizeMode::kCompact : TokenizeMode::kByteFaithful);
      const ConfusionMatrix m = build_confusion(pairs, floor, workers);
      m.save(out_path);
      Json config;
      config["command"] = "build-confusion";
      config["pairs"] = pairs_path;
      config["out"] = out_path;
      config["floor"] = floor;
      config["compact"] = compact;
      write_sidecar(out_path, config);
      err << "pairs=" << pairs.size() << " vocab=" << m.vocab().size()
          << " noise_rate=" << fmt(noise_rate(pairs))
          << " insertion_p=" << fmt(m.insertion_probability()) << "\n";
      return kOk;
    }

    if (*simulate) {
      const Dataset data = load_dataset(in_path, infer_dataset_format(in_path));
      std::unique_ptr<NoiseChannel> channel;
      auto need = [&](const std::string& value, const char* flag) {
        if (value.empty()) {
          throw InvalidArgument("--channel " + channel_name + " requires " + flag);
        }
      };
      if (channel_name == "rule") {
        need(matrix_path, "--matrix");
        channel = std::make_unique<RuleChannel>(ConfusionMatrix::load(matrix_path),
                                                seed);
      } else if (channel_name == "attack") {
        need(matrix_path, "--matrix");
        need(scorer_path, "--scorer");
        if (attack_mode != "argmax" && attack_mode != "sample") {
          throw InvalidArgument("--attack-mode must be argmax or sample");
        }
        channel = std::make_unique<AttackChannel>(
            ConfusionMatrix::load(matrix_path),
            std::make_shared<const Classifier>(load_checkpoint(scorer_path)),
            AttackConfig{max_edits,
                         attack_mode == "argmax" ? AttackMode::kArgmax
                                                 : AttackMode::kSample,
                         seed});
      } else if (channel_name == "context") {
        need(pairs_path, "--pairs");
        channel = std::make_unique<ContextChannel>(
            fit_context_channel(load_parallel(pairs_path), lambda, seed, floor));
      } else if (channel_name == "random") {
        channel = std::make_unique<RandomChannel>(rate, build_vocabulary(data),
                                                  seed);
      } else if (channel_name == "external") {
        need(pairs_path, "--pairs");
        channel = std::make_unique<ExternalChannel>(load_parallel(pairs_path));
      } else if (channel_name == "identity") {
        channel = std::make_unique<IdentityChannel>();
      } else {
        throw InvalidArgument("unknown channel '" + channel_name + "'");
      }
      std::string records;
      for (std::size_t k = 0; k < copies; ++k) {
        const auto noisy = inject_all(*channel, data.sentences, k, workers);
        for (std::size_t i = 0; i < data.size(); ++i) {
          Json r;
          r["id"] = data.sentences[i].id;
          r["clean"] = detokenize(data.sentences[i]);
          r["noisy"] = detokenize(noisy[i]);
          r["label"] = data.sentences[i].label.value_or(0);
          r["channel"] = channel->tag();
          if (copies > 1) r["copy"] = k;
          records += r.dump();
          records += '\n';
        }
      }
      emit(sim_out, records, out);
      if (sim_out) {
        Json config;
        config["command"] = "simulate";
        config["channel"] = channel_name;
        config["in"] = in_path;
        config["seed"] = seed;
        config["matrix"] = matrix_path;
        config["pairs"] = pairs_path;
        config["context_lambda"] = lambda;
        config["floor"] = floor;
        config["scorer"] = scorer_path;
        if (max_edits) config["max_edits"] = *max_edits;
        config["attack_mode"] = attack_mode;
        config["rate"] = rate;
        config["copies"] = copies;
        write_sidecar(*sim_out, config);
      }
      return kOk;
    }

    if (*train_clean_cmd) {
      const TrainConfig config = clean_flags.resolve();
      const Dataset data = load_dataset(train_path, infer_dataset_format(train_path));
      Json resolved = config.to_json();
      resolved["command"] = "train-clean";
      resolved["train"] = train_path;
      RunRecorder recorder(run_dir, resolved);
      const TrainResult r = train_clean(data, config, recorder.callback());
      recorder.finish(r.model);
      err << "final loss=" << fmt(r.log.back().loss.total) << "\n";
      return kOk;
    }

    if (*train_robust_cmd) {
      const TrainConfig config = robust_flags.resolve();
      const Dataset data = load_dataset(train_path, infer_dataset_format(train_path));
      const NoisyPool pool = load_pools(pool_paths);
      Classifier init = load_checkpoint(init_path);
      Json resolved = config.to_json();
      resolved["command"] = "train-robust";
      resolved["train"] = train_path;
      resolved["pool"] = pool_paths;
      resolved["init"] = init_path;
      RunRecorder recorder(run_dir, resolved);
      const TrainResult r =
          robust_train(data, pool, config, std::move(init), recorder.callback());
      recorder.finish(r.model);
      err << "pool=" << pool.size() << " final loss=" << fmt(r.log.back().loss.total)
          << "\n";
      return kOk;
    }

    if (*train_baseline_cmd) {
      const TrainConfig config = baseline_flags.resolve();
      const Dataset data = load_dataset(train_path, infer_dataset_format(train_path));
      Classifier init = load_checkpoint(init_path);
      Json resolved = config.to_json();
      resolved["command"] = "train-baseline";
      resolved["kind"] = kind;
      resolved["train"] = train_path;
      resolved["init"] = init_path;
      TrainResult r;
      if (kind == "naive-merge") {
        if (pool_paths.empty()) {
          throw InvalidArgument("--kind naive-merge requires --pool");
        }
        resolved["pool"] = pool_paths;
        RunRecorder recorder(run_dir, resolved);
        r = naive_merge_train(data, load_pools(pool_paths), config,
                              std::move(init), recorder.callback());
        recorder.finish(r.model);
      } else if (kind == "random") {
        resolved["rate"] = rate;
        RunRecorder recorder(run_dir, resolved);
        r = random_augment_train(data, rate, config, std::move(init),
                                 recorder.callback());
        recorder.finish(r.model);
      } else {
        throw InvalidArgument("--kind must be naive-merge or random");
      }
      err << "final loss=" << fmt(r.log.back().loss.total) << "\n";
      return kOk;
    }

    if (*evaluate_cmd) {
      const Classifier model = load_checkpoint(model_path);
      const Dataset test = load_dataset(test_path, infer_dataset_format(test_path));
      emit(eval_out, metrics_json(evaluate(model.params, test)).dump() + "\n", out);
      return kOk;
    }

    if (*sweep_cmd) {
      const Classifier model = load_checkpoint(model_path);
      const Dataset test = load_dataset(test_path, infer_dataset_format(test_path));
      const SweepCurve curve =
          noise_sweep(model.params, test, rates, seeds, workers);
      emit(sweep_out, curve.to_jsonl(), out);
      std::vector<double> f1;
      for (const auto& p : curve.points) f1.push_back(p.f1);
      if (rates.size() >= 2) {
        err << "spearman(rate, f1)=" << fmt(spearman(rates, f1)) << "\n";
      }
      if (sweep_out) {
        Json config;
        config["command"] = "sweep";
        config["model"] = model_path;
        config["test"] = test_path;
        config["rates"] = rates;
        config["seeds"] = seeds;
        write_sidecar(*sweep_out, config);
      }
      return kOk;
    }

    if (*ablate_cmd) {
      ablation.train = ablate_flags.resolve();
      if (!variant_names.empty()) {
        ablation.variants.clear();
        for (const auto& v : variant_names) {
          ablation.variants.push_back(parse_variant(v));
        }
      }
      if (!channel_names.empty()) ablation.channels = channel_names;
      const Dataset train = load_dataset(train_path, infer_dataset_format(train_path));
      const auto pairs = load_parallel(pairs_path);
      AblationInputs inputs{&train, &pairs, load_test_sets(test_specs)};
      const AblationReport report = ablation_report(
          inputs, ablation, [&](const std::string& line) { err << line << "\n"; });
      out << report.to_table();
      if (ablate_out) {
        const fs::path dir(*ablate_out);
        fs::create_directories(dir);
        write_file(dir / "report.jsonl", report.to_jsonl());
        write_file(dir / "report.txt", report.to_table());
        Json config = ablation.to_json();
        config["train"] = train_path;
        config["pairs"] = pairs_path;
        config["test"] = test_specs;
        write_file(dir / "config.json", config.dump(2) + "\n");
      }
      return kOk;
    }

    if (*gen_cmd) {
      const Benchmark bench = generate_benchmark(bench_spec);
      AblationConfig defaults;
      write_benchmark(bench, bench_dir, defaults.to_json());
      err << "train " << dataset_stats(bench.train).to_string() << "\n"
          << "test " << dataset_stats(bench.test).to_string() << "\n"
          << "parallel pairs=" << bench.parallel.size()
          << " noise_rate=" << fmt(noise_rate(bench.parallel)) << "\n";
      return kOk;
    }
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ocrobust::cli
