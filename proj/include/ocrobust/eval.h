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

#ifndef OCROBUST_EVAL_H_
#define OCROBUST_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ocrobust/channels.h"
#include "ocrobust/classifier.h"
#include "ocrobust/corpus.h"
#include "ocrobust/trainer.h"

namespace ocrobust {

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  // Zero denominators give 0 for the affected ratio.
  static Metrics from_counts(std::size_t tp, std::size_t fp, std::size_t fn,
                             std::size_t tn);
  std::size_t total() const { return tp + fp + fn + tn; }
};

Metrics evaluate(const ClassifierParams& params, const Dataset& dataset,
                 double threshold = 0.5);

// Every sentence replaced by its injected copy; ids and labels kept.
Dataset noisy_testset(const Dataset& dataset, const NoiseChannel& channel,
                      std::uint64_t copy = 0, unsigned workers = 1);

struct SweepPoint {
  double rate = 0.0;
  // Means over seeds.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<Metrics> per_seed;
};

struct SweepCurve {
  std::vector<SweepPoint> points;

  std::string to_jsonl() const;
};

// For each rate, corrupts `dataset` with a RandomChannel per seed (vocabulary
// of the dataset itself) and averages the metrics. Rates must be strictly
// increasing within [0, 1]; seeds must be non-empty.
SweepCurve noise_sweep(const ClassifierParams& params, const Dataset& dataset,
                       std::span<const double> rates,
                       std::span<const std::uint64_t> seeds,
                       unsigned workers = 1);

// Spearman rank correlation with average ranks for ties. NaN when either
// side is constant.
double spearman(std::span<const double> x, std::span<const double> y);

enum class Variant {
  kCleanOnly,
  kRandom,
  kNaiveMerge,
  kOursNoMining,
  kOursNoStability,
  kOurs,
};

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);
std::vector<Variant> all_variants();

// Robust-stage hyper-parameters tuned on the shipped benchmark: alpha 0.5,
// beta 0.5, output-level stability, lr 0.1, 20 epochs.
TrainConfig benchmark_train_config();

struct AblationConfig {
  // Base hyper-parameters for the robust stage; the seed is replaced per run.
  TrainConfig train = benchmark_train_config();
  std::size_t clean_epochs = 60;  // epochs of the clean-only stage
  double clean_lr = 0.5;          // learning rate of the clean-only stage
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<Variant> variants = all_variants();
  std::vector<std::string> channels{"rule", "attack", "context"};
  std::size_t copies_per_channel = 1;
  double random_rate = 0.1;     // Random baseline edit rate
  double context_lambda = 0.5;
  double confusion_floor = 0.0;
  unsigned workers = 1;

  nlohmann::ordered_json to_json() const;
  static AblationConfig from_json(const nlohmann::json& doc);
};

struct AblationInputs {
  const Dataset* train = nullptr;
  const std::vector<ParallelPair>* pairs = nullptr;
  std::vector<std::pair<std::string, Dataset>> test_sets;
};

struct AblationRow {
  std::string variant;
  std::string testset;
  std::uint64_t seed = 0;
  Metrics metrics;
};

struct AblationReport {
  std::vector<std::string> variants;  // row order
  std::vector<std::string> test_sets;  // column order
  std::vector<AblationRow> rows;

  // F1 of (variant, testset) for each seed in run order.
  std::vector<double> f1_by_seed(std::string_view variant,
                                 std::string_view testset) const;

  std::string to_jsonl() const;
  // Variant x test set x {P, R, F1} means, plus the F1 min/max over seeds.
  std::string to_table() const;
};

// Trains every requested variant for every seed and evaluates each on every
// test set. `progress` receives one line per finished (variant, seed).
AblationReport ablation_report(
    const AblationInputs& inputs, const AblationConfig& config,
    const std::function<void(const std::string&)>& progress = {});

}  // namespace ocrobust

#endif  // OCROBUST_EVAL_H_
