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

#ifndef OCROBUST_TRAINER_H_
#define OCROBUST_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ocrobust/channels.h"
#include "ocrobust/classifier.h"
#include "ocrobust/corpus.h"

namespace ocrobust {

struct TrainConfig {
  double alpha = 0.75;  // weight of the standard loss
  double beta = 0.25;   // hard examples kept per epoch, as a fraction of M
  double lr = 0.1;
  std::size_t epochs = 10;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
  StabilityOn stability_on = StabilityOn::kRepresentation;
  ClassifierDims dims;

  // Throws InvalidArgument naming the first bad field.
  void validate() const;

  nlohmann::ordered_json to_json() const;
  static TrainConfig from_json(const nlohmann::json& doc);
  // Keys missing from `doc` keep their value from `base`.
  static TrainConfig from_json(const nlohmann::json& doc, TrainConfig base);
};

struct PoolEntry {
  Sentence clean;
  Sentence noisy;
  int label = 0;
  std::string channel;
  std::uint64_t copy = 0;
};

struct NoisyPool {
  std::vector<PoolEntry> entries;

  std::size_t size() const { return entries.size(); }
};

struct HardSet {
  std::vector<std::size_t> selected;  // ascending pool indices
  std::vector<double> distances;      // one per pool entry
};

struct EpochLog {
  std::size_t epoch = 0;
  std::size_t samples = 0;
  std::size_t hard_count = 0;
  double mean_distance = 0.0;
  LossBreakdown loss;  // sample-weighted mean over the epoch's batches

  nlohmann::ordered_json to_json() const;
};

struct TrainResult {
  Classifier model;
  std::vector<EpochLog> log;
};

// Called after every epoch with the updated model.
using EpochCallback = std::function<void(const EpochLog&, const Classifier&)>;

// Initializes a classifier over the dataset vocabulary and trains it with
// plain BCE (alpha forced to 1).
TrainResult train_clean(const Dataset& dataset, const TrainConfig& config,
                        const EpochCallback& on_epoch = {});

// Further BCE epochs on the clean data starting from `init`.
TrainResult continue_clean(const Dataset& dataset, const TrainConfig& config,
                           Classifier init, const EpochCallback& on_epoch = {});

// M = |dataset| x |channels| x copies entries, sentence-major: for each
// sentence, for each channel, for each copy.
NoisyPool build_pool(const Dataset& dataset,
                     std::span<const NoiseChannel* const> channels,
                     std::size_t copies, unsigned workers = 1);

// One record per line: {"id", "clean", "noisy", "label", "channel", "copy"}.
std::string pool_to_jsonl(const NoisyPool& pool);
NoisyPool pool_from_jsonl(std::string_view text);

// ceil(beta * M) clamped to [0, M]; products within 1e-9 of an integer are
// treated as that integer.
std::size_t hard_count(double beta, std::size_t pool_size);

// 1 - cos(e(x_i), e(x~_i)) for every pool entry under the given model.
std::vector<double> pair_distances(const NoisyPool& pool,
                                   const ClassifierParams& params,
                                   unsigned workers = 1);

// Top hard_count(beta, M) indices by distance, ties to the smaller index.
HardSet select_hard(std::vector<double> distances, double beta);

HardSet mine_hard(const NoisyPool& pool, const ClassifierParams& params,
                  double beta, unsigned workers = 1);

// Per epoch: re-mine the hard set with the current model, then train on the
// hard pairs (BCE on both sides plus the stability term) together with every
// clean sentence that has no selected partner (BCE only).
TrainResult robust_train(const Dataset& dataset, const NoisyPool& pool,
                         const TrainConfig& config, Classifier init,
                         const EpochCallback& on_epoch = {});

// BCE on every clean sentence and every pool noisy sentence, no mining, no
// stability term.
TrainResult naive_merge_train(const Dataset& dataset, const NoisyPool& pool,
                              const TrainConfig& config, Classifier init,
                              const EpochCallback& on_epoch = {});

// One random-edit copy per sentence, then naive merge.
NoisyPool random_pool(const Dataset& dataset, double rate,
                      std::uint64_t seed);
TrainResult random_augment_train(const Dataset& dataset, double rate,
                                 const TrainConfig& config, Classifier init,
                                 const EpochCallback& on_epoch = {});

// Run directory layout: config.json, metrics.jsonl, epoch_NNN.json per
// epoch and final.json.
class RunRecorder {
 public:
  RunRecorder(std::filesystem::path dir, const nlohmann::ordered_json& config);

  EpochCallback callback();
  void finish(const Classifier& model);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::string metrics_;
};

}  // namespace ocrobust

#endif  // OCROBUST_TRAINER_H_
