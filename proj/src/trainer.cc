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

#include "ocrobust/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <thread>

#include "ocrobust/error.h"
#include "ocrobust/rng.h"

namespace ocrobust {
namespace {

constexpr std::uint64_t kShuffleStream = 0x5348;
constexpr std::uint64_t kRandomPoolStream = 0x524e;

void check_labelled(const Dataset& dataset) {
  if (dataset.sentences.empty()) throw InvalidArgument("empty training set");
  for (const Sentence& s : dataset.sentences) {
    if (!s.label) {
      throw InvalidArgument("sentence " + std::to_string(s.id) +
                            " has no label");
    }
  }
}

void check_pool_labels(const Dataset& dataset, const NoisyPool& pool) {
  std::map<std::int64_t, int> labels;
  for (const Sentence& s : dataset.sentences) labels[s.id] = *s.label;
  for (const PoolEntry& e : pool.entries) {
    auto it = labels.find(e.clean.id);
    if (it == labels.end()) {
      throw InvalidArgument("pool entry refers to unknown sentence id " +
                            std::to_string(e.clean.id));
    }
    if (it->second != e.label) {
      throw InvalidArgument("pool label differs from sentence " +
                            std::to_string(e.clean.id));
    }
  }
}

std::vector<TrainingSample> clean_samples(const Dataset& dataset) {
  std::vector<TrainingSample> out;
  out.reserve(dataset.size());
  for (const Sentence& s : dataset.sentences) {
    out.push_back({&s, nullptr, *s.label});
  }
  return out;
}

// Shuffles with the (seed, epoch) stream and applies one SGD step per batch.
LossBreakdown run_epoch(ClassifierParams& params,
                        std::vector<TrainingSample> samples,
                        const TrainConfig& config, double alpha,
                        std::size_t epoch) {
  Rng rng = stream(config.seed, {kShuffleStream, epoch});
  rng.shuffle(samples);
  LossBreakdown mean;
  const std::span<const TrainingSample> all(samples);
  for (std::size_t begin = 0; begin < all.size(); begin += config.batch_size) {
    const auto batch =
        all.subspan(begin, std::min(config.batch_size, all.size() - begin));
    const LossAndGrad lg =
        loss_and_grad(params, batch, alpha, config.stability_on);
    sgd_step(params, lg.grad, config.lr);
    const double w = static_cast<double>(batch.size());
    mean.total += lg.loss.total * w;
    mean.standard += lg.loss.standard * w;
    mean.similarity += lg.loss.similarity * w;
  }
  if (!samples.empty()) {
    const double n = static_cast<double>(samples.size());
    mean.total /= n;
    mean.standard /= n;
    mean.similarity /= n;
  }
  return mean;
}

std::string pool_record(const PoolEntry& e) {
  nlohmann::ordered_json r;
  r["id"] = e.clean.id;
  r["clean"] = detokenize(e.clean);
  r["noisy"] = detokenize(e.noisy);
  r["label"] = e.label;
  r["channel"] = e.channel;
  r["copy"] = e.copy;
  return r.dump();
}

}  // namespace

void TrainConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("alpha must be in [0, 1]");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw InvalidArgument("beta must be in [0, 1]");
  }
  if (!(lr > 0.0) || !std::isfinite(lr)) {
    throw InvalidArgument("lr must be positive");
  }
  if (epochs < 1) throw InvalidArgument("epochs must be at least 1");
  if (batch_size < 1) throw InvalidArgument("batch_size must be at least 1");
  if (dims.embed < 1 || dims.hidden < 1) {
    throw InvalidArgument("embed and hidden dims must be positive");
  }
}

nlohmann::ordered_json TrainConfig::to_json() const {
  nlohmann::ordered_json j;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["lr"] = lr;
  j["epochs"] = epochs;
  j["batch_size"] = batch_size;
  j["seed"] = seed;
  j["stability_on"] = std::string(stability_on_name(stability_on));
  j["embed_dim"] = dims.embed;
  j["hidden_dim"] = dims.hidden;
  return j;
}

TrainConfig TrainConfig::from_json(const nlohmann::json& doc) {
  return from_json(doc, TrainConfig{});
}

TrainConfig TrainConfig::from_json(const nlohmann::json& doc, TrainConfig base) {
  TrainConfig c = base;
  try {
    c.alpha = doc.value("alpha", c.alpha);
    c.beta = doc.value("beta", c.beta);
    c.lr = doc.value("lr", c.lr);
    c.epochs = doc.value("epochs", c.epochs);
    c.batch_size = doc.value("batch_size", c.batch_size);
    c.seed = doc.value("seed", c.seed);
    c.stability_on = parse_stability_on(
        doc.value("stability_on", std::string(stability_on_name(c.stability_on))));
    c.dims.embed = doc.value("embed_dim", c.dims.embed);
    c.dims.hidden = doc.value("hidden_dim", c.dims.hidden);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("train config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::ordered_json EpochLog::to_json() const {
  nlohmann::ordered_json j;
  j["epoch"] = epoch;
  j["samples"] = samples;
  j["hard_count"] = hard_count;
  j["mean_distance"] = mean_distance;
  j["loss"] = loss.total;
  j["loss_standard"] = loss.standard;
  j["loss_similarity"] = loss.similarity;
  return j;
}

TrainResult continue_clean(const Dataset& dataset, const TrainConfig& config,
                           Classifier init, const EpochCallback& on_epoch) {
  config.validate();
  check_labelled(dataset);
  TrainResult result{std::move(init), {}};
  const auto samples = clean_samples(dataset);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    EpochLog log;
    log.epoch = epoch;
    log.samples = samples.size();
    log.loss = run_epoch(result.model.params, samples, config, 1.0, epoch);
    result.model.trained = true;
    result.log.push_back(log);
    if (on_epoch) on_epoch(log, result.model);
  }
  return result;
}

TrainResult train_clean(const Dataset& dataset, const TrainConfig& config,
                        const EpochCallback& on_epoch) {
  config.validate();
  check_labelled(dataset);
  Classifier init{
      init_params(build_vocabulary(dataset), config.dims, config.seed), false};
  return continue_clean(dataset, config, std::move(init), on_epoch);
}

NoisyPool build_pool(const Dataset& dataset,
                     std::span<const NoiseChannel* const> channels,
                     std::size_t copies, unsigned workers) {
  if (channels.empty()) throw InvalidArgument("no noise channels given");
  for (const NoiseChannel* c : channels) {
    if (c == nullptr) throw InvalidArgument("null noise channel");
  }
  const std::size_t per_sentence = channels.size() * copies;
  NoisyPool pool;
  pool.entries.resize(dataset.size() * per_sentence);
  for (std::size_t c = 0; c < channels.size(); ++c) {
    for (std::size_t k = 0; k < copies; ++k) {
      const auto noisy =
          inject_all(*channels[c], dataset.sentences, k, workers);
      for (std::size_t i = 0; i < dataset.size(); ++i) {
        PoolEntry& e = pool.entries[i * per_sentence + c * copies + k];
        e.clean = dataset.sentences[i];
        e.noisy = noisy[i];
        e.label = dataset.sentences[i].label.value_or(0);
        e.channel = channels[c]->tag();
        e.copy = k;
      }
    }
  }
  return pool;
}

std::string pool_to_jsonl(const NoisyPool& pool) {
  std::string out;
  for (const PoolEntry& e : pool.entries) {
    out += pool_record(e);
    out += '\n';
  }
  return out;
}

NoisyPool pool_from_jsonl(std::string_view text) {
  NoisyPool pool;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto r = nlohmann::json::parse(line);
      PoolEntry e;
      e.clean = tokenize(r.at("clean").get<std::string>());
      e.noisy = tokenize(r.at("noisy").get<std::string>());
      e.clean.id = e.noisy.id = r.at("id").get<std::int64_t>();
      e.label = r.at("label").get<int>();
      if (e.label != 0 && e.label != 1) throw DataError("label must be 0 or 1");
      e.clean.label = e.noisy.label = e.label;
      e.channel = r.value("channel", std::string());
      e.copy = r.value("copy", std::uint64_t{0});
      pool.entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw DataError("pool line " + std::to_string(lineno) + ": " + ex.what());
    } catch (const DataError& ex) {
      throw DataError("pool line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return pool;
}

std::size_t hard_count(double beta, std::size_t pool_size) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw InvalidArgument("beta must be in [0, 1]");
  }
  const double x = beta * static_cast<double>(pool_size);
  const double nearest = std::round(x);
  double k = std::abs(x - nearest) < 1e-9 ? nearest : std::ceil(x);
  if (beta > 0.0 && pool_size > 0) k = std::max(k, 1.0);
  return std::min(static_cast<std::size_t>(k), pool_size);
}

std::vector<double> pair_distances(const NoisyPool& pool,
                                   const ClassifierParams& params,
                                   unsigned workers) {
  std::vector<double> out(pool.size());
  workers = std::max(
      1u, std::min<unsigned>(workers, static_cast<unsigned>(pool.size())));
  auto run = [&](unsigned w) {
    const std::size_t begin = pool.size() * w / workers;
    const std::size_t end = pool.size() * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& e = pool.entries[i];
      out[i] = cosine_distance(forward(params, e.clean).representation,
                               forward(params, e.noisy).representation);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  return out;
}

HardSet select_hard(std::vector<double> distances, double beta) {
  const std::size_t k = hard_count(beta, distances.size());
  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), 0);
  auto harder = [&](std::size_t a, std::size_t b) {
    if (distances[a] != distances[b]) return distances[a] > distances[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(k),
                    order.end(), harder);
  HardSet hard;
  hard.selected.assign(order.begin(), order.begin() + static_cast<long>(k));
  std::sort(hard.selected.begin(), hard.selected.end());
  hard.distances = std::move(distances);
  return hard;
}

HardSet mine_hard(const NoisyPool& pool, const ClassifierParams& params,
                  double beta, unsigned workers) {
  return select_hard(pair_distances(pool, params, workers), beta);
}

TrainResult robust_train(const Dataset& dataset, const NoisyPool& pool,
                         const TrainConfig& config, Classifier init,
                         const EpochCallback& on_epoch) {
  config.validate();
  check_labelled(dataset);
  check_pool_labels(dataset, pool);
  std::map<std::int64_t, std::size_t> position;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    position[dataset.sentences[i].id] = i;
  }
  TrainResult result{std::move(init), {}};
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const HardSet hard = mine_hard(pool, result.model.params, config.beta);
    std::vector<bool> covered(dataset.size(), false);
    for (std::size_t j : hard.selected) {
      covered[position.at(pool.entries[j].clean.id)] = true;
    }
    std::vector<TrainingSample> samples;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (covered[i]) continue;
      const Sentence& s = dataset.sentences[i];
      samples.push_back({&s, nullptr, *s.label});
    }
    for (std::size_t j : hard.selected) {
      const PoolEntry& e = pool.entries[j];
      samples.push_back({&e.clean, &e.noisy, e.label});
    }
    EpochLog log;
    log.epoch = epoch;
    log.samples = samples.size();
    log.hard_count = hard.selected.size();
    if (!hard.distances.empty()) {
      log.mean_distance =
          std::accumulate(hard.distances.begin(), hard.distances.end(), 0.0) /
          static_cast<double>(hard.distances.size());
    }
    log.loss = run_epoch(result.model.params, std::move(samples), config,
                         config.alpha, epoch);
    result.model.trained = true;
    result.log.push_back(log);
    if (on_epoch) on_epoch(log, result.model);
  }
  return result;
}

TrainResult naive_merge_train(const Dataset& dataset, const NoisyPool& pool,
                              const TrainConfig& config, Classifier init,
                              const EpochCallback& on_epoch) {
  config.validate();
  check_labelled(dataset);
  check_pool_labels(dataset, pool);
  auto samples = clean_samples(dataset);
  for (const PoolEntry& e : pool.entries) {
    samples.push_back({&e.noisy, nullptr, e.label});
  }
  TrainResult result{std::move(init), {}};
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    EpochLog log;
    log.epoch = epoch;
    log.samples = samples.size();
    log.loss = run_epoch(result.model.params, samples, config, 1.0, epoch);
    result.model.trained = true;
    result.log.push_back(log);
    if (on_epoch) on_epoch(log, result.model);
  }
  return result;
}

NoisyPool random_pool(const Dataset& dataset, double rate,
                      std::uint64_t seed) {
  const RandomChannel channel(rate, build_vocabulary(dataset),
                              derive_seed(seed, {kRandomPoolStream}));
  const NoiseChannel* channels[] = {&channel};
  return build_pool(dataset, channels, 1);
}

TrainResult random_augment_train(const Dataset& dataset, double rate,
                                 const TrainConfig& config, Classifier init,
                                 const EpochCallback& on_epoch) {
  config.validate();
  check_labelled(dataset);
  return naive_merge_train(dataset, random_pool(dataset, rate, config.seed),
                           config, std::move(init), on_epoch);
}

RunRecorder::RunRecorder(std::filesystem::path dir,
                         const nlohmann::ordered_json& config)
    : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
  write_file(dir_ / "config.json", config.dump(2) + "\n");
  write_file(dir_ / "metrics.jsonl", "");
}

EpochCallback RunRecorder::callback() {
  return [this](const EpochLog& log, const Classifier& model) {
    metrics_ += log.to_json().dump();
    metrics_ += '\n';
    write_file(dir_ / "metrics.jsonl", metrics_);
    char name[32];
    std::snprintf(name, sizeof(name), "epoch_%03zu.json", log.epoch + 1);
    save_checkpoint(model.params, dir_ / name);
  };
}

void RunRecorder::finish(const Classifier& model) {
  save_checkpoint(model.params, dir_ / "final.json");
}

}  // namespace ocrobust
