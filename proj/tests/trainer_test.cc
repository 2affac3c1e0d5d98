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
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "ocrobust/channels.h"
#include "ocrobust/error.h"
#include "oracles.h"
#include "test_util.h"

namespace ocrobust {
namespace {

using testing::oracle_top;

// Positive iff the sentence contains 'p'.
Dataset marker_task(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.name = "marker";
  for (std::size_t i = 0; i < n; ++i) {
    Sentence s;
    const std::size_t len = 4 + rng.below(8);
    for (std::size_t k = 0; k < len; ++k) {
      s.tokens.push_back(std::string(1, static_cast<char>('a' + rng.below(10))));
    }
    s.label = rng.bernoulli(0.4) ? 1 : 0;
    if (*s.label == 1) s.tokens[rng.below(len)] = "p";
    s.id = static_cast<std::int64_t>(i);
    d.sentences.push_back(s);
  }
  return d;
}

// Top-k by an independent full sort: stable by index, distance descending.
TrainConfig small_config(std::uint64_t seed) {
  TrainConfig c;
  c.seed = seed;
  c.epochs = 3;
  c.lr = 0.3;
  c.batch_size = 8;
  c.dims = {6, 5};
  return c;
}

NoisyPool noisy_pool(const Dataset& d, std::uint64_t seed, std::size_t copies = 1) {
  const RandomChannel a(0.3, build_vocabulary(d), seed);
  const RandomChannel b(0.15, build_vocabulary(d), seed + 1);
  const NoiseChannel* channels[] = {&a, &b};
  return build_pool(d, channels, copies);
}

TEST_CASE("hard_count arithmetic") {
  CHECK(hard_count(0.4, 5) == 2);
  CHECK(hard_count(0.3, 10) == 3);
  CHECK(hard_count(0.25, 600) == 150);
  CHECK(hard_count(0.0, 5) == 0);
  CHECK(hard_count(1.0, 5) == 5);
  CHECK(hard_count(0.01, 5) == 1);
  CHECK(hard_count(0.5, 0) == 0);
  CHECK(hard_count(0.21, 10) == 3);
  CHECK_THROWS_AS(hard_count(1.5, 5), InvalidArgument);
  CHECK_THROWS_AS(hard_count(-0.1, 5), InvalidArgument);
}

TEST_CASE("select_hard on a hand-built example") {
  const HardSet hard = select_hard({0.9, 0.1, 0.5, 0.9, 0.3}, 0.4);
  CHECK(hard.selected == std::vector<std::size_t>{0, 3});
  CHECK(hard.distances.size() == 5);
  CHECK(select_hard({0.9, 0.1, 0.5}, 0.0).selected.empty());
  CHECK(select_hard({0.9, 0.1, 0.5}, 1.0).selected ==
        std::vector<std::size_t>{0, 1, 2});
  // Ties at the cut keep the smaller index.
  CHECK(select_hard({0.2, 0.5, 0.5, 0.5}, 0.5).selected ==
        std::vector<std::size_t>{1, 2});
}

TEST_CASE("select_hard equals a full-sort oracle on random pools") {
  Rng rng(100);
  for (int pool = 0; pool < 100; ++pool) {
    const std::size_t m = rng.below(60);
    std::vector<double> d(m);
    // Few distinct values so ties are common.
    for (double& v : d) v = static_cast<double>(rng.below(6)) / 5.0;
    const double beta = rng.uniform();
    const HardSet hard = select_hard(d, beta);
    CAPTURE(pool);
    REQUIRE(hard.selected == oracle_top(d, hard_count(beta, m)));
    double min_in = 3.0, max_out = -1.0;
    std::set<std::size_t> in(hard.selected.begin(), hard.selected.end());
    for (std::size_t i = 0; i < m; ++i) {
      if (in.count(i)) {
        min_in = std::min(min_in, d[i]);
      } else {
        max_out = std::max(max_out, d[i]);
      }
    }
    if (!in.empty() && in.size() < m) CHECK(min_in >= max_out);
  }
}

TEST_CASE("raising beta never drops a selected index") {
  Rng rng(8);
  std::vector<double> d(200);
  for (double& v : d) v = static_cast<double>(rng.below(20)) / 19.0;
  std::set<std::size_t> previous;
  for (int step = 0; step <= 20; ++step) {
    const HardSet hard = select_hard(d, step / 20.0);
    const std::set<std::size_t> now(hard.selected.begin(), hard.selected.end());
    CHECK(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
    previous = now;
  }
}

TEST_CASE("build_pool size, tags and order") {
  const Dataset d = marker_task(100, 1);
  const IdentityChannel id;
  const RandomChannel r(0.2, build_vocabulary(d), 3);
  const NoiseChannel* channels[] = {&id, &r, &id};
  const NoisyPool pool = build_pool(d, channels, 2);
  REQUIRE(pool.size() == 600);
  CHECK(pool.entries[0].channel == "identity");
  CHECK(pool.entries[2].channel == "random");
  CHECK(pool.entries[3].copy == 1);
  CHECK(pool.entries[6].clean.id == 1);
  for (const PoolEntry& e : pool.entries) {
    CHECK(e.label == *d.sentences[e.clean.id].label);
    CHECK(e.noisy.id == e.clean.id);
    if (e.channel == "identity") CHECK(e.noisy.tokens == e.clean.tokens);
  }
  CHECK(pool_to_jsonl(build_pool(d, channels, 2, 4)) == pool_to_jsonl(pool));
  CHECK_THROWS_AS(build_pool(d, {}, 1), InvalidArgument);
}

TEST_CASE("pool jsonl round trip") {
  const Dataset d = marker_task(30, 2);
  const NoisyPool pool = noisy_pool(d, 5, 2);
  const std::string text = pool_to_jsonl(pool);
  const NoisyPool back = pool_from_jsonl(text);
  REQUIRE(back.size() == pool.size());
  CHECK(pool_to_jsonl(back) == text);
  CHECK_THROWS_AS(pool_from_jsonl("{\"id\": 1}\n"), DataError);
}

TEST_CASE("mining distances are zero for identical pairs") {
  const Dataset d = marker_task(40, 3);
  const IdentityChannel id;
  const NoiseChannel* channels[] = {&id};
  const NoisyPool pool = build_pool(d, channels, 1);
  const ClassifierParams params =
      init_params(build_vocabulary(d), ClassifierDims{6, 5}, 1);
  for (double v : mine_hard(pool, params, 0.5).distances) CHECK(v == 0.0);

  TrainConfig config = small_config(4);
  config.alpha = 0.5;
  config.beta = 1.0;
  const TrainResult r = robust_train(d, pool, config, Classifier{params, true});
  for (const EpochLog& log : r.log) {
    CHECK(log.loss.similarity == 0.0);
    CHECK(log.mean_distance == 0.0);
    CHECK(log.hard_count == 40);
  }
}

TEST_CASE("parallel mining matches sequential mining") {
  const Dataset d = marker_task(120, 4);
  const NoisyPool pool = noisy_pool(d, 9);
  const ClassifierParams params =
      init_params(build_vocabulary(d), ClassifierDims{6, 5}, 2);
  const HardSet one = mine_hard(pool, params, 0.3, 1);
  const HardSet many = mine_hard(pool, params, 0.3, 5);
  CHECK(one.selected == many.selected);
  CHECK(one.distances == many.distances);
}

TEST_CASE("train_clean fits a separable task") {
  const Dataset d = marker_task(500, 5);
  TrainConfig config;
  config.seed = 1;
  config.epochs = 20;
  const TrainResult r = train_clean(d, config);
  std::size_t correct = 0;
  for (const Sentence& s : d.sentences) correct += predict(r.model.params, s) == *s.label;
  CHECK(static_cast<double>(correct) / d.size() >= 0.98);
  CHECK(r.model.trained);
  CHECK(r.log.size() == 20);
  CHECK(r.log.back().loss.total < r.log.front().loss.total);
}

TEST_CASE("training preconditions") {
  const Dataset d = marker_task(10, 6);
  TrainConfig config = small_config(1);
  config.epochs = 0;
  CHECK_THROWS_AS(train_clean(d, config), InvalidArgument);
  CHECK_THROWS_AS(train_clean(Dataset{}, small_config(1)), InvalidArgument);
  config = small_config(1);
  config.alpha = 1.5;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config = small_config(1);
  config.lr = 0.0;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);

  NoisyPool pool = noisy_pool(d, 1);
  pool.entries[0].label = 1 - pool.entries[0].label;
  const Classifier init{init_params(build_vocabulary(d), {6, 5}, 1), true};
  CHECK_THROWS_AS(robust_train(d, pool, small_config(1), init), InvalidArgument);
  CHECK_THROWS_AS(naive_merge_train(d, pool, small_config(1), init),
                  InvalidArgument);
}

TEST_CASE("train config JSON round trip") {
  TrainConfig c = small_config(42);
  c.alpha = 0.5;
  c.stability_on = StabilityOn::kOutput;
  const TrainConfig back = TrainConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  TrainConfig base;
  base.beta = 0.9;
  CHECK(TrainConfig::from_json(nlohmann::json::object(), base).beta == 0.9);
  CHECK_THROWS_AS(TrainConfig::from_json(nlohmann::json{{"alpha", "x"}}),
                  InvalidArgument);
}

TEST_CASE("same seed gives bit-identical models for every trainer") {
  const Dataset d = marker_task(80, 7);
  const NoisyPool pool = noisy_pool(d, 11);
  const TrainConfig config = small_config(3);
  const Classifier init{init_params(build_vocabulary(d), config.dims, 3), true};
  auto json = [](const TrainResult& r) { return checkpoint_to_json(r.model.params); };
  CHECK(json(train_clean(d, config)) == json(train_clean(d, config)));
  CHECK(json(continue_clean(d, config, init)) == json(continue_clean(d, config, init)));
  CHECK(json(robust_train(d, pool, config, init)) ==
        json(robust_train(d, pool, config, init)));
  CHECK(json(naive_merge_train(d, pool, config, init)) ==
        json(naive_merge_train(d, pool, config, init)));
  CHECK(json(random_augment_train(d, 0.1, config, init)) ==
        json(random_augment_train(d, 0.1, config, init)));
  TrainConfig other = config;
  other.seed = 4;
  CHECK(json(train_clean(d, config)) != json(train_clean(d, other)));
}

TEST_CASE("alpha 1 and beta 0 collapse to clean continuation") {
  const Dataset d = marker_task(90, 8);
  const NoisyPool pool = noisy_pool(d, 13, 2);
  TrainConfig config = small_config(5);
  config.alpha = 1.0;
  config.beta = 0.0;
  const Classifier init{init_params(build_vocabulary(d), config.dims, 5), true};
  const TrainResult robust = robust_train(d, pool, config, init);
  const TrainResult clean = continue_clean(d, config, init);
  CHECK(robust.model.params == clean.model.params);
  CHECK(checkpoint_to_json(robust.model.params) ==
        checkpoint_to_json(clean.model.params));
  for (const EpochLog& log : robust.log) CHECK(log.hard_count == 0);
}

TEST_CASE("naive merge edge cases") {
  const Dataset d = marker_task(60, 9);
  const TrainConfig config = small_config(6);
  const Classifier init{init_params(build_vocabulary(d), config.dims, 6), true};

  const TrainResult empty = naive_merge_train(d, NoisyPool{}, config, init);
  CHECK(empty.model.params == continue_clean(d, config, init).model.params);

  // Duplicates of the clean data behave like a doubled clean set.
  const IdentityChannel id;
  const NoiseChannel* channels[] = {&id};
  const NoisyPool dup = build_pool(d, channels, 1);
  Dataset doubled = d;
  for (const Sentence& s : d.sentences) doubled.sentences.push_back(s);
  const TrainResult merged = naive_merge_train(d, dup, config, init);
  const TrainResult twice = continue_clean(doubled, config, init);
  REQUIRE(merged.log.size() == twice.log.size());
  for (std::size_t e = 0; e < merged.log.size(); ++e) {
    CHECK(merged.log[e].samples == 120);
    CHECK(merged.log[e].loss.total == twice.log[e].loss.total);
  }
}

TEST_CASE("random pool properties") {
  const Dataset d = marker_task(50, 10);
  for (const PoolEntry& e : random_pool(d, 0.0, 1).entries) {
    CHECK(e.noisy.tokens == e.clean.tokens);
  }
  CHECK(pool_to_jsonl(random_pool(d, 0.1, 7)) == pool_to_jsonl(random_pool(d, 0.1, 7)));
  CHECK(pool_to_jsonl(random_pool(d, 0.1, 7)) != pool_to_jsonl(random_pool(d, 0.1, 8)));
}

TEST_CASE("robust training samples carry clean labels") {
  const Dataset d = marker_task(70, 11);
  const NoisyPool pool = noisy_pool(d, 15, 2);
  TrainConfig config = small_config(7);
  config.beta = 0.25;
  const Classifier init{init_params(build_vocabulary(d), config.dims, 7), true};
  const TrainResult r = robust_train(d, pool, config, init);
  for (const EpochLog& log : r.log) {
    CHECK(log.hard_count == hard_count(0.25, pool.size()));
    CHECK(log.samples >= log.hard_count);
    CHECK(log.samples <= d.size() + log.hard_count);
    CHECK(log.mean_distance > 0.0);
  }
  CHECK(r.model.params.arrays.all_finite());
}

TEST_CASE("run recorder layout") {
  testing::TempDir dir;
  const Dataset d = marker_task(20, 12);
  const TrainConfig config = small_config(1);
  RunRecorder recorder(dir / "run", config.to_json());
  const TrainResult r = train_clean(d, config, recorder.callback());
  recorder.finish(r.model);
  CHECK(std::filesystem::exists(dir / "run" / "config.json"));
  CHECK(std::filesystem::exists(dir / "run" / "epoch_001.json"));
  CHECK(std::filesystem::exists(dir / "run" / "epoch_003.json"));
  CHECK(read_file(dir / "run" / "epoch_003.json") ==
        read_file(dir / "run" / "final.json"));
  const std::string metrics = read_file(dir / "run" / "metrics.jsonl");
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 3);
}

}  // namespace
}  // namespace ocrobust
