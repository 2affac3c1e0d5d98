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

#ifndef OCROBUST_BENCHMARK_H_
#define OCROBUST_BENCHMARK_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ocrobust/channels.h"
#include "ocrobust/corpus.h"

namespace ocrobust {

// Synthetic stand-in for a rhetoric-detection task read through an OCR
// engine. Sentences are strings over a 50-symbol alphabet; positives carry
// one of three marker bigrams, and some negatives carry a lone marker glyph.
// The simulated engine misreads symbols as fixed lookalikes, marker glyphs
// more often than filler, and a misread makes the next symbol likelier to be
// misread too.
struct BenchmarkSpec {
  std::uint64_t seed = 2021;
  std::size_t train_size = 2000;
  std::size_t test_size = 500;
  std::size_t parallel_size = 5000;
  double positive_fraction = 0.3;
  std::size_t min_length = 12;
  std::size_t max_length = 30;
  double parallel_rate = 0.068;  // engine rate for the parallel corpus
  double noisy_a_rate = 0.034;
  double noisy_b_rate = 0.068;

  nlohmann::ordered_json to_json() const;
};

// The planted noise process. `rate` is the per-symbol misread probability for
// filler glyphs.
class OcrEngineChannel final : public NoiseChannel {
 public:
  static constexpr double kMarkerMultiplier = 3.0;
  static constexpr double kSpanProbability = 0.5;
  static constexpr double kSubstituteShare = 0.8;
  static constexpr double kDeleteShare = 0.1;  // remainder inserts

  OcrEngineChannel(double rate, std::uint64_t seed);

  std::string tag() const override { return "engine"; }
  Sentence inject(const Sentence& x, std::uint64_t copy = 0) const override;

  const std::map<Token, Token>& lookalikes() const { return lookalike_; }

 private:
  double rate_;
  std::uint64_t seed_;
  std::map<Token, Token> lookalike_;
};

// 38 filler glyphs (a-z, A-L), the 6 lookalike glyphs the engine produces
// for markers (M-R), then the 6 marker glyphs (S-X).
const std::vector<Token>& benchmark_alphabet();
const std::vector<std::pair<Token, Token>>& benchmark_markers();

struct Benchmark {
  BenchmarkSpec spec;
  Dataset train;
  Dataset test;
  std::vector<ParallelPair> parallel;
  // "noisy-A" and "noisy-B": the test set read through the engine.
  std::vector<std::pair<std::string, Dataset>> noisy_tests;
};

Benchmark generate_benchmark(const BenchmarkSpec& spec = {});

// train.jsonl, test.jsonl, test_noisy_a.jsonl, test_noisy_b.jsonl,
// parallel.tsv and bench.json (an ablate config referring to those files).
void write_benchmark(const Benchmark& bench, const std::filesystem::path& dir,
                     const nlohmann::ordered_json& ablate_config);

}  // namespace ocrobust

#endif  // OCROBUST_BENCHMARK_H_
