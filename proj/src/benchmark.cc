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

#include "ocrobust/benchmark.h"

#include <algorithm>
#include <cmath>

#include "ocrobust/error.h"
#include "ocrobust/rng.h"

namespace ocrobust {
namespace {

constexpr std::size_t kFillers = 38;
constexpr std::size_t kMarkerBegin = 44;  // glyphs 38..43 are marker lookalikes
constexpr double kZipfExponent = 0.8;
constexpr double kLoneMarkerRate = 0.3;  // negatives holding one marker glyph

enum Stream : std::uint64_t {
  kTrainStream = 11,
  kTestStream = 12,
  kParallelStream = 13,
  kEngineStream = 14,
  kNoisyAStream = 15,
  kNoisyBStream = 16,
};

bool is_marker(const Token& t) {
  const auto& a = benchmark_alphabet();
  return std::find(a.begin() + kMarkerBegin, a.end(), t) != a.end();
}

class FillerSampler {
 public:
  FillerSampler() {
    double total = 0.0;
    for (std::size_t r = 0; r < kFillers; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), kZipfExponent);
      cumulative_.push_back(total);
    }
    for (double& c : cumulative_) c /= total;
  }

  const Token& draw(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto r = std::min<std::size_t>(it - cumulative_.begin(), kFillers - 1);
    return benchmark_alphabet()[r];
  }

 private:
  std::vector<double> cumulative_;
};

Sentence make_sentence(const BenchmarkSpec& spec, bool positive, Rng& rng) {
  static const FillerSampler filler;
  const auto& alphabet = benchmark_alphabet();
  const auto& markers = benchmark_markers();
  const std::size_t length =
      spec.min_length + rng.below(spec.max_length - spec.min_length + 1);
  Sentence s;
  if (positive) {
    const auto& [first, second] = markers[rng.below(markers.size())];
    for (std::size_t i = 0; i + 2 < length; ++i) {
      s.tokens.push_back(filler.draw(rng));
    }
    const std::size_t at = rng.below(s.tokens.size() + 1);
    s.tokens.insert(s.tokens.begin() + static_cast<long>(at), {first, second});
  } else {
    for (std::size_t i = 0; i < length; ++i) s.tokens.push_back(filler.draw(rng));
    if (rng.bernoulli(kLoneMarkerRate)) {
      const Token& lone =
          alphabet[kMarkerBegin + rng.below(alphabet.size() - kMarkerBegin)];
      s.tokens[rng.below(s.tokens.size())] = lone;
    }
  }
  s.label = positive ? 1 : 0;
  return s;
}

Dataset make_dataset(const BenchmarkSpec& spec, std::string name,
                     std::size_t size, std::uint64_t stream_key) {
  Rng rng = stream(spec.seed, {stream_key});
  Dataset d;
  d.name = std::move(name);
  for (std::size_t i = 0; i < size; ++i) {
    Sentence s = make_sentence(spec, rng.bernoulli(spec.positive_fraction), rng);
    s.id = static_cast<std::int64_t>(i);
    d.sentences.push_back(std::move(s));
  }
  return d;
}

}  // namespace

const std::vector<Token>& benchmark_alphabet() {
  static const std::vector<Token> alphabet = [] {
    std::vector<Token> a;
    for (char c = 'a'; c <= 'z'; ++c) a.emplace_back(1, c);
    for (char c = 'A'; c <= 'X'; ++c) a.emplace_back(1, c);
    return a;
  }();
  return alphabet;
}

const std::vector<std::pair<Token, Token>>& benchmark_markers() {
  static const std::vector<std::pair<Token, Token>> markers = {
      {"S", "T"}, {"U", "V"}, {"W", "X"}};
  return markers;
}

nlohmann::ordered_json BenchmarkSpec::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["train_size"] = train_size;
  j["test_size"] = test_size;
  j["parallel_size"] = parallel_size;
  j["positive_fraction"] = positive_fraction;
  j["min_length"] = min_length;
  j["max_length"] = max_length;
  j["parallel_rate"] = parallel_rate;
  j["noisy_a_rate"] = noisy_a_rate;
  j["noisy_b_rate"] = noisy_b_rate;
  return j;
}

OcrEngineChannel::OcrEngineChannel(double rate, std::uint64_t seed)
    : rate_(rate), seed_(seed) {
  if (!(rate >= 0.0 && rate * kMarkerMultiplier <= 1.0)) {
    throw InvalidArgument("engine rate must be in [0, 1/3]");
  }
  const auto& a = benchmark_alphabet();
  // Marker glyphs are misread as their reserved lookalikes, which clean text
  // never contains; filler glyphs pair up with the glyph half the filler
  // ranking away.
  for (std::size_t i = 0; i < a.size() - kMarkerBegin; ++i) {
    lookalike_[a[kMarkerBegin + i]] = a[kFillers + i];
  }
  for (std::size_t i = 0; i < kFillers; ++i) {
    lookalike_[a[i]] = a[(i + kFillers / 2) % kFillers];
  }
}

Sentence OcrEngineChannel::inject(const Sentence& x, std::uint64_t copy) const {
  Rng rng = stream(seed_, {static_cast<std::uint64_t>(x.id), copy});
  const auto& a = benchmark_alphabet();
  Sentence out;
  out.id = x.id;
  out.label = x.label;
  bool previous_misread = false;
  for (const Token& w : x.tokens) {
    double p = rate_ * (is_marker(w) ? kMarkerMultiplier : 1.0);
    if (previous_misread) p = std::max(p, kSpanProbability);
    previous_misread = false;
    if (!rng.bernoulli(p)) {
      out.tokens.push_back(w);
      continue;
    }
    const double u = rng.uniform();
    if (u < kSubstituteShare) {
      auto it = lookalike_.find(w);
      out.tokens.push_back(it == lookalike_.end() ? w : it->second);
      previous_misread = true;
    } else if (u < kSubstituteShare + kDeleteShare) {
      // dropped
    } else {
      out.tokens.push_back(w);
      out.tokens.push_back(a[rng.below(kFillers)]);
    }
  }
  return out;
}

Benchmark generate_benchmark(const BenchmarkSpec& spec) {
  if (spec.min_length < 3 || spec.max_length < spec.min_length) {
    throw InvalidArgument("benchmark lengths must satisfy 3 <= min <= max");
  }
  Benchmark b;
  b.spec = spec;
  b.train = make_dataset(spec, "train", spec.train_size, kTrainStream);
  b.test = make_dataset(spec, "test", spec.test_size, kTestStream);

  const OcrEngineChannel engine(spec.parallel_rate,
                                derive_seed(spec.seed, {kEngineStream}));
  const Dataset source =
      make_dataset(spec, "parallel", spec.parallel_size, kParallelStream);
  for (const Sentence& s : source.sentences) {
    ParallelPair pair;
    pair.clean = s;
    pair.clean.label.reset();
    pair.noisy = engine.inject(pair.clean);
    if (pair.noisy.empty()) continue;
    b.parallel.push_back(std::move(pair));
  }

  const OcrEngineChannel engine_a(spec.noisy_a_rate,
                                  derive_seed(spec.seed, {kNoisyAStream}));
  const OcrEngineChannel engine_b(spec.noisy_b_rate,
                                  derive_seed(spec.seed, {kNoisyBStream}));
  for (const auto& [name, engine_ptr] :
       {std::pair<std::string, const OcrEngineChannel*>{"noisy-A", &engine_a},
        std::pair<std::string, const OcrEngineChannel*>{"noisy-B", &engine_b}}) {
    Dataset d;
    d.name = name;
    for (const Sentence& s : b.test.sentences) d.sentences.push_back(engine_ptr->inject(s));
    b.noisy_tests.emplace_back(name, std::move(d));
  }
  return b;
}

void write_benchmark(const Benchmark& bench, const std::filesystem::path& dir,
                     const nlohmann::ordered_json& ablate_config) {
  std::filesystem::create_directories(dir);
  save_dataset(bench.train, dir / "train.jsonl");
  save_dataset(bench.test, dir / "test.jsonl");
  save_dataset(bench.noisy_tests.at(0).second, dir / "test_noisy_a.jsonl");
  save_dataset(bench.noisy_tests.at(1).second, dir / "test_noisy_b.jsonl");
  write_file(dir / "parallel.tsv", parallel_to_tsv(bench.parallel));
  nlohmann::ordered_json config = ablate_config;
  config["train"] = "train.jsonl";
  config["pairs"] = "parallel.tsv";
  config["test"] = {"clean=test.jsonl", "noisy-A=test_noisy_a.jsonl",
                    "noisy-B=test_noisy_b.jsonl"};
  config["benchmark"] = bench.spec.to_json();
  write_file(dir / "bench.json", config.dump(2) + "\n");
}

}  // namespace ocrobust
