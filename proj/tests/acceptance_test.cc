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


// Acceptance suite: runs each criterion once and prints one PASS/FAIL line
// per criterion. Exits non-zero if any criterion fails.

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "cli_pipeline.h"
#include "ocrobust/align.h"
#include "ocrobust/benchmark.h"
#include "ocrobust/channels.h"
#include "ocrobust/classifier.h"
#include "ocrobust/confusion.h"
#include "ocrobust/eval.h"
#include "ocrobust/rng.h"
#include "ocrobust/trainer.h"
#include "oracles.h"
#include "test_util.h"

namespace ocrobust {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, double a = 0, double b = 0, double c = 0,
                   double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<Token> random_tokens(Rng& rng, std::size_t max_len, std::size_t alphabet) {
  std::vector<Token> out(rng.below(max_len + 1));
  for (Token& t : out) t = std::string(1, static_cast<char>('a' + rng.below(alphabet)));
  return out;
}

Sentence repeated(const Token& t, std::size_t n, std::int64_t id) {
  Sentence s;
  s.tokens.assign(n, t);
  s.id = id;
  return s;
}

Outcome alignment_oracle() {
  Rng rng(1);
  std::size_t exact = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_tokens(rng, 20, 5);
    const auto b = random_tokens(rng, 20, 5);
    const AlignmentPath path = levenshtein_align(a, b);
    exact += path.cost == testing::dp_distance(a, b) && apply_alignment(a, path) == b;
  }
  return {exact == 1000, format("%.0f/1000 pairs match the DP oracle", exact)};
}

double worst_row_error(const ConfusionMatrix& m) {
  double worst = 0.0;
  for (const auto& [w, row] : m.rows()) {
    double sum = 0.0;
    for (const auto& [outcome, p] : row) sum += p;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

Outcome confusion_fidelity(const Benchmark& bench) {
  Rng rng(77);
  std::vector<ParallelPair> pairs;
  for (int i = 0; i < 2000; ++i) {
    ParallelPair p{repeated("a", 10, i), repeated("a", 10, i)};
    for (Token& t : p.noisy.tokens) {
      if (rng.bernoulli(0.3)) t = "b";
    }
    pairs.push_back(p);
  }
  const ConfusionMatrix planted = build_confusion(pairs);
  const RuleChannel channel(planted, 5);
  std::size_t b = 0, total = 0;
  for (int i = 0; i < 100; ++i) {
    for (const Token& t : channel.inject(repeated("a", 1000, i)).tokens) {
      b += t == "b";
      ++total;
    }
  }
  const double freq = static_cast<double>(b) / static_cast<double>(total);
  const double row_error = std::max(worst_row_error(planted),
                                    worst_row_error(build_confusion(bench.parallel)));
  const bool pass = total == 100000 && std::abs(freq - 0.3) <= 0.02 && row_error <= 1e-9;
  return {pass, format("P(b|a) reproduced %.4f over %.0f events, max |row sum - 1| %.2e",
                       freq, total, row_error)};
}

Outcome gradient_check() {
  Rng rng(20);
  const std::vector<Token> vocab{"a", "b", "c", "d", "e"};
  std::size_t checked = 0, failed = 0;
  double worst_rel = 0.0;
  for (int config = 0; config < 20; ++config) {
    const ClassifierDims dims{1 + rng.below(6), 1 + rng.below(6)};
    ClassifierParams params = init_params(vocab, dims, 100 + config);
    for (double& v : params.arrays.w2) v = rng.uniform(-1, 1);
    for (double& v : params.arrays.b1) v = rng.uniform(-0.5, 0.5);
    params.arrays.b2 = rng.uniform(-0.5, 0.5);
    std::vector<Sentence> sentences;
    for (int i = 0; i < 12; ++i) {
      Sentence s;
      s.tokens = random_tokens(rng, 8, 6);
      if (s.tokens.empty()) s.tokens.push_back("a");
      sentences.push_back(s);
    }
    std::vector<TrainingSample> batch;
    for (int i = 0; i < 6; ++i) {
      const bool paired = rng.bernoulli(0.75);
      batch.push_back({&sentences[2 * i], paired ? &sentences[2 * i + 1] : nullptr,
                       static_cast<int>(rng.below(2))});
    }
    const double alpha = std::vector<double>{0.0, 0.5, 0.75, 1.0}[config % 4];
    const StabilityOn on =
        config % 8 < 4 ? StabilityOn::kRepresentation : StabilityOn::kOutput;
    const LossAndGrad analytic = loss_and_grad(params, batch, alpha, on);
    const double step = 1e-4;
    auto blocks = params.arrays.blocks();
    const auto grads = analytic.grad.blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (std::size_t i = 0; i < blocks[b].size(); ++i) {
        const double saved = blocks[b][i];
        blocks[b][i] = saved + step;
        const double up = testing::reference_loss(params, batch, alpha, on);
        blocks[b][i] = saved - step;
        const double down = testing::reference_loss(params, batch, alpha, on);
        blocks[b][i] = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double err = std::abs(grads[b][i] - numeric);
        const double scale = std::max(std::abs(grads[b][i]), std::abs(numeric));
        ++checked;
        if (err > 1e-7) {
          worst_rel = std::max(worst_rel, err / scale);
          failed += err > 1e-4 * scale;
        }
      }
    }
  }
  return {failed == 0, format("%.0f parameters in 20 configs, %.0f outside tolerance, "
                              "worst relative error %.2e",
                              checked, failed, worst_rel)};
}

Outcome framework_collapse(const Benchmark& bench) {
  const ConfusionMatrix m = build_confusion(bench.parallel);
  const RuleChannel rule(m, 9);
  const RandomChannel random(0.1, build_vocabulary(bench.train), 9);
  const NoiseChannel* channels[] = {&rule, &random};
  const NoisyPool pool = build_pool(bench.train, channels, 1);
  std::size_t identical = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    TrainConfig config = benchmark_train_config();
    config.seed = seed;
    config.epochs = 3;
    config.alpha = 1.0;
    config.beta = 0.0;
    const Classifier init{init_params(build_vocabulary(bench.train), config.dims, seed),
                          true};
    const TrainResult robust = robust_train(bench.train, pool, config, init);
    const TrainResult clean = continue_clean(bench.train, config, init);
    identical += robust.model.params == clean.model.params &&
                 checkpoint_to_json(robust.model.params) ==
                     checkpoint_to_json(clean.model.params);
  }
  return {identical == 3, format("%.0f/3 seeds bit-identical", identical)};
}

Outcome mining_exactness(const Benchmark& bench) {
  Rng rng(100);
  std::size_t exact = 0;
  // Synthetic distances with heavy ties; beta = j/20 so ceil(beta * M) is an
  // exact integer expression.
  for (int pool = 0; pool < 80; ++pool) {
    const std::size_t m = rng.below(200);
    std::vector<double> d(m);
    for (double& v : d) v = static_cast<double>(rng.below(6)) / 5.0;
    const std::size_t j = rng.below(21);
    const std::size_t k = (j * m + 19) / 20;
    exact += select_hard(d, static_cast<double>(j) / 20.0).selected ==
             testing::oracle_top(d, k);
  }
  // Distances from real models on a real pool.
  const RandomChannel random(0.1, build_vocabulary(bench.train), 4);
  const NoiseChannel* channels[] = {&random};
  Dataset subset = bench.train;
  subset.sentences.resize(300);
  const NoisyPool pool = build_pool(subset, channels, 1);
  for (int i = 0; i < 20; ++i) {
    const ClassifierParams params =
        init_params(build_vocabulary(bench.train), ClassifierDims{8, 8}, 500 + i);
    const std::size_t j = 1 + rng.below(20);
    const std::size_t k = (j * pool.size() + 19) / 20;
    const HardSet hard = mine_hard(pool, params, static_cast<double>(j) / 20.0);
    exact += hard.selected ==
             testing::oracle_top(pair_distances(pool, params), k);
  }
  return {exact == 100, format("%.0f/100 pools equal the full-sort oracle", exact)};
}

struct AblationSummary {
  AblationReport report;
  double seconds = 0.0;
};

std::size_t wins(const std::vector<double>& a, const std::vector<double>& b,
                 bool strict) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += strict ? a[i] > b[i] : a[i] >= b[i];
  return n;
}

Outcome degradation(const AblationSummary& s) {
  const double clean = mean(s.report.f1_by_seed("clean-only", "clean"));
  const double noisy = mean(s.report.f1_by_seed("clean-only", "noisy-B"));
  const bool pass = clean - noisy >= 0.05 && s.seconds < 300.0;
  return {pass, format("clean-only F1 %.4f clean, %.4f on noisy-B, drop %.4f",
                       clean, noisy, clean - noisy)};
}

Outcome robust_gain(const AblationSummary& s) {
  const double clean = mean(s.report.f1_by_seed("clean-only", "clean"));
  const double noisy = mean(s.report.f1_by_seed("clean-only", "noisy-B"));
  const auto ours = s.report.f1_by_seed("ours", "noisy-B");
  const auto naive = s.report.f1_by_seed("naive-merge", "noisy-B");
  const double recovered = (mean(ours) - noisy) / (clean - noisy);
  const std::size_t beat = wins(ours, naive, true);
  const bool pass = clean > noisy && recovered >= 0.5 && beat >= 4 && s.seconds < 900.0;
  return {pass, format("recovered %.1f%% of the gap, beats naive-merge in %.0f/%.0f seeds",
                       100.0 * recovered, beat, ours.size())};
}

Outcome ablation_directions(const AblationSummary& s) {
  const auto ours = s.report.f1_by_seed("ours", "noisy-B");
  const std::size_t vs_mining =
      wins(ours, s.report.f1_by_seed("ours-no-mining", "noisy-B"), false);
  const std::size_t vs_stability =
      wins(ours, s.report.f1_by_seed("ours-no-stability", "noisy-B"), false);
  return {vs_mining >= 4 && vs_stability >= 4,
          format("ours >= no-mining in %.0f/5 seeds, ours >= no-stability in %.0f/5",
                 vs_mining, vs_stability)};
}

Outcome sweep_trend(const Benchmark& bench, const AblationConfig& ablation) {
  TrainConfig config = ablation.train;
  config.seed = 1;
  config.epochs = ablation.clean_epochs;
  config.lr = ablation.clean_lr;
  const TrainResult clean = train_clean(bench.train, config);
  std::vector<double> rates;
  for (int i = 0; i <= 8; ++i) rates.push_back(0.05 * i);
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const SweepCurve curve = noise_sweep(clean.model.params, bench.test, rates, seeds);
  std::vector<double> f1;
  for (const SweepPoint& p : curve.points) f1.push_back(p.f1);
  const double rho = testing::reference_spearman(rates, f1);
  return {rho <= -0.8, format("Spearman %.3f, F1 %.4f at rate 0 to %.4f at rate 0.4",
                              rho, f1.front(), f1.back())};
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::map<std::string, std::string> digest_tree(const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    out[std::filesystem::relative(entry.path(), root).string()] =
        sha256_hex(read_file(entry.path()));
  }
  return out;
}

Outcome determinism() {
  testing::TempDir dir;
  std::string failure;
  std::vector<std::map<std::string, std::string>> runs;
  for (int run = 0; run < 2; ++run) {
    const auto work = dir / "run";
    std::filesystem::remove_all(work);
    std::filesystem::create_directories(work);
    if (testing::run_pipeline(work, "2", &failure).empty()) return {false, failure};
    runs.push_back(digest_tree(work));
  }
  std::size_t same = 0;
  for (const auto& [file, digest] : runs[0]) {
    auto it = runs[1].find(file);
    same += it != runs[1].end() && it->second == digest;
  }
  const bool pass = same == runs[0].size() && runs[0].size() == runs[1].size();
  return {pass, format("%.0f/%.0f artifacts have identical SHA-256 digests", same,
                       runs[0].size())};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 when the criterion has no runtime bound
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace ocrobust

int main() {
  using namespace ocrobust;
  using Clock = std::chrono::steady_clock;
  auto seconds_since = [](Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  const Benchmark bench = generate_benchmark();
  const AblationConfig ablation;
  AblationSummary summary;
  bool ablation_ran = false;
  auto ensure_ablation = [&] {
    if (ablation_ran) return;
    const auto start = Clock::now();
    const AblationInputs inputs{&bench.train, &bench.parallel,
                                {{"clean", bench.test}, bench.noisy_tests[0],
                                 bench.noisy_tests[1]}};
    summary.report = ablation_report(inputs, ablation);
    summary.seconds = seconds_since(start);
    ablation_ran = true;
    std::printf("ablation: 6 variants x 5 seeds in %.1f s\n%s", summary.seconds,
                summary.report.to_table().c_str());
  };

  const std::vector<Criterion> criteria = {
      {1, "alignment oracle", 5, alignment_oracle},
      {2, "confusion fidelity", 10, [&] { return confusion_fidelity(bench); }},
      {3, "gradient check", 30, gradient_check},
      {4, "framework collapse", 0, [&] { return framework_collapse(bench); }},
      {5, "mining exactness", 0, [&] { return mining_exactness(bench); }},
      {6, "degradation", 300, [&] { ensure_ablation(); return degradation(summary); }},
      {7, "robust gain", 900, [&] { ensure_ablation(); return robust_gain(summary); }},
      {8, "ablation directions", 0,
       [&] { ensure_ablation(); return ablation_directions(summary); }},
      {9, "sweep trend", 300, [&] { return sweep_trend(bench, ablation); }},
      {10, "determinism", 0, determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    double elapsed = seconds_since(start);
    // The shared ablation run counts toward criteria 6 and 7.
    if (c.id == 6 || c.id == 7) elapsed = std::max(elapsed, summary.seconds);
    const bool in_time = c.limit_seconds == 0 || elapsed < c.limit_seconds;
    const bool pass = outcome.pass && in_time;
    failures += !pass;
    std::printf("%s [%d] %s: %s (%.2f s", pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), elapsed);
    if (c.limit_seconds > 0) std::printf(", limit %.0f s", c.limit_seconds);
    std::printf(")\n");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
