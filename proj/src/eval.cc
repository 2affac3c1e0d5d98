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

#include "ocrobust/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <numeric>

#include "ocrobust/confusion.h"
#include "ocrobust/error.h"
#include "ocrobust/rng.h"

namespace ocrobust {
namespace {

constexpr std::uint64_t kRuleStream = 1;
constexpr std::uint64_t kAttackStream = 2;
constexpr std::uint64_t kContextStream = 3;

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::string fixed(double v, int width, int precision) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%*.*f", width, precision, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

Metrics Metrics::from_counts(std::size_t tp, std::size_t fp, std::size_t fn,
                             std::size_t tn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  m.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

Metrics evaluate(const ClassifierParams& params, const Dataset& dataset,
                 double threshold) {
  if (dataset.sentences.empty()) {
    throw InvalidArgument("cannot evaluate on an empty dataset");
  }
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (const Sentence& s : dataset.sentences) {
    if (!s.label) {
      throw InvalidArgument("evaluation sentence " + std::to_string(s.id) +
                            " has no label");
    }
    const int predicted = predict(params, s, threshold);
    if (predicted == 1) {
      (*s.label == 1 ? tp : fp) += 1;
    } else {
      (*s.label == 1 ? fn : tn) += 1;
    }
  }
  return Metrics::from_counts(tp, fp, fn, tn);
}

Dataset noisy_testset(const Dataset& dataset, const NoiseChannel& channel,
                      std::uint64_t copy, unsigned workers) {
  Dataset out;
  out.name = dataset.name + "+" + channel.tag();
  out.sentences = inject_all(channel, dataset.sentences, copy, workers);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.sentences[i].id = dataset.sentences[i].id;
    out.sentences[i].label = dataset.sentences[i].label;
  }
  return out;
}

std::string SweepCurve::to_jsonl() const {
  std::string out;
  for (const SweepPoint& p : points) {
    nlohmann::ordered_json j;
    j["rate"] = p.rate;
    j["precision"] = p.precision;
    j["recall"] = p.recall;
    j["f1"] = p.f1;
    j["seeds"] = p.per_seed.size();
    out += j.dump();
    out += '\n';
  }
  return out;
}

SweepCurve noise_sweep(const ClassifierParams& params, const Dataset& dataset,
                       std::span<const double> rates,
                       std::span<const std::uint64_t> seeds,
                       unsigned workers) {
  if (seeds.empty()) throw InvalidArgument("noise sweep needs at least one seed");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] >= 0.0 && rates[i] <= 1.0)) {
      throw InvalidArgument("sweep rates must lie in [0, 1]");
    }
    if (i > 0 && !(rates[i] > rates[i - 1])) {
      throw InvalidArgument("sweep rates must be strictly increasing");
    }
  }
  const std::vector<Token> vocab = build_vocabulary(dataset);
  SweepCurve curve;
  for (double rate : rates) {
    SweepPoint point;
    point.rate = rate;
    for (std::uint64_t seed : seeds) {
      const RandomChannel channel(rate, vocab, seed);
      const Metrics m =
          evaluate(params, noisy_testset(dataset, channel, 0, workers));
      point.precision += m.precision;
      point.recall += m.recall;
      point.f1 += m.f1;
      point.per_seed.push_back(m);
    }
    const double n = static_cast<double>(seeds.size());
    point.precision /= n;
    point.recall /= n;
    point.f1 /= n;
    curve.points.push_back(std::move(point));
  }
  return curve;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("spearman needs two equal-length series of size >= 2");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kCleanOnly:
      return "clean-only";
    case Variant::kRandom:
      return "random";
    case Variant::kNaiveMerge:
      return "naive-merge";
    case Variant::kOursNoMining:
      return "ours-no-mining";
    case Variant::kOursNoStability:
      return "ours-no-stability";
    case Variant::kOurs:
      return "ours";
  }
  return "?";
}

std::vector<Variant> all_variants() {
  return {Variant::kCleanOnly,    Variant::kRandom,
          Variant::kNaiveMerge,   Variant::kOursNoMining,
          Variant::kOursNoStability, Variant::kOurs};
}

Variant parse_variant(std::string_view name) {
  for (Variant v : all_variants()) {
    if (variant_name(v) == name) return v;
  }
  throw InvalidArgument("unknown variant '" + std::string(name) + "'");
}

TrainConfig benchmark_train_config() {
  TrainConfig c;
  c.alpha = 0.5;
  c.beta = 0.5;
  c.lr = 0.1;
  c.epochs = 20;
  c.stability_on = StabilityOn::kOutput;
  return c;
}

nlohmann::ordered_json AblationConfig::to_json() const {
  nlohmann::ordered_json j = train.to_json();
  j.erase("seed");
  j["clean_epochs"] = clean_epochs;
  j["clean_lr"] = clean_lr;
  j["seeds"] = seeds;
  std::vector<std::string> names;
  for (Variant v : variants) names.emplace_back(variant_name(v));
  j["variants"] = names;
  j["channels"] = channels;
  j["copies_per_channel"] = copies_per_channel;
  j["random_rate"] = random_rate;
  j["context_lambda"] = context_lambda;
  j["confusion_floor"] = confusion_floor;
  return j;
}

AblationConfig AblationConfig::from_json(const nlohmann::json& doc) {
  AblationConfig c;
  c.train = TrainConfig::from_json(doc, c.train);
  try {
    c.clean_epochs = doc.value("clean_epochs", c.clean_epochs);
    c.clean_lr = doc.value("clean_lr", c.clean_lr);
    c.seeds = doc.value("seeds", c.seeds);
    if (doc.contains("variants")) {
      c.variants.clear();
      for (const auto& name : doc["variants"].get<std::vector<std::string>>()) {
        c.variants.push_back(parse_variant(name));
      }
    }
    c.channels = doc.value("channels", c.channels);
    c.copies_per_channel = doc.value("copies_per_channel", c.copies_per_channel);
    c.random_rate = doc.value("random_rate", c.random_rate);
    c.context_lambda = doc.value("context_lambda", c.context_lambda);
    c.confusion_floor = doc.value("confusion_floor", c.confusion_floor);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("ablation config: ") + e.what());
  }
  if (c.seeds.empty()) throw InvalidArgument("ablation needs at least one seed");
  if (c.clean_epochs < 1) throw InvalidArgument("clean_epochs must be >= 1");
  if (!(c.clean_lr > 0.0)) throw InvalidArgument("clean_lr must be positive");
  return c;
}

std::vector<double> AblationReport::f1_by_seed(std::string_view variant,
                                               std::string_view testset) const {
  std::vector<double> out;
  for (const AblationRow& r : rows) {
    if (r.variant == variant && r.testset == testset) {
      out.push_back(r.metrics.f1);
    }
  }
  return out;
}

std::string AblationReport::to_jsonl() const {
  std::string out;
  for (const AblationRow& r : rows) {
    nlohmann::ordered_json j;
    j["variant"] = r.variant;
    j["testset"] = r.testset;
    j["seed"] = r.seed;
    j["precision"] = r.metrics.precision;
    j["recall"] = r.metrics.recall;
    j["f1"] = r.metrics.f1;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string AblationReport::to_table() const {
  constexpr std::size_t kNameWidth = 19;
  constexpr std::size_t kGroupWidth = 34;
  std::string out = pad("", kNameWidth);
  for (const auto& t : test_sets) out += "| " + pad(t, kGroupWidth - 2);
  out += "\n" + pad("variant", kNameWidth);
  for (std::size_t i = 0; i < test_sets.size(); ++i) {
    out += pad("|     P      R      F1  F1 min-max", kGroupWidth);
  }
  out += "\n" + std::string(kNameWidth + kGroupWidth * test_sets.size(), '-') +
         "\n";
  for (const auto& v : variants) {
    out += pad(v, kNameWidth);
    for (const auto& t : test_sets) {
      double p = 0, r = 0, f = 0, lo = 1, hi = 0;
      std::size_t n = 0;
      for (const AblationRow& row : rows) {
        if (row.variant != v || row.testset != t) continue;
        p += row.metrics.precision;
        r += row.metrics.recall;
        f += row.metrics.f1;
        lo = std::min(lo, row.metrics.f1);
        hi = std::max(hi, row.metrics.f1);
        ++n;
      }
      if (n == 0) {
        out += pad("|", kGroupWidth);
        continue;
      }
      const double k = static_cast<double>(n);
      out += pad("| " + fixed(p / k, 5, 3) + "  " + fixed(r / k, 5, 3) + "  " +
                     fixed(f / k, 5, 3) + "  " + fixed(lo, 5, 3) + "-" +
                     fixed(hi, 5, 3),
                 kGroupWidth);
    }
    out += "\n";
  }
  return out;
}

AblationReport ablation_report(
    const AblationInputs& inputs, const AblationConfig& config,
    const std::function<void(const std::string&)>& progress) {
  if (inputs.train == nullptr || inputs.pairs == nullptr) {
    throw InvalidArgument("ablation needs training data and parallel pairs");
  }
  if (inputs.test_sets.empty()) throw InvalidArgument("ablation needs at least one test set");
  config.train.validate();
  const Dataset& train = *inputs.train;
  AblationReport report;
  for (Variant v : config.variants) {
    report.variants.emplace_back(variant_name(v));
  }
  for (const auto& [name, _] : inputs.test_sets) report.test_sets.push_back(name);

  const bool needs_pool = std::any_of(
      config.variants.begin(), config.variants.end(), [](Variant v) {
        return v == Variant::kNaiveMerge || v == Variant::kOurs ||
               v == Variant::kOursNoMining || v == Variant::kOursNoStability;
      });
  const ConfusionMatrix matrix =
      build_confusion(*inputs.pairs, config.confusion_floor);
  const BigramCounts context_counts = count_context_events(*inputs.pairs);

  for (std::uint64_t seed : config.seeds) {
    TrainConfig clean_config = config.train;
    clean_config.seed = seed;
    clean_config.alpha = 1.0;
    clean_config.epochs = config.clean_epochs;
    clean_config.lr = config.clean_lr;
    auto clean = std::make_shared<const Classifier>(
        train_clean(train, clean_config).model);

    NoisyPool pool;
    if (needs_pool) {
      std::vector<std::unique_ptr<NoiseChannel>> owned;
      for (const std::string& name : config.channels) {
        if (name == "rule") {
          owned.push_back(std::make_unique<RuleChannel>(
              matrix, derive_seed(seed, {kRuleStream})));
        } else if (name == "attack") {
          owned.push_back(std::make_unique<AttackChannel>(
              matrix, clean,
              AttackConfig{std::nullopt, AttackMode::kArgmax,
                           derive_seed(seed, {kAttackStream})}));
        } else if (name == "context") {
          owned.push_back(std::make_unique<ContextChannel>(
              matrix, context_counts, config.context_lambda,
              derive_seed(seed, {kContextStream})));
        } else {
          throw InvalidArgument("unknown channel '" + name + "'");
        }
      }
      std::vector<const NoiseChannel*> channels;
      for (const auto& c : owned) channels.push_back(c.get());
      pool = build_pool(train, channels, config.copies_per_channel,
                        config.workers);
    }

    TrainConfig robust = config.train;
    robust.seed = seed;
    for (Variant v : config.variants) {
      Classifier model;
      switch (v) {
        case Variant::kCleanOnly:
          model = *clean;
          break;
        case Variant::kRandom:
          model = random_augment_train(train, config.random_rate, robust, *clean)
                      .model;
          break;
        case Variant::kNaiveMerge:
          model = naive_merge_train(train, pool, robust, *clean).model;
          break;
        case Variant::kOursNoMining: {
          TrainConfig c = robust;
          c.beta = 1.0;
          model = robust_train(train, pool, c, *clean).model;
          break;
        }
        case Variant::kOursNoStability: {
          TrainConfig c = robust;
          c.alpha = 1.0;
          model = robust_train(train, pool, c, *clean).model;
          break;
        }
        case Variant::kOurs:
          model = robust_train(train, pool, robust, *clean).model;
          break;
      }
      std::string line = std::string(variant_name(v)) + " seed=" +
                         std::to_string(seed);
      for (const auto& [name, test] : inputs.test_sets) {
        const Metrics m = evaluate(model.params, test);
        report.rows.push_back({std::string(variant_name(v)), name, seed, m});
        line += " " + name + ".f1=" + fixed(m.f1, 0, 4);
      }
      if (progress) progress(line);
    }
  }
  return report;
}

}  // namespace ocrobust
