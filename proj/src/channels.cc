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

#include "ocrobust/channels.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "ocrobust/align.h"
#include "ocrobust/error.h"

namespace ocrobust {
namespace {

// Samples the outcome of `w` under `matrix`; unseen tokens map to themselves.
// Consumes one uniform either way so rule and context channels stay aligned
// on the same random stream.
Token sample_row(const ConfusionMatrix& matrix, const Token& w, Rng& rng) {
  const auto& rows = matrix.rows();
  if (auto it = rows.find(w); it != rows.end()) {
    return sample_outcome(it->second, rng);
  }
  rng.uniform();
  return w;
}

double true_label_prob(const ClassifierParams& params, const Sentence& x,
                       std::optional<std::size_t> mask, int label) {
  const double p = forward(params, x, mask).prob;
  return label == 1 ? p : 1.0 - p;
}

}  // namespace

const Token& sample_outcome(const Distribution& dist, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  const Token* last = nullptr;
  for (const auto& [token, p] : dist) {
    if (p <= 0.0) continue;
    cumulative += p;
    last = &token;
    if (u < cumulative) return token;
  }
  if (last == nullptr) throw InvalidArgument("distribution has no mass");
  // Rounding left the cumulative sum just under 1.
  return *last;
}

Sentence IdentityChannel::inject(const Sentence& x, std::uint64_t) const {
  return x;
}

Sentence RuleChannel::inject(const Sentence& x, std::uint64_t copy) const {
  Rng rng = stream(seed_, {static_cast<std::uint64_t>(x.id), copy});
  Sentence out;
  out.id = x.id;
  out.label = x.label;
  for (std::size_t i = 0; i <= x.size(); ++i) {
    Token slot = sample_row(matrix_, kEpsilon, rng);
    if (!is_epsilon(slot)) out.tokens.push_back(std::move(slot));
    if (i == x.size()) break;
    Token t = sample_row(matrix_, x.tokens[i], rng);
    if (!is_epsilon(t)) out.tokens.push_back(std::move(t));
  }
  return out;
}

AttackChannel::AttackChannel(ConfusionMatrix matrix,
                             std::shared_ptr<const Classifier> scorer,
                             AttackConfig config)
    : matrix_(std::move(matrix)),
      scorer_(std::move(scorer)),
      config_(config) {
  if (!scorer_) throw InvalidArgument("attack channel needs a scorer");
  if (config_.max_edits && *config_.max_edits == 0) {
    throw InvalidArgument("max_edits must be positive");
  }
}

std::size_t AttackChannel::default_max_edits(std::size_t length) {
  const auto tenth = static_cast<std::size_t>(
      std::ceil(0.1 * static_cast<double>(length) - 1e-12));
  return std::max<std::size_t>(1, tenth);
}

std::vector<PositionImportance> AttackChannel::rank(const Sentence& x) const {
  if (!scorer_->trained) throw InvalidArgument("attack scorer is not trained");
  if (x.empty()) throw InvalidArgument("cannot rank an empty sentence");
  const ClassifierParams& params = scorer_->params;
  const int label = x.label.value_or(predict(params, x));
  const double base = true_label_prob(params, x, std::nullopt, label);
  std::vector<PositionImportance> ranked;
  ranked.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ranked.push_back({i, base - true_label_prob(params, x, i, label)});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const PositionImportance& a, const PositionImportance& b) {
                     return a.importance > b.importance;
                   });
  return ranked;
}

Distribution AttackChannel::confusables(const Token& w) const {
  Distribution out;
  if (!matrix_.has_row(w)) return out;
  for (const auto& [token, p] : matrix_.rows().at(w)) {
    if (p > 0.0 && token != w && !is_epsilon(token)) out.emplace_back(token, p);
  }
  return out;
}

Sentence AttackChannel::inject(const Sentence& x, std::uint64_t copy) const {
  if (x.empty()) return x;
  Sentence out = x;
  const std::size_t budget =
      config_.max_edits.value_or(default_max_edits(x.size()));
  Rng rng = stream(config_.seed, {static_cast<std::uint64_t>(x.id), copy});
  std::size_t edits = 0;
  for (const PositionImportance& pos : rank(x)) {
    if (edits == budget) break;
    const Distribution candidates = confusables(x.tokens[pos.position]);
    if (candidates.empty()) continue;
    if (config_.mode == AttackMode::kArgmax) {
      const auto best = std::max_element(
          candidates.begin(), candidates.end(),
          [](const auto& a, const auto& b) { return a.second < b.second; });
      out.tokens[pos.position] = best->first;
    } else {
      out.tokens[pos.position] = sample_outcome(candidates, rng);
    }
    ++edits;
  }
  return out;
}

ContextChannel::ContextChannel(ConfusionMatrix unigram,
                               BigramCounts bigram_counts, double lambda,
                               std::uint64_t seed)
    : unigram_(std::move(unigram)),
      bigram_counts_(std::move(bigram_counts)),
      lambda_(lambda),
      seed_(seed) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidArgument("lambda must be in [0, 1]");
  }
}

Distribution ContextChannel::distribution(const Token& w,
                                          const Token& previous) const {
  auto it = bigram_counts_.find({w, previous});
  if (lambda_ == 0.0 || it == bigram_counts_.end()) return unigram_.row(w);
  double total = 0.0;
  for (const auto& [_, c] : it->second) total += static_cast<double>(c);
  std::map<Token, double> mixed;
  for (const auto& [token, p] : unigram_.row(w)) {
    mixed[token] += (1.0 - lambda_) * p;
  }
  for (const auto& [token, c] : it->second) {
    mixed[token] += lambda_ * static_cast<double>(c) / total;
  }
  Distribution out;
  for (const auto& [token, p] : mixed) {
    if (p > 0.0) out.emplace_back(token, p);
  }
  return out;
}

Sentence ContextChannel::inject(const Sentence& x, std::uint64_t copy) const {
  Rng rng = stream(seed_, {static_cast<std::uint64_t>(x.id), copy});
  Sentence out;
  out.id = x.id;
  out.label = x.label;
  Token previous = kEpsilon;
  auto emit = [&](const Token& w) {
    const Distribution dist = distribution(w, previous);
    const Token& t = sample_outcome(dist, rng);
    if (is_epsilon(t)) return;
    out.tokens.push_back(t);
    previous = t;
  };
  for (std::size_t i = 0; i <= x.size(); ++i) {
    emit(kEpsilon);
    if (i == x.size()) break;
    emit(x.tokens[i]);
  }
  return out;
}

BigramCounts count_context_events(const std::vector<ParallelPair>& pairs) {
  BigramCounts counts;
  for (const ParallelPair& pair : pairs) {
    const auto& clean = pair.clean.tokens;
    const AlignmentPath path = levenshtein_align(pair.clean, pair.noisy);
    Token previous = kEpsilon;
    std::size_t k = 0;
    for (std::size_t i = 0; i <= clean.size(); ++i) {
      bool inserted = false;
      while (k < path.ops.size() && path.ops[k].kind == EditKind::kInsert) {
        ++counts[{kEpsilon, previous}][path.ops[k].target];
        previous = path.ops[k].target;
        inserted = true;
        ++k;
      }
      if (!inserted) ++counts[{kEpsilon, previous}][kEpsilon];
      if (i == clean.size()) break;
      const EditOp& op = path.ops[k++];
      ++counts[{clean[i], previous}][op.target];
      if (op.kind != EditKind::kDelete) previous = op.target;
    }
  }
  return counts;
}

ContextChannel fit_context_channel(const std::vector<ParallelPair>& pairs,
                                   double lambda, std::uint64_t seed,
                                   double floor) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidArgument("lambda must be in [0, 1]");
  }
  return ContextChannel(build_confusion(pairs, floor),
                        count_context_events(pairs), lambda, seed);
}

RandomChannel::RandomChannel(double rate, std::vector<Token> vocab,
                             std::uint64_t seed, EditMix mix)
    : rate_(rate), seed_(seed), mix_(mix) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw InvalidArgument("noise rate must be in [0, 1]");
  }
  std::set<Token> unique;
  for (Token& t : vocab) {
    if (!is_epsilon(t)) unique.insert(std::move(t));
  }
  vocab_.assign(unique.begin(), unique.end());
  if (rate > 0.0 && vocab_.empty()) {
    throw InvalidArgument("random channel needs a non-empty vocabulary");
  }
  if (mix_.insert < 0 || mix_.remove < 0 || mix_.replace < 0 ||
      mix_.insert + mix_.remove + mix_.replace <= 0) {
    throw InvalidArgument("edit mix weights must be non-negative");
  }
}

Sentence RandomChannel::inject(const Sentence& x, std::uint64_t copy) const {
  return inject(x, copy, nullptr);
}

Sentence RandomChannel::inject(const Sentence& x, std::uint64_t copy,
                               RandomEditStats* stats) const {
  Rng rng = stream(seed_, {static_cast<std::uint64_t>(x.id), copy});
  Sentence out;
  out.id = x.id;
  out.label = x.label;
  RandomEditStats local;
  const double total = mix_.insert + mix_.remove + mix_.replace;
  for (const Token& w : x.tokens) {
    ++local.positions;
    if (!rng.bernoulli(rate_)) {
      out.tokens.push_back(w);
      continue;
    }
    const double u = rng.uniform() * total;
    if (u < mix_.insert) {
      out.tokens.push_back(w);
      out.tokens.push_back(vocab_[rng.below(vocab_.size())]);
      ++local.inserts;
    } else if (u < mix_.insert + mix_.remove) {
      ++local.deletes;
    } else {
      // Uniform over the vocabulary minus w.
      const auto self = std::lower_bound(vocab_.begin(), vocab_.end(), w);
      const bool known = self != vocab_.end() && *self == w;
      const std::size_t choices = vocab_.size() - (known ? 1 : 0);
      if (choices == 0) {
        out.tokens.push_back(w);
      } else {
        std::size_t pick = rng.below(choices);
        if (known && pick >= static_cast<std::size_t>(self - vocab_.begin())) {
          ++pick;
        }
        out.tokens.push_back(vocab_[pick]);
      }
      ++local.replaces;
    }
  }
  if (stats != nullptr) {
    stats->positions += local.positions;
    stats->inserts += local.inserts;
    stats->deletes += local.deletes;
    stats->replaces += local.replaces;
  }
  return out;
}

ExternalChannel::ExternalChannel(const std::vector<ParallelPair>& pairs) {
  for (const ParallelPair& p : pairs) {
    versions_[detokenize(p.clean)].push_back(p.noisy.tokens);
  }
}

Sentence ExternalChannel::inject(const Sentence& x, std::uint64_t copy) const {
  auto it = versions_.find(detokenize(x));
  if (it == versions_.end()) {
    throw DataError("external noisy file has no entry for sentence id " +
                    std::to_string(x.id));
  }
  Sentence out;
  out.id = x.id;
  out.label = x.label;
  out.tokens = it->second[copy % it->second.size()];
  return out;
}

std::vector<Sentence> inject_all(const NoiseChannel& channel,
                                 std::span<const Sentence> sentences,
                                 std::uint64_t copy, unsigned workers) {
  std::vector<Sentence> out(sentences.size());
  workers = std::max(1u, std::min<unsigned>(
                             workers, static_cast<unsigned>(sentences.size())));
  auto run = [&](unsigned w) {
    const std::size_t begin = sentences.size() * w / workers;
    const std::size_t end = sentences.size() * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = channel.inject(sentences[i], copy);
    }
  };
  if (workers == 1) {
    run(0);
    return out;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        run(w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace ocrobust
