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

#ifndef OCROBUST_CHANNELS_H_
#define OCROBUST_CHANNELS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ocrobust/classifier.h"
#include "ocrobust/confusion.h"
#include "ocrobust/corpus.h"
#include "ocrobust/rng.h"

namespace ocrobust {

// Maps a clean sentence to a noisy copy. Implementations are immutable after
// construction and deterministic in (configuration, seed, sentence id, copy,
// sentence); `copy` selects an independent draw for the same sentence. The
// output keeps the input's id and label.
class NoiseChannel {
 public:
  virtual ~NoiseChannel() = default;

  virtual std::string tag() const = 0;
  virtual Sentence inject(const Sentence& x, std::uint64_t copy = 0) const = 0;
};

// Draws one outcome from `dist` using exactly one uniform from `rng`. Entries
// with zero mass are never returned.
const Token& sample_outcome(const Distribution& dist, Rng& rng);

class IdentityChannel final : public NoiseChannel {
 public:
  std::string tag() const override { return "identity"; }
  Sentence inject(const Sentence& x, std::uint64_t copy = 0) const override;
};

// Extends x with ε slots (before the first token and after every token),
// resamples every slot independently from its matrix row, then drops ε.
class RuleChannel final : public NoiseChannel {
 public:
  RuleChannel(ConfusionMatrix matrix, std::uint64_t seed)
      : matrix_(std::move(matrix)), seed_(seed) {}

  std::string tag() const override { return "rule"; }
  Sentence inject(const Sentence& x, std::uint64_t copy = 0) const override;

  const ConfusionMatrix& matrix() const { return matrix_; }

 private:
  ConfusionMatrix matrix_;
  std::uint64_t seed_;
};

enum class AttackMode { kArgmax, kSample };

struct AttackConfig {
  // Unset means max(1, ceil(0.1 * length)).
  std::optional<std::size_t> max_edits;
  AttackMode mode = AttackMode::kArgmax;
  std::uint64_t seed = 0;
};

struct PositionImportance {
  std::size_t position;
  double importance;
};

// Greedy weak-spot attack: rank positions by how much zeroing their embedding
// lowers the probability of the true label, then substitute confusable tokens
// (off-diagonal, non-ε outcomes of the matrix row) in that order.
class AttackChannel final : public NoiseChannel {
 public:
  AttackChannel(ConfusionMatrix matrix,
                std::shared_ptr<const Classifier> scorer, AttackConfig config);

  std::string tag() const override { return "attack"; }
  Sentence inject(const Sentence& x, std::uint64_t copy = 0) const override;

  // Sorted by importance descending, ties by position ascending. The true
  // label is the sentence label, or the scorer's prediction when unlabelled.
  std::vector<PositionImportance> rank(const Sentence& x) const;

  // Substitution candidates for `w`, sorted by token.
  Distribution confusables(const Token& w) const;

  static std::size_t default_max_edits(std::size_t length);

 private:
  ConfusionMatrix matrix_;
  std::shared_ptr<const Classifier> scorer_;
  AttackConfig config_;
};

// (clean token, previously emitted noisy token) -> outcome counts. The
// previous token is kEpsilon at the start of a sentence.
using ContextKey = std::pair<Token, Token>;
using BigramCounts = std::map<ContextKey, std::map<Token, std::uint64_t>>;

// Left-to-right channel whose per-slot distribution is
// lambda * P(w' | w, previous output) + (1 - lambda) * P(w' | w), backing off
// to the unigram row when the context was never observed. Captures span
// errors where one misread makes the next one likely.
class ContextChannel final : public NoiseChannel {
 public:
  ContextChannel(ConfusionMatrix unigram, BigramCounts bigram_counts,
                 double lambda, std::uint64_t seed);

  std::string tag() const override { return "context"; }
  Sentence inject(const Sentence& x, std::uint64_t copy = 0) const override;

  Distribution distribution(const Token& w, const Token& previous) const;

  const ConfusionMatrix& unigram() const { return unigram_; }
  const BigramCounts& bigram_counts() const { return bigram_counts_; }
  double lambda() const { return lambda_; }

 private:
  ConfusionMatrix unigram_;
  BigramCounts bigram_counts_;
  double lambda_;
  std::uint64_t seed_;
};

// Aligns the pairs and counts every slot outcome conditioned on the clean
// token and the previously emitted noisy token. The unigram part is exactly
// build_confusion(pairs, floor).
ContextChannel fit_context_channel(const std::vector<ParallelPair>& pairs,
                                   double lambda, std::uint64_t seed,
                                   double floor = 0.0);

BigramCounts count_context_events(const std::vector<ParallelPair>& pairs);

// Relative weights of the three random edit kinds.
struct EditMix {
  double insert = 1.0;
  double remove = 1.0;
  double replace = 1.0;
};

struct RandomEditStats {
  std::size_t positions = 0;
  std::size_t inserts = 0;
  std::size_t deletes = 0;
  std::size_t replaces = 0;

  std::size_t edited() const { return inserts + deletes + replaces; }
};

// Selects each position with probability `rate` and applies an insert (after
// the token), delete or replace. Replacement and inserted tokens are uniform
// over the vocabulary; a replacement never reproduces the original token
// when another choice exists.
class RandomChannel final : public NoiseChannel {
 public:
  RandomChannel(double rate, std::vector<Token> vocab, std::uint64_t seed,
                EditMix mix = {});

  std::string tag() const override { return "random"; }
  Sentence inject(const Sentence& x, std::uint64_t copy = 0) const override;
  // Adds this call's edit counts to `*stats` when non-null.
  Sentence inject(const Sentence& x, std::uint64_t copy,
                  RandomEditStats* stats) const;

  double rate() const { return rate_; }

 private:
  double rate_;
  std::vector<Token> vocab_;
  std::uint64_t seed_;
  EditMix mix_;
};

// Serves noisy copies produced by an external generator, keyed by the clean
// text. Copy k of a sentence with n recorded versions uses version k mod n.
class ExternalChannel final : public NoiseChannel {
 public:
  explicit ExternalChannel(const std::vector<ParallelPair>& pairs);

  std::string tag() const override { return "external"; }
  Sentence inject(const Sentence& x, std::uint64_t copy = 0) const override;

 private:
  std::map<std::string, std::vector<std::vector<Token>>> versions_;
};

// Injects every sentence (copy `copy`) on up to `workers` threads. The output
// does not depend on the worker count.
std::vector<Sentence> inject_all(const NoiseChannel& channel,
                                 std::span<const Sentence> sentences,
                                 std::uint64_t copy = 0, unsigned workers = 1);

}  // namespace ocrobust

#endif  // OCROBUST_CHANNELS_H_
