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

#ifndef OCROBUST_CLASSIFIER_H_
#define OCROBUST_CLASSIFIER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocrobust/corpus.h"

namespace ocrobust {

struct ClassifierDims {
  std::size_t embed = 32;
  std::size_t hidden = 32;

  bool operator==(const ClassifierDims&) const = default;
};

// Trainable arrays. Also used as the gradient container.
struct ParamArrays {
  std::vector<double> embedding;  // rows x embed, row 0 is UNK
  std::vector<double> w1;         // hidden x embed
  std::vector<double> b1;         // hidden
  std::vector<double> w2;         // hidden
  double b2 = 0.0;

  // Zero-filled arrays of matching shape.
  ParamArrays zeros_like() const;

  // Every array in a fixed order (embedding, w1, b1, w2, b2).
  std::vector<std::span<double>> blocks();
  std::vector<std::span<const double>> blocks() const;

  bool all_finite() const;
  bool operator==(const ParamArrays&) const = default;
};

struct ClassifierParams {
  ClassifierDims dims;
  std::vector<Token> vocab;  // index i + 1 in the embedding table
  std::map<Token, std::size_t> index;
  ParamArrays arrays;

  std::size_t rows() const { return vocab.size() + 1; }
  // 0 (UNK) for tokens outside the vocabulary.
  std::size_t lookup(const Token& t) const;

  bool operator==(const ClassifierParams& other) const {
    return dims == other.dims && vocab == other.vocab &&
           arrays == other.arrays;
  }
};

// Sorted, de-duplicated token set of a dataset.
std::vector<Token> build_vocabulary(const Dataset& dataset);

// Embeddings and W1 uniform in +-1/sqrt(embed); w2 and biases zero.
ClassifierParams init_params(std::vector<Token> vocab, ClassifierDims dims,
                             std::uint64_t seed);

// All-zero parameters over `vocab`.
ClassifierParams zero_params(std::vector<Token> vocab, ClassifierDims dims);

// A parameter set plus whether it has been fitted. Attack scoring refuses an
// untrained model.
struct Classifier {
  ClassifierParams params;
  bool trained = false;
};

struct ForwardResult {
  std::vector<double> pooled;          // embed
  std::vector<double> representation;  // hidden, e = tanh(W1 pooled + b1)
  double logit = 0.0;
  double prob = 0.5;
};

// `mask` zeroes one position's embedding before pooling; the pooling
// denominator stays the sentence length. Pooling sums per vocabulary row in
// index order, so the result is exactly invariant to token order.
ForwardResult forward(const ClassifierParams& params,
                      std::span<const Token> tokens,
                      std::optional<std::size_t> mask = std::nullopt);
ForwardResult forward(const ClassifierParams& params, const Sentence& x,
                      std::optional<std::size_t> mask = std::nullopt);

// 1 iff p >= threshold.
int predict(const ClassifierParams& params, const Sentence& x,
            double threshold = 0.5);

enum class StabilityOn {
  kRepresentation,  // 1 - cos(e(x), e(x~))
  kOutput,          // (p(x) - p(x~))^2
};

std::string_view stability_on_name(StabilityOn s);
StabilityOn parse_stability_on(std::string_view name);

// One optimisation example. `noisy` is null for clean-only samples.
struct TrainingSample {
  const Sentence* clean = nullptr;
  const Sentence* noisy = nullptr;
  int label = 0;
};

struct LossBreakdown {
  double total = 0.0;     // alpha * standard + (1 - alpha) * similarity
  double standard = 0.0;  // batch mean BCE term
  double similarity = 0.0;
};

struct LossAndGrad {
  LossBreakdown loss;
  ParamArrays grad;
};

// Representations with norm below this have no defined cosine; their
// stability contribution is zero.
inline constexpr double kMinNorm = 1e-12;

// 1 - cos(a, b), or 0 when either vector is (numerically) zero.
double cosine_distance(std::span<const double> a, std::span<const double> b);

// Per sample: standard = mean BCE over x and (if present) x~ against the
// shared label; similarity = stability distance when x~ is present, else 0.
// Loss and gradient are averaged over the batch. alpha == 1 skips the
// stability path entirely.
LossAndGrad loss_and_grad(const ClassifierParams& params,
                          std::span<const TrainingSample> batch, double alpha,
                          StabilityOn stability_on = StabilityOn::kRepresentation);

// params -= lr * grad. Throws before mutating if lr <= 0 or grad has a
// non-finite entry.
void sgd_step(ClassifierParams& params, const ParamArrays& grad, double lr);

// Checkpoint JSON: dims, vocab in index order (UNK row implicit at 0), and
// flat parameter arrays as decimal strings with round-trip precision.
std::string checkpoint_to_json(const ClassifierParams& params);
ClassifierParams checkpoint_from_json(std::string_view text);
void save_checkpoint(const ClassifierParams& params,
                     const std::filesystem::path& path);
Classifier load_checkpoint(const std::filesystem::path& path);

}  // namespace ocrobust

#endif  // OCROBUST_CLASSIFIER_H_
