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

#ifndef OCROBUST_CONFUSION_H_
#define OCROBUST_CONFUSION_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ocrobust/align.h"
#include "ocrobust/corpus.h"

namespace ocrobust {

// Outcome distribution of one matrix row, sorted by token, zero entries
// omitted.
using Distribution = std::vector<std::pair<Token, double>>;

// Raw aligned-event counts. Merging is plain addition, so counts gathered by
// any number of workers combine to the same totals.
struct ConfusionCounts {
  // events[w][w'] for w, w' in vocab, with kEpsilon standing in for deletes
  // (w' = ε) and inserts (w = ε). The ε -> ε count is derived from
  // epsilon_slots.
  std::map<Token, std::map<Token, std::uint64_t>> events;
  // One slot before the first token and one after every token.
  std::uint64_t epsilon_slots = 0;

  void add(std::span<const Token> clean, const AlignmentPath& path);
  void add(const ParallelPair& pair);
  void merge(const ConfusionCounts& other);

  // Count of ε -> ε, i.e. slots in which nothing was inserted.
  std::uint64_t epsilon_kept() const;
};

class ConfusionMatrix {
 public:
  static constexpr int kVersion = 1;

  ConfusionMatrix() = default;

  // Normalizes each row and mixes `floor` mass onto the identity outcome.
  // Probabilities are rounded to 12 significant digits so that the JSON form
  // reproduces them exactly.
  static ConfusionMatrix from_counts(ConfusionCounts counts, double floor);

  // Builds a matrix directly from rows (fixtures, hand-built channels). Each
  // row is normalized; tokens named only as outcomes join the vocabulary.
  static ConfusionMatrix from_rows(
      const std::map<Token, std::map<Token, double>>& rows);

  // Sorted; kEpsilon is always present and sorts first.
  const std::vector<Token>& vocab() const { return vocab_; }
  std::size_t eps_index() const { return 0; }

  bool has_row(const Token& w) const { return rows_.count(w) != 0; }

  // The stored row, or the identity distribution for unseen tokens.
  Distribution row(const Token& w) const;
  double prob(const Token& w, const Token& outcome) const;

  // Total P(w | ε) over w != ε.
  double insertion_probability() const;

  const std::map<Token, Distribution>& rows() const { return rows_; }
  const ConfusionCounts& counts() const { return counts_; }
  double floor() const { return floor_; }

  std::string to_json() const;
  static ConfusionMatrix from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static ConfusionMatrix load(const std::filesystem::path& path);

 private:
  void add_to_vocab(const Token& t);
  void finalize_vocab();

  std::vector<Token> vocab_{kEpsilon};
  std::map<Token, Distribution> rows_;
  ConfusionCounts counts_;
  double floor_ = 0.0;
};

// Aligns every pair and estimates P(w'|w), including insertion and deletion
// through ε. `workers` > 1 splits alignment across threads; the result does
// not depend on the worker count.
ConfusionMatrix build_confusion(const std::vector<ParallelPair>& pairs,
                                double floor = 0.0, unsigned workers = 1);

ConfusionCounts count_events(const std::vector<ParallelPair>& pairs,
                             unsigned workers = 1);

// Rounds to 12 significant digits (the serialized precision).
double round_probability(double p);

}  // namespace ocrobust

#endif  // OCROBUST_CONFUSION_H_
