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

#ifndef OCROBUST_ALIGN_H_
#define OCROBUST_ALIGN_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ocrobust/corpus.h"

namespace ocrobust {

enum class EditKind { kMatch, kSubstitute, kDelete, kInsert };

const char* edit_kind_name(EditKind kind);

// source is kEpsilon for inserts, target is kEpsilon for deletes.
struct EditOp {
  EditKind kind;
  Token source;
  Token target;

  bool operator==(const EditOp&) const = default;
};

struct AlignmentPath {
  std::vector<EditOp> ops;
  std::size_t cost = 0;
};

// Unit-cost Levenshtein alignment. Among minimal paths the backtrace prefers
// match/substitute, then delete, then insert, so the result is unique.
AlignmentPath levenshtein_align(std::span<const Token> clean,
                                std::span<const Token> noisy);
AlignmentPath levenshtein_align(const Sentence& clean, const Sentence& noisy);

// Replays ops against `clean`. Throws InvalidArgument if the path does not
// fit the sequence.
std::vector<Token> apply_alignment(std::span<const Token> clean,
                                   const AlignmentPath& path);

// Total non-match alignment ops over total clean tokens.
double noise_rate(const std::vector<ParallelPair>& pairs);

}  // namespace ocrobust

#endif  // OCROBUST_ALIGN_H_
