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

#include "ocrobust/align.h"

#include <algorithm>

#include "ocrobust/error.h"

namespace ocrobust {

const char* edit_kind_name(EditKind kind) {
  switch (kind) {
    case EditKind::kMatch:
      return "match";
    case EditKind::kSubstitute:
      return "substitute";
    case EditKind::kDelete:
      return "delete";
    case EditKind::kInsert:
      return "insert";
  }
  return "?";
}

AlignmentPath levenshtein_align(std::span<const Token> clean,
                                std::span<const Token> noisy) {
  const std::size_t n = clean.size();
  const std::size_t m = noisy.size();
  const std::size_t width = m + 1;
  std::vector<std::size_t> dp((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& {
    return dp[i * width + j];
  };
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    at(i, 0) = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag =
          at(i - 1, j - 1) + (clean[i - 1] == noisy[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  AlignmentPath path;
  path.cost = at(n, m);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = clean[i - 1] == noisy[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        path.ops.push_back({same ? EditKind::kMatch : EditKind::kSubstitute,
                            clean[i - 1], noisy[j - 1]});
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      path.ops.push_back({EditKind::kDelete, clean[i - 1], kEpsilon});
      --i;
    } else {
      path.ops.push_back({EditKind::kInsert, kEpsilon, noisy[j - 1]});
      --j;
    }
  }
  std::reverse(path.ops.begin(), path.ops.end());
  return path;
}

AlignmentPath levenshtein_align(const Sentence& clean, const Sentence& noisy) {
  return levenshtein_align(std::span<const Token>(clean.tokens),
                           std::span<const Token>(noisy.tokens));
}

std::vector<Token> apply_alignment(std::span<const Token> clean,
                                   const AlignmentPath& path) {
  std::vector<Token> out;
  std::size_t pos = 0;
  for (const EditOp& op : path.ops) {
    if (op.kind == EditKind::kInsert) {
      out.push_back(op.target);
      continue;
    }
    if (pos >= clean.size() || clean[pos] != op.source) {
      throw InvalidArgument("alignment does not match the clean sequence");
    }
    ++pos;
    if (op.kind != EditKind::kDelete) out.push_back(op.target);
  }
  if (pos != clean.size()) {
    throw InvalidArgument("alignment does not consume the clean sequence");
  }
  return out;
}

double noise_rate(const std::vector<ParallelPair>& pairs) {
  if (pairs.empty()) throw InvalidArgument("no parallel data");
  std::size_t edits = 0;
  std::size_t tokens = 0;
  for (const ParallelPair& p : pairs) {
    edits += levenshtein_align(p.clean, p.noisy).cost;
    tokens += p.clean.size();
  }
  if (tokens == 0) throw InvalidArgument("parallel data has no clean tokens");
  return static_cast<double>(edits) / static_cast<double>(tokens);
}

}  // namespace ocrobust
