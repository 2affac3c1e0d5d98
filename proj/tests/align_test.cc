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
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "ocrobust/error.h"
#include "ocrobust/rng.h"

namespace ocrobust {
namespace {

using testing::dp_distance;

std::vector<Token> toks(const std::string& s) { return tokenize(s).tokens; }

std::vector<Token> random_tokens(Rng& rng, std::size_t max_len,
                                 std::size_t alphabet) {
  std::vector<Token> out(rng.below(max_len + 1));
  for (Token& t : out) t = std::string(1, static_cast<char>('a' + rng.below(alphabet)));
  return out;
}

TEST_CASE("identity and empty alignments") {
  const auto same = levenshtein_align(toks("abc"), toks("abc"));
  CHECK(same.cost == 0);
  REQUIRE(same.ops.size() == 3);
  for (const EditOp& op : same.ops) CHECK(op.kind == EditKind::kMatch);

  const auto gone = levenshtein_align(toks("abc"), {});
  CHECK(gone.cost == 3);
  for (const EditOp& op : gone.ops) {
    CHECK(op.kind == EditKind::kDelete);
    CHECK(is_epsilon(op.target));
  }

  const auto added = levenshtein_align({}, toks("xy"));
  CHECK(added.cost == 2);
  for (const EditOp& op : added.ops) {
    CHECK(op.kind == EditKind::kInsert);
    CHECK(is_epsilon(op.source));
  }
  CHECK(levenshtein_align(Sentence{}, Sentence{}).ops.empty());
}

TEST_CASE("kitten to sitting costs three") {
  const auto a = toks("kitten");
  const auto b = toks("sitting");
  CHECK(dp_distance(a, b) == 3);
  const auto path = levenshtein_align(a, b);
  CHECK(path.cost == 3);
  CHECK(apply_alignment(a, path) == b);
}

TEST_CASE("backtrace tie-break prefers substitute, then delete") {
  const auto swap = levenshtein_align(toks("ab"), toks("ba"));
  REQUIRE(swap.ops.size() == 2);
  CHECK(swap.ops[0] == EditOp{EditKind::kSubstitute, "a", "b"});
  CHECK(swap.ops[1] == EditOp{EditKind::kSubstitute, "b", "a"});

  const auto drop = levenshtein_align(toks("aa"), toks("a"));
  REQUIRE(drop.ops.size() == 2);
  CHECK(drop.ops[0] == EditOp{EditKind::kDelete, "a", kEpsilon});
  CHECK(drop.ops[1] == EditOp{EditKind::kMatch, "a", "a"});

  const auto grow = levenshtein_align(toks("a"), toks("aa"));
  REQUIRE(grow.ops.size() == 2);
  CHECK(grow.ops[0] == EditOp{EditKind::kInsert, kEpsilon, "a"});
  CHECK(grow.ops[1] == EditOp{EditKind::kMatch, "a", "a"});
}

TEST_CASE("cost matches the DP oracle on random pairs and replays") {
  Rng rng(20211);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_tokens(rng, 20, 5);
    const auto b = random_tokens(rng, 20, 5);
    const auto path = levenshtein_align(a, b);
    REQUIRE(path.cost == dp_distance(a, b));
    std::size_t non_match = 0;
    for (const EditOp& op : path.ops) non_match += op.kind != EditKind::kMatch;
    REQUIRE(non_match == path.cost);
    REQUIRE(apply_alignment(a, path) == b);
  }
}

TEST_CASE("apply_alignment rejects a mismatched path") {
  const auto path = levenshtein_align(toks("abc"), toks("abd"));
  CHECK_THROWS_AS(apply_alignment(toks("xbc"), path), InvalidArgument);
  CHECK_THROWS_AS(apply_alignment(toks("ab"), path), InvalidArgument);
}

TEST_CASE("edit kind names") {
  CHECK(std::string(edit_kind_name(EditKind::kMatch)) == "match");
  CHECK(std::string(edit_kind_name(EditKind::kInsert)) == "insert");
}

TEST_CASE("noise_rate counts edits per clean token") {
  std::vector<ParallelPair> same{{tokenize("abc"), tokenize("abc")}};
  CHECK(noise_rate(same) == 0.0);
  std::vector<ParallelPair> one{{tokenize("ab"), tokenize("ac")}};
  CHECK(noise_rate(one) == 0.5);
  CHECK_THROWS_AS(noise_rate({}), InvalidArgument);
  std::vector<ParallelPair> empty_clean{{Sentence{}, tokenize("a")}};
  CHECK_THROWS_AS(noise_rate(empty_clean), InvalidArgument);
}

TEST_CASE("noise_rate on a 3.42% fixture") {
  // 50 sentences of 100 tokens; 171 positions replaced by a glyph that never
  // occurs on the clean side, so each costs exactly one edit.
  Rng rng(3);
  std::vector<ParallelPair> pairs;
  std::size_t edits = 0;
  for (int s = 0; s < 50; ++s) {
    ParallelPair p;
    for (int i = 0; i < 100; ++i) {
      p.clean.tokens.push_back(std::string(1, static_cast<char>('a' + rng.below(5))));
    }
    p.noisy = p.clean;
    const std::size_t here = s < 21 ? 4 : 3;  // 21*4 + 29*3 = 171
    for (std::size_t k = 0; k < here; ++k) p.noisy.tokens[k * 20] = "#";
    edits += here;
    pairs.push_back(p);
  }
  REQUIRE(edits == 171);
  CHECK(std::abs(noise_rate(pairs) - 0.0342) < 1e-9);
}

}  // namespace
}  // namespace ocrobust
