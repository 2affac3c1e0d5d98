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

#ifndef OCROBUST_CORPUS_H_
#define OCROBUST_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ocrobust {

// A token is the UTF-8 encoding of one Unicode scalar value. The empty string
// is reserved as the epsilon marker used by alignment and confusion matrices;
// the tokenizer can never produce it.
using Token = std::string;

inline const Token kEpsilon{};

inline bool is_epsilon(std::string_view t) { return t.empty(); }

struct Sentence {
  std::vector<Token> tokens;
  std::optional<int> label;
  std::int64_t id = 0;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  bool operator==(const Sentence&) const = default;
};

struct ParallelPair {
  Sentence clean;
  Sentence noisy;
};

struct Dataset {
  std::string name;
  std::vector<Sentence> sentences;

  std::size_t size() const { return sentences.size(); }
};

struct DatasetStats {
  std::size_t sentences = 0;
  std::size_t positives = 0;
  double mean_length = 0.0;

  // "sentences=2064 positives=156 mean_length=37.5"
  std::string to_string() const;
};

enum class TokenizeMode {
  kByteFaithful,  // whitespace scalars are kept as tokens
  kCompact,       // whitespace scalars are dropped
};

enum class DatasetFormat { kJsonl, kTsv };

// Splits UTF-8 text into Unicode scalar values. Throws DataError on malformed
// UTF-8.
Sentence tokenize(std::string_view text,
                  TokenizeMode mode = TokenizeMode::kByteFaithful);

std::string detokenize(const Sentence& s);
std::string detokenize(const std::vector<Token>& tokens);

// True for the scalar values dropped in compact mode.
bool is_whitespace_token(std::string_view token);

DatasetFormat parse_dataset_format(std::string_view name);
DatasetFormat infer_dataset_format(const std::filesystem::path& path);

// jsonl: {"text": str, "label": 0|1} per line. tsv: text<TAB>label per line.
// Blank lines are skipped; ids are assigned sequentially from 0.
Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format,
                     TokenizeMode mode = TokenizeMode::kByteFaithful);
Dataset parse_dataset(std::string_view contents, DatasetFormat format,
                      std::string name,
                      TokenizeMode mode = TokenizeMode::kByteFaithful);

DatasetStats dataset_stats(const Dataset& dataset);

// Writes the jsonl format read by load_dataset.
std::string dataset_to_jsonl(const Dataset& dataset);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

// clean<TAB>noisy per line, no header. Every malformed line is reported in a
// single DataError.
std::vector<ParallelPair> load_parallel(
    const std::filesystem::path& path,
    TokenizeMode mode = TokenizeMode::kByteFaithful);
std::vector<ParallelPair> parse_parallel(
    std::string_view contents, TokenizeMode mode = TokenizeMode::kByteFaithful);
std::string parallel_to_tsv(const std::vector<ParallelPair>& pairs);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace ocrobust

#endif  // OCROBUST_CORPUS_H_
