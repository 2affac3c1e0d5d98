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

#include "ocrobust/corpus.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ocrobust/error.h"

namespace ocrobust {
namespace {

// Returns the byte length of the UTF-8 sequence starting at text[pos], or 0
// if it is malformed (overlong, surrogate, out of range, truncated).
std::size_t utf8_length(std::string_view text, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(text[pos]);
  std::size_t len;
  char32_t cp;
  if (b0 < 0x80) return 1;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return 0;
  }
  if (pos + len > text.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(text[pos + i]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return 0;
  }
  return len;
}

std::vector<std::string_view> split_lines(std::string_view contents) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < contents.size()) {
    std::size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string line_error(std::string_view name, std::size_t line,
                       const std::string& what) {
  return std::string(name) + ":" + std::to_string(line) + ": " + what;
}

int parse_label(const nlohmann::json& value) {
  if (!value.is_number_integer()) throw DataError("label must be an integer");
  const auto label = value.get<std::int64_t>();
  if (label != 0 && label != 1) {
    throw DataError("label must be 0 or 1, got " + std::to_string(label));
  }
  return static_cast<int>(label);
}

}  // namespace

std::string DatasetStats::to_string() const {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "sentences=%zu positives=%zu mean_length=%.1f",
                sentences, positives, mean_length);
  return buf;
}

bool is_whitespace_token(std::string_view token) {
  static constexpr std::string_view kSpaces[] = {
      " ",      "\t",     "\n",     "\v",     "\f",     "\r",
      "\u0085", "\u00A0", "\u1680", "\u2000", "\u2001", "\u2002",
      "\u2003", "\u2004", "\u2005", "\u2006", "\u2007", "\u2008",
      "\u2009", "\u200A", "\u2028", "\u2029", "\u202F", "\u205F",
      "\u3000"};
  for (std::string_view s : kSpaces) {
    if (token == s) return true;
  }
  return false;
}

Sentence tokenize(std::string_view text, TokenizeMode mode) {
  Sentence s;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t len = utf8_length(text, pos);
    if (len == 0) {
      throw DataError("invalid UTF-8 at byte offset " + std::to_string(pos));
    }
    Token token(text.substr(pos, len));
    if (mode == TokenizeMode::kByteFaithful || !is_whitespace_token(token)) {
      s.tokens.push_back(std::move(token));
    }
    pos += len;
  }
  return s;
}

std::string detokenize(const std::vector<Token>& tokens) {
  std::string out;
  for (const Token& t : tokens) out += t;
  return out;
}

std::string detokenize(const Sentence& s) { return detokenize(s.tokens); }

DatasetFormat parse_dataset_format(std::string_view name) {
  if (name == "jsonl") return DatasetFormat::kJsonl;
  if (name == "tsv") return DatasetFormat::kTsv;
  throw InvalidArgument("unknown dataset format '" + std::string(name) +
                        "' (expected jsonl or tsv)");
}

DatasetFormat infer_dataset_format(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? DatasetFormat::kTsv
                                    : DatasetFormat::kJsonl;
}

Dataset parse_dataset(std::string_view contents, DatasetFormat format,
                      std::string name, TokenizeMode mode) {
  Dataset dataset;
  dataset.name = std::move(name);
  const auto lines = split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty()) continue;
    const std::size_t lineno = i + 1;
    std::string_view text;
    int label;
    nlohmann::json record;
    try {
      if (format == DatasetFormat::kJsonl) {
        record = nlohmann::json::parse(line);
        if (!record.is_object()) throw DataError("record is not an object");
        if (!record.contains("text") || !record["text"].is_string()) {
          throw DataError("missing string field 'text'");
        }
        if (!record.contains("label")) throw DataError("missing field 'label'");
        text = record["text"].get_ref<const std::string&>();
        label = parse_label(record["label"]);
      } else {
        const std::size_t tab = line.rfind('\t');
        if (tab == std::string_view::npos) {
          throw DataError("expected text<TAB>label");
        }
        text = line.substr(0, tab);
        const std::string_view field = line.substr(tab + 1);
        nlohmann::json value;
        try {
          value = nlohmann::json::parse(field);
        } catch (const nlohmann::json::exception&) {
          throw DataError("label '" + std::string(field) + "' is not an integer");
        }
        label = parse_label(value);
      }
      Sentence s = tokenize(text, mode);
      s.label = label;
      s.id = static_cast<std::int64_t>(dataset.sentences.size());
      dataset.sentences.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(line_error(dataset.name, lineno, e.what()));
    } catch (const DataError& e) {
      throw DataError(line_error(dataset.name, lineno, e.what()));
    }
  }
  return dataset;
}

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format,
                     TokenizeMode mode) {
  return parse_dataset(read_file(path), format, path.string(), mode);
}

DatasetStats dataset_stats(const Dataset& dataset) {
  DatasetStats stats;
  stats.sentences = dataset.size();
  std::size_t tokens = 0;
  for (const Sentence& s : dataset.sentences) {
    if (s.label == 1) ++stats.positives;
    tokens += s.size();
  }
  if (stats.sentences > 0) {
    stats.mean_length =
        static_cast<double>(tokens) / static_cast<double>(stats.sentences);
  }
  return stats;
}

std::string dataset_to_jsonl(const Dataset& dataset) {
  std::string out;
  for (const Sentence& s : dataset.sentences) {
    nlohmann::ordered_json record;
    record["text"] = detokenize(s);
    record["label"] = s.label.value_or(0);
    out += record.dump();
    out += '\n';
  }
  return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  write_file(path, dataset_to_jsonl(dataset));
}

std::vector<ParallelPair> parse_parallel(std::string_view contents,
                                         TokenizeMode mode) {
  std::vector<ParallelPair> pairs;
  std::vector<std::size_t> bad_lines;
  const auto lines = split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos ||
        line.find('\t', tab + 1) != std::string_view::npos || tab == 0 ||
        tab + 1 == line.size()) {
      bad_lines.push_back(i + 1);
      continue;
    }
    ParallelPair pair;
    const auto id = static_cast<std::int64_t>(pairs.size());
    pair.clean = tokenize(line.substr(0, tab), mode);
    pair.noisy = tokenize(line.substr(tab + 1), mode);
    pair.clean.id = pair.noisy.id = id;
    if (pair.clean.empty() || pair.noisy.empty()) {
      bad_lines.push_back(i + 1);
      continue;
    }
    pairs.push_back(std::move(pair));
  }
  if (!bad_lines.empty()) {
    std::string msg = "malformed parallel line(s), expected clean<TAB>noisy:";
    for (std::size_t n : bad_lines) msg += " " + std::to_string(n);
    throw DataError(msg);
  }
  return pairs;
}

std::vector<ParallelPair> load_parallel(const std::filesystem::path& path,
                                        TokenizeMode mode) {
  try {
    return parse_parallel(read_file(path), mode);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string parallel_to_tsv(const std::vector<ParallelPair>& pairs) {
  std::string out;
  for (const ParallelPair& p : pairs) {
    out += detokenize(p.clean);
    out += '\t';
    out += detokenize(p.noisy);
    out += '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace ocrobust
