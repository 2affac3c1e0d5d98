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

#include "ocrobust/confusion.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "json.hpp"
#include "ocrobust/error.h"

namespace ocrobust {
namespace {

constexpr double kRowTolerance = 1e-9;

Distribution normalize_row(const Token& w,
                           const std::map<Token, std::uint64_t>& counts,
                           std::uint64_t extra_identity, double floor) {
  double total = static_cast<double>(extra_identity);
  for (const auto& [_, c] : counts) total += static_cast<double>(c);
  std::map<Token, double> probs;
  if (total <= 0.0) {
    probs[w] = 1.0;
  } else {
    for (const auto& [out, c] : counts) {
      probs[out] += (1.0 - floor) * static_cast<double>(c) / total;
    }
    if (extra_identity > 0) {
      probs[w] += (1.0 - floor) * static_cast<double>(extra_identity) / total;
    }
    if (floor > 0.0) probs[w] += floor;
  }
  Distribution row;
  for (const auto& [out, p] : probs) {
    const double r = round_probability(p);
    if (r > 0.0) row.emplace_back(out, r);
  }
  return row;
}

}  // namespace

double round_probability(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", p);
  return std::strtod(buf, nullptr);
}

void ConfusionCounts::add(std::span<const Token> clean,
                          const AlignmentPath& path) {
  for (const EditOp& op : path.ops) ++events[op.source][op.target];
  epsilon_slots += clean.size() + 1;
}

void ConfusionCounts::add(const ParallelPair& pair) {
  add(pair.clean.tokens, levenshtein_align(pair.clean, pair.noisy));
}

void ConfusionCounts::merge(const ConfusionCounts& other) {
  for (const auto& [w, row] : other.events) {
    auto& mine = events[w];
    for (const auto& [out, c] : row) mine[out] += c;
  }
  epsilon_slots += other.epsilon_slots;
}

std::uint64_t ConfusionCounts::epsilon_kept() const {
  std::uint64_t inserts = 0;
  if (auto it = events.find(kEpsilon); it != events.end()) {
    for (const auto& [_, c] : it->second) inserts += c;
  }
  // A slot can absorb several inserts; clamp rather than go negative.
  return inserts >= epsilon_slots ? 0 : epsilon_slots - inserts;
}

ConfusionCounts count_events(const std::vector<ParallelPair>& pairs,
                             unsigned workers) {
  workers = std::max(1u, std::min<unsigned>(
                             workers, static_cast<unsigned>(pairs.size())));
  std::vector<ConfusionCounts> partial(workers);
  auto run = [&](unsigned w) {
    const std::size_t begin = pairs.size() * w / workers;
    const std::size_t end = pairs.size() * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) partial[w].add(pairs[i]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  ConfusionCounts total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

ConfusionMatrix build_confusion(const std::vector<ParallelPair>& pairs,
                                double floor, unsigned workers) {
  if (pairs.empty()) throw InvalidArgument("no parallel data");
  if (!(floor >= 0.0 && floor < 1.0)) {
    throw InvalidArgument("floor must be in [0, 1)");
  }
  return ConfusionMatrix::from_counts(count_events(pairs, workers), floor);
}

void ConfusionMatrix::add_to_vocab(const Token& t) { vocab_.push_back(t); }

void ConfusionMatrix::finalize_vocab() {
  std::sort(vocab_.begin(), vocab_.end());
  vocab_.erase(std::unique(vocab_.begin(), vocab_.end()), vocab_.end());
}

ConfusionMatrix ConfusionMatrix::from_counts(ConfusionCounts counts,
                                             double floor) {
  ConfusionMatrix m;
  m.floor_ = floor;
  for (const auto& [w, row] : counts.events) {
    m.add_to_vocab(w);
    for (const auto& [out, _] : row) m.add_to_vocab(out);
    if (is_epsilon(w)) continue;
    m.rows_[w] = normalize_row(w, row, 0, floor);
  }
  static const std::map<Token, std::uint64_t> kNoInserts;
  auto eps = counts.events.find(kEpsilon);
  m.rows_[kEpsilon] =
      normalize_row(kEpsilon, eps == counts.events.end() ? kNoInserts : eps->second,
                    counts.epsilon_kept(), floor);
  m.finalize_vocab();
  m.counts_ = std::move(counts);
  return m;
}

ConfusionMatrix ConfusionMatrix::from_rows(
    const std::map<Token, std::map<Token, double>>& rows) {
  ConfusionMatrix m;
  for (const auto& [w, row] : rows) {
    m.add_to_vocab(w);
    double total = 0.0;
    for (const auto& [out, p] : row) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw InvalidArgument("negative or non-finite probability in row");
      }
      total += p;
      m.add_to_vocab(out);
    }
    if (total <= 0.0) throw InvalidArgument("row has no probability mass");
    Distribution d;
    for (const auto& [out, p] : row) {
      if (p > 0.0) d.emplace_back(out, round_probability(p / total));
    }
    m.rows_[w] = std::move(d);
  }
  if (!m.has_row(kEpsilon)) m.rows_[kEpsilon] = {{kEpsilon, 1.0}};
  m.finalize_vocab();
  return m;
}

Distribution ConfusionMatrix::row(const Token& w) const {
  if (auto it = rows_.find(w); it != rows_.end()) return it->second;
  return {{w, 1.0}};
}

double ConfusionMatrix::prob(const Token& w, const Token& outcome) const {
  auto it = rows_.find(w);
  if (it == rows_.end()) return w == outcome ? 1.0 : 0.0;
  for (const auto& [out, p] : it->second) {
    if (out == outcome) return p;
  }
  return 0.0;
}

double ConfusionMatrix::insertion_probability() const {
  return 1.0 - prob(kEpsilon, kEpsilon);
}

std::string ConfusionMatrix::to_json() const {
  nlohmann::ordered_json doc;
  doc["version"] = kVersion;
  doc["vocab"] = vocab_;
  doc["eps_index"] = eps_index();
  nlohmann::ordered_json rows = nlohmann::ordered_json::object();
  for (const auto& [w, dist] : rows_) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (const auto& [out, p] : dist) row[out] = p;
    rows[w] = std::move(row);
  }
  doc["rows"] = std::move(rows);
  return doc.dump() + "\n";
}

ConfusionMatrix ConfusionMatrix::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("confusion matrix: ") + e.what());
  }
  auto fail = [](const std::string& what) {
    return DataError("confusion matrix: " + what);
  };
  if (!doc.is_object() || doc.value("version", 0) != kVersion) {
    throw fail("unsupported or missing version");
  }
  if (!doc.contains("vocab") || !doc["vocab"].is_array() ||
      !doc.contains("rows") || !doc["rows"].is_object() ||
      !doc.contains("eps_index") || !doc["eps_index"].is_number_unsigned()) {
    throw fail("expected fields vocab, eps_index, rows");
  }
  ConfusionMatrix m;
  m.vocab_.clear();
  for (const auto& t : doc["vocab"]) {
    if (!t.is_string()) throw fail("vocab entries must be strings");
    m.vocab_.push_back(t.get<std::string>());
  }
  const auto eps = doc["eps_index"].get<std::size_t>();
  if (eps >= m.vocab_.size() || !is_epsilon(m.vocab_[eps])) {
    throw fail("eps_index does not name the epsilon entry");
  }
  m.finalize_vocab();
  if (m.vocab_.size() != doc["vocab"].size()) throw fail("duplicate vocab");
  auto in_vocab = [&](const Token& t) {
    return std::binary_search(m.vocab_.begin(), m.vocab_.end(), t);
  };
  for (const auto& [w, row] : doc["rows"].items()) {
    if (!in_vocab(w)) throw fail("row token '" + w + "' not in vocab");
    if (!row.is_object()) throw fail("row '" + w + "' is not an object");
    Distribution d;
    double total = 0.0;
    for (const auto& [out, p] : row.items()) {
      if (!in_vocab(out)) throw fail("outcome '" + out + "' not in vocab");
      if (!p.is_number() || !(p.get<double>() >= 0.0)) {
        throw fail("row '" + w + "' has a negative or non-numeric entry");
      }
      total += p.get<double>();
      if (p.get<double>() > 0.0) d.emplace_back(out, p.get<double>());
    }
    if (std::abs(total - 1.0) > kRowTolerance) {
      throw fail("row '" + w + "' sums to " + std::to_string(total));
    }
    m.rows_[w] = std::move(d);
  }
  if (!m.has_row(kEpsilon)) m.rows_[kEpsilon] = {{kEpsilon, 1.0}};
  return m;
}

void ConfusionMatrix::save(const std::filesystem::path& path) const {
  write_file(path, to_json());
}

ConfusionMatrix ConfusionMatrix::load(const std::filesystem::path& path) {
  return from_json(read_file(path));
}

}  // namespace ocrobust
