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

#include "ocrobust/classifier.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <utility>

#include "json.hpp"
#include "ocrobust/error.h"
#include "ocrobust/rng.h"

namespace ocrobust {
namespace {

constexpr int kCheckpointVersion = 1;

// (row index, multiplicity) pairs in ascending row order.
std::vector<std::pair<std::size_t, std::size_t>> row_counts(
    const ClassifierParams& params, std::span<const Token> tokens,
    std::optional<std::size_t> mask) {
  std::vector<std::size_t> idx;
  idx.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (mask && *mask == i) continue;
    idx.push_back(params.lookup(tokens[i]));
  }
  std::sort(idx.begin(), idx.end());
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t r : idx) {
    if (!out.empty() && out.back().first == r) {
      ++out.back().second;
    } else {
      out.emplace_back(r, 1);
    }
  }
  return out;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -[y log p + (1 - y) log(1 - p)] written in terms of the logit.
double bce_from_logit(double z, int y) {
  const double softplus = z > 0 ? z + std::log1p(std::exp(-z))
                                : std::log1p(std::exp(z));
  return softplus - static_cast<double>(y) * z;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Adds the gradient of a loss with dL/dlogit = dz and dL/de = de (may be
// empty) through one forward pass.
void backward(const ClassifierParams& params, std::span<const Token> tokens,
              std::optional<std::size_t> mask, const ForwardResult& fr,
              double dz, std::span<const double> de, ParamArrays& grad) {
  const std::size_t d = params.dims.embed;
  const std::size_t h = params.dims.hidden;
  const auto& a = params.arrays;
  std::vector<double> da(h);
  for (std::size_t k = 0; k < h; ++k) {
    const double ek = fr.representation[k];
    grad.w2[k] += dz * ek;
    const double de_k = dz * a.w2[k] + (de.empty() ? 0.0 : de[k]);
    da[k] = de_k * (1.0 - ek * ek);
  }
  grad.b2 += dz;
  std::vector<double> dpooled(d, 0.0);
  for (std::size_t k = 0; k < h; ++k) {
    if (da[k] == 0.0) continue;
    grad.b1[k] += da[k];
    const double* w_row = &a.w1[k * d];
    double* g_row = &grad.w1[k * d];
    for (std::size_t j = 0; j < d; ++j) {
      g_row[j] += da[k] * fr.pooled[j];
      dpooled[j] += w_row[j] * da[k];
    }
  }
  if (tokens.empty()) return;
  const double inv_n = 1.0 / static_cast<double>(tokens.size());
  for (const auto& [r, count] : row_counts(params, tokens, mask)) {
    const double scale = static_cast<double>(count) * inv_n;
    double* g_row = &grad.embedding[r * d];
    for (std::size_t j = 0; j < d; ++j) g_row[j] += scale * dpooled[j];
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::ordered_json encode_array(std::span<const double> values) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (double v : values) out.push_back(format_double(v));
  return out;
}

std::vector<double> decode_array(const nlohmann::json& node,
                                 std::string_view name, std::size_t expected) {
  if (!node.is_array() || node.size() != expected) {
    throw DataError("checkpoint: '" + std::string(name) + "' must hold " +
                    std::to_string(expected) + " values");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : node) {
    if (!v.is_string()) {
      throw DataError("checkpoint: '" + std::string(name) +
                      "' entries must be decimal strings");
    }
    const std::string& s = v.get_ref<const std::string&>();
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !std::isfinite(x)) {
      throw DataError("checkpoint: bad number '" + s + "' in " +
                      std::string(name));
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace

ParamArrays ParamArrays::zeros_like() const {
  ParamArrays z;
  z.embedding.assign(embedding.size(), 0.0);
  z.w1.assign(w1.size(), 0.0);
  z.b1.assign(b1.size(), 0.0);
  z.w2.assign(w2.size(), 0.0);
  z.b2 = 0.0;
  return z;
}

std::vector<std::span<double>> ParamArrays::blocks() {
  return {embedding, w1, b1, w2, std::span<double>(&b2, 1)};
}

std::vector<std::span<const double>> ParamArrays::blocks() const {
  return {embedding, w1, b1, w2, std::span<const double>(&b2, 1)};
}

bool ParamArrays::all_finite() const {
  for (auto block : blocks()) {
    for (double v : block) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

std::size_t ClassifierParams::lookup(const Token& t) const {
  auto it = index.find(t);
  return it == index.end() ? 0 : it->second;
}

std::vector<Token> build_vocabulary(const Dataset& dataset) {
  std::set<Token> seen;
  for (const Sentence& s : dataset.sentences) {
    seen.insert(s.tokens.begin(), s.tokens.end());
  }
  return {seen.begin(), seen.end()};
}

ClassifierParams zero_params(std::vector<Token> vocab, ClassifierDims dims) {
  if (dims.embed == 0 || dims.hidden == 0) {
    throw InvalidArgument("classifier dimensions must be positive");
  }
  ClassifierParams p;
  p.dims = dims;
  p.vocab = std::move(vocab);
  for (std::size_t i = 0; i < p.vocab.size(); ++i) {
    if (!p.index.emplace(p.vocab[i], i + 1).second) {
      throw InvalidArgument("duplicate vocabulary token '" + p.vocab[i] + "'");
    }
  }
  p.arrays.embedding.assign(p.rows() * dims.embed, 0.0);
  p.arrays.w1.assign(dims.hidden * dims.embed, 0.0);
  p.arrays.b1.assign(dims.hidden, 0.0);
  p.arrays.w2.assign(dims.hidden, 0.0);
  return p;
}

ClassifierParams init_params(std::vector<Token> vocab, ClassifierDims dims,
                             std::uint64_t seed) {
  ClassifierParams p = zero_params(std::move(vocab), dims);
  const double bound = 1.0 / std::sqrt(static_cast<double>(dims.embed));
  Rng rng = stream(seed, {0x1417});
  for (double& v : p.arrays.embedding) v = rng.uniform(-bound, bound);
  for (double& v : p.arrays.w1) v = rng.uniform(-bound, bound);
  return p;
}

ForwardResult forward(const ClassifierParams& params,
                      std::span<const Token> tokens,
                      std::optional<std::size_t> mask) {
  const std::size_t d = params.dims.embed;
  const std::size_t h = params.dims.hidden;
  const auto& a = params.arrays;
  ForwardResult fr;
  fr.pooled.assign(d, 0.0);
  if (!tokens.empty()) {
    for (const auto& [r, count] : row_counts(params, tokens, mask)) {
      const double* e_row = &a.embedding[r * d];
      const double c = static_cast<double>(count);
      for (std::size_t j = 0; j < d; ++j) fr.pooled[j] += c * e_row[j];
    }
    const double n = static_cast<double>(tokens.size());
    for (double& v : fr.pooled) v /= n;
  }
  fr.representation.resize(h);
  for (std::size_t k = 0; k < h; ++k) {
    const double pre =
        dot(std::span<const double>(&a.w1[k * d], d), fr.pooled) + a.b1[k];
    fr.representation[k] = std::tanh(pre);
  }
  fr.logit = dot(a.w2, fr.representation) + a.b2;
  fr.prob = sigmoid(fr.logit);
  return fr;
}

ForwardResult forward(const ClassifierParams& params, const Sentence& x,
                      std::optional<std::size_t> mask) {
  return forward(params, std::span<const Token>(x.tokens), mask);
}

int predict(const ClassifierParams& params, const Sentence& x,
            double threshold) {
  return forward(params, x).prob >= threshold ? 1 : 0;
}

std::string_view stability_on_name(StabilityOn s) {
  return s == StabilityOn::kRepresentation ? "representation" : "output";
}

StabilityOn parse_stability_on(std::string_view name) {
  if (name == "representation") return StabilityOn::kRepresentation;
  if (name == "output") return StabilityOn::kOutput;
  throw InvalidArgument("stability_on must be 'representation' or 'output'");
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na < kMinNorm || nb < kMinNorm) return 0.0;
  if (std::equal(a.begin(), a.end(), b.begin(), b.end())) return 0.0;
  return std::clamp(1.0 - dot(a, b) / (na * nb), 0.0, 2.0);
}

LossAndGrad loss_and_grad(const ClassifierParams& params,
                          std::span<const TrainingSample> batch, double alpha,
                          StabilityOn stability_on) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("alpha must be in [0, 1]");
  }
  LossAndGrad out;
  out.grad = params.arrays.zeros_like();
  if (batch.empty()) return out;
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  const bool stability = alpha < 1.0;
  const std::size_t h = params.dims.hidden;

  for (const TrainingSample& s : batch) {
    if (s.label != 0 && s.label != 1) {
      throw InvalidArgument("labels must be 0 or 1");
    }
    const ForwardResult fx = forward(params, *s.clean);
    if (s.noisy == nullptr) {
      out.loss.standard += bce_from_logit(fx.logit, s.label) * inv_b;
      const double dz = alpha * (fx.prob - s.label) * inv_b;
      backward(params, s.clean->tokens, std::nullopt, fx, dz, {}, out.grad);
      continue;
    }
    const ForwardResult fn = forward(params, *s.noisy);
    out.loss.standard += 0.5 *
                         (bce_from_logit(fx.logit, s.label) +
                          bce_from_logit(fn.logit, s.label)) *
                         inv_b;
    double dz_x = alpha * 0.5 * (fx.prob - s.label) * inv_b;
    double dz_n = alpha * 0.5 * (fn.prob - s.label) * inv_b;
    std::vector<double> de_x;
    std::vector<double> de_n;

    if (stability_on == StabilityOn::kRepresentation) {
      const auto& ex = fx.representation;
      const auto& en = fn.representation;
      out.loss.similarity += cosine_distance(ex, en) * inv_b;
      const double nx = norm(ex);
      const double nn = norm(en);
      if (stability && nx >= kMinNorm && nn >= kMinNorm) {
        const double c = dot(ex, en) / (nx * nn);
        const double w = (1.0 - alpha) * inv_b;
        de_x.resize(h);
        de_n.resize(h);
        for (std::size_t k = 0; k < h; ++k) {
          de_x[k] = -w * (en[k] / (nx * nn) - c * ex[k] / (nx * nx));
          de_n[k] = -w * (ex[k] / (nx * nn) - c * en[k] / (nn * nn));
        }
      }
    } else {
      const double diff = fx.prob - fn.prob;
      out.loss.similarity += diff * diff * inv_b;
      if (stability) {
        const double w = (1.0 - alpha) * inv_b * 2.0 * diff;
        dz_x += w * fx.prob * (1.0 - fx.prob);
        dz_n -= w * fn.prob * (1.0 - fn.prob);
      }
    }
    backward(params, s.clean->tokens, std::nullopt, fx, dz_x, de_x, out.grad);
    backward(params, s.noisy->tokens, std::nullopt, fn, dz_n, de_n, out.grad);
  }
  out.loss.total =
      alpha * out.loss.standard + (1.0 - alpha) * out.loss.similarity;
  return out;
}

void sgd_step(ClassifierParams& params, const ParamArrays& grad, double lr) {
  if (!(lr > 0.0)) throw InvalidArgument("learning rate must be positive");
  auto dst = params.arrays.blocks();
  const auto src = grad.blocks();
  for (std::size_t b = 0; b < dst.size(); ++b) {
    if (src[b].size() != dst[b].size()) {
      throw InvalidArgument("gradient shape does not match parameters");
    }
  }
  if (!grad.all_finite()) throw Error("non-finite gradient; update refused");
  for (std::size_t b = 0; b < dst.size(); ++b) {
    for (std::size_t i = 0; i < dst[b].size(); ++i) {
      dst[b][i] -= lr * src[b][i];
    }
  }
}

std::string checkpoint_to_json(const ClassifierParams& params) {
  nlohmann::ordered_json doc;
  doc["version"] = kCheckpointVersion;
  doc["dims"] = {{"embed", params.dims.embed}, {"hidden", params.dims.hidden}};
  doc["vocab"] = params.vocab;
  const auto& a = params.arrays;
  doc["embedding"] = encode_array(a.embedding);
  doc["w1"] = encode_array(a.w1);
  doc["b1"] = encode_array(a.b1);
  doc["w2"] = encode_array(a.w2);
  doc["b2"] = format_double(a.b2);
  return doc.dump() + "\n";
}

ClassifierParams checkpoint_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
  try {
    if (doc.value("version", 0) != kCheckpointVersion) {
      throw DataError("checkpoint: unsupported version");
    }
    ClassifierDims dims{doc.at("dims").at("embed").get<std::size_t>(),
                        doc.at("dims").at("hidden").get<std::size_t>()};
    ClassifierParams p =
        zero_params(doc.at("vocab").get<std::vector<Token>>(), dims);
    p.arrays.embedding =
        decode_array(doc.at("embedding"), "embedding", p.rows() * dims.embed);
    p.arrays.w1 = decode_array(doc.at("w1"), "w1", dims.hidden * dims.embed);
    p.arrays.b1 = decode_array(doc.at("b1"), "b1", dims.hidden);
    p.arrays.w2 = decode_array(doc.at("w2"), "w2", dims.hidden);
    nlohmann::json b2 = nlohmann::json::array({doc.at("b2")});
    p.arrays.b2 = decode_array(b2, "b2", 1)[0];
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const ClassifierParams& params,
                     const std::filesystem::path& path) {
  write_file(path, checkpoint_to_json(params));
}

Classifier load_checkpoint(const std::filesystem::path& path) {
  return Classifier{checkpoint_from_json(read_file(path)), true};
}

}  // namespace ocrobust
