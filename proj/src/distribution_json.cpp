// Copyright 2026 The kldist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "kldist/distribution_json.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <vector>

#include "json.hpp"
#include "kldist/adversarial.hpp"
#include "kldist/errors.hpp"

namespace kldist {
namespace {

using nlohmann::json;

double Number(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw SchemaError(std::string("distribution: missing numeric field '") +
                      key + "'");
  }
  return it->get<double>();
}

double NumberOr(const json& obj, const char* key, double fallback) {
  return obj.contains(key) ? Number(obj, key) : fallback;
}

std::size_t Count(const json& obj, const char* key) {
  const double x = Number(obj, key);
  if (!(x >= 0.0) || x != std::floor(x)) {
    throw ValidationError(std::string("distribution: '") + key +
                          "' must be a nonnegative integer");
  }
  return static_cast<std::size_t>(x);
}

void CheckKeys(const json& obj, const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) {
      throw SchemaError("distribution: unexpected field '" + item.key() + "'");
    }
  }
}

ProbVector FromShorthand(const json& obj) {
  const auto kind_it = obj.find("kind");
  if (kind_it == obj.end() || !kind_it->is_string()) {
    throw SchemaError("distribution: shorthand object needs a string 'kind'");
  }
  const std::string kind = kind_it->get<std::string>();
  const std::size_t d = Count(obj, "d");
  if (kind == "uniform") {
    CheckKeys(obj, {"kind", "d"});
    return shape_family(shape::Uniform{}, d);
  }
  if (kind == "geometric") {
    CheckKeys(obj, {"kind", "d", "rate"});
    return shape_family(shape::Geometric{Number(obj, "rate")}, d);
  }
  if (kind == "polynomial") {
    CheckKeys(obj, {"kind", "d", "alpha"});
    return shape_family(shape::Polynomial{Number(obj, "alpha")}, d);
  }
  if (kind == "sparse-uniform") {
    CheckKeys(obj, {"kind", "d", "s", "c"});
    return shape_family(
        shape::SparseUniform{Count(obj, "s"), NumberOr(obj, "c", 1.0)}, d);
  }
  if (kind == "half-uniform-geometric") {
    CheckKeys(obj, {"kind", "d"});
    return shape_family(shape::HalfUniformGeometric{}, d);
  }
  if (kind == "dirac") {
    CheckKeys(obj, {"kind", "d", "label"});
    return dirac(d, obj.contains("label") ? Count(obj, "label") : 0);
  }
  throw SchemaError("distribution: unknown kind '" + kind + "'");
}

}  // namespace

ProbVector parse_distribution(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("distribution: malformed JSON: ") + e.what());
  }
  if (doc.is_array()) {
    std::vector<double> weights;
    weights.reserve(doc.size());
    for (const json& x : doc) {
      if (!x.is_number()) {
        throw SchemaError("distribution: array entries must be numbers");
      }
      weights.push_back(x.get<double>());
    }
    return make_prob_vector(weights);
  }
  if (doc.is_object()) return FromShorthand(doc);
  throw SchemaError("distribution: expected a JSON array or object");
}

std::string distribution_to_json(const ProbVector& p) {
  std::string out = "[";
  char buf[40];
  for (std::size_t j = 0; j < p.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g", p[j]);
    if (j > 0) out += ",";
    out += buf;
  }
  out += "]";
  return out;
}

}  // namespace kldist
