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

// JSON form of a distribution: either an array of nonnegative weights,
// normalized on read, or a shorthand object
//
//   {"kind": "uniform", "d": 10}
//   {"kind": "geometric", "d": 100, "rate": 0.05}
//   {"kind": "polynomial", "d": 50, "alpha": 2}
//   {"kind": "sparse-uniform", "d": 30, "s": 3, "c": 1}
//   {"kind": "half-uniform-geometric", "d": 100}
//   {"kind": "dirac", "d": 5, "label": 0}

#ifndef KLDIST_DISTRIBUTION_JSON_HPP_
#define KLDIST_DISTRIBUTION_JSON_HPP_

#include <string>
#include <string_view>

#include "kldist/distribution.hpp"

namespace kldist {

// Throws SchemaError for malformed JSON or an unknown shorthand, and
// ValidationError for invalid weights or parameters.
ProbVector parse_distribution(std::string_view json_text);

// JSON array with 17 significant digits per entry, so that parsing the text
// back yields the same vector.
std::string distribution_to_json(const ProbVector& p);

}  // namespace kldist

#endif  // KLDIST_DISTRIBUTION_JSON_HPP_
