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

// CSV and JSON serialization of experiment results.
//
// Numbers carry 12 significant digits and infinity is written as `inf` (a
// string in JSON). Column order is fixed. Runtime is omitted unless
// `timing` is set, so that identical configs give byte-identical output.

#ifndef KLDIST_REPORT_IO_HPP_
#define KLDIST_REPORT_IO_HPP_

#include <span>
#include <string>

#include "kldist/experiments.hpp"
#include "kldist/oracle.hpp"

namespace kldist {

std::string tail_csv_header();
std::string to_csv(const BoundCheckReport& report, bool timing = false);
std::string to_json(const BoundCheckReport& report, bool timing = false);

// Rows share the tail header; each cell's config differs from `base` only in
// n and delta.
std::string regime_csv(const ExperimentConfig& base,
                       std::span<const RegimeCell> cells);
std::string regime_json(const ExperimentConfig& base,
                        std::span<const RegimeCell> cells);

std::string to_csv(const ExpectationResult& result, bool timing = false);
std::string to_json(const ExpectationResult& result, bool timing = false);

std::string to_csv(const LowerBoundCheck& check);
std::string to_json(const LowerBoundCheck& check);

// Summary of an exact computation plus its full atom list.
std::string oracle_json(const ExactFunctionals& f, double bound_rhs,
                        std::string_view verdict);

// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace kldist

#endif  // KLDIST_REPORT_IO_HPP_
