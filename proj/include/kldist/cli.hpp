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

// Command-line front end.
//
//   kldist estimate --spec laplace --counts 2,1,0
//   kldist profile  --dist '[0.5,0.3,0.2]' --n 10 [--eps 0.1 --delta 0.01]
//   kldist tail     --dist ... --n 500 --spec laplace --delta 0.01 --trials 1e5
//   kldist expect   --kind uniform --d 4 --n 20 --spec laplace
//   kldist missing  --kind half-uniform-geometric --d 100 --n 2000
//   kldist lower    --spec laplace --n 4000 --d 4000 --delta e^-17
//   kldist oracle   --dist '[0.5,0.5]' --n 2 --spec laplace
//   kldist regime   --dist ... --n-grid 100,1000 --delta-grid 0.1,0.01
//
// Every run is described by a flat set of key/value settings: flags on the
// command line, optionally layered over a JSON object read with --config.
// --dump-config writes the effective settings in that format.

#ifndef KLDIST_CLI_HPP_
#define KLDIST_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace kldist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;
inline constexpr int kExitViolated = 3;

// Runs one command. Returns 0 on success, 2 on any input or runtime error
// (with a message on `err`) and 3 when a checked bound is violated.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace kldist::cli

#endif  // KLDIST_CLI_HPP_
