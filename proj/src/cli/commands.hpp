// Copyright 2026 The csk Authors
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace csk::cli {

enum ExitCode : int { kSuccess = 0, kMismatch = 1, kInputError = 2, kExhausted = 3 };

enum class Format { Text, Json };

struct RunConfig {
  std::vector<std::string> inputs;
  long level = 1;
  int loops = 3;
  long precision = 300;
  long ell_bound = -1;        // -1: scan all of [0, 24k)
  std::string height_bound;   // decimal; empty picks a bound from the precision
  long budget = 0;            // 0: per-command default
  std::string golden;         // golden bundle; empty uses the bundled one
  std::string selector;       // e.g. "5_2", "5_2:k=7", "4_1:k=2,4"
  std::vector<std::string> items;
  Format format = Format::Text;
  std::uint64_t seed = 0;
  bool timings = false;
  std::string output;         // empty: standard output
};

// Throws std::invalid_argument when an invariant fails.
void check_config(const RunConfig& c);

int cmd_validate(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_tau(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_series(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_census(const RunConfig& c, std::ostream& out, std::ostream& err);

}  // namespace csk::cli
