// Copyright 2026 The asymgame Authors
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

#ifndef ASYMGAME_CLI_H_
#define ASYMGAME_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "asymgame/game_model.h"
#include "asymgame/simplex_field.h"

namespace asymgame {

// Malformed or invalid spec file; the message names the offending field.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses a JSON spec {states, actions_u, actions_v, rates, payoff, discount}
// and validates it. `source` prefixes diagnostics.
GameSpec ParseSpec(const std::string& text, const std::string& source);
GameSpec LoadSpec(const std::string& path);

struct RunOptions {
  std::string command;  // solve, solve-dual, check, simulate, evaluate.
  std::string spec_path;
  std::string out_dir;
  std::optional<int> n;
  std::optional<double> tau;
  std::uint64_t seed = 42;
  double eps = 1e-4;
  std::optional<std::string> primal_path;  // Field CSV for solve-dual.
  std::optional<std::string> field_path;   // Field CSV for check/evaluate.
  std::optional<std::string> belief;       // Comma-separated p.
  int paths = 10000;
  int dump = 5;  // Trajectories written by simulate.
};

// Runs one subcommand and writes its artifacts plus manifest.json under
// out_dir. Returns 0 on success; on failure removes everything it wrote,
// reports to `err` and returns 1.
int RunCommand(const RunOptions& options, std::ostream& log,
               std::ostream& err);

// K = 2: (p2, W); K = 3: (p1, p2, p3, W); otherwise the raw field table.
void ExportPlotData(std::ostream& os, const ConcaveField& field);

// Lowercase hex SHA-256 of a file's bytes.
std::string Sha256File(const std::string& path);

}  // namespace asymgame

#endif  // ASYMGAME_CLI_H_
