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

// Command-line front end: asymgame <subcommand> --spec FILE --out DIR ...

#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "asymgame/cli.h"

int main(int argc, char** argv) {
  CLI::App app{"Solver and checker for continuous-time stochastic games "
               "with one informed player"};
  app.require_subcommand(1);
  asymgame::RunOptions options;

  const std::pair<const char*, const char*> kSubcommands[] = {
      {"solve", "Value iteration for the primal value field"},
      {"solve-dual", "Dual field and duality gap against a primal field"},
      {"check", "Variational residuals, regularity and uniqueness"},
      {"simulate", "Trajectories, martingale probe and payoff estimate"},
      {"evaluate", "Solver strategy against the default response class"},
  };
  for (const auto& [name, description] : kSubcommands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--spec", options.spec_path, "Game spec JSON")->required();
    sub->add_option("--out", options.out_dir, "Output directory")->required();
    sub->add_option("--n", options.n, "Simplex grid resolution");
    sub->add_option("--tau", options.tau, "Time step");
    sub->add_option("--seed", options.seed, "Random seed");
    sub->add_option("--eps", options.eps, "Payoff truncation tolerance");
    sub->add_option("--p", options.belief, "Initial belief, comma-separated");
    sub->add_option("--paths", options.paths, "Monte-Carlo paths");
    if (std::string(name) == "solve-dual") {
      sub->add_option("--primal", options.primal_path, "Primal field CSV");
    }
    if (std::string(name) == "check" || std::string(name) == "evaluate") {
      sub->add_option("--field", options.field_path, "Primal field CSV");
    }
    if (std::string(name) == "simulate") {
      sub->add_option("--dump", options.dump, "Trajectories to write");
    }
    sub->callback([&options, sub] { options.command = sub->get_name(); });
  }

  CLI11_PARSE(app, argc, argv);
  return asymgame::RunCommand(options, std::cout, std::cerr);
}
