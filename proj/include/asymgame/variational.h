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

#ifndef ASYMGAME_VARIATIONAL_H_
#define ASYMGAME_VARIATIONAL_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "asymgame/game_model.h"
#include "asymgame/hj_primal.h"
#include "asymgame/simplex_field.h"

namespace asymgame {

// sup over mu of min over x in the superdifferential at grid point `index`
// of <x, R(mu, nu)^T p> + r g(p, mu, nu), as one linear program.
double VariationalHamiltonian(const GameSpec& spec, const ConcaveField& field,
                              std::size_t index, const Eigen::VectorXd& nu);

// Sample of player 2's mixed actions with `per_dim` points per dimension.
std::vector<Eigen::VectorXd> NuGrid(const GameSpec& spec, int per_dim = 5);

// l1 covering radius of NuGrid(spec, per_dim).
double NuGridMesh(int n_actions, int per_dim);

// Lipschitz constant (l1 norm on nu) of nu -> VariationalHamiltonian at
// `index`: half of max_{u,v,v'} [B |R(u,v)^T p - R(u,v')^T p|_1
// + r |g(p,u,v) - g(p,u,v')|] with B = MaxEdgeSlope / 2.
double NuLipschitzCertificate(const GameSpec& spec, const ConcaveField& field,
                              std::size_t index);

// r env(p) - min over nu_grid of VariationalHamiltonian.
double SupvarResidual(const GameSpec& spec, const ConcaveField& field,
                      std::size_t index,
                      const std::vector<Eigen::VectorXd>& nu_grid);

// r env(p) - [min over nu_grid of VariationalHamiltonian - lip_cert * mesh].
// Throws std::invalid_argument when the point is not grid-exposed.
double SubvarResidual(const GameSpec& spec, const ConcaveField& field,
                      std::size_t index,
                      const std::vector<Eigen::VectorXd>& nu_grid,
                      double lip_cert, double mesh);

struct RegularityReport {
  bool is_concave = false;
  double measured_lipschitz = 0.0;
  double bound = 0.0;  // sqrt(K) + slack.
  bool pass = false;
};

RegularityReport CheckRegularity(const ConcaveField& field,
                                 double slack = 0.5);

struct PointResidual {
  std::size_t index = 0;
  double exposed_margin = 0.0;
  bool exposed = false;
  double supvar = 0.0;
  double subvar = 0.0;        // Meaningful when exposed.
  double subvar_uncertified = 0.0;  // Without the certificate term.
  double certificate = 0.0;   // lip_cert * mesh.
};

struct ResidualReport {
  std::vector<PointResidual> points;
  double min_supvar = 0.0;
  double max_subvar = 0.0;  // Over exposed points; -inf when none.
  int exposed_count = 0;
  double mesh = 0.0;
  int nu_per_dim = 5;
};

ResidualReport ComputeResiduals(const GameSpec& spec, const ConcaveField& field,
                                int nu_per_dim = 5);

void WriteResidualCsv(std::ostream& os, const ConcaveField& field,
                      const ResidualReport& report);

struct UniquenessReport {
  double max_discrepancy = 0.0;
  double bound = 0.0;  // 2 tol / (1 - e^{-r tau}).
  std::vector<ConvergenceReport> runs;
};

// Solves from the zero field, the unit field and a random concave field and
// returns the largest pairwise sup-norm discrepancy.
UniquenessReport UniquenessProbe(const GameSpec& spec,
                                 const SolverConfig& config,
                                 std::uint64_t seed = 42);

}  // namespace asymgame

#endif  // ASYMGAME_VARIATIONAL_H_
