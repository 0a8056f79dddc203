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

#include "asymgame/variational.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>

#include "asymgame/lp.h"
#include "asymgame/parallel.h"
#include "asymgame/rng.h"

namespace asymgame {
namespace {

Eigen::MatrixXd RateAgainst(const GameSpec& spec, int u,
                            const Eigen::VectorXd& nu) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(spec.n_states, spec.n_states);
  for (int v = 0; v < spec.num_v(); ++v) r += nu(v) * spec.rate(u, v);
  return r;
}

double PayoffAgainst(const GameSpec& spec, const Eigen::VectorXd& p, int u,
                     const Eigen::VectorXd& nu) {
  double s = 0.0;
  for (int v = 0; v < spec.num_v(); ++v) s += nu(v) * PurePayoff(spec, p, u, v);
  return s;
}

}  // namespace

double VariationalHamiltonian(const GameSpec& spec, const ConcaveField& field,
                              std::size_t index, const Eigen::VectorXd& nu) {
  const SimplexGrid& grid = field.grid();
  const int k = grid.dim();
  const int n = static_cast<int>(grid.size());
  const int nu_count = spec.num_u();
  const Eigen::VectorXd& p = grid.point(index);
  // Variables: y over the other grid points, then mu. Rows: the first K-1
  // coordinates of sum y (p' - p) - sum mu_u c_u = 0, and sum mu = 1.
  lp::Problem prob;
  prob.a = Eigen::MatrixXd::Zero(k, n - 1 + nu_count);
  prob.b = Eigen::VectorXd::Zero(k);
  prob.c = Eigen::VectorXd::Zero(n - 1 + nu_count);
  prob.sense.assign(k, lp::Sense::kEqual);
  int col = 0;
  for (int j = 0; j < n; ++j) {
    if (static_cast<std::size_t>(j) == index) continue;
    prob.a.col(col).head(k - 1) = (grid.point(j) - p).head(k - 1);
    prob.c(col) = field.envelope(j) - field.envelope(index);
    ++col;
  }
  for (int u = 0; u < nu_count; ++u) {
    const Eigen::VectorXd c = RateAgainst(spec, u, nu).transpose() * p;
    prob.a.col(col).head(k - 1) = -c.head(k - 1);
    prob.a(k - 1, col) = 1.0;
    prob.c(col) = spec.discount * PayoffAgainst(spec, p, u, nu);
    ++col;
  }
  prob.b(k - 1) = 1.0;
  const lp::Solution sol = lp::Maximize(prob);
  if (!sol.optimal()) {
    throw std::runtime_error("VariationalHamiltonian: LP " +
                             lp::StatusName(sol.status));
  }
  return sol.objective;
}

std::vector<Eigen::VectorXd> NuGrid(const GameSpec& spec, int per_dim) {
  return MixedActionSamples(spec.num_v(), per_dim);
}

double NuGridMesh(int n_actions, int per_dim) {
  if (n_actions == 1) return 0.0;
  const double m = per_dim - 1;
  if (n_actions == 2) return 1.0 / m;
  if (n_actions == 3) return 4.0 / (3.0 * m);
  return n_actions / m;
}

double NuLipschitzCertificate(const GameSpec& spec, const ConcaveField& field,
                              std::size_t index) {
  const Eigen::VectorXd& p = field.grid().point(index);
  const double b = 0.5 * MaxEdgeSlope(field.grid(), field.envelope());
  double worst = 0.0;
  for (int u = 0; u < spec.num_u(); ++u) {
    for (int v = 0; v < spec.num_v(); ++v) {
      for (int w = v + 1; w < spec.num_v(); ++w) {
        const Eigen::VectorXd dc =
            (spec.rate(u, v) - spec.rate(u, w)).transpose() * p;
        const double dg =
            std::abs(PurePayoff(spec, p, u, v) - PurePayoff(spec, p, u, w));
        worst = std::max(worst, b * dc.lpNorm<1>() + spec.discount * dg);
      }
    }
  }
  return 0.5 * worst;
}

namespace {

double MinOverNu(const GameSpec& spec, const ConcaveField& field,
                 std::size_t index,
                 const std::vector<Eigen::VectorXd>& nu_grid) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& nu : nu_grid) {
    best = std::min(best, VariationalHamiltonian(spec, field, index, nu));
  }
  return best;
}

}  // namespace

double SupvarResidual(const GameSpec& spec, const ConcaveField& field,
                      std::size_t index,
                      const std::vector<Eigen::VectorXd>& nu_grid) {
  return spec.discount * field.envelope(index) -
         MinOverNu(spec, field, index, nu_grid);
}

double SubvarResidual(const GameSpec& spec, const ConcaveField& field,
                      std::size_t index,
                      const std::vector<Eigen::VectorXd>& nu_grid,
                      double lip_cert, double mesh) {
  const double margin =
      ExposedMargin(field, index, DefaultExposedBound(field));
  if (!(margin > kExposedEps)) {
    throw std::invalid_argument("SubvarResidual: point not exposed (margin " +
                                std::to_string(margin) + ")");
  }
  return spec.discount * field.envelope(index) -
         (MinOverNu(spec, field, index, nu_grid) - lip_cert * mesh);
}

RegularityReport CheckRegularity(const ConcaveField& field, double slack) {
  RegularityReport r;
  r.is_concave = IsConcaveGridData(field.grid(), field.envelope(), 1e-10);
  r.measured_lipschitz = GridLipschitz(field.grid(), field.envelope());
  r.bound = std::sqrt(static_cast<double>(field.grid().dim())) + slack;
  r.pass = r.is_concave && r.measured_lipschitz <= r.bound;
  return r;
}

ResidualReport ComputeResiduals(const GameSpec& spec, const ConcaveField& field,
                                int nu_per_dim) {
  const SimplexGrid& grid = field.grid();
  const auto nu_grid = NuGrid(spec, nu_per_dim);
  ResidualReport report;
  report.nu_per_dim = nu_per_dim;
  report.mesh = NuGridMesh(spec.num_v(), nu_per_dim);
  report.points.resize(grid.size());
  const double bound = DefaultExposedBound(field);
  ParallelFor(grid.size(), [&](std::size_t i) {
    PointResidual& pr = report.points[i];
    pr.index = i;
    pr.exposed_margin = ExposedMargin(field, i, bound);
    pr.exposed = pr.exposed_margin > kExposedEps;
    const double inf_h = MinOverNu(spec, field, i, nu_grid);
    const double rw = spec.discount * field.envelope(i);
    pr.supvar = rw - inf_h;
    pr.certificate = NuLipschitzCertificate(spec, field, i) * report.mesh;
    pr.subvar_uncertified = pr.supvar;
    pr.subvar = rw - (inf_h - pr.certificate);
  });
  report.min_supvar = std::numeric_limits<double>::infinity();
  report.max_subvar = -std::numeric_limits<double>::infinity();
  for (const auto& pr : report.points) {
    report.min_supvar = std::min(report.min_supvar, pr.supvar);
    if (pr.exposed) {
      ++report.exposed_count;
      report.max_subvar = std::max(report.max_subvar, pr.subvar);
    }
  }
  return report;
}

void WriteResidualCsv(std::ostream& os, const ConcaveField& field,
                      const ResidualReport& report) {
  const SimplexGrid& grid = field.grid();
  for (int k = 0; k < grid.dim(); ++k) os << "p" << (k + 1) << ",";
  os << "exposed_margin,supvar_residual,subvar_residual,certificate\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.*g", kCsvPrecision, v);
    os << buf;
  };
  for (const auto& pr : report.points) {
    for (int k = 0; k < grid.dim(); ++k) {
      put(grid.point(pr.index)(k));
      os << ",";
    }
    put(pr.exposed_margin);
    os << ",";
    put(pr.supvar);
    os << ",";
    if (pr.exposed) put(pr.subvar);
    os << ",";
    put(pr.certificate);
    os << "\n";
  }
}

UniquenessReport UniquenessProbe(const GameSpec& spec,
                                 const SolverConfig& config,
                                 std::uint64_t seed) {
  auto grid = std::make_shared<const SimplexGrid>(spec.n_states, config.n);
  RngStream rng(seed, 0);
  std::vector<double> noise(grid->size());
  for (double& v : noise) v = rng.Uniform();
  const std::vector<ConcaveField> starts = {
      ConcaveField(grid, std::vector<double>(grid->size(), 0.0)),
      ConcaveField(grid, std::vector<double>(grid->size(), 1.0)),
      ConcaveField(grid, Concavify(*grid, noise)),
  };
  UniquenessReport report;
  std::vector<ConcaveField> results;
  for (const auto& s : starts) {
    PrimalSolution sol = SolvePrimal(spec, config, s);
    if (!sol.report.converged) {
      throw std::runtime_error("UniquenessProbe: run did not converge");
    }
    report.runs.push_back(sol.report);
    results.push_back(std::move(sol.field));
  }
  for (std::size_t a = 0; a < results.size(); ++a) {
    for (std::size_t b = a + 1; b < results.size(); ++b) {
      for (std::size_t i = 0; i < grid->size(); ++i) {
        report.max_discrepancy =
            std::max(report.max_discrepancy,
                     std::abs(results[a].envelope(i) - results[b].envelope(i)));
      }
    }
  }
  report.bound = 2.0 * config.tol_fp /
                 (1.0 - std::exp(-spec.discount * config.tau));
  return report;
}

}  // namespace asymgame
