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

#include "asymgame/hj_primal.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "asymgame/matrix_game.h"
#include "asymgame/parallel.h"

namespace asymgame {
namespace {

constexpr double kTransportTol = 1e-12;

}  // namespace

void ValidateConfig(const GameSpec& spec, const SolverConfig& config) {
  if (config.n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (!(config.tau > 0.0)) throw std::invalid_argument("config: tau <= 0");
  if (!(config.tol_fp > 0.0)) throw std::invalid_argument("config: tol <= 0");
  if (config.max_iterations < 1) {
    throw std::invalid_argument("config: max_iterations < 1");
  }
  if ((spec.num_u() > 1 && config.m_hat < 2) ||
      (spec.num_v() > 1 && config.l_hat < 2)) {
    throw std::invalid_argument("config: need at least 2 samples per axis");
  }
  double max_rate = 0.0;
  for (const auto& row : spec.rates) {
    for (const auto& m : row) {
      max_rate = std::max(max_rate, m.diagonal().cwiseAbs().maxCoeff());
    }
  }
  if (config.tau * max_rate > 1.0) {
    throw std::invalid_argument(
        "config: tau * max |R_ii| exceeds 1, belief step leaves the simplex");
  }
}

std::vector<Eigen::VectorXd> MixedActionSamples(int n_actions, int per_dim) {
  if (n_actions == 1) return {Eigen::VectorXd::Ones(1)};
  const SimplexGrid grid(n_actions, per_dim - 1);
  return grid.points();
}

StageContext::StageContext(const GameSpec& spec, const SolverConfig& config)
    : mus_(MixedActionSamples(spec.num_u(), config.m_hat)),
      nus_(MixedActionSamples(spec.num_v(), config.l_hat)),
      tau_(config.tau),
      discount_factor_(std::exp(-spec.discount * config.tau)) {
  ValidateConfig(spec, config);
  rate_t_.reserve(mus_.size() * nus_.size());
  gbar_.reserve(mus_.size() * nus_.size());
  for (const auto& mu : mus_) {
    for (const auto& nu : nus_) {
      rate_t_.push_back(MixGenerator(spec, mu, nu).transpose());
      Eigen::VectorXd g = Eigen::VectorXd::Zero(spec.n_states);
      for (int u = 0; u < spec.num_u(); ++u) {
        for (int v = 0; v < spec.num_v(); ++v) {
          g += mu(u) * nu(v) * spec.PayoffVector(u, v);
        }
      }
      gbar_.push_back(g);
    }
  }
}

StageGameResult StageGameValue(const GameSpec& spec, const ConcaveField& field,
                               const Eigen::VectorXd& p,
                               const StageContext& ctx) {
  const std::size_t m = ctx.mus().size();
  const std::size_t l = ctx.nus().size();
  const double df = ctx.discount_factor();
  StageGameResult out;
  out.transports.reserve(m * l);
  Eigen::MatrixXd a(m, l);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      Eigen::VectorXd q = p + ctx.tau() * (ctx.rate_t(i, j) * p);
      if (q.minCoeff() < -kTransportTol) {
        throw std::runtime_error("stage game: transport leaves the simplex");
      }
      q = q.cwiseMax(0.0);
      q /= q.sum();
      a(i, j) = (1.0 - df) * p.dot(ctx.gbar(i, j)) + df * field.Eval(q);
      out.transports.push_back(std::move(q));
    }
  }
  const MatrixGameSolution sol = SolveMatrixGame(a);
  out.value = sol.value;
  out.row_weights = sol.row;
  out.col_weights = sol.col;
  out.mu = Eigen::VectorXd::Zero(spec.num_u());
  out.nu = Eigen::VectorXd::Zero(spec.num_v());
  for (std::size_t i = 0; i < m; ++i) out.mu += sol.row(i) * ctx.mus()[i];
  for (std::size_t j = 0; j < l; ++j) out.nu += sol.col(j) * ctx.nus()[j];
  return out;
}

StageGameResult StageGameValue(const GameSpec& spec, const ConcaveField& field,
                               const Eigen::VectorXd& p,
                               const SolverConfig& config) {
  const StageContext ctx(spec, config);
  return StageGameValue(spec, field, p, ctx);
}

ConcaveField ApplyOperator(const GameSpec& spec, const ConcaveField& field,
                           const StageContext& ctx) {
  const SimplexGrid& grid = field.grid();
  std::vector<double> raw(grid.size());
  ParallelFor(grid.size(), [&](std::size_t i) {
    raw[i] = StageGameValue(spec, field, grid.point(i), ctx).value;
  });
  return ConcaveField(field.grid_ptr(), std::move(raw),
                      field.generation() + 1);
}

ConcaveField ApplyOperator(const GameSpec& spec, const ConcaveField& field,
                           const SolverConfig& config) {
  const StageContext ctx(spec, config);
  return ApplyOperator(spec, field, ctx);
}

PrimalSolution SolvePrimal(const GameSpec& spec, const SolverConfig& config,
                           const std::optional<ConcaveField>& initial) {
  RequireValidSpec(spec);
  const auto start = std::chrono::steady_clock::now();
  const StageContext ctx(spec, config);
  auto grid = std::make_shared<const SimplexGrid>(spec.n_states, config.n);
  ConcaveField field =
      initial ? *initial
              : ConcaveField(grid, std::vector<double>(grid->size(), 0.0));
  if (field.grid().dim() != spec.n_states ||
      field.grid().resolution() != config.n) {
    throw std::invalid_argument("SolvePrimal: initial field grid mismatch");
  }
  const double contraction = ctx.discount_factor();
  ConvergenceReport report;
  while (report.iterations < config.max_iterations) {
    ConcaveField next = ApplyOperator(spec, field, ctx);
    double change = 0.0;
    for (std::size_t i = 0; i < next.grid().size(); ++i) {
      change = std::max(change,
                        std::abs(next.envelope(i) - field.envelope(i)));
    }
    field = std::move(next);
    ++report.iterations;
    report.residual = change;
    if (change <= config.tol_fp) {
      report.converged = true;
      break;
    }
  }
  report.apriori_bound = report.residual / (1.0 - contraction);
  report.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return {std::move(field), report};
}

SplittingPlan ExtractSplitting(const GameSpec& spec, const ConcaveField& field,
                               std::size_t index, const StageContext& ctx) {
  const SimplexGrid& grid = field.grid();
  SplittingPlan plan;
  plan.p = grid.point(index);
  const GridDecomposition dec =
      DecomposeEnvelope(grid, field.raw(), grid.point(index));
  for (std::size_t c = 0; c < dec.points.size(); ++c) {
    const std::size_t g = dec.points[c];
    plan.grid_points.push_back(g);
    plan.posteriors.push_back(grid.point(g));
    plan.weights.push_back(dec.weights[c]);
    plan.mus.push_back(StageGameValue(spec, field, grid.point(g), ctx).mu);
  }
  return plan;
}

}  // namespace asymgame
