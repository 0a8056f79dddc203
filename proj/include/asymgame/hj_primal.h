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

#ifndef ASYMGAME_HJ_PRIMAL_H_
#define ASYMGAME_HJ_PRIMAL_H_

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "asymgame/game_model.h"
#include "asymgame/simplex_field.h"

namespace asymgame {

struct SolverConfig {
  int n = 40;           // Belief grid resolution.
  double tau = 0.01;    // Time step.
  int m_hat = 5;        // Mixed-action samples per dimension, player 1.
  int l_hat = 5;        // Mixed-action samples per dimension, player 2.
  double tol_fp = 1e-6;
  int max_iterations = 100000;
};

// Throws std::invalid_argument when the step is too large for the rates or
// a parameter is out of range.
void ValidateConfig(const GameSpec& spec, const SolverConfig& config);

// Sampled mixed actions for both players and the per-pair transports.
class StageContext {
 public:
  StageContext(const GameSpec& spec, const SolverConfig& config);

  const std::vector<Eigen::VectorXd>& mus() const { return mus_; }
  const std::vector<Eigen::VectorXd>& nus() const { return nus_; }
  // R(mu_i, nu_j)^T and (g(k, mu_i, nu_j))_k.
  const Eigen::MatrixXd& rate_t(std::size_t i, std::size_t j) const {
    return rate_t_[i * nus_.size() + j];
  }
  const Eigen::VectorXd& gbar(std::size_t i, std::size_t j) const {
    return gbar_[i * nus_.size() + j];
  }
  double tau() const { return tau_; }
  double discount_factor() const { return discount_factor_; }

 private:
  std::vector<Eigen::VectorXd> mus_;
  std::vector<Eigen::VectorXd> nus_;
  std::vector<Eigen::MatrixXd> rate_t_;
  std::vector<Eigen::VectorXd> gbar_;
  double tau_;
  double discount_factor_;
};

// Mixed actions on a simplex grid with `per_dim` points per dimension.
std::vector<Eigen::VectorXd> MixedActionSamples(int n_actions, int per_dim);

struct StageGameResult {
  double value = 0.0;
  Eigen::VectorXd row_weights;  // Over StageContext::mus().
  Eigen::VectorXd col_weights;  // Over StageContext::nus().
  Eigen::VectorXd mu;           // Composed mixed action of player 1.
  Eigen::VectorXd nu;           // Composed mixed action of player 2.
  std::vector<Eigen::VectorXd> transports;  // Row-major over (mu, nu).
};

StageGameResult StageGameValue(const GameSpec& spec, const ConcaveField& field,
                               const Eigen::VectorXd& p,
                               const StageContext& ctx);
StageGameResult StageGameValue(const GameSpec& spec, const ConcaveField& field,
                               const Eigen::VectorXd& p,
                               const SolverConfig& config);

ConcaveField ApplyOperator(const GameSpec& spec, const ConcaveField& field,
                           const StageContext& ctx);
ConcaveField ApplyOperator(const GameSpec& spec, const ConcaveField& field,
                           const SolverConfig& config);

struct ConvergenceReport {
  int iterations = 0;
  double residual = 0.0;
  double apriori_bound = 0.0;  // residual / (1 - e^{-r tau}).
  double wall_time_ms = 0.0;
  bool converged = false;
};

struct PrimalSolution {
  ConcaveField field;
  ConvergenceReport report;
};

// Value iteration from `initial` (the zero field when absent).
PrimalSolution SolvePrimal(const GameSpec& spec, const SolverConfig& config,
                           const std::optional<ConcaveField>& initial = {});

struct SplittingPlan {
  Eigen::VectorXd p;
  std::vector<Eigen::VectorXd> posteriors;
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> mus;  // Player 1's stage action per posterior.
  std::vector<std::size_t> grid_points;
};

// Convex combination realizing the concavification at grid point `index`
// with the stage-game optimal action of player 1 at each posterior.
SplittingPlan ExtractSplitting(const GameSpec& spec, const ConcaveField& field,
                               std::size_t index, const StageContext& ctx);

}  // namespace asymgame

#endif  // ASYMGAME_HJ_PRIMAL_H_
