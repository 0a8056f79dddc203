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

#ifndef ASYMGAME_GAME_MODEL_H_
#define ASYMGAME_GAME_MODEL_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace asymgame {

// A finite-state zero-sum game on a controlled Markov chain. Player 1 (the
// maximizer, actions u) observes the state; player 2 (actions v) does not.
struct GameSpec {
  int n_states = 0;
  std::vector<std::string> actions_u;
  std::vector<std::string> actions_v;
  // rates[u][v] is a generator: off-diagonal >= 0, rows sum to 0.
  std::vector<std::vector<Eigen::MatrixXd>> rates;
  // payoff[k][u][v] in [0, 1].
  std::vector<std::vector<std::vector<double>>> payoff;
  double discount = 1.0;

  int num_u() const { return static_cast<int>(actions_u.size()); }
  int num_v() const { return static_cast<int>(actions_v.size()); }
  const Eigen::MatrixXd& rate(int u, int v) const { return rates[u][v]; }
  double g(int k, int u, int v) const { return payoff[k][u][v]; }
  // State-indexed payoff vector (g(k, u, v))_k.
  Eigen::VectorXd PayoffVector(int u, int v) const;
};

struct SpecViolation {
  std::string location;    // e.g. "rates[1][0] row 2".
  std::string constraint;  // e.g. "row sum".
  double observed = 0.0;
};

std::vector<SpecViolation> ValidateSpec(const GameSpec& spec);

// Throws std::invalid_argument listing every violation.
void RequireValidSpec(const GameSpec& spec);

std::string FormatViolations(const std::vector<SpecViolation>& violations);

// Sum_{u,v} mu_u nu_v R[u][v].
Eigen::MatrixXd MixGenerator(const GameSpec& spec, const Eigen::VectorXd& mu,
                             const Eigen::VectorXd& nu);

// Sum_{k,u,v} p_k mu_u nu_v g[k][u][v].
double MixPayoff(const GameSpec& spec, const Eigen::VectorXd& p,
                 const Eigen::VectorXd& mu, const Eigen::VectorXd& nu);

// g(p, u, v) for pure actions.
double PurePayoff(const GameSpec& spec, const Eigen::VectorXd& p, int u,
                  int v);

// The pure-action matrix A(u, v) = <R[u][v]^T p, z> + r g(p, u, v).
Eigen::MatrixXd HamiltonianMatrix(const GameSpec& spec,
                                  const Eigen::VectorXd& p,
                                  const Eigen::VectorXd& z);

struct HamiltonianResult {
  double value = 0.0;
  Eigen::VectorXd mu;
  Eigen::VectorXd nu;
  double gap = 0.0;
};

// Value of the infinitesimal game over mixed actions, with a saddle point.
HamiltonianResult Hamiltonian(const GameSpec& spec, const Eigen::VectorXd& p,
                              const Eigen::VectorXd& z);

struct IsaacsReport {
  double sup_inf = 0.0;
  double inf_sup = 0.0;
  double gap = 0.0;
};

IsaacsReport PureIsaacsReport(const GameSpec& spec, const Eigen::VectorXd& p,
                              const Eigen::VectorXd& z);

// Explicit constant C for |H(p,z) - H(p',z')| <= C (|z-z'| + (1+|z|)|p-p'|):
// max_{u,v} ||R[u][v]||_F sqrt(K) + r sqrt(K).
double HamiltonianLipschitzConstant(const GameSpec& spec);

// True iff p has nonnegative entries summing to one within tol.
bool IsBelief(const Eigen::VectorXd& p, double tol = 1e-10);

}  // namespace asymgame

#endif  // ASYMGAME_GAME_MODEL_H_
