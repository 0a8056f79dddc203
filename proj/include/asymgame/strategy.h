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

#ifndef ASYMGAME_STRATEGY_H_
#define ASYMGAME_STRATEGY_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "asymgame/chain_sim.h"
#include "asymgame/game_model.h"
#include "asymgame/hj_primal.h"
#include "asymgame/rng.h"
#include "asymgame/simplex_field.h"

namespace asymgame {

enum class Side { kPlayer1, kPlayer2 };

std::string SideName(Side side);

// Piecewise-constant actions revealed up to `limit`: action[i] is held on
// (times[i], times[i+1]].
class ActionHistory {
 public:
  ActionHistory() = default;

  void Append(double start, int action);
  void set_limit(double limit) { limit_ = limit; }
  double limit() const { return limit_; }
  std::size_t size() const { return times_.size(); }
  // Action held at time s (0 < s <= limit). Reading past the limit throws
  // ProtocolViolation.
  int At(double s) const;
  // Action of the last interval ending at or before the limit.
  int Last() const;

 private:
  std::vector<double> times_;
  std::vector<int> actions_;
  double limit_ = 0.0;
};

// What a rule may read when choosing the action for its interval
// (t_i, t_{i+1}]: everything up to t_i.
struct DecisionContext {
  std::size_t interval = 0;  // Index into the strategy's own grid.
  double time = 0.0;         // t_i.
  const ActionHistory* own = nullptr;
  const ActionHistory* opponent = nullptr;
  const TrajectoryPrefix* trajectory = nullptr;  // Player 1 only.
};

using DecisionRule = std::function<int(const DecisionContext&)>;

struct PureStrategy {
  Side side = Side::kPlayer1;
  std::vector<double> grid;  // grid[0] == 0, strictly increasing.
  DecisionRule rule;

  void Validate() const;
};

// Randomization device: a stream draw selects a pure strategy.
struct MixedStrategy {
  Side side = Side::kPlayer1;
  std::function<PureStrategy(RngStream&)> realize;

  static MixedStrategy FromPure(PureStrategy pure);
};

PureStrategy ConstantStrategy(Side side, int action);

// Regular grid {0, step, 2 step, ...} below the horizon.
std::vector<double> UniformGrid(double step, double horizon);

// Same behaviour on a finer grid: at added times the previous action is
// repeated, at original times the original rule runs.
PureStrategy Refine(const PureStrategy& strategy,
                    const std::vector<double>& finer_grid);

// Drives the simulator with the unique control pair of (alpha, beta) on the
// merged grid, computed by forward induction.
class StrategyPairResolver : public ControlResolver {
 public:
  StrategyPairResolver(PureStrategy alpha, PureStrategy beta);
  Decision Decide(double t, const TrajectoryPrefix& past) override;

  const std::vector<double>& merged_grid() const { return merged_; }

 private:
  PureStrategy alpha_;
  PureStrategy beta_;
  std::vector<double> merged_;
  std::size_t next_ = 0;
  int u_ = 0;
  int v_ = 0;
  ActionHistory hist_u_;
  ActionHistory hist_v_;
};

// Union of the two grids below the horizon.
std::vector<double> MergeGrids(const std::vector<double>& a,
                               const std::vector<double>& b, double horizon);

// Control path of (alpha, beta) along a fixed trajectory.
ControlPath ResolveControls(const PureStrategy& alpha, const PureStrategy& beta,
                            const Trajectory& trajectory);

// Lottery over components used by player 1 at time 0.
struct SplittingComponent {
  double weight = 0.0;
  Eigen::VectorXd posterior;
  MixedStrategy follow_on;
};

// x_k(i) = weight_i posterior_ik / p_k; rows with p_k = 0 put all mass on
// component 0.
Eigen::MatrixXd ConditionalLottery(const Eigen::VectorXd& p,
                                   const std::vector<SplittingComponent>& c);

// Joint law of (initial state, component) induced by the lottery.
Eigen::MatrixXd JointLaw(const Eigen::VectorXd& p,
                         const Eigen::MatrixXd& lottery);

// Player-1 strategy that draws its component from the initial state and
// then follows it. All follow-on strategies must share one grid.
MixedStrategy BuildSplittingStrategy(
    const Eigen::VectorXd& p, const std::vector<SplittingComponent>& c,
    double tol = 1e-9);

struct SolverStrategyConfig {
  double step = 0.05;
  double horizon = 0.0;  // 0 selects TruncationHorizon(discount, eps).
  double eps = 1e-4;
};

// Grid-stationary player-1 strategy read off a converged primal field.
class SolverStrategy {
 public:
  SolverStrategy(const GameSpec& spec, const ConcaveField& field,
                 const SolverConfig& solver_config,
                 const SolverStrategyConfig& config);

  // Player-1 mixed strategy started from public belief p.
  MixedStrategy Strategy(const Eigen::VectorXd& p) const;

  const SplittingPlan& plan(std::size_t grid_index) const {
    return plans_[grid_index];
  }
  const std::vector<double>& grid() const { return grid_; }

 private:
  struct Shared;
  std::shared_ptr<const Shared> shared_;
  std::vector<SplittingPlan> plans_;
  std::vector<double> grid_;
};

struct Response {
  std::string id;
  PureStrategy strategy;
};

// Stationary pure actions and single switches v -> v' at the given times,
// followed by `extra`.
std::vector<Response> DefaultResponseClass(const GameSpec& spec,
                                           const std::vector<double>& switches,
                                           std::vector<Response> extra = {});

// Switch times {0.25, 0.5, 1, 2, 4} / r.
std::vector<double> DefaultSwitchTimes(double discount);

struct ProbeEntry {
  std::string id;
  PayoffEstimate estimate;
};

struct BestResponseReport {
  double worst_payoff = 0.0;
  double stderr_ = 0.0;
  std::string argmin_id;
  std::vector<ProbeEntry> entries;
};

// Factory realizing alpha from stream (seed, 3i+1) and beta from (seed, 3i+2)
// for path i.
ResolverFactory PairFactory(const MixedStrategy& alpha,
                            const MixedStrategy& beta, std::uint64_t seed);

// Payoff against each response with common random numbers.
BestResponseReport BestResponseProbe(const GameSpec& spec,
                                     const Eigen::VectorXd& p,
                                     const MixedStrategy& player1,
                                     const std::vector<Response>& responses,
                                     double eps, int n_paths,
                                     std::uint64_t seed);

void WriteProbeJson(std::ostream& os, const BestResponseReport& report);

}  // namespace asymgame

#endif  // ASYMGAME_STRATEGY_H_
