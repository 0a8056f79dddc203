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

#ifndef ASYMGAME_CHAIN_SIM_H_
#define ASYMGAME_CHAIN_SIM_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "asymgame/game_model.h"
#include "asymgame/rng.h"

namespace asymgame {

// Raised when a decision rule reads information beyond its boundary.
class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Piecewise-constant controls: (u[i], v[i]) on (times[i], times[i+1]], the
// last interval ending at the horizon.
struct ControlPath {
  std::vector<double> times;  // times[0] == 0, strictly increasing.
  std::vector<int> u;
  std::vector<int> v;
  double horizon = 0.0;

  std::size_t size() const { return times.size(); }
  double end(std::size_t i) const {
    return i + 1 < times.size() ? times[i + 1] : horizon;
  }
  // Interval whose (start, end] contains t; interval 0 for t == 0.
  std::size_t IntervalAt(double t) const;
  void Validate(const GameSpec& spec) const;
};

ControlPath ConstantControls(int u, int v, double horizon);

// One realization of the chain: right-continuous step function.
struct Trajectory {
  int initial_state = 0;
  std::vector<double> jump_times;
  std::vector<int> states;  // State entered at each jump.
  double horizon = 0.0;

  int StateAt(double t) const;
};

// Read-only view of a trajectory up to `limit`.
class TrajectoryPrefix {
 public:
  TrajectoryPrefix(const Trajectory* trajectory, double limit)
      : trajectory_(trajectory), limit_(limit) {}
  double limit() const { return limit_; }
  int StateAt(double t) const;
  int Current() const { return StateAt(limit_); }
  int Initial() const { return trajectory_->initial_state; }

 private:
  const Trajectory* trajectory_;
  double limit_;
};

struct Decision {
  int u = 0;
  int v = 0;
  double until = 0.0;  // End of the interval the pair is held on.
};

// Supplies controls interval by interval. Decide(t, past) is called at the
// start t of each interval with the trajectory revealed up to t.
class ControlResolver {
 public:
  virtual ~ControlResolver() = default;
  virtual Decision Decide(double t, const TrajectoryPrefix& past) = 0;
};

class OpenLoopResolver : public ControlResolver {
 public:
  explicit OpenLoopResolver(ControlPath path) : path_(std::move(path)) {}
  Decision Decide(double t, const TrajectoryPrefix& past) override;

 private:
  ControlPath path_;
};

struct SimulationResult {
  Trajectory trajectory;
  ControlPath controls;
};

// Exact jump simulation with X_0 ~ p and the controlled rates.
SimulationResult SimulateChain(const GameSpec& spec, const Eigen::VectorXd& p,
                               ControlResolver& resolver, double horizon,
                               RngStream& rng);

// Same, started from a fixed state.
SimulationResult SimulateChainFrom(const GameSpec& spec, int initial_state,
                                   ControlResolver& resolver, double horizon,
                                   RngStream& rng);

// e^{(t - t_j) R_j^T} ... e^{(t_1 - t_0) R_0^T} p.
Eigen::VectorXd BeliefFlow(const GameSpec& spec, const Eigen::VectorXd& p,
                           const ControlPath& path, double t);

// Likelihood ratio at t of the controlled law against the unit-rate
// reference chain.
double GirsanovDensity(const GameSpec& spec, const Trajectory& trajectory,
                       const ControlPath& path, double t);

struct ProbeResult {
  Eigen::VectorXd estimate;
  Eigen::VectorXd stderr_;
  int n_paths = 0;
};

// Estimate of E[e^{-int_0^t R^T} delta_{X_t}] (should equal p), averaging
// over the initial state exactly and over paths by Monte Carlo.
ProbeResult MartingaleProbe(const GameSpec& spec, const Eigen::VectorXd& p,
                            const ControlPath& path, double t, int n_paths,
                            std::uint64_t seed);

// Law of X_t estimated the same way, for comparison with BeliefFlow.
ProbeResult MarginalLawProbe(const GameSpec& spec, const Eigen::VectorXd& p,
                             const ControlPath& path, double t, int n_paths,
                             std::uint64_t seed);

// Builds the resolver for path `index`; randomization devices should draw
// from streams derived from (seed, index).
using ResolverFactory =
    std::function<std::unique_ptr<ControlResolver>(std::uint64_t index)>;

// T* = ln(1 / eps) / r.
double TruncationHorizon(double discount, double eps);

struct PayoffEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int n_paths = 0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
};

// Discounted payoff int_0^{T*} r e^{-rt} g(X_t, u_t, v_t) dt integrated
// exactly along each path. Path i uses chain stream (seed, 3 i).
PayoffEstimate EstimatePayoff(const GameSpec& spec, const Eigen::VectorXd& p,
                              const ResolverFactory& factory, double eps,
                              int n_paths, std::uint64_t seed);

// Exact discounted payoff of one realized path up to `horizon`.
double PathPayoff(const GameSpec& spec, const SimulationResult& sim,
                  double horizon);

// Pairwise summation in index order.
double PairwiseSum(const std::vector<double>& values);

void WriteTrajectoryCsv(std::ostream& os, const Trajectory& trajectory);

}  // namespace asymgame

#endif  // ASYMGAME_CHAIN_SIM_H_
