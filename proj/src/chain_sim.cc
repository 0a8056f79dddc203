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

#include "asymgame/chain_sim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "asymgame/matrix_exp.h"
#include "asymgame/parallel.h"

namespace asymgame {
namespace {

constexpr double kDriftTol = 1e-10;

struct Moments {
  Eigen::VectorXd mean;
  Eigen::VectorXd stderr_;
};

Moments ColumnMoments(const std::vector<Eigen::VectorXd>& samples) {
  const std::size_t n = samples.size();
  const Eigen::Index d = samples.front().size();
  Moments m{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d)};
  std::vector<double> col(n);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < n; ++i) col[i] = samples[i](k);
    const double mean = PairwiseSum(col) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = (samples[i](k) - mean) * (samples[i](k) - mean);
    }
    const double var = n > 1 ? PairwiseSum(col) / static_cast<double>(n - 1)
                             : 0.0;
    m.mean(k) = mean;
    m.stderr_(k) = std::sqrt(var / static_cast<double>(n));
  }
  return m;
}

// Inverse of the ordered belief propagator up to t.
Eigen::MatrixXd InverseFlow(const GameSpec& spec, const ControlPath& path,
                            double t) {
  const int k = spec.n_states;
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(k, k);
  for (std::size_t i = 0; i < path.size() && path.times[i] < t; ++i) {
    const double dt = std::min(path.end(i), t) - path.times[i];
    out = out * Expm(-dt * spec.rate(path.u[i], path.v[i]).transpose());
  }
  return out;
}

ProbeResult Probe(const GameSpec& spec, const Eigen::VectorXd& p,
                  const ControlPath& path, double t, int n_paths,
                  std::uint64_t seed, bool weighted) {
  if (n_paths < 100) {
    throw std::invalid_argument("probe: at least 100 paths required");
  }
  if (!IsBelief(p)) throw std::invalid_argument("probe: p not a belief");
  path.Validate(spec);
  const int k = spec.n_states;
  const Eigen::MatrixXd weight =
      weighted ? InverseFlow(spec, path, t) : Eigen::MatrixXd::Identity(k, k);
  std::vector<Eigen::VectorXd> samples(n_paths);
  ParallelFor(static_cast<std::size_t>(n_paths), [&](std::size_t m) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(k);
    for (int s = 0; s < k; ++s) {
      if (p(s) <= 0.0) continue;
      RngStream rng(seed, m * static_cast<std::uint64_t>(k) + s);
      OpenLoopResolver resolver(path);
      const SimulationResult sim =
          SimulateChainFrom(spec, s, resolver, t, rng);
      z += p(s) * weight.col(sim.trajectory.StateAt(t));
    }
    samples[m] = z;
  });
  const Moments mom = ColumnMoments(samples);
  return {mom.mean, mom.stderr_, n_paths};
}

}  // namespace

std::size_t ControlPath::IntervalAt(double t) const {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  const std::ptrdiff_t i = (it - times.begin()) - 1;
  return i < 0 ? 0 : static_cast<std::size_t>(i);
}

void ControlPath::Validate(const GameSpec& spec) const {
  if (times.empty() || times[0] != 0.0) {
    throw std::invalid_argument("ControlPath: times must start at 0");
  }
  if (u.size() != times.size() || v.size() != times.size()) {
    throw std::invalid_argument("ControlPath: one action pair per interval");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("ControlPath: times not increasing");
    }
  }
  if (!(horizon > times.back())) {
    throw std::invalid_argument("ControlPath: horizon before last interval");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (u[i] < 0 || u[i] >= spec.num_u() || v[i] < 0 || v[i] >= spec.num_v()) {
      throw std::invalid_argument("ControlPath: action out of range");
    }
  }
}

ControlPath ConstantControls(int u, int v, double horizon) {
  return ControlPath{{0.0}, {u}, {v}, horizon};
}

int Trajectory::StateAt(double t) const {
  const auto n = std::upper_bound(jump_times.begin(), jump_times.end(), t) -
                 jump_times.begin();
  return n == 0 ? initial_state : states[n - 1];
}

int TrajectoryPrefix::StateAt(double t) const {
  if (t > limit_) {
    throw ProtocolViolation("trajectory read at t = " + std::to_string(t) +
                            " beyond the information boundary " +
                            std::to_string(limit_));
  }
  return trajectory_->StateAt(t);
}

Decision OpenLoopResolver::Decide(double t, const TrajectoryPrefix&) {
  const std::size_t i = path_.IntervalAt(std::nextafter(t, 1e300));
  return {path_.u[i], path_.v[i], path_.end(i)};
}

SimulationResult SimulateChainFrom(const GameSpec& spec, int initial_state,
                                   ControlResolver& resolver, double horizon,
                                   RngStream& rng) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  SimulationResult out;
  Trajectory& traj = out.trajectory;
  traj.initial_state = initial_state;
  traj.horizon = horizon;
  out.controls.horizon = horizon;
  double t = 0.0;
  int state = initial_state;
  // Unit-rate clock left before the next jump. Carrying it across control
  // intervals keeps paths identical when two control paths share rates.
  double clock = rng.Exponential(1.0);
  while (t < horizon) {
    const Decision d = resolver.Decide(t, TrajectoryPrefix(&traj, t));
    const double until = std::min(d.until, horizon);
    if (!(until > t)) {
      throw std::logic_error("resolver returned an empty interval");
    }
    if (d.u < 0 || d.u >= spec.num_u() || d.v < 0 || d.v >= spec.num_v()) {
      throw std::out_of_range("resolver returned an invalid action");
    }
    out.controls.times.push_back(t);
    out.controls.u.push_back(d.u);
    out.controls.v.push_back(d.v);
    const Eigen::MatrixXd& rate = spec.rate(d.u, d.v);
    double s = t;
    while (true) {
      const double q = -rate(state, state);
      if (q <= 0.0) break;
      if (s + clock / q > until) {
        clock -= q * (until - s);
        break;
      }
      s += clock / q;
      Eigen::VectorXd w = rate.row(state).transpose();
      w(state) = 0.0;
      state = rng.Categorical(w);
      traj.jump_times.push_back(s);
      traj.states.push_back(state);
      clock = rng.Exponential(1.0);
    }
    t = until;
  }
  return out;
}

SimulationResult SimulateChain(const GameSpec& spec, const Eigen::VectorXd& p,
                               ControlResolver& resolver, double horizon,
                               RngStream& rng) {
  if (!IsBelief(p)) throw std::invalid_argument("SimulateChain: bad belief");
  const int x0 = rng.Categorical(p);
  return SimulateChainFrom(spec, x0, resolver, horizon, rng);
}

Eigen::VectorXd BeliefFlow(const GameSpec& spec, const Eigen::VectorXd& p,
                           const ControlPath& path, double t) {
  if (t > path.horizon) throw std::invalid_argument("BeliefFlow: t > horizon");
  Eigen::VectorXd pi = p;
  for (std::size_t i = 0; i < path.size() && path.times[i] < t; ++i) {
    const double dt = std::min(path.end(i), t) - path.times[i];
    pi = Expm(dt * spec.rate(path.u[i], path.v[i]).transpose()) * pi;
  }
  if (pi.minCoeff() < -kDriftTol || std::abs(pi.sum() - 1.0) > kDriftTol) {
    throw std::runtime_error("BeliefFlow: drift off the simplex");
  }
  pi = pi.cwiseMax(0.0);
  return pi / pi.sum();
}

double GirsanovDensity(const GameSpec& spec, const Trajectory& trajectory,
                       const ControlPath& path, double t) {
  if (t > path.horizon) throw std::invalid_argument("Girsanov: t > horizon");
  const int k = spec.n_states;
  double log_l = 0.0;
  double product = 1.0;
  for (std::size_t i = 0; i < path.size() && path.times[i] < t; ++i) {
    const double a = path.times[i];
    const double b = std::min(path.end(i), t);
    const Eigen::MatrixXd& rate = spec.rate(path.u[i], path.v[i]);
    double s = a;
    int x = trajectory.StateAt(a);
    auto it = std::upper_bound(trajectory.jump_times.begin(),
                               trajectory.jump_times.end(), a);
    auto exit_sum = [&](int state) {
      double e = 0.0;
      for (int j = 0; j < k; ++j) {
        if (j != state) e += 1.0 - rate(state, j);
      }
      return e;
    };
    for (; it != trajectory.jump_times.end() && *it <= b; ++it) {
      const int y = trajectory.states[it - trajectory.jump_times.begin()];
      log_l += (*it - s) * exit_sum(x);
      const double r = rate(x, y);
      if (r <= 0.0) return 0.0;
      product *= r;
      s = *it;
      x = y;
    }
    log_l += (b - s) * exit_sum(x);
  }
  return std::exp(log_l) * product;
}

ProbeResult MartingaleProbe(const GameSpec& spec, const Eigen::VectorXd& p,
                            const ControlPath& path, double t, int n_paths,
                            std::uint64_t seed) {
  return Probe(spec, p, path, t, n_paths, seed, true);
}

ProbeResult MarginalLawProbe(const GameSpec& spec, const Eigen::VectorXd& p,
                             const ControlPath& path, double t, int n_paths,
                             std::uint64_t seed) {
  return Probe(spec, p, path, t, n_paths, seed, false);
}

double TruncationHorizon(double discount, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("truncation eps must lie in (0, 1)");
  }
  return std::log(1.0 / eps) / discount;
}

double PathPayoff(const GameSpec& spec, const SimulationResult& sim,
                  double horizon) {
  const ControlPath& path = sim.controls;
  const Trajectory& traj = sim.trajectory;
  const double r = spec.discount;
  double total = 0.0;
  for (std::size_t i = 0; i < path.size() && path.times[i] < horizon; ++i) {
    const double a = path.times[i];
    const double b = std::min(path.end(i), horizon);
    double s = a;
    int x = traj.StateAt(a);
    auto it = std::upper_bound(traj.jump_times.begin(), traj.jump_times.end(),
                               a);
    for (; it != traj.jump_times.end() && *it <= b; ++it) {
      total += spec.g(x, path.u[i], path.v[i]) *
               (std::exp(-r * s) - std::exp(-r * *it));
      s = *it;
      x = traj.states[it - traj.jump_times.begin()];
    }
    total += spec.g(x, path.u[i], path.v[i]) *
             (std::exp(-r * s) - std::exp(-r * b));
  }
  return total;
}

double PairwiseSum(const std::vector<double>& values) {
  std::vector<double> level = values;
  if (level.empty()) return 0.0;
  while (level.size() > 1) {
    std::vector<double> next((level.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const std::size_t a = 2 * i;
      next[i] = a + 1 < level.size() ? level[a] + level[a + 1] : level[a];
    }
    level.swap(next);
  }
  return level[0];
}

PayoffEstimate EstimatePayoff(const GameSpec& spec, const Eigen::VectorXd& p,
                              const ResolverFactory& factory, double eps,
                              int n_paths, std::uint64_t seed) {
  if (n_paths < 1) throw std::invalid_argument("EstimatePayoff: no paths");
  const double horizon = TruncationHorizon(spec.discount, eps);
  std::vector<double> values(n_paths);
  ParallelFor(static_cast<std::size_t>(n_paths), [&](std::size_t i) {
    RngStream rng(seed, 3 * static_cast<std::uint64_t>(i));
    std::unique_ptr<ControlResolver> resolver = factory(i);
    const SimulationResult sim =
        SimulateChain(spec, p, *resolver, horizon, rng);
    values[i] = PathPayoff(spec, sim, horizon);
  });
  PayoffEstimate est;
  est.n_paths = n_paths;
  est.horizon = horizon;
  est.seed = seed;
  est.mean = PairwiseSum(values) / n_paths;
  std::vector<double> sq(n_paths);
  for (int i = 0; i < n_paths; ++i) {
    sq[i] = (values[i] - est.mean) * (values[i] - est.mean);
  }
  const double var = n_paths > 1 ? PairwiseSum(sq) / (n_paths - 1) : 0.0;
  est.stderr_ = std::sqrt(var / n_paths);
  return est;
}

void WriteTrajectoryCsv(std::ostream& os, const Trajectory& trajectory) {
  os << "jump_time,new_state\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", 0.0);
  os << buf << "," << trajectory.initial_state << "\n";
  for (std::size_t i = 0; i < trajectory.jump_times.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", trajectory.jump_times[i]);
    os << buf << "," << trajectory.states[i] << "\n";
  }
}

}  // namespace asymgame
