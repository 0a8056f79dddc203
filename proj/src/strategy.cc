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

#include "asymgame/strategy.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "asymgame/matrix_exp.h"
#include "asymgame/parallel.h"
#include "asymgame/simplex_grid.h"

namespace asymgame {
namespace {

constexpr double kTimeTol = 1e-12;
constexpr double kDriftTol = 1e-10;

bool SameTime(double a, double b) {
  return std::abs(a - b) <= kTimeTol * std::max(1.0, std::abs(a));
}

// Position of t in a sorted grid, or npos.
std::size_t FindTime(const std::vector<double>& grid, double t) {
  auto it = std::lower_bound(grid.begin(), grid.end(), t - kTimeTol);
  if (it != grid.end() && SameTime(*it, t)) return it - grid.begin();
  return std::string::npos;
}

std::string FormatTime(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

}  // namespace

std::string SideName(Side side) {
  return side == Side::kPlayer1 ? "player1" : "player2";
}

void ActionHistory::Append(double start, int action) {
  if (!times_.empty() && !(start > times_.back())) {
    throw std::logic_error("ActionHistory: starts must increase");
  }
  times_.push_back(start);
  actions_.push_back(action);
}

int ActionHistory::At(double s) const {
  if (times_.empty() || s <= 0.0 || s > limit_ + kTimeTol) {
    throw ProtocolViolation("action read at t = " + std::to_string(s) +
                            " beyond the information boundary " +
                            std::to_string(limit_));
  }
  const auto it = std::lower_bound(times_.begin(), times_.end(), s);
  return actions_[(it - times_.begin()) - 1];
}

int ActionHistory::Last() const {
  if (times_.empty() || limit_ <= 0.0) {
    throw ProtocolViolation("no action revealed before the first interval");
  }
  return At(limit_);
}

void PureStrategy::Validate() const {
  if (grid.empty() || grid[0] != 0.0) {
    throw std::invalid_argument("strategy grid must start at 0");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("strategy grid not increasing");
    }
  }
  if (!rule) throw std::invalid_argument("strategy has no rule");
}

MixedStrategy MixedStrategy::FromPure(PureStrategy pure) {
  const Side side = pure.side;
  return {side, [pure = std::move(pure)](RngStream&) { return pure; }};
}

PureStrategy ConstantStrategy(Side side, int action) {
  return {side, {0.0}, [action](const DecisionContext&) { return action; }};
}

std::vector<double> UniformGrid(double step, double horizon) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be > 0");
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * step;
    if (i > 0 && t >= horizon) break;
    grid.push_back(t);
  }
  return grid;
}

PureStrategy Refine(const PureStrategy& strategy,
                    const std::vector<double>& finer_grid) {
  strategy.Validate();
  for (double t : strategy.grid) {
    if (FindTime(finer_grid, t) == std::string::npos) {
      throw std::invalid_argument("refined grid misses time " +
                                  std::to_string(t));
    }
  }
  PureStrategy out{strategy.side, finer_grid, nullptr};
  out.rule = [original = strategy](const DecisionContext& ctx) {
    const std::size_t j = FindTime(original.grid, ctx.time);
    if (j == std::string::npos) return ctx.own->Last();
    DecisionContext inner = ctx;
    inner.interval = j;
    return original.rule(inner);
  };
  return out;
}

std::vector<double> MergeGrids(const std::vector<double>& a,
                               const std::vector<double>& b, double horizon) {
  std::vector<double> all;
  for (double t : a)
    if (t < horizon) all.push_back(t);
  for (double t : b)
    if (t < horizon) all.push_back(t);
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double t : all) {
    if (out.empty() || !SameTime(out.back(), t)) out.push_back(t);
  }
  return out;
}

StrategyPairResolver::StrategyPairResolver(PureStrategy alpha,
                                           PureStrategy beta)
    : alpha_(std::move(alpha)), beta_(std::move(beta)) {
  alpha_.Validate();
  beta_.Validate();
  if (alpha_.side != Side::kPlayer1 || beta_.side != Side::kPlayer2) {
    throw std::invalid_argument("resolver expects (player 1, player 2)");
  }
  merged_ = MergeGrids(alpha_.grid, beta_.grid,
                       std::numeric_limits<double>::infinity());
}

Decision StrategyPairResolver::Decide(double t, const TrajectoryPrefix& past) {
  if (t == 0.0) {
    // A fresh pass over a new trajectory.
    next_ = 0;
    hist_u_ = ActionHistory();
    hist_v_ = ActionHistory();
  } else if (next_ >= merged_.size() || !SameTime(merged_[next_], t)) {
    throw std::logic_error("resolver called off the merged grid");
  }
  hist_u_.set_limit(t);
  hist_v_.set_limit(t);
  const std::size_t ia = FindTime(alpha_.grid, t);
  const std::size_t ib = FindTime(beta_.grid, t);
  int u = u_;
  int v = v_;
  if (ia != std::string::npos) {
    const DecisionContext ctx{ia, t, &hist_u_, &hist_v_, &past};
    u = alpha_.rule(ctx);
  }
  if (ib != std::string::npos) {
    const DecisionContext ctx{ib, t, &hist_v_, &hist_u_, nullptr};
    v = beta_.rule(ctx);
  }
  u_ = u;
  v_ = v;
  hist_u_.Append(t, u);
  hist_v_.Append(t, v);
  ++next_;
  const double until = next_ < merged_.size()
                           ? merged_[next_]
                           : std::numeric_limits<double>::infinity();
  return {u, v, until};
}

ControlPath ResolveControls(const PureStrategy& alpha, const PureStrategy& beta,
                            const Trajectory& trajectory) {
  StrategyPairResolver resolver(alpha, beta);
  ControlPath path;
  path.horizon = trajectory.horizon;
  double t = 0.0;
  while (t < trajectory.horizon) {
    const Decision d = resolver.Decide(t, TrajectoryPrefix(&trajectory, t));
    path.times.push_back(t);
    path.u.push_back(d.u);
    path.v.push_back(d.v);
    t = std::min(d.until, trajectory.horizon);
  }
  return path;
}

Eigen::MatrixXd ConditionalLottery(const Eigen::VectorXd& p,
                                   const std::vector<SplittingComponent>& c) {
  const Eigen::Index k = p.size();
  const Eigen::Index n = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(k, n);
  for (Eigen::Index s = 0; s < k; ++s) {
    if (p(s) <= 0.0) {
      x(s, 0) = 1.0;
      continue;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      x(s, i) = c[i].weight * c[i].posterior(s) / p(s);
    }
  }
  return x;
}

Eigen::MatrixXd JointLaw(const Eigen::VectorXd& p,
                         const Eigen::MatrixXd& lottery) {
  return p.asDiagonal() * lottery;
}

MixedStrategy BuildSplittingStrategy(const Eigen::VectorXd& p,
                                     const std::vector<SplittingComponent>& c,
                                     double tol) {
  if (c.empty()) throw std::invalid_argument("splitting: no components");
  if (!IsBelief(p)) throw std::invalid_argument("splitting: p not a belief");
  Eigen::VectorXd bary = Eigen::VectorXd::Zero(p.size());
  double total = 0.0;
  for (const SplittingComponent& comp : c) {
    if (comp.weight < 0.0 || !IsBelief(comp.posterior) ||
        comp.posterior.size() != p.size()) {
      throw std::invalid_argument("splitting: bad component");
    }
    if (comp.follow_on.side != Side::kPlayer1) {
      throw std::invalid_argument("splitting: follow-on must be player 1");
    }
    bary += comp.weight * comp.posterior;
    total += comp.weight;
  }
  if (std::abs(total - 1.0) > tol || (bary - p).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("splitting: weighted posteriors miss p");
  }
  for (Eigen::Index s = 0; s < p.size(); ++s) {
    if (p(s) > 0.0) continue;
    for (const SplittingComponent& comp : c) {
      if (comp.weight > 0.0 && comp.posterior(s) > tol) {
        throw std::invalid_argument(
            "splitting: posterior charges a zero-probability state");
      }
    }
  }
  const Eigen::MatrixXd lottery = ConditionalLottery(p, c);
  std::vector<MixedStrategy> follow;
  for (const SplittingComponent& comp : c) follow.push_back(comp.follow_on);

  MixedStrategy out;
  out.side = Side::kPlayer1;
  out.realize = [lottery, follow](RngStream& rng) {
    const double draw = rng.Uniform();
    std::vector<PureStrategy> pures;
    for (const MixedStrategy& m : follow) pures.push_back(m.realize(rng));
    for (const PureStrategy& s : pures) {
      if (s.grid != pures[0].grid) {
        throw std::invalid_argument("splitting: follow-on grids differ");
      }
    }
    PureStrategy pure{Side::kPlayer1, pures[0].grid, nullptr};
    pure.rule = [lottery, pures, draw](const DecisionContext& ctx) {
      const int k = ctx.trajectory->Initial();
      std::size_t comp = 0;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < lottery.cols(); ++i) {
        acc += lottery(k, i);
        comp = static_cast<std::size_t>(i);
        if (draw < acc) break;
      }
      // Skip trailing zero-mass components when rounding leaves acc < 1.
      while (comp > 0 && lottery(k, comp) <= 0.0) --comp;
      return pures[comp].rule(ctx);
    };
    return pure;
  };
  return out;
}

struct SolverStrategy::Shared {
  GameSpec spec;
  std::shared_ptr<const SimplexGrid> grid;
  std::vector<SplittingPlan> plans;
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> step_flow;  // Indexed u * |V| + v.
};

SolverStrategy::SolverStrategy(const GameSpec& spec, const ConcaveField& field,
                               const SolverConfig& solver_config,
                               const SolverStrategyConfig& config) {
  const double horizon = config.horizon > 0.0
                             ? config.horizon
                             : TruncationHorizon(spec.discount, config.eps);
  grid_ = UniformGrid(config.step, horizon);
  const StageContext ctx(spec, solver_config);
  plans_.resize(field.grid().size());
  ParallelFor(plans_.size(), [&](std::size_t i) {
    plans_[i] = ExtractSplitting(spec, field, i, ctx);
  });
  auto shared = std::make_shared<Shared>();
  shared->spec = spec;
  shared->grid = field.grid_ptr();
  shared->plans = plans_;
  shared->times = grid_;
  for (int u = 0; u < spec.num_u(); ++u) {
    for (int v = 0; v < spec.num_v(); ++v) {
      shared->step_flow.push_back(
          Expm(config.step * spec.rate(u, v).transpose()));
    }
  }
  shared_ = shared;
}

namespace {

// Per-realization mutable state; one realization serves one path.
struct SolverRun {
  Eigen::VectorXd belief;
  RngStream device{0, 0};
  std::size_t last = 0;
};

Eigen::VectorXd LotteryColumn(const SplittingPlan& plan,
                              const Eigen::VectorXd& at, std::size_t j) {
  Eigen::VectorXd col(at.size());
  for (Eigen::Index s = 0; s < at.size(); ++s) {
    col(s) = at(s) > 0.0 ? plan.weights[j] * plan.posteriors[j](s) / at(s)
                         : (j == 0 ? 1.0 : 0.0);
  }
  return col;
}

}  // namespace

MixedStrategy SolverStrategy::Strategy(const Eigen::VectorXd& p) const {
  if (!IsBelief(p)) throw std::invalid_argument("SolverStrategy: bad belief");
  std::shared_ptr<const Shared> shared = shared_;
  MixedStrategy out;
  out.side = Side::kPlayer1;
  out.realize = [shared, p](RngStream& rng) {
    const std::uint64_t device_seed = rng.NextU64();
    auto run = std::make_shared<SolverRun>();
    PureStrategy pure{Side::kPlayer1, shared->times, nullptr};
    pure.rule = [shared, p, run, device_seed](const DecisionContext& ctx) {
      const GameSpec& spec = shared->spec;
      SolverRun& st = *run;
      if (ctx.interval == 0) {
        st.belief = p;
        st.device = RngStream(device_seed, 0);
      } else {
        if (ctx.interval != st.last + 1) {
          throw std::logic_error("SolverStrategy: intervals out of order");
        }
        const int u = ctx.own->At(ctx.time);
        const int v = ctx.opponent->At(ctx.time);
        Eigen::VectorXd b =
            shared->step_flow[u * spec.num_v() + v] * st.belief;
        if (b.minCoeff() < -kDriftTol || std::abs(b.sum() - 1.0) > kDriftTol) {
          throw std::runtime_error("SolverStrategy: belief left the simplex");
        }
        b = b.cwiseMax(0.0);
        st.belief = b / b.sum();
      }
      st.last = ctx.interval;

      const std::size_t node = shared->grid->Nearest(st.belief);
      const SplittingPlan& plan = shared->plans[node];
      std::size_t j = 0;
      if (plan.posteriors.size() > 1) {
        const int k = ctx.trajectory->Current();
        std::vector<double> xk(plan.posteriors.size());
        for (std::size_t i = 0; i < xk.size(); ++i) {
          xk[i] = LotteryColumn(plan, plan.p, i)(k);
        }
        j = static_cast<std::size_t>(st.device.Categorical(xk));
        const Eigen::VectorXd post =
            st.belief.cwiseProduct(LotteryColumn(plan, plan.p, j));
        if (post.sum() > 0.0) st.belief = post / post.sum();
      }
      return st.device.Categorical(plan.mus[j]);
    };
    return pure;
  };
  return out;
}

std::vector<double> DefaultSwitchTimes(double discount) {
  return {0.25 / discount, 0.5 / discount, 1.0 / discount, 2.0 / discount,
          4.0 / discount};
}

std::vector<Response> DefaultResponseClass(const GameSpec& spec,
                                           const std::vector<double>& switches,
                                           std::vector<Response> extra) {
  std::vector<Response> out;
  const int nv = spec.num_v();
  for (int v = 0; v < nv; ++v) {
    out.push_back({"stationary:" + std::to_string(v),
                   ConstantStrategy(Side::kPlayer2, v)});
  }
  for (double s : switches) {
    if (!(s > 0.0)) throw std::invalid_argument("switch time must be > 0");
    for (int a = 0; a < nv; ++a) {
      for (int b = 0; b < nv; ++b) {
        if (a == b) continue;
        PureStrategy st{Side::kPlayer2, {0.0, s},
                        [a, b](const DecisionContext& ctx) {
                          return ctx.interval == 0 ? a : b;
                        }};
        out.push_back({"switch:" + std::to_string(a) + "->" +
                           std::to_string(b) + "@" + FormatTime(s),
                       std::move(st)});
      }
    }
  }
  for (Response& r : extra) {
    if (r.strategy.side != Side::kPlayer2) {
      throw std::invalid_argument("response must be a player-2 strategy");
    }
    out.push_back(std::move(r));
  }
  return out;
}

ResolverFactory PairFactory(const MixedStrategy& alpha,
                            const MixedStrategy& beta, std::uint64_t seed) {
  return [alpha, beta, seed](std::uint64_t i) {
    RngStream r1(seed, 3 * i + 1);
    RngStream r2(seed, 3 * i + 2);
    return std::make_unique<StrategyPairResolver>(alpha.realize(r1),
                                                  beta.realize(r2));
  };
}

BestResponseReport BestResponseProbe(const GameSpec& spec,
                                     const Eigen::VectorXd& p,
                                     const MixedStrategy& player1,
                                     const std::vector<Response>& responses,
                                     double eps, int n_paths,
                                     std::uint64_t seed) {
  if (responses.empty()) throw std::invalid_argument("empty response class");
  BestResponseReport report;
  report.worst_payoff = std::numeric_limits<double>::infinity();
  for (const Response& r : responses) {
    const PayoffEstimate est = EstimatePayoff(
        spec, p, PairFactory(player1, MixedStrategy::FromPure(r.strategy), seed),
        eps, n_paths, seed);
    report.entries.push_back({r.id, est});
    if (est.mean < report.worst_payoff) {
      report.worst_payoff = est.mean;
      report.stderr_ = est.stderr_;
      report.argmin_id = r.id;
    }
  }
  return report;
}

void WriteProbeJson(std::ostream& os, const BestResponseReport& report) {
  char buf[64];
  os << "{\n";
  std::snprintf(buf, sizeof(buf), "%.17g", report.worst_payoff);
  os << "  \"worst_payoff\": " << buf << ",\n";
  std::snprintf(buf, sizeof(buf), "%.17g", report.stderr_);
  os << "  \"stderr\": " << buf << ",\n";
  os << "  \"argmin_response_id\": \"" << report.argmin_id << "\",\n";
  os << "  \"responses\": [";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", report.entries[i].estimate.mean);
    os << (i ? ",\n" : "\n") << "    {\"id\": \"" << report.entries[i].id
       << "\", \"mean\": " << buf;
    std::snprintf(buf, sizeof(buf), "%.17g",
                  report.entries[i].estimate.stderr_);
    os << ", \"stderr\": " << buf << "}";
  }
  os << "\n  ]\n}\n";
}

}  // namespace asymgame
