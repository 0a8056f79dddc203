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

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "asymgame/chain_sim.h"
#include "asymgame/hj_primal.h"
#include "asymgame/rng.h"
#include "battery.h"

namespace asymgame {
namespace {

using testing::Vec;

Trajectory Still(int state, double horizon) {
  return Trajectory{state, {}, {}, horizon};
}

// Action of a control path on (t - dt, t].
int UAt(const ControlPath& c, double t) { return c.u[c.IntervalAt(t)]; }
int VAt(const ControlPath& c, double t) { return c.v[c.IntervalAt(t)]; }

PureStrategy Alternating(Side side, std::vector<double> grid) {
  return {side, std::move(grid),
          [](const DecisionContext& ctx) {
            return static_cast<int>(ctx.interval % 2);
          }};
}

TEST(ActionHistoryTest, BoundaryIsEnforced) {
  ActionHistory h;
  h.Append(0.0, 1);
  h.Append(1.0, 0);
  h.set_limit(1.0);
  EXPECT_EQ(h.At(0.5), 1);
  EXPECT_EQ(h.At(1.0), 1);
  EXPECT_EQ(h.Last(), 1);
  EXPECT_THROW(h.At(1.5), ProtocolViolation);
  EXPECT_THROW(h.At(0.0), ProtocolViolation);
  h.set_limit(2.0);
  EXPECT_EQ(h.At(1.5), 0);
  EXPECT_THROW(h.Append(1.0, 1), std::logic_error);
}

TEST(StrategyTest, ConstantPair) {
  const ControlPath c =
      ResolveControls(ConstantStrategy(Side::kPlayer1, 1),
                      ConstantStrategy(Side::kPlayer2, 0), Still(0, 3.0));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.u[0], 1);
  EXPECT_EQ(c.v[0], 0);
  EXPECT_EQ(c.horizon, 3.0);
}

TEST(StrategyTest, EchoOverThreeIntervals) {
  const PureStrategy alpha = Alternating(Side::kPlayer1, {0, 1, 2});
  const PureStrategy echo{Side::kPlayer2,
                          {0, 1, 2},
                          [](const DecisionContext& ctx) {
                            return ctx.interval == 0 ? 0
                                                     : ctx.opponent->Last();
                          }};
  const ControlPath c = ResolveControls(alpha, echo, Still(0, 3.0));
  EXPECT_EQ(c.u, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(c.v, (std::vector<int>{0, 0, 1}));
}

TEST(StrategyTest, MergedGridHoldsActionsBetweenOwnPoints) {
  EXPECT_EQ(MergeGrids({0, 0.5}, {0, 0.3, 0.9}, 0.8),
            (std::vector<double>{0, 0.3, 0.5}));
  const ControlPath c =
      ResolveControls(Alternating(Side::kPlayer1, {0, 0.5}),
                      Alternating(Side::kPlayer2, {0, 0.3, 0.9}),
                      Still(1, 1.5));
  EXPECT_EQ(c.times, (std::vector<double>{0, 0.3, 0.5, 0.9}));
  EXPECT_EQ(c.u, (std::vector<int>{0, 0, 1, 1}));
  EXPECT_EQ(c.v, (std::vector<int>{0, 1, 1, 0}));
}

TEST(StrategyTest, RefinementPreservesControls) {
  // A rule that reads its opponent and the state.
  const PureStrategy alpha{Side::kPlayer1,
                           {0, 0.5, 1.0},
                           [](const DecisionContext& ctx) {
                             if (ctx.interval == 0) return 0;
                             return (ctx.opponent->Last() +
                                     ctx.trajectory->Current()) % 2;
                           }};
  const PureStrategy beta = Alternating(Side::kPlayer2, {0, 0.7});
  const Trajectory tr{0, {0.2, 0.8}, {1, 0}, 2.0};
  const ControlPath coarse = ResolveControls(alpha, beta, tr);
  const ControlPath fine =
      ResolveControls(Refine(alpha, UniformGrid(0.1, 2.0)), beta, tr);
  for (double t = 0.01; t < 2.0; t += 0.02) {
    EXPECT_EQ(UAt(coarse, t), UAt(fine, t)) << t;
    EXPECT_EQ(VAt(coarse, t), VAt(fine, t)) << t;
  }
  EXPECT_THROW(Refine(alpha, {0, 0.25, 1.0}), std::invalid_argument);
}

TEST(StrategyTest, UniformGrid) {
  EXPECT_EQ(UniformGrid(0.5, 1.6), (std::vector<double>{0, 0.5, 1.0, 1.5}));
  EXPECT_EQ(UniformGrid(0.5, 1.5), (std::vector<double>{0, 0.5, 1.0}));
  EXPECT_THROW(UniformGrid(0.0, 1.0), std::invalid_argument);
}

TEST(StrategyTest, ProtocolViolations) {
  const PureStrategy peek_opponent{
      Side::kPlayer1, {0, 1},
      [](const DecisionContext& ctx) {
        return ctx.interval == 0 ? 0 : ctx.opponent->At(ctx.time + 0.5);
      }};
  const PureStrategy peek_state{
      Side::kPlayer1, {0, 1},
      [](const DecisionContext& ctx) {
        return ctx.trajectory->StateAt(ctx.time + 0.1);
      }};
  const PureStrategy current_interval{
      Side::kPlayer2, {0},
      [](const DecisionContext& ctx) { return ctx.opponent->Last(); }};
  const PureStrategy beta = ConstantStrategy(Side::kPlayer2, 0);
  const Trajectory tr = Still(0, 2.0);
  EXPECT_THROW(ResolveControls(peek_opponent, beta, tr), ProtocolViolation);
  EXPECT_THROW(ResolveControls(peek_state, beta, tr), ProtocolViolation);
  EXPECT_THROW(ResolveControls(ConstantStrategy(Side::kPlayer1, 0),
                               current_interval, tr),
               ProtocolViolation);
  EXPECT_THROW(StrategyPairResolver(beta, beta), std::invalid_argument);
}

TEST(StrategyTest, PlayerTwoCannotSeeTheState) {
  bool saw = true;
  const PureStrategy beta{Side::kPlayer2, {0},
                          [&saw](const DecisionContext& ctx) {
                            saw = ctx.trajectory != nullptr;
                            return 0;
                          }};
  ResolveControls(ConstantStrategy(Side::kPlayer1, 0), beta, Still(1, 1.0));
  EXPECT_FALSE(saw);
}

std::vector<SplittingComponent> TwoComponents(const Eigen::VectorXd& a,
                                              const Eigen::VectorXd& b) {
  return {{0.5, a, MixedStrategy::FromPure(ConstantStrategy(Side::kPlayer1, 0))},
          {0.5, b, MixedStrategy::FromPure(ConstantStrategy(Side::kPlayer1, 1))}};
}

TEST(SplittingTest, ConditionalLotteryExamples) {
  const Eigen::VectorXd p = Vec({0.5, 0.5});
  const Eigen::MatrixXd full =
      ConditionalLottery(p, TwoComponents(Vec({1, 0}), Vec({0, 1})));
  EXPECT_LE((full - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(),
            1e-15);
  const Eigen::MatrixXd part =
      ConditionalLottery(p, TwoComponents(Vec({0.75, 0.25}), Vec({0.25, 0.75})));
  Eigen::MatrixXd expect(2, 2);
  expect << 0.75, 0.25, 0.25, 0.75;
  EXPECT_LE((part - expect).cwiseAbs().maxCoeff(), 1e-15);
  Eigen::MatrixXd joint(2, 2);
  joint << 0.375, 0.125, 0.125, 0.375;
  EXPECT_LE((JointLaw(p, part) - joint).cwiseAbs().maxCoeff(), 1e-15);
  // A state of zero mass sends everything to component 0.
  const Eigen::MatrixXd edge = ConditionalLottery(
      Vec({1, 0}), {{1.0, Vec({1, 0}), {}}});
  EXPECT_EQ(edge(1, 0), 1.0);
}

TEST(SplittingTest, RealizedJointLawMatches) {
  // Component i plays action i, so the first control reveals it.
  const Eigen::VectorXd p = Vec({0.4, 0.6});
  const std::vector<SplittingComponent> comps = {
      {0.5, Vec({0.7, 0.3}),
       MixedStrategy::FromPure(ConstantStrategy(Side::kPlayer1, 0))},
      {0.5, Vec({0.1, 0.9}),
       MixedStrategy::FromPure(ConstantStrategy(Side::kPlayer1, 1))}};
  const MixedStrategy alpha = BuildSplittingStrategy(p, comps);
  const Eigen::MatrixXd law = JointLaw(p, ConditionalLottery(p, comps));
  const int n = 40000;
  Eigen::MatrixXd count = Eigen::MatrixXd::Zero(2, 2);
  for (int i = 0; i < n; ++i) {
    RngStream chain(77, 3 * i);
    RngStream device(77, 3 * i + 1);
    const int x0 = chain.Categorical(p);
    const ControlPath c = ResolveControls(
        alpha.realize(device), ConstantStrategy(Side::kPlayer2, 0),
        Still(x0, 1.0));
    count(x0, c.u[0]) += 1;
  }
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 2; ++j) {
      const double q = law(k, j);
      EXPECT_NEAR(count(k, j) / n, q, 4 * std::sqrt(q * (1 - q) / n));
    }
  }
}

TEST(SplittingTest, InvalidInputs) {
  const Eigen::VectorXd p = Vec({0.5, 0.5});
  EXPECT_THROW(BuildSplittingStrategy(p, {}), std::invalid_argument);
  auto bad = TwoComponents(Vec({1, 0}), Vec({0.5, 0.5}));
  EXPECT_THROW(BuildSplittingStrategy(p, bad), std::invalid_argument);
  auto grids = TwoComponents(Vec({1, 0}), Vec({0, 1}));
  grids[1].follow_on = MixedStrategy::FromPure(
      Alternating(Side::kPlayer1, {0, 1}));
  const MixedStrategy m = BuildSplittingStrategy(p, grids);
  RngStream rng(1, 1);
  EXPECT_THROW(m.realize(rng), std::invalid_argument);
}

TEST(ResponseClassTest, DefaultClass) {
  const GameSpec s = testing::GenericGame();
  const auto times = DefaultSwitchTimes(2.0);
  EXPECT_EQ(times, (std::vector<double>{0.125, 0.25, 0.5, 1.0, 2.0}));
  const auto cls = DefaultResponseClass(s, times);
  ASSERT_EQ(cls.size(), 2u + 5u * 2u);
  EXPECT_EQ(cls[0].id, "stationary:0");
  EXPECT_EQ(cls[2].id, "switch:0->1@0.125");
  const ControlPath c = ResolveControls(ConstantStrategy(Side::kPlayer1, 0),
                                        cls[3].strategy, Still(0, 1.0));
  EXPECT_EQ(c.v, (std::vector<int>{1, 0}));
  EXPECT_EQ(c.times, (std::vector<double>{0, 0.125}));
  EXPECT_THROW(DefaultResponseClass(s, {0.0}), std::invalid_argument);
  EXPECT_THROW(DefaultResponseClass(
                   s, {}, {{"x", ConstantStrategy(Side::kPlayer1, 0)}}),
               std::invalid_argument);
}

TEST(SolverStrategyTest, TrivialGameIsExact) {
  const GameSpec s = testing::TrivialGame(0.5);
  const PrimalSolution sol = SolvePrimal(s, {});
  const SolverStrategy strat(s, sol.field, {}, {});
  const BestResponseReport r = BestResponseProbe(
      s, Vec({0.3, 0.7}), strat.Strategy(Vec({0.3, 0.7})),
      DefaultResponseClass(s, DefaultSwitchTimes(s.discount)), 1e-4, 200, 5);
  EXPECT_NEAR(r.worst_payoff, 0.5 * (1 - 1e-4), 1e-12);
  EXPECT_LE(r.stderr_, 1e-12);
  EXPECT_EQ(r.entries.size(), 12u);
}

TEST(SolverStrategyTest, StaticGameWorstIsTheMean) {
  const GameSpec s = testing::StaticGame();
  const PrimalSolution sol = SolvePrimal(s, {});
  const SolverStrategy strat(s, sol.field, {}, {});
  const Eigen::VectorXd p = Vec({0.4, 0.6});
  const BestResponseReport r = BestResponseProbe(
      s, p, strat.Strategy(p),
      DefaultResponseClass(s, DefaultSwitchTimes(s.discount)), 1e-4, 4000, 9);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.argmin_id, "stationary:0");
  EXPECT_NEAR(r.worst_payoff, (0.4 * 0.2 + 0.6 * 0.7) * (1 - 1e-4),
              3 * r.stderr_);
}

TEST(SolverStrategyTest, FullRevelationRevealsAtTimeZero) {
  const GameSpec s = testing::FullRevelationGame();
  const PrimalSolution sol = SolvePrimal(s, {});
  const SolverStrategy strat(s, sol.field, {}, {});
  const Eigen::VectorXd p = Vec({0.5, 0.5});
  const SplittingPlan& plan = strat.plan(sol.field.grid().Nearest(p));
  ASSERT_EQ(plan.posteriors.size(), 2u);
  const MixedStrategy alpha = strat.Strategy(p);
  for (int i = 0; i < 200; ++i) {
    RngStream device(3, i);
    const int x0 = i % 2;
    const ControlPath c =
        ResolveControls(alpha.realize(device),
                        ConstantStrategy(Side::kPlayer2, i % 3 == 0),
                        Still(x0, 2.0));
    for (int u : c.u) ASSERT_EQ(u, x0) << i;
  }
}

TEST(SolverStrategyTest, IntervalsMustComeInOrder) {
  const GameSpec s = testing::GenericGame();
  const PrimalSolution sol = SolvePrimal(s, {});
  const SolverStrategy strat(s, sol.field, {}, {});
  RngStream device(1, 1);
  const PureStrategy pure = strat.Strategy(Vec({0.5, 0.5})).realize(device);
  const Trajectory tr = Still(0, 1.0);
  const TrajectoryPrefix past(&tr, 0.0);
  ActionHistory own, opp;
  pure.rule({0, 0.0, &own, &opp, &past});
  own.Append(0.0, 0);
  opp.Append(0.0, 0);
  own.set_limit(0.1);
  opp.set_limit(0.1);
  const TrajectoryPrefix later(&tr, 0.1);
  EXPECT_THROW(pure.rule({2, 0.1, &own, &opp, &later}), std::logic_error);
  EXPECT_EQ(strat.grid().size(), UniformGrid(0.05, std::log(1e4)).size());
}

TEST(BestResponseTest, EmptyClassThrows) {
  const GameSpec s = testing::TrivialGame();
  EXPECT_THROW(BestResponseProbe(
                   s, Vec({0.5, 0.5}),
                   MixedStrategy::FromPure(ConstantStrategy(Side::kPlayer1, 0)),
                   {}, 1e-3, 10, 1),
               std::invalid_argument);
}

TEST(BestResponseTest, CommonRandomNumbersAcrossResponses) {
  // Against a player 1 whose action ignores player 2 and a payoff that does
  // not depend on v, every response sees the same paths.
  GameSpec s = testing::MakeSpec(2, 1, 2);
  s.rates = {{testing::Gen2(1, 2), testing::Gen2(1, 2)}};
  s.payoff[0] = {{0.3, 0.3}};
  s.payoff[1] = {{0.9, 0.9}};
  const BestResponseReport r = BestResponseProbe(
      s, Vec({0.5, 0.5}),
      MixedStrategy::FromPure(ConstantStrategy(Side::kPlayer1, 0)),
      DefaultResponseClass(s, {1.0}), 1e-3, 500, 4);
  ASSERT_EQ(r.entries.size(), 4u);
  for (const ProbeEntry& e : r.entries) {
    EXPECT_EQ(e.estimate.mean, r.entries[0].estimate.mean);
  }
}

}  // namespace
}  // namespace asymgame
