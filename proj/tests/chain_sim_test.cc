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

#include <cmath>
#include <cstdlib>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "asymgame/game_model.h"
#include "asymgame/rng.h"
#include "battery.h"

namespace asymgame {
namespace {

using testing::Gen2;
using testing::Vec;

// exp(t Gen2(a, b)) in closed form.
Eigen::MatrixXd TwoStateExp(double a, double b, double t) {
  const double s = a + b;
  const double e = std::exp(-s * t);
  Eigen::MatrixXd m(2, 2);
  m << (b + a * e) / s, a * (1 - e) / s, b * (1 - e) / s, (a + b * e) / s;
  return m;
}

GameSpec TwoStateGame(const Eigen::MatrixXd& r0, const Eigen::MatrixXd& r1) {
  GameSpec s = testing::MakeSpec(2, 2, 1);
  s.rates = {{r0}, {r1}};
  return s;
}

ControlPath TwoPhase(double switch_at, double horizon) {
  return ControlPath{{0.0, switch_at}, {0, 1}, {0, 0}, horizon};
}

bool WithinSigmas(const ProbeResult& r, const Eigen::VectorXd& target,
                  double sigmas) {
  for (int k = 0; k < target.size(); ++k) {
    if (std::abs(r.estimate(k) - target(k)) > sigmas * r.stderr_(k) + 1e-15) {
      return false;
    }
  }
  return true;
}

TEST(ControlPathTest, IntervalLookup) {
  const ControlPath c{{0.0, 1.0, 2.5}, {0, 1, 0}, {0, 0, 0}, 4.0};
  EXPECT_EQ(c.IntervalAt(0.0), 0u);
  EXPECT_EQ(c.IntervalAt(0.5), 0u);
  EXPECT_EQ(c.IntervalAt(1.0), 0u);  // Intervals are (start, end].
  EXPECT_EQ(c.IntervalAt(1.0000001), 1u);
  EXPECT_EQ(c.IntervalAt(3.0), 2u);
  EXPECT_EQ(c.end(2), 4.0);
}

TEST(ControlPathTest, Validation) {
  const GameSpec s = TwoStateGame(Gen2(1, 1), Gen2(1, 1));
  EXPECT_NO_THROW(ConstantControls(1, 0, 2.0).Validate(s));
  EXPECT_THROW(ConstantControls(2, 0, 2.0).Validate(s), std::invalid_argument);
  EXPECT_THROW(ConstantControls(0, 1, 2.0).Validate(s), std::invalid_argument);
  EXPECT_THROW((ControlPath{{0.0, 0.0}, {0, 0}, {0, 0}, 1.0}).Validate(s),
               std::invalid_argument);
  EXPECT_THROW((ControlPath{{0.5}, {0}, {0}, 1.0}).Validate(s),
               std::invalid_argument);
  EXPECT_THROW(ConstantControls(0, 0, 0.0).Validate(s), std::invalid_argument);
}

TEST(TrajectoryTest, RightContinuousAndPrefixBoundary) {
  const Trajectory t{1, {0.5, 1.5}, {0, 1}, 3.0};
  EXPECT_EQ(t.StateAt(0.0), 1);
  EXPECT_EQ(t.StateAt(0.5), 0);
  EXPECT_EQ(t.StateAt(1.49), 0);
  EXPECT_EQ(t.StateAt(2.0), 1);
  const TrajectoryPrefix prefix(&t, 1.0);
  EXPECT_EQ(prefix.Current(), 0);
  EXPECT_EQ(prefix.Initial(), 1);
  EXPECT_THROW(prefix.StateAt(1.0 + 1e-9), ProtocolViolation);
}

TEST(TrajectoryTest, CsvFormat) {
  std::ostringstream os;
  WriteTrajectoryCsv(os, Trajectory{1, {0.5, 1.25}, {0, 1}, 3.0});
  EXPECT_EQ(os.str(), "jump_time,new_state\n0,1\n0.5,0\n1.25,1\n");
}

TEST(SimulateTest, ZeroRatesNeverJump) {
  const GameSpec s = testing::StaticGame();
  int ones = 0;
  for (int i = 0; i < 2000; ++i) {
    RngStream rng(9, i);
    OpenLoopResolver res(ConstantControls(0, 0, 5.0));
    const SimulationResult sim = SimulateChain(s, Vec({0.25, 0.75}), res, 5.0,
                                               rng);
    EXPECT_TRUE(sim.trajectory.jump_times.empty());
    ones += sim.trajectory.initial_state;
  }
  // Binomial(2000, 0.75): sd ~ 19.4.
  EXPECT_NEAR(ones, 1500, 4 * 19.4);
}

TEST(SimulateTest, JumpCountIsPoisson) {
  // Symmetric rate 2 out of either state: jumps form a Poisson(2 t) process.
  const GameSpec s = TwoStateGame(Gen2(2, 2), Gen2(2, 2));
  const double t = 3.0;
  const int n = 4000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    RngStream rng(11, i);
    OpenLoopResolver res(TwoPhase(1.0, t));
    sum += SimulateChainFrom(s, 0, res, t, rng).trajectory.jump_times.size();
  }
  EXPECT_NEAR(sum / n, 6.0, 4 * std::sqrt(6.0 / n));
}

TEST(SimulateTest, RecordsResolverDecisions) {
  // Feedback on the current state, re-decided every 0.25.
  class Feedback : public ControlResolver {
   public:
    Decision Decide(double t, const TrajectoryPrefix& past) override {
      return {past.Current(), 0, t + 0.25};
    }
  };
  const GameSpec s = TwoStateGame(Gen2(1, 3), Gen2(3, 1));
  RngStream rng(3, 0);
  Feedback fb;
  const SimulationResult sim = SimulateChainFrom(s, 0, fb, 2.0, rng);
  ASSERT_EQ(sim.controls.size(), 8u);
  for (std::size_t i = 0; i < sim.controls.size(); ++i) {
    EXPECT_DOUBLE_EQ(sim.controls.times[i], 0.25 * i);
    EXPECT_EQ(sim.controls.u[i],
              sim.trajectory.StateAt(sim.controls.times[i]));
  }
}

TEST(SimulateTest, ResolverErrors) {
  class Peek : public ControlResolver {
   public:
    Decision Decide(double t, const TrajectoryPrefix& past) override {
      past.StateAt(t + 0.1);
      return {0, 0, t + 1};
    }
  };
  class Stuck : public ControlResolver {
   public:
    Decision Decide(double t, const TrajectoryPrefix&) override {
      return {0, 0, t};
    }
  };
  class Invalid : public ControlResolver {
   public:
    Decision Decide(double t, const TrajectoryPrefix&) override {
      return {5, 0, t + 1};
    }
  };
  const GameSpec s = TwoStateGame(Gen2(1, 1), Gen2(1, 1));
  RngStream rng(1, 1);
  Peek peek;
  Stuck stuck;
  Invalid invalid;
  EXPECT_THROW(SimulateChainFrom(s, 0, peek, 1.0, rng), ProtocolViolation);
  EXPECT_THROW(SimulateChainFrom(s, 0, stuck, 1.0, rng), std::logic_error);
  EXPECT_THROW(SimulateChainFrom(s, 0, invalid, 1.0, rng), std::out_of_range);
}

TEST(BeliefFlowTest, ClosedForms) {
  const GameSpec still = testing::StaticGame();
  const Eigen::VectorXd p = Vec({0.3, 0.7});
  EXPECT_LE((BeliefFlow(still, p, ConstantControls(0, 0, 9.0), 9.0) - p)
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
  const GameSpec sym = TwoStateGame(Gen2(1, 1), Gen2(0.5, 2));
  for (double t : {0.0, 0.1, 0.7, 3.0}) {
    const Eigen::VectorXd q =
        BeliefFlow(sym, Vec({1, 0}), ConstantControls(0, 0, 5.0), t);
    EXPECT_NEAR(q(0), 0.5 * (1 + std::exp(-2 * t)), 1e-10);
    EXPECT_NEAR(q(1), 0.5 * (1 - std::exp(-2 * t)), 1e-10);
  }
  // Two phases compose the closed-form kernels in time order.
  const Eigen::VectorXd expect = TwoStateExp(0.5, 2, 1.3).transpose() *
                                 (TwoStateExp(1, 1, 0.4).transpose() * p);
  EXPECT_LE((BeliefFlow(sym, p, TwoPhase(0.4, 2.0), 1.7) - expect)
                .cwiseAbs()
                .maxCoeff(),
            1e-10);
}

TEST(BeliefFlowTest, ThreeStateStationaryLaw) {
  GameSpec s = testing::MakeSpec(3, 1, 1);
  Eigen::MatrixXd r(3, 3);
  r << -1, 0.7, 0.3, 0.2, -0.5, 0.3, 0.9, 0.6, -1.5;
  s.rates = {{r}};
  // Stationary law: kernel of R^T.
  Eigen::VectorXd pi = Eigen::FullPivLU<Eigen::MatrixXd>(r.transpose())
                           .kernel()
                           .col(0);
  pi /= pi.sum();
  const Eigen::VectorXd q =
      BeliefFlow(s, Vec({1, 0, 0}), ConstantControls(0, 0, 60.0), 60.0);
  EXPECT_LE((q - pi).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BeliefFlowTest, SemigroupProperty) {
  const GameSpec s = testing::ThreeStateGame();
  const ControlPath path{{0.0, 0.3, 1.1}, {0, 1, 1}, {1, 0, 1}, 3.0};
  const Eigen::VectorXd p = Vec({0.2, 0.5, 0.3});
  // Flow to 0.8 (inside interval 1), then restart the tail from there.
  const Eigen::VectorXd mid = BeliefFlow(s, p, path, 0.8);
  const ControlPath tail{{0.0, 0.3}, {1, 1}, {0, 1}, 2.2};
  EXPECT_LE((BeliefFlow(s, mid, tail, 2.2) - BeliefFlow(s, p, path, 3.0))
                .cwiseAbs()
                .maxCoeff(),
            1e-10);
  EXPECT_THROW(BeliefFlow(s, p, path, 3.5), std::invalid_argument);
}

TEST(GirsanovTest, Examples) {
  const GameSpec ref = testing::ReferenceGame(3);
  const Trajectory t{0, {0.2, 0.9}, {2, 1}, 2.0};
  EXPECT_EQ(GirsanovDensity(ref, t, ConstantControls(1, 1, 2.0), 2.0), 1.0);
  const GameSpec fast = TwoStateGame(Gen2(2, 2), Gen2(0, 1));
  const Trajectory none{0, {}, {}, 2.0};
  for (double x : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(GirsanovDensity(fast, none, ConstantControls(0, 0, 2.0), x),
                std::exp(-x), 1e-15);
  }
  const Trajectory one{0, {0.5}, {1}, 2.0};
  EXPECT_NEAR(GirsanovDensity(fast, one, ConstantControls(0, 0, 2.0), 2.0),
              2.0 * std::exp(-2.0), 1e-15);
  // Under action 1 state 0 cannot leave, so the jump has zero likelihood.
  EXPECT_EQ(GirsanovDensity(fast, one, ConstantControls(1, 0, 2.0), 2.0), 0.0);
}

TEST(GirsanovTest, ReweightsReferencePathsToTheControlledLaw) {
  const GameSpec ref = testing::ReferenceGame(2);
  const GameSpec s = TwoStateGame(Gen2(0.3, 2.0), Gen2(1.5, 0.4));
  const ControlPath path = TwoPhase(0.6, 1.5);
  const int n = 40000;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd acc2 = Eigen::VectorXd::Zero(2);
  for (int i = 0; i < n; ++i) {
    RngStream rng(21, i);
    OpenLoopResolver res(ConstantControls(0, 0, 1.5));
    const Trajectory tr = SimulateChainFrom(ref, 0, res, 1.5, rng).trajectory;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
    z(tr.StateAt(1.5)) = GirsanovDensity(s, tr, path, 1.5);
    acc += z;
    acc2 += z.cwiseProduct(z);
  }
  const Eigen::VectorXd mean = acc / n;
  const Eigen::VectorXd law = BeliefFlow(s, Vec({1, 0}), path, 1.5);
  for (int k = 0; k < 2; ++k) {
    const double se = std::sqrt((acc2(k) / n - mean(k) * mean(k)) / n);
    EXPECT_NEAR(mean(k), law(k), 4 * se);
  }
}

TEST(ProbeTest, ZeroRatesAreExact) {
  const GameSpec s = testing::StaticGame();
  const Eigen::VectorXd p = Vec({0.35, 0.65});
  const ProbeResult r =
      MartingaleProbe(s, p, ConstantControls(0, 0, 2.0), 2.0, 100, 1);
  EXPECT_LE((r.estimate - p).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE(r.stderr_.maxCoeff(), 1e-15);
  EXPECT_THROW(MartingaleProbe(s, p, ConstantControls(0, 0, 2.0), 2.0, 99, 1),
               std::invalid_argument);
}

TEST(ProbeTest, MartingaleHoldsWithinThreeSigma) {
  // One rerun on a fresh seed guards the 3 sigma band against a single
  // unlucky draw.
  const GameSpec sym = TwoStateGame(Gen2(1, 1), Gen2(0.5, 2));
  const GameSpec three = testing::ThreeStateGame();
  const ControlPath p2 = TwoPhase(0.5, 1.0);
  const ControlPath p3{{0.0, 0.3, 0.7}, {0, 1, 1}, {1, 0, 1}, 1.0};
  struct Case {
    const GameSpec* spec;
    Eigen::VectorXd p;
    const ControlPath* path;
  };
  for (const Case& c : {Case{&sym, Vec({0.3, 0.7}), &p2},
                        Case{&three, Vec({0.2, 0.5, 0.3}), &p3}}) {
    const ProbeResult a = MartingaleProbe(*c.spec, c.p, *c.path, 1.0, 20000, 7);
    const bool ok = WithinSigmas(a, c.p, 3.0) ||
                    WithinSigmas(MartingaleProbe(*c.spec, c.p, *c.path, 1.0,
                                                 20000, 8),
                                 c.p, 3.0);
    EXPECT_TRUE(ok) << a.estimate.transpose() << " +- "
                    << a.stderr_.transpose();
  }
}

TEST(ProbeTest, MarginalLawMatchesBeliefFlow) {
  const GameSpec s = testing::ThreeStateGame();
  const ControlPath path{{0.0, 0.5}, {1, 0}, {0, 1}, 2.0};
  const Eigen::VectorXd p = Vec({0.6, 0.1, 0.3});
  const Eigen::VectorXd law = BeliefFlow(s, p, path, 2.0);
  const bool ok =
      WithinSigmas(MarginalLawProbe(s, p, path, 2.0, 20000, 3), law, 3.0) ||
      WithinSigmas(MarginalLawProbe(s, p, path, 2.0, 20000, 4), law, 3.0);
  EXPECT_TRUE(ok);
}

TEST(PayoffTest, TruncationHorizon) {
  EXPECT_NEAR(TruncationHorizon(1.0, 1e-4), std::log(1e4), 1e-15);
  EXPECT_NEAR(TruncationHorizon(0.5, 0.01), 2 * std::log(100.0), 1e-13);
  EXPECT_THROW(TruncationHorizon(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(TruncationHorizon(1.0, 1.0), std::invalid_argument);
}

ResolverFactory Constant(int u, int v) {
  return [u, v](std::uint64_t) {
    return std::make_unique<OpenLoopResolver>(ConstantControls(u, v, 1e9));
  };
}

TEST(PayoffTest, ConstantPayoffHasNoVariance) {
  const GameSpec s = testing::TrivialGame(0.5);
  const PayoffEstimate e =
      EstimatePayoff(s, Vec({0.5, 0.5}), Constant(1, 0), 1e-4, 500, 2);
  EXPECT_NEAR(e.mean, 0.5 * (1 - 1e-4), 1e-12);
  EXPECT_LE(e.stderr_, 1e-12);
  EXPECT_EQ(e.n_paths, 500);
  EXPECT_NEAR(e.horizon, std::log(1e4), 1e-15);
}

TEST(PayoffTest, StaticGameMatchesExpectation) {
  const GameSpec s = testing::StaticGame();
  const Eigen::VectorXd p = Vec({0.4, 0.6});
  const PayoffEstimate e = EstimatePayoff(s, p, Constant(0, 0), 1e-4, 5000, 3);
  EXPECT_NEAR(e.mean, (0.4 * 0.2 + 0.6 * 0.7) * (1 - 1e-4), 3 * e.stderr_);
  EXPECT_GT(e.stderr_, 0.0);
}

TEST(PayoffTest, PathPayoffIntegratesExactly) {
  GameSpec s = TwoStateGame(Gen2(1, 1), Gen2(1, 1));
  s.payoff[0] = {{1.0}, {3.0}};
  s.payoff[1] = {{0.0}, {2.0}};
  s.discount = 0.5;
  SimulationResult sim;
  sim.trajectory = Trajectory{0, {0.5, 2.0}, {1, 0}, 4.0};
  sim.controls = TwoPhase(1.0, 4.0);
  auto d = [](double a, double b) {
    return std::exp(-0.5 * a) - std::exp(-0.5 * b);
  };
  const double expect = 1.0 * d(0, 0.5) + 0.0 * d(0.5, 1.0) +
                        2.0 * d(1.0, 2.0) + 3.0 * d(2.0, 4.0);
  EXPECT_NEAR(PathPayoff(s, sim, 4.0), expect, 1e-15);
  EXPECT_NEAR(PathPayoff(s, sim, 1.5), 1.0 * d(0, 0.5) + 2.0 * d(1.0, 1.5),
              1e-15);
}

TEST(PayoffTest, LinearInTheInitialBelief) {
  const GameSpec s = testing::GenericGame();
  const auto f = Constant(0, 1);
  const PayoffEstimate a = EstimatePayoff(s, Vec({1, 0}), f, 1e-3, 4000, 5);
  const PayoffEstimate b = EstimatePayoff(s, Vec({0, 1}), f, 1e-3, 4000, 6);
  const PayoffEstimate m = EstimatePayoff(s, Vec({0.3, 0.7}), f, 1e-3, 4000, 7);
  const double se = std::sqrt(m.stderr_ * m.stderr_ +
                              0.09 * a.stderr_ * a.stderr_ +
                              0.49 * b.stderr_ * b.stderr_);
  EXPECT_NEAR(m.mean, 0.3 * a.mean + 0.7 * b.mean, 4 * se);
}

TEST(PayoffTest, ReproducibleAcrossWorkerCounts) {
  const GameSpec s = testing::GenericGame();
  const char* saved = std::getenv("ASYMGAME_THREADS");
  const std::string restore = saved ? saved : "";
  setenv("ASYMGAME_THREADS", "1", 1);
  const PayoffEstimate one =
      EstimatePayoff(s, Vec({0.5, 0.5}), Constant(1, 1), 1e-3, 1000, 99);
  setenv("ASYMGAME_THREADS", "4", 1);
  const PayoffEstimate four =
      EstimatePayoff(s, Vec({0.5, 0.5}), Constant(1, 1), 1e-3, 1000, 99);
  if (saved) {
    setenv("ASYMGAME_THREADS", restore.c_str(), 1);
  } else {
    unsetenv("ASYMGAME_THREADS");
  }
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.stderr_, four.stderr_);
}

TEST(PairwiseSumTest, MatchesExtendedPrecision) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(100003);
  long double exact = 0.0L;
  for (double& x : v) {
    x = u(gen);
    exact += x;
  }
  EXPECT_NEAR(PairwiseSum(v), static_cast<double>(exact), 1e-9);
  EXPECT_EQ(PairwiseSum({}), 0.0);
  EXPECT_EQ(PairwiseSum({1, 2, 3, 4, 5}), 15.0);
}

}  // namespace
}  // namespace asymgame
