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

#include "asymgame/game_model.h"

#include <random>

#include <gtest/gtest.h>

#include "asymgame/matrix_game.h"
#include "battery.h"

namespace asymgame {
namespace {

using testing::Gen2;
using testing::MakeSpec;
using testing::Vec;

GameSpec SymmetricHalf() {
  GameSpec s = MakeSpec(2, 2, 2);
  for (auto& row : s.rates)
    for (auto& r : row) r = Gen2(1, 1);
  for (auto& by_u : s.payoff)
    for (auto& by_v : by_u)
      for (double& g : by_v) g = 0.5;
  return s;
}

TEST(ValidateSpecTest, AcceptsSymmetricGenerator) {
  EXPECT_TRUE(ValidateSpec(SymmetricHalf()).empty());
}

TEST(ValidateSpecTest, ReportsRowSumWithLocation) {
  GameSpec s = SymmetricHalf();
  s.rates[1][0](1, 0) = 1.1;
  const auto v = ValidateSpec(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].constraint, "row sum");
  EXPECT_NE(v[0].location.find("rates[1][0]"), std::string::npos);
  EXPECT_NE(v[0].location.find("row 1"), std::string::npos);
  EXPECT_NEAR(v[0].observed, 0.1, 1e-12);
}

TEST(ValidateSpecTest, ReportsPayoffRange) {
  GameSpec s = SymmetricHalf();
  s.payoff[0][1][0] = 1.5;
  const auto v = ValidateSpec(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].constraint, "payoff range");
  EXPECT_DOUBLE_EQ(v[0].observed, 1.5);
}

TEST(ValidateSpecTest, ReportsNegativeRateAndDiscount) {
  GameSpec s = SymmetricHalf();
  s.rates[0][0] = testing::M2(1, -1, 1, -1);
  s.discount = 0.0;
  const auto v = ValidateSpec(s);
  bool negative = false, discount = false;
  for (const auto& x : v) {
    negative |= x.constraint == "nonnegative off-diagonal rate";
    discount |= x.constraint == "discount > 0";
  }
  EXPECT_TRUE(negative);
  EXPECT_TRUE(discount);
  EXPECT_THROW(RequireValidSpec(s), std::invalid_argument);
}

TEST(MixGeneratorTest, DiracAverageAndConstant) {
  const GameSpec s = testing::GenericGame();
  EXPECT_TRUE(MixGenerator(s, Vec({0, 1}), Vec({1, 0})).isApprox(s.rate(1, 0)));
  const Eigen::MatrixXd half = MixGenerator(s, Vec({1, 0}), Vec({0.5, 0.5}));
  EXPECT_TRUE(half.isApprox(0.5 * (s.rate(0, 0) + s.rate(0, 1))));
  const GameSpec c = SymmetricHalf();
  EXPECT_TRUE(
      MixGenerator(c, Vec({0.3, 0.7}), Vec({0.9, 0.1})).isApprox(Gen2(1, 1)));
}

TEST(MixGeneratorTest, RowsSumToZero) {
  const GameSpec s = testing::ThreeStateGame();
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double a = unit(gen), b = unit(gen);
    const Eigen::MatrixXd r = MixGenerator(s, Vec({a, 1 - a}), Vec({b, 1 - b}));
    EXPECT_LE(r.rowwise().sum().cwiseAbs().maxCoeff(), 1e-15);
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y)
        if (x != y) EXPECT_GE(r(x, y), 0.0);
  }
}

TEST(MixPayoffTest, Examples) {
  EXPECT_DOUBLE_EQ(MixPayoff(SymmetricHalf(), Vec({0.2, 0.8}),
                             Vec({0.4, 0.6}), Vec({0.1, 0.9})),
                   0.5);
  const GameSpec g = testing::GenericGame();
  EXPECT_DOUBLE_EQ(MixPayoff(g, Vec({0, 1}), Vec({1, 0}), Vec({0, 1})), 0.7);
  GameSpec split = MakeSpec(2, 2, 2);
  for (auto& by_v : split.payoff[1])
    for (double& x : by_v) x = 1.0;
  EXPECT_DOUBLE_EQ(MixPayoff(split, Vec({0.5, 0.5}), Vec({0.3, 0.7}),
                             Vec({0.6, 0.4})),
                   0.5);
}

TEST(HamiltonianTest, ConstantPayoffNoRates) {
  GameSpec s = MakeSpec(2, 2, 2);
  for (auto& by_u : s.payoff)
    for (auto& by_v : by_u)
      for (double& g : by_v) g = 0.3;
  s.discount = 2.0;
  const HamiltonianResult h = Hamiltonian(s, Vec({0.4, 0.6}), Vec({5, -3}));
  EXPECT_NEAR(h.value, 0.6, 1e-12);
}

TEST(HamiltonianTest, MatchingPenniesSingleState) {
  GameSpec s = MakeSpec(1, 2, 2);
  s.payoff[0] = {{1.0, 0.0}, {0.0, 1.0}};
  const HamiltonianResult h = Hamiltonian(s, Vec({1}), Vec({0}));
  EXPECT_NEAR(h.value, 0.5, 1e-12);
  EXPECT_NEAR(h.mu(0), 0.5, 1e-12);
  EXPECT_NEAR(h.nu(0), 0.5, 1e-12);
  EXPECT_LE(h.gap, kMatrixGameGapTol);
  const IsaacsReport rep = PureIsaacsReport(s, Vec({1}), Vec({0}));
  EXPECT_DOUBLE_EQ(rep.sup_inf, 0.0);
  EXPECT_DOUBLE_EQ(rep.inf_sup, 1.0);
  EXPECT_DOUBLE_EQ(rep.gap, 1.0);
}

TEST(HamiltonianTest, SingleActions) {
  GameSpec s = testing::StaticGame();
  s.rates[0][0] = Gen2(1, 2);
  const Eigen::VectorXd p = Vec({0.3, 0.7});
  const Eigen::VectorXd z = Vec({0.2, -0.4});
  const double direct = (s.rate(0, 0).transpose() * p).dot(z) +
                        s.discount * (0.3 * 0.2 + 0.7 * 0.7);
  EXPECT_NEAR(Hamiltonian(s, p, z).value, direct, 1e-12);
  EXPECT_DOUBLE_EQ(PureIsaacsReport(s, p, z).gap, 0.0);
}

TEST(HamiltonianTest, PureSaddleHasNoGap) {
  GameSpec s = MakeSpec(1, 2, 2);
  s.payoff[0] = {{0.9, 0.6}, {0.2, 0.1}};
  const IsaacsReport rep = PureIsaacsReport(s, Vec({1}), Vec({0}));
  EXPECT_DOUBLE_EQ(rep.gap, 0.0);
  EXPECT_DOUBLE_EQ(rep.sup_inf, 0.6);
}

class HamiltonianPropertyTest : public ::testing::Test {
 protected:
  std::mt19937_64 gen_{2026};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};

  Eigen::VectorXd Belief(int k) {
    Eigen::VectorXd p(k);
    for (int i = 0; i < k; ++i) p(i) = -std::log(1.0 - unit_(gen_));
    return p / p.sum();
  }
  Eigen::VectorXd Covector(int k, double scale) {
    Eigen::VectorXd z(k);
    for (int i = 0; i < k; ++i) z(i) = scale * (2.0 * unit_(gen_) - 1.0);
    return z;
  }
};

TEST_F(HamiltonianPropertyTest, HomogeneousWithoutPayoff) {
  GameSpec s = testing::ThreeStateGame();
  for (auto& by_u : s.payoff)
    for (auto& by_v : by_u)
      for (double& g : by_v) g = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd p = Belief(3);
    const Eigen::VectorXd z = Covector(3, 2.0);
    const double lambda = 0.1 + 3.0 * unit_(gen_);
    EXPECT_NEAR(Hamiltonian(s, p, lambda * z).value,
                lambda * Hamiltonian(s, p, z).value, 1e-9);
  }
}

TEST_F(HamiltonianPropertyTest, LipschitzEnvelope) {
  const GameSpec s = testing::ThreeStateGame();
  const double c = HamiltonianLipschitzConstant(s);
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd p = Belief(3), q = Belief(3);
    const Eigen::VectorXd z = Covector(3, 3.0), w = Covector(3, 3.0);
    const double lhs =
        std::abs(Hamiltonian(s, p, z).value - Hamiltonian(s, q, w).value);
    const double rhs = c * ((z - w).norm() + (1.0 + z.norm()) * (p - q).norm());
    EXPECT_LE(lhs, rhs + 1e-12);
  }
}

TEST_F(HamiltonianPropertyTest, BetweenPureBounds) {
  const GameSpec s = testing::GenericGame();
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd p = Belief(2);
    const Eigen::VectorXd z = Covector(2, 2.0);
    const double h = Hamiltonian(s, p, z).value;
    const IsaacsReport rep = PureIsaacsReport(s, p, z);
    EXPECT_GE(h, rep.sup_inf - 1e-12);
    EXPECT_LE(h, rep.inf_sup + 1e-12);
  }
}

}  // namespace
}  // namespace asymgame
