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

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "asymgame/matrix_game.h"

namespace asymgame {
namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kWeightTol = 1e-12;

void CheckWeights(const Eigen::VectorXd& w, int size, const char* name) {
  if (w.size() != size) {
    throw std::invalid_argument(std::string(name) + ": wrong action count");
  }
  if (w.minCoeff() < -kWeightTol || std::abs(w.sum() - 1.0) > kWeightTol) {
    throw std::invalid_argument(std::string(name) +
                                ": not a probability vector");
  }
}

}  // namespace

Eigen::VectorXd GameSpec::PayoffVector(int u, int v) const {
  Eigen::VectorXd out(n_states);
  for (int k = 0; k < n_states; ++k) out(k) = payoff[k][u][v];
  return out;
}

std::vector<SpecViolation> ValidateSpec(const GameSpec& spec) {
  std::vector<SpecViolation> out;
  const int n = spec.n_states;
  if (n < 1) out.push_back({"states", "at least one state", double(n)});
  if (spec.num_u() < 1) {
    out.push_back({"actions_u", "at least one action", 0.0});
  }
  if (spec.num_v() < 1) {
    out.push_back({"actions_v", "at least one action", 0.0});
  }
  if (!out.empty()) return out;
  if (!(spec.discount > 0.0)) {
    out.push_back({"discount", "discount > 0", spec.discount});
  }

  if (static_cast<int>(spec.rates.size()) != spec.num_u()) {
    out.push_back({"rates", "outer size equals |actions_u|",
                   double(spec.rates.size())});
  } else {
    for (int u = 0; u < spec.num_u(); ++u) {
      if (static_cast<int>(spec.rates[u].size()) != spec.num_v()) {
        out.push_back({"rates[" + std::to_string(u) + "]",
                       "size equals |actions_v|",
                       double(spec.rates[u].size())});
        continue;
      }
      for (int v = 0; v < spec.num_v(); ++v) {
        const Eigen::MatrixXd& m = spec.rates[u][v];
        const std::string where =
            "rates[" + std::to_string(u) + "][" + std::to_string(v) + "]";
        if (m.rows() != n || m.cols() != n) {
          out.push_back({where, "shape K x K", double(m.rows())});
          continue;
        }
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            if (i != j && m(i, j) < 0.0) {
              out.push_back({where + " entry (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")",
                             "nonnegative off-diagonal rate", m(i, j)});
            }
          }
          const double s = m.row(i).sum();
          if (std::abs(s) > kRowSumTol) {
            out.push_back({where + " row " + std::to_string(i), "row sum", s});
          }
        }
      }
    }
  }

  if (static_cast<int>(spec.payoff.size()) != n) {
    out.push_back({"payoff", "outer size equals states",
                   double(spec.payoff.size())});
    return out;
  }
  for (int k = 0; k < n; ++k) {
    if (static_cast<int>(spec.payoff[k].size()) != spec.num_u()) {
      out.push_back({"payoff[" + std::to_string(k) + "]",
                     "size equals |actions_u|", double(spec.payoff[k].size())});
      continue;
    }
    for (int u = 0; u < spec.num_u(); ++u) {
      if (static_cast<int>(spec.payoff[k][u].size()) != spec.num_v()) {
        out.push_back({"payoff[" + std::to_string(k) + "][" +
                           std::to_string(u) + "]",
                       "size equals |actions_v|",
                       double(spec.payoff[k][u].size())});
        continue;
      }
      for (int v = 0; v < spec.num_v(); ++v) {
        const double g = spec.payoff[k][u][v];
        if (!(g >= 0.0 && g <= 1.0)) {
          out.push_back({"payoff[" + std::to_string(k) + "][" +
                             std::to_string(u) + "][" + std::to_string(v) +
                             "]",
                         "payoff range", g});
        }
      }
    }
  }
  return out;
}

std::string FormatViolations(const std::vector<SpecViolation>& violations) {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << v.location << ": " << v.constraint << " violated (observed "
       << v.observed << ")\n";
  }
  return os.str();
}

void RequireValidSpec(const GameSpec& spec) {
  const auto violations = ValidateSpec(spec);
  if (!violations.empty()) {
    throw std::invalid_argument("invalid game spec:\n" +
                                FormatViolations(violations));
  }
}

Eigen::MatrixXd MixGenerator(const GameSpec& spec, const Eigen::VectorXd& mu,
                             const Eigen::VectorXd& nu) {
  CheckWeights(mu, spec.num_u(), "mu");
  CheckWeights(nu, spec.num_v(), "nu");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(spec.n_states, spec.n_states);
  for (int u = 0; u < spec.num_u(); ++u) {
    for (int v = 0; v < spec.num_v(); ++v) {
      const double w = mu(u) * nu(v);
      if (w != 0.0) out += w * spec.rates[u][v];
    }
  }
  // Restore exact zero row sums lost to rounding.
  for (int i = 0; i < spec.n_states; ++i) {
    out(i, i) = 0.0;
    out(i, i) = -out.row(i).sum();
  }
  return out;
}

double PurePayoff(const GameSpec& spec, const Eigen::VectorXd& p, int u,
                  int v) {
  double s = 0.0;
  for (int k = 0; k < spec.n_states; ++k) s += p(k) * spec.payoff[k][u][v];
  return s;
}

double MixPayoff(const GameSpec& spec, const Eigen::VectorXd& p,
                 const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
  CheckWeights(mu, spec.num_u(), "mu");
  CheckWeights(nu, spec.num_v(), "nu");
  double s = 0.0;
  for (int u = 0; u < spec.num_u(); ++u) {
    for (int v = 0; v < spec.num_v(); ++v) {
      s += mu(u) * nu(v) * PurePayoff(spec, p, u, v);
    }
  }
  return s;
}

Eigen::MatrixXd HamiltonianMatrix(const GameSpec& spec,
                                  const Eigen::VectorXd& p,
                                  const Eigen::VectorXd& z) {
  Eigen::MatrixXd a(spec.num_u(), spec.num_v());
  for (int u = 0; u < spec.num_u(); ++u) {
    for (int v = 0; v < spec.num_v(); ++v) {
      // <R^T p, z> = p^T R z.
      a(u, v) = p.dot(spec.rates[u][v] * z) +
                spec.discount * PurePayoff(spec, p, u, v);
    }
  }
  return a;
}

HamiltonianResult Hamiltonian(const GameSpec& spec, const Eigen::VectorXd& p,
                              const Eigen::VectorXd& z) {
  if (!IsBelief(p)) throw std::invalid_argument("Hamiltonian: p not a belief");
  const MatrixGameSolution sol =
      SolveMatrixGame(HamiltonianMatrix(spec, p, z));
  return {sol.value, sol.row, sol.col, sol.gap};
}

IsaacsReport PureIsaacsReport(const GameSpec& spec, const Eigen::VectorXd& p,
                              const Eigen::VectorXd& z) {
  const Eigen::MatrixXd a = HamiltonianMatrix(spec, p, z);
  IsaacsReport r;
  r.sup_inf = PureSupInf(a);
  r.inf_sup = PureInfSup(a);
  r.gap = r.inf_sup - r.sup_inf;
  return r;
}

double HamiltonianLipschitzConstant(const GameSpec& spec) {
  double norm = 0.0;
  for (const auto& row : spec.rates) {
    for (const auto& m : row) norm = std::max(norm, m.norm());
  }
  const double sk = std::sqrt(static_cast<double>(spec.n_states));
  return norm * sk + spec.discount * sk;
}

bool IsBelief(const Eigen::VectorXd& p, double tol) {
  if (p.size() == 0) return false;
  return p.minCoeff() >= -tol && std::abs(p.sum() - 1.0) <= tol;
}

}  // namespace asymgame
