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

#include "asymgame/matrix_game.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "asymgame/lp.h"

namespace asymgame {
namespace {

Eigen::VectorXd CleanDistribution(const Eigen::VectorXd& w) {
  Eigen::VectorXd out = w.cwiseMax(0.0);
  const double s = out.sum();
  if (s <= 0.0) {
    out.setConstant(1.0 / static_cast<double>(out.size()));
  } else {
    out /= s;
  }
  return out;
}

double Gap(const Eigen::MatrixXd& a, const Eigen::VectorXd& row,
           const Eigen::VectorXd& col) {
  return (a * col).maxCoeff() - (a.transpose() * row).minCoeff();
}

// Row player's LP on the shifted matrix (entries >= 1): maximize v subject to
// v <= (row^T A')_j for all j and sum(row) = 1. Column strategy from duals.
void SolveForRow(const Eigen::MatrixXd& shifted, Eigen::VectorXd& row,
                 Eigen::VectorXd& col) {
  const int m = static_cast<int>(shifted.rows());
  const int n = static_cast<int>(shifted.cols());
  lp::Problem prob;
  prob.a = Eigen::MatrixXd::Zero(n + 1, m + 1);
  prob.b = Eigen::VectorXd::Zero(n + 1);
  prob.c = Eigen::VectorXd::Zero(m + 1);
  prob.c(m) = 1.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) prob.a(j, i) = -shifted(i, j);
    prob.a(j, m) = 1.0;
    prob.sense.push_back(lp::Sense::kLessEqual);
  }
  for (int i = 0; i < m; ++i) prob.a(n, i) = 1.0;
  prob.b(n) = 1.0;
  prob.sense.push_back(lp::Sense::kEqual);
  lp::Solution sol = lp::Maximize(prob);
  if (!sol.optimal()) {
    throw std::runtime_error("matrix game LP failed: " +
                             lp::StatusName(sol.status));
  }
  row = CleanDistribution(sol.x.head(m));
  col = CleanDistribution(sol.duals.head(n));
}

}  // namespace

MatrixGameSolution SolveMatrixGame(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw std::invalid_argument("SolveMatrixGame: empty matrix");
  }
  MatrixGameSolution out;
  if (a.rows() == 1 || a.cols() == 1) {
    // Degenerate shapes have a pure solution.
    if (a.rows() == 1) {
      Eigen::Index j;
      out.value = a.row(0).minCoeff(&j);
      out.row = Eigen::VectorXd::Ones(1);
      out.col = Eigen::VectorXd::Zero(a.cols());
      out.col(j) = 1.0;
    } else {
      Eigen::Index i;
      out.value = a.col(0).maxCoeff(&i);
      out.col = Eigen::VectorXd::Ones(1);
      out.row = Eigen::VectorXd::Zero(a.rows());
      out.row(i) = 1.0;
    }
    out.gap = 0.0;
    return out;
  }
  const double lo = a.minCoeff();
  const Eigen::MatrixXd shifted = a.array() - lo + 1.0;
  Eigen::VectorXd row, col;
  SolveForRow(shifted, row, col);
  double gap = Gap(a, row, col);
  if (gap > kMatrixGameGapTol) {
    // Retry from the column player's side: the game -A^T.
    const Eigen::MatrixXd t = -a.transpose();
    const Eigen::MatrixXd tshift = t.array() - t.minCoeff() + 1.0;
    Eigen::VectorXd row2, col2;
    SolveForRow(tshift, col2, row2);
    const double gap2 = Gap(a, row2, col2);
    if (gap2 < gap) {
      row = row2;
      col = col2;
      gap = gap2;
    }
  }
  if (gap > kMatrixGameGapTol) {
    std::ostringstream msg;
    msg << "matrix game duality gap " << gap << " exceeds "
        << kMatrixGameGapTol;
    throw std::runtime_error(msg.str());
  }
  out.row = row;
  out.col = col;
  out.gap = std::max(gap, 0.0);
  // Midpoint of the certified bracket [min_j (row^T A)_j, max_i (A col)_i].
  out.value = 0.5 * ((a * col).maxCoeff() + (a.transpose() * row).minCoeff());
  return out;
}

double PureSupInf(const Eigen::MatrixXd& a) {
  return a.rowwise().minCoeff().maxCoeff();
}

double PureInfSup(const Eigen::MatrixXd& a) {
  return a.colwise().maxCoeff().minCoeff();
}

}  // namespace asymgame
