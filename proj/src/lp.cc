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

#include "asymgame/lp.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace asymgame {
namespace lp {
namespace {

constexpr double kReducedCostTol = 1e-11;
constexpr double kPivotTol = 1e-11;
constexpr double kFeasibilityTol = 1e-9;
// Consecutive degenerate pivots tolerated before switching to Bland's rule.
constexpr int kDegenerateStreak = 50;

// Row-major dense tableau; the last column holds the right-hand side and the
// last row holds reduced costs (with -objective in its rhs slot).
class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(int r, int c) { return data_[r * (cols_ + 1) + c]; }
  double at(int r, int c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  double rhs(int r) const { return at(r, cols_); }
  double& cost(int c) { return at(rows_, c); }
  double cost(int c) const { return at(rows_, c); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void Pivot(int pr, int pc) {
    const int width = cols_ + 1;
    double* prow = &data_[pr * width];
    const double inv = 1.0 / prow[pc];
    for (int j = 0; j < width; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      double* row = &data_[r * width];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) row[j] -= f * prow[j];
      row[pc] = 0.0;
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

enum class PhaseResult { kOptimal, kUnbounded, kIterationLimit };

// Runs simplex iterations on `t` with the current reduced-cost row.
// Columns flagged in `barred` never enter the basis.
PhaseResult RunPhase(Tableau& t, std::vector<int>& basis,
                     const std::vector<char>& barred, int max_iterations,
                     int& iterations) {
  int degenerate = 0;
  while (true) {
    if (iterations >= max_iterations) return PhaseResult::kIterationLimit;
    const bool bland = degenerate >= kDegenerateStreak;
    int enter = -1;
    double best = kReducedCostTol;
    for (int j = 0; j < t.cols(); ++j) {
      if (barred[j]) continue;
      const double d = t.cost(j);
      if (d > best) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter < 0) return PhaseResult::kOptimal;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = std::max(t.rhs(r), 0.0) / a;
      if (ratio < best_ratio - 1e-14 ||
          (ratio <= best_ratio + 1e-14 && leave >= 0 &&
           basis[r] < basis[leave])) {
        if (ratio < best_ratio - 1e-14 || leave < 0) best_ratio = ratio;
        leave = r;
      }
    }
    if (leave < 0) return PhaseResult::kUnbounded;
    degenerate = best_ratio <= 1e-14 ? degenerate + 1 : 0;
    t.Pivot(leave, enter);
    basis[leave] = enter;
    ++iterations;
  }
}

}  // namespace

std::string StatusName(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
    case Status::kIterationLimit:
      return "iteration limit";
  }
  return "unknown";
}

Solution Maximize(const Problem& problem) {
  const int m = static_cast<int>(problem.a.rows());
  const int n = static_cast<int>(problem.a.cols());
  if (problem.b.size() != m || problem.c.size() != n ||
      static_cast<int>(problem.sense.size()) != m) {
    throw std::invalid_argument("lp::Maximize: inconsistent problem shape");
  }

  // Normalize rows to b >= 0 and lay out slack and artificial columns.
  std::vector<double> sign(m, 1.0);
  std::vector<int> slack_col(m, -1);
  std::vector<double> slack_coef(m, 0.0);
  int next = n;
  for (int i = 0; i < m; ++i) {
    if (problem.b(i) < 0) sign[i] = -1.0;
    if (problem.sense[i] != Sense::kEqual) {
      slack_col[i] = next++;
      slack_coef[i] =
          (problem.sense[i] == Sense::kLessEqual ? 1.0 : -1.0) * sign[i];
    }
  }
  std::vector<int> art_col(m, -1);
  for (int i = 0; i < m; ++i) {
    if (slack_col[i] < 0 || slack_coef[i] < 0) art_col[i] = next++;
  }
  const int cols = next;

  Tableau t(m, cols);
  std::vector<int> basis(m);
  std::vector<int> unit_col(m);  // Column that started as e_i.
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t.at(i, j) = sign[i] * problem.a(i, j);
    if (slack_col[i] >= 0) t.at(i, slack_col[i]) = slack_coef[i];
    t.rhs(i) = sign[i] * problem.b(i);
    if (art_col[i] >= 0) {
      t.at(i, art_col[i]) = 1.0;
      basis[i] = art_col[i];
    } else {
      basis[i] = slack_col[i];
    }
    unit_col[i] = basis[i];
  }
  std::vector<char> is_art(cols, 0);
  for (int i = 0; i < m; ++i)
    if (art_col[i] >= 0) is_art[art_col[i]] = 1;

  Solution sol;
  const int max_iterations = 200 * (m + cols) + 1000;
  int iterations = 0;

  // Phase 1: maximize -sum(artificials).
  bool any_art = false;
  for (int i = 0; i < m; ++i) {
    if (art_col[i] < 0) continue;
    any_art = true;
    for (int j = 0; j <= cols; ++j) t.at(m, j) += t.at(i, j);
  }
  for (int i = 0; i < m; ++i)
    if (art_col[i] >= 0) t.cost(art_col[i]) = 0.0;
  if (any_art) {
    std::vector<char> none(cols, 0);
    PhaseResult r = RunPhase(t, basis, none, max_iterations, iterations);
    if (r == PhaseResult::kIterationLimit) {
      sol.status = Status::kIterationLimit;
      sol.iterations = iterations;
      return sol;
    }
    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i)
      if (is_art[basis[i]]) infeasibility += std::max(t.rhs(i), 0.0);
    double scale = 1.0;
    for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(problem.b(i)));
    if (infeasibility > kFeasibilityTol * scale) {
      sol.status = Status::kInfeasible;
      sol.iterations = iterations;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (!is_art[basis[i]]) continue;
      int best = -1;
      double mag = 1e-9;
      for (int j = 0; j < cols; ++j) {
        if (is_art[j]) continue;
        if (std::abs(t.at(i, j)) > mag) {
          mag = std::abs(t.at(i, j));
          best = j;
        }
      }
      if (best >= 0) {
        t.Pivot(i, best);
        basis[i] = best;
      }
    }
  }

  // Phase 2 reduced costs from the true objective.
  for (int j = 0; j <= cols; ++j) t.at(m, j) = 0.0;
  for (int j = 0; j < n; ++j) t.cost(j) = problem.c(j);
  for (int i = 0; i < m; ++i) {
    const int bj = basis[i];
    const double cb = bj < n ? problem.c(bj) : 0.0;
    if (cb == 0.0) continue;
    for (int j = 0; j <= cols; ++j) t.at(m, j) -= cb * t.at(i, j);
  }
  PhaseResult r = RunPhase(t, basis, is_art, max_iterations, iterations);
  sol.iterations = iterations;
  if (r == PhaseResult::kIterationLimit) {
    sol.status = Status::kIterationLimit;
    return sol;
  }
  if (r == PhaseResult::kUnbounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }

  sol.status = Status::kOptimal;
  sol.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) sol.x(basis[i]) = std::max(t.rhs(i), 0.0);
  sol.objective = problem.c.dot(sol.x);
  sol.duals.resize(m);
  for (int i = 0; i < m; ++i) sol.duals(i) = -t.cost(unit_col[i]) * sign[i];
  return sol;
}

}  // namespace lp
}  // namespace asymgame
