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

#ifndef ASYMGAME_LP_H_
#define ASYMGAME_LP_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace asymgame {
namespace lp {

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string StatusName(Status status);

// maximize c.x  subject to  A x (sense) b,  x >= 0.
struct Problem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<Sense> sense;  // One entry per row of `a`.
};

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
  // Row multipliers y with c <= A^T y on optimality (componentwise for
  // x >= 0) and objective == b.y. Rows with kLessEqual have y >= 0, rows
  // with kGreaterEqual have y <= 0.
  Eigen::VectorXd duals;
  int iterations = 0;

  bool optimal() const { return status == Status::kOptimal; }
};

// Dense two-phase primal simplex. Deterministic: the same problem always
// yields the same basis sequence. Intended for the small, short-and-wide
// programs this library generates (a handful of rows, up to a few thousand
// columns).
Solution Maximize(const Problem& problem);

inline Solution Minimize(Problem problem) {
  problem.c = -problem.c;
  Solution s = Maximize(problem);
  s.objective = -s.objective;
  s.duals = -s.duals;
  return s;
}

}  // namespace lp
}  // namespace asymgame

#endif  // ASYMGAME_LP_H_
