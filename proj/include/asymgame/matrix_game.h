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

#ifndef ASYMGAME_MATRIX_GAME_H_
#define ASYMGAME_MATRIX_GAME_H_

#include <Eigen/Dense>

namespace asymgame {

// Certified duality-gap tolerance for every matrix game solved here.
inline constexpr double kMatrixGameGapTol = 1e-9;

struct MatrixGameSolution {
  double value = 0.0;
  Eigen::VectorXd row;  // Maximizer's mixed action.
  Eigen::VectorXd col;  // Minimizer's mixed action.
  // max_i (A col)_i - min_j (row^T A)_j, an upper bound on suboptimality.
  double gap = 0.0;
};

// Solves max_row min_col row^T A col over mixed strategies by linear
// programming. Throws std::runtime_error carrying the achieved gap when the
// certificate exceeds kMatrixGameGapTol.
MatrixGameSolution SolveMatrixGame(const Eigen::MatrixXd& a);

// Pure-action security levels.
double PureSupInf(const Eigen::MatrixXd& a);
double PureInfSup(const Eigen::MatrixXd& a);

}  // namespace asymgame

#endif  // ASYMGAME_MATRIX_GAME_H_
