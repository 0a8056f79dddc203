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

#ifndef ASYMGAME_MATRIX_EXP_H_
#define ASYMGAME_MATRIX_EXP_H_

#include <Eigen/Dense>

namespace asymgame {

// Matrix exponential (Pade scaling and squaring).
Eigen::MatrixXd Expm(const Eigen::MatrixXd& a);

// e^{t A} and the integral of e^{s A} b over s in [0, t], read off the
// exponential of the block matrix [[A, b], [0, 0]] scaled by t.
struct ExpIntegral {
  Eigen::MatrixXd exp;
  Eigen::VectorXd integral;
};
ExpIntegral ExpWithIntegral(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                            double t);

}  // namespace asymgame

#endif  // ASYMGAME_MATRIX_EXP_H_
