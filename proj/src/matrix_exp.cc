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

#include "asymgame/matrix_exp.h"

#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace asymgame {

Eigen::MatrixXd Expm(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("Expm: not square");
  if (a.size() == 0) return a;
  return a.exp();
}

ExpIntegral ExpWithIntegral(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                            double t) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n + 1, n + 1);
  block.topLeftCorner(n, n) = t * a;
  block.topRightCorner(n, 1) = t * b;
  const Eigen::MatrixXd e = Expm(block);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, 1)};
}

}  // namespace asymgame
