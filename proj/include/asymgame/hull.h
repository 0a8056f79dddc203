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

#ifndef ASYMGAME_HULL_H_
#define ASYMGAME_HULL_H_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace asymgame {

// Upper concave hull of 1-D data (x strictly increasing).
class UpperHull1D {
 public:
  UpperHull1D() = default;
  UpperHull1D(std::vector<double> x, std::vector<double> y);

  // Hull value at t in [x.front(), x.back()].
  double Eval(double t) const;
  // Hull value at each data abscissa.
  std::vector<double> ValuesAtData() const;
  // Indices of the data points that are hull vertices.
  const std::vector<std::size_t>& vertices() const { return vertices_; }
  // Hull vertices bracketing t: t = w * x[lo] + (1 - w) * x[hi]. When t is a
  // vertex, lo == hi and w == 1.
  void Bracket(double t, std::size_t& lo, std::size_t& hi, double& w) const;

  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<std::size_t> vertices_;
};

// Concave hull of scattered data {(a_i, v_i)} in R^d evaluated by linear
// programming: max sum l_i v_i s.t. sum l_i a_i = t, sum l_i = 1, l >= 0.
// Large point sets are handled by column generation seeded with the
// `anchors` (which must make every query in the domain feasible) and the
// points nearest to the query.
class HullEvaluator {
 public:
  struct Result {
    bool feasible = false;
    double value = 0.0;
    std::vector<std::size_t> support;  // Point indices with l_i > 0.
    std::vector<double> weights;       // Matching l_i.
    Eigen::VectorXd slope;             // Supporting plane: v <= slope.a + offset.
    double offset = 0.0;
  };

  HullEvaluator(std::vector<Eigen::VectorXd> coords, std::vector<double> values,
                std::vector<std::size_t> anchors);

  Result Evaluate(const Eigen::VectorXd& target) const;

  std::size_t size() const { return values_.size(); }

 private:
  Result SolveOn(const std::vector<std::size_t>& cols,
                 const Eigen::VectorXd& target) const;

  std::vector<Eigen::VectorXd> coords_;
  std::vector<double> values_;
  std::vector<std::size_t> anchors_;
};

}  // namespace asymgame

#endif  // ASYMGAME_HULL_H_
