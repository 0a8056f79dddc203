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

#ifndef ASYMGAME_SIMPLEX_FIELD_H_
#define ASYMGAME_SIMPLEX_FIELD_H_

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "asymgame/hull.h"
#include "asymgame/simplex_grid.h"

namespace asymgame {

// Grid data on the simplex together with its upper concave envelope.
class ConcaveField {
 public:
  ConcaveField(std::shared_ptr<const SimplexGrid> grid,
               std::vector<double> raw_values, int generation = 0);

  const SimplexGrid& grid() const { return *grid_; }
  const std::shared_ptr<const SimplexGrid>& grid_ptr() const { return grid_; }
  const std::vector<double>& raw() const { return raw_; }
  const std::vector<double>& envelope() const { return envelope_; }
  double envelope(std::size_t i) const { return envelope_[i]; }
  int generation() const { return generation_; }

  // Envelope at an arbitrary belief.
  double Eval(const Eigen::VectorXd& p) const;

 private:
  std::shared_ptr<const SimplexGrid> grid_;
  std::vector<double> raw_;
  std::vector<double> envelope_;
  int generation_;
  UpperHull1D hull1d_;
  std::shared_ptr<const HullEvaluator> hull_;
};

// Upper concave envelope of grid data, evaluated at the grid points.
std::vector<double> Concavify(const SimplexGrid& grid,
                              const std::vector<double>& raw);

// Convex combination of grid points realizing the envelope of `values` at p.
struct GridDecomposition {
  std::vector<std::size_t> points;
  std::vector<double> weights;
  double value = 0.0;
};
GridDecomposition DecomposeEnvelope(const SimplexGrid& grid,
                                    const std::vector<double>& values,
                                    const Eigen::VectorXd& p);

// True iff concavifying `values` changes no entry by more than tol.
bool IsConcaveGridData(const SimplexGrid& grid,
                       const std::vector<double>& values, double tol = 1e-10);

// One-sided derivative of the envelope at grid point `index` along a tangent
// direction z (coordinates summing to zero).
double DirectionalDerivative(const ConcaveField& field, std::size_t index,
                             const Eigen::VectorXd& z);

inline constexpr double kExposedEps = 1e-8;

// Largest t such that some x with |x|_inf <= bound satisfies
// <x, p' - p> >= env(p') - env(p) + t at every other grid point p'.
double ExposedMargin(const ConcaveField& field, std::size_t index,
                     double bound);

// 2 max(max|env|, 1) N sqrt(K).
double DefaultExposedBound(const ConcaveField& field);

// max_{p'} env(p') - M |y - p'| over grid points.
double MoreauYosida(const ConcaveField& field, double m,
                    const Eigen::VectorXd& y);

// Measured grid Lipschitz constant + 1.
double DefaultMoreauYosidaConstant(const ConcaveField& field);

// min over grid points of <x, p> - env(p).
double ConcaveConjugate(const ConcaveField& field, const Eigen::VectorXd& x);

// max over adjacent grid pairs of |d env| / |d p| (Euclidean).
double GridLipschitz(const SimplexGrid& grid,
                     const std::vector<double>& values);

// max over adjacent grid pairs of N |d env|: the bound on coordinate
// differences x_i - x_j of supporting covectors.
double MaxEdgeSlope(const SimplexGrid& grid, const std::vector<double>& values);

// CSV with columns k1..kK, raw_value, envelope_value in grid order.
void WriteFieldCsv(std::ostream& os, const ConcaveField& field);
ConcaveField ReadFieldCsv(std::istream& is);

// Number of decimal digits that round-trip a double.
inline constexpr int kCsvPrecision = 17;

}  // namespace asymgame

#endif  // ASYMGAME_SIMPLEX_FIELD_H_
