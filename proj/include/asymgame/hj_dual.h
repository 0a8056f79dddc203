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

#ifndef ASYMGAME_HJ_DUAL_H_
#define ASYMGAME_HJ_DUAL_H_

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "asymgame/game_model.h"
#include "asymgame/hj_primal.h"
#include "asymgame/hull.h"
#include "asymgame/simplex_field.h"

namespace asymgame {

// Regular lattice on the box [lo, hi]^K. Axis 0 may be coarser than the
// others: values off the reference slice x_0 = reference_x0() follow from
// the diagonal translation identity f(x + c 1) = f(x) + c.
class DualLattice {
 public:
  DualLattice(int dim, double lo, double hi, std::vector<int> resolution);

  int dim() const { return dim_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return size_; }
  int resolution(int axis) const { return resolution_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  double Coordinate(int axis, int i) const { return lo_ + i * spacing_[axis]; }
  Eigen::VectorXd Node(std::size_t index) const;
  // Node index from per-axis indices (axis 0 fastest).
  std::size_t Index(const std::vector<int>& idx) const;

  int reference_index() const { return reference_index_; }
  double reference_x0() const { return Coordinate(0, reference_index_); }
  // Indices of the nodes with x_0 = reference_x0(), in lattice order.
  const std::vector<std::size_t>& slice() const { return slice_; }

 private:
  int dim_;
  double lo_;
  double hi_;
  std::vector<int> resolution_;
  std::vector<double> spacing_;
  std::size_t size_;
  int reference_index_;
  std::vector<std::size_t> slice_;
};

// Concave piecewise-linear function given by its values on a DualLattice.
class DualField {
 public:
  DualField(std::shared_ptr<const DualLattice> lattice,
            std::vector<double> values);

  const DualLattice& lattice() const { return *lattice_; }
  const std::shared_ptr<const DualLattice>& lattice_ptr() const {
    return lattice_;
  }
  const std::vector<double>& values() const { return values_; }

  // Evaluates at any x in R^K: coordinates more than spread() above the
  // minimum are saturated (they cannot affect the value of a conjugate of a
  // function with slopes bounded by the spread), then x is translated onto
  // the reference slice. `outside` is set when the saturated query is not
  // covered by the slice.
  double Eval(const Eigen::VectorXd& x, bool* outside = nullptr) const;

  double spread() const { return spread_; }

 private:
  std::shared_ptr<const DualLattice> lattice_;
  std::vector<double> values_;
  double spread_;
  UpperHull1D hull1d_;
  std::shared_ptr<const HullEvaluator> hull_;
};

struct DualConfig {
  double tau = 0.01;
  bool first_order = false;
  std::optional<double> lo;  // Default -2 sqrt(K).
  std::optional<double> hi;  // Default 2 sqrt(K) + 1.
  int axis0_resolution = 5;
  int axis_resolution = 0;   // 0 selects 401 for K = 2 and 41 otherwise.
  int nu_resolution = 200;   // Player 2 mixed-action search resolution.
  double tol_fp = 1e-6;
  int max_iterations = 100000;
};

std::shared_ptr<const DualLattice> MakeDualLattice(int dim,
                                                   const DualConfig& config);

// Z = e^{r tau} (e^{-tau R} x - int_0^tau r e^{-rt} e^{-(tau-t) R} gbar dt)
// for generator R and payoff vector gbar held constant over the step.
Eigen::VectorXd DualStepMap(const Eigen::MatrixXd& rate,
                            const Eigen::VectorXd& gbar, double discount,
                            const Eigen::VectorXd& x, double tau,
                            bool first_order);

// Z for pure actions (u, v).
Eigen::VectorXd DualStepMap(const GameSpec& spec, const Eigen::VectorXd& x,
                            int u, int v, double tau, bool first_order);

// One application of the dual dynamic programming operator:
// max over player 2's mixed action of min over player 1's pure action of
// e^{-r tau} f(Z). `outside_count` receives the number of nodes whose step
// image left the lattice slice.
DualField ApplyDualOperator(const GameSpec& spec, const DualField& field,
                            const DualConfig& config,
                            std::size_t* outside_count = nullptr);

struct DualReport {
  ConvergenceReport convergence;
  std::size_t outside_nodes = 0;
};

struct DualSolution {
  DualField field;
  DualReport report;
};

// Value iteration from x -> min_k x_k - 1 (or `initial`).
DualSolution SolveDual(const GameSpec& spec, const DualConfig& config,
                       const std::optional<DualField>& initial = {});

// Dual field equal to the conjugate of a primal field at every node.
DualField ConjugateOfPrimal(const ConcaveField& primal,
                            std::shared_ptr<const DualLattice> lattice);

// max over primal grid points of |min_x (<x, p> - dual(x)) - primal(p)|,
// the minimum running over lattice nodes.
double DualityGap(const ConcaveField& primal, const DualField& dual);

// Conjugate of the dual field back on the primal grid.
std::vector<double> BackConjugate(const SimplexGrid& grid,
                                  const DualField& dual);

// CSV with columns x1..xK, value in lattice order.
void WriteDualCsv(std::ostream& os, const DualField& field);

}  // namespace asymgame

#endif  // ASYMGAME_HJ_DUAL_H_
