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

#include "asymgame/simplex_field.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "asymgame/lp.h"
#include "asymgame/parallel.h"

namespace asymgame {
namespace {

constexpr double kBeliefTol = 1e-10;
constexpr double kTrivialSplitTol = 1e-12;

Eigen::VectorXd Reduced(const Eigen::VectorXd& p) {
  return p.head(p.size() - 1);
}

std::vector<std::size_t> Vertices(const SimplexGrid& grid) {
  std::vector<std::size_t> out;
  for (int k = 0; k < grid.dim(); ++k) out.push_back(grid.Vertex(k));
  return out;
}

std::shared_ptr<HullEvaluator> MakeEvaluator(const SimplexGrid& grid,
                                             const std::vector<double>& v) {
  std::vector<Eigen::VectorXd> coords;
  coords.reserve(grid.size());
  for (const auto& p : grid.points()) coords.push_back(Reduced(p));
  return std::make_shared<HullEvaluator>(std::move(coords), v,
                                         Vertices(grid));
}

UpperHull1D MakeHull1D(const SimplexGrid& grid, const std::vector<double>& v) {
  std::vector<double> x(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) x[i] = grid.point(i)(0);
  return UpperHull1D(std::move(x), v);
}

void CheckBelief(const Eigen::VectorXd& p, int dim) {
  if (p.size() != dim || p.minCoeff() < -kBeliefTol ||
      std::abs(p.sum() - 1.0) > kBeliefTol) {
    throw std::invalid_argument("point is not in the simplex");
  }
}

}  // namespace

std::vector<double> Concavify(const SimplexGrid& grid,
                              const std::vector<double>& raw) {
  if (raw.size() != grid.size()) {
    throw std::invalid_argument("Concavify: one value per grid point");
  }
  if (grid.dim() == 1) return raw;
  if (grid.dim() == 2) return MakeHull1D(grid, raw).ValuesAtData();
  const auto eval = MakeEvaluator(grid, raw);
  std::vector<double> out(grid.size());
  ParallelFor(grid.size(), [&](std::size_t i) {
    const auto r = eval->Evaluate(Reduced(grid.point(i)));
    if (!r.feasible) throw std::runtime_error("Concavify: LP failure");
    out[i] = std::max(r.value, raw[i]);
  });
  return out;
}

ConcaveField::ConcaveField(std::shared_ptr<const SimplexGrid> grid,
                           std::vector<double> raw_values, int generation)
    : grid_(std::move(grid)),
      raw_(std::move(raw_values)),
      generation_(generation) {
  envelope_ = Concavify(*grid_, raw_);
  if (grid_->dim() == 2) {
    hull1d_ = MakeHull1D(*grid_, raw_);
  } else if (grid_->dim() >= 3) {
    hull_ = MakeEvaluator(*grid_, envelope_);
  }
}

double ConcaveField::Eval(const Eigen::VectorXd& p) const {
  CheckBelief(p, grid_->dim());
  if (grid_->dim() == 1) return envelope_[0];
  if (grid_->dim() == 2) {
    return hull1d_.Eval(std::clamp(p(0), 0.0, 1.0));
  }
  const auto r = hull_->Evaluate(Reduced(p));
  if (!r.feasible) throw std::runtime_error("ConcaveField::Eval: LP failure");
  return r.value;
}

GridDecomposition DecomposeEnvelope(const SimplexGrid& grid,
                                    const std::vector<double>& values,
                                    const Eigen::VectorXd& p) {
  CheckBelief(p, grid.dim());
  GridDecomposition out;
  if (grid.dim() == 1) {
    out.points = {0};
    out.weights = {1.0};
    out.value = values[0];
    return out;
  }
  const std::size_t near = grid.Nearest(p);
  const bool on_grid =
      (grid.point(near) - p).cwiseAbs().maxCoeff() <= kBeliefTol;
  if (grid.dim() == 2) {
    const UpperHull1D hull = MakeHull1D(grid, values);
    std::size_t lo, hi;
    double w;
    hull.Bracket(std::clamp(p(0), 0.0, 1.0), lo, hi, w);
    out.value = lo == hi ? values[lo] : w * values[lo] + (1 - w) * values[hi];
    if (on_grid && values[near] >= out.value - kTrivialSplitTol) {
      out.points = {near};
      out.weights = {1.0};
      out.value = values[near];
    } else if (lo == hi) {
      out.points = {lo};
      out.weights = {1.0};
    } else {
      out.points = {lo, hi};
      out.weights = {w, 1.0 - w};
    }
    return out;
  }
  const auto eval = MakeEvaluator(grid, values);
  const auto r = eval->Evaluate(Reduced(p));
  if (!r.feasible) throw std::runtime_error("DecomposeEnvelope: LP failure");
  out.value = r.value;
  if (on_grid && values[near] >= r.value - kTrivialSplitTol) {
    out.points = {near};
    out.weights = {1.0};
    out.value = values[near];
    return out;
  }
  out.points = r.support;
  out.weights = r.weights;
  double s = 0.0;
  for (double w : out.weights) s += w;
  for (double& w : out.weights) w /= s;
  return out;
}

bool IsConcaveGridData(const SimplexGrid& grid,
                       const std::vector<double>& values, double tol) {
  const auto env = Concavify(grid, values);
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (std::abs(env[i] - values[i]) > tol) return false;
  }
  return true;
}

double DirectionalDerivative(const ConcaveField& field, std::size_t index,
                             const Eigen::VectorXd& z) {
  const SimplexGrid& grid = field.grid();
  const int k = grid.dim();
  if (z.size() != k || std::abs(z.sum()) > 1e-12) {
    throw std::invalid_argument("DirectionalDerivative: z not tangent");
  }
  if (k == 1 || z.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const Eigen::VectorXd& p = grid.point(index);
  // Dual of min <x, z> over the superdifferential: max sum y d s.t.
  // sum y (p' - p) = z (last coordinate implied), y >= 0.
  const int n = static_cast<int>(grid.size());
  lp::Problem prob;
  prob.a.resize(k - 1, n - 1);
  prob.c.resize(n - 1);
  prob.b = z.head(k - 1);
  prob.sense.assign(k - 1, lp::Sense::kEqual);
  int col = 0;
  for (int j = 0; j < n; ++j) {
    if (static_cast<std::size_t>(j) == index) continue;
    prob.a.col(col) = (grid.point(j) - p).head(k - 1);
    prob.c(col) = field.envelope(j) - field.envelope(index);
    ++col;
  }
  const lp::Solution sol = lp::Maximize(prob);
  if (sol.status == lp::Status::kInfeasible) {
    throw std::invalid_argument(
        "DirectionalDerivative: direction leaves the simplex");
  }
  if (!sol.optimal()) {
    throw std::runtime_error("DirectionalDerivative: LP " +
                             lp::StatusName(sol.status));
  }
  return sol.objective;
}

double ExposedMargin(const ConcaveField& field, std::size_t index,
                     double bound) {
  const SimplexGrid& grid = field.grid();
  const int k = grid.dim();
  const int n = static_cast<int>(grid.size());
  if (n == 1) return std::numeric_limits<double>::infinity();
  const Eigen::VectorXd& p = grid.point(index);
  // Dual: min -sum y d + B sum(a + b) s.t. sum y = 1,
  // sum y (p' - p) - a + b = 0, all variables >= 0.
  const int ny = n - 1;
  lp::Problem prob;
  prob.a = Eigen::MatrixXd::Zero(k + 1, ny + 2 * k);
  prob.b = Eigen::VectorXd::Zero(k + 1);
  prob.c = Eigen::VectorXd::Zero(ny + 2 * k);
  prob.sense.assign(k + 1, lp::Sense::kEqual);
  int col = 0;
  for (int j = 0; j < n; ++j) {
    if (static_cast<std::size_t>(j) == index) continue;
    prob.a(0, col) = 1.0;
    prob.a.col(col).tail(k) = grid.point(j) - p;
    prob.c(col) = -(field.envelope(j) - field.envelope(index));
    ++col;
  }
  for (int i = 0; i < k; ++i) {
    prob.a(1 + i, ny + i) = -1.0;
    prob.a(1 + i, ny + k + i) = 1.0;
    prob.c(ny + i) = bound;
    prob.c(ny + k + i) = bound;
  }
  prob.b(0) = 1.0;
  const lp::Solution sol = lp::Minimize(prob);
  if (!sol.optimal()) {
    throw std::runtime_error("ExposedMargin: LP " + lp::StatusName(sol.status));
  }
  return sol.objective;
}

double DefaultExposedBound(const ConcaveField& field) {
  double m = 1.0;
  for (double v : field.envelope()) m = std::max(m, std::abs(v));
  return 2.0 * m * field.grid().resolution() *
         std::sqrt(static_cast<double>(field.grid().dim()));
}

double MoreauYosida(const ConcaveField& field, double m,
                    const Eigen::VectorXd& y) {
  double best = -std::numeric_limits<double>::infinity();
  const SimplexGrid& grid = field.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    best = std::max(best, field.envelope(i) - m * (y - grid.point(i)).norm());
  }
  return best;
}

double DefaultMoreauYosidaConstant(const ConcaveField& field) {
  return GridLipschitz(field.grid(), field.envelope()) + 1.0;
}

double ConcaveConjugate(const ConcaveField& field, const Eigen::VectorXd& x) {
  double best = std::numeric_limits<double>::infinity();
  const SimplexGrid& grid = field.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    best = std::min(best, x.dot(grid.point(i)) - field.envelope(i));
  }
  return best;
}

double GridLipschitz(const SimplexGrid& grid,
                     const std::vector<double>& values) {
  const double step = std::sqrt(2.0) / grid.resolution();
  double best = 0.0;
  for (const auto& [a, b] : grid.Edges()) {
    best = std::max(best, std::abs(values[a] - values[b]) / step);
  }
  return best;
}

double MaxEdgeSlope(const SimplexGrid& grid,
                    const std::vector<double>& values) {
  double best = 0.0;
  for (const auto& [a, b] : grid.Edges()) {
    best = std::max(best, std::abs(values[a] - values[b]) * grid.resolution());
  }
  return best;
}

void WriteFieldCsv(std::ostream& os, const ConcaveField& field) {
  const SimplexGrid& grid = field.grid();
  for (int k = 0; k < grid.dim(); ++k) os << "k" << (k + 1) << ",";
  os << "raw_value,envelope_value\n";
  char buf[64];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int q : grid.counts(i)) os << q << ",";
    std::snprintf(buf, sizeof(buf), "%.*g", kCsvPrecision, field.raw()[i]);
    os << buf << ",";
    std::snprintf(buf, sizeof(buf), "%.*g", kCsvPrecision,
                  field.envelope(i));
    os << buf << "\n";
  }
}

ConcaveField ReadFieldCsv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("field CSV: empty");
  const int cols = static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
  const int dim = cols - 2;
  if (dim < 1) throw std::runtime_error("field CSV: bad header");
  std::vector<std::vector<int>> qs;
  std::vector<double> raw;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<int> q(dim);
    for (int k = 0; k < dim; ++k) {
      if (!std::getline(ss, cell, ',')) {
        throw std::runtime_error("field CSV: short row at line " +
                                 std::to_string(line_no));
      }
      q[k] = std::stoi(cell);
    }
    if (!std::getline(ss, cell, ',')) {
      throw std::runtime_error("field CSV: missing raw_value at line " +
                               std::to_string(line_no));
    }
    qs.push_back(q);
    raw.push_back(std::stod(cell));
  }
  if (qs.empty()) throw std::runtime_error("field CSV: no rows");
  int n = 0;
  for (int v : qs[0]) n += v;
  auto grid = std::make_shared<const SimplexGrid>(dim, n);
  if (qs.size() != grid->size()) {
    throw std::runtime_error("field CSV: row count does not match the grid");
  }
  std::vector<double> ordered(grid->size());
  std::vector<char> seen(grid->size(), 0);
  for (std::size_t r = 0; r < qs.size(); ++r) {
    const long idx = grid->Find(qs[r]);
    if (idx < 0 || seen[idx]) {
      throw std::runtime_error("field CSV: bad or duplicate grid point");
    }
    seen[idx] = 1;
    ordered[idx] = raw[r];
  }
  return ConcaveField(std::move(grid), std::move(ordered));
}

}  // namespace asymgame
