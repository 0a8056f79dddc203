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

#include "asymgame/hj_dual.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "asymgame/matrix_exp.h"
#include "asymgame/parallel.h"

namespace asymgame {
namespace {

constexpr int kMaxDualDim = 16;
// Player 2 mixed-action resolution when |V0| > 3 (exhaustive search).
constexpr int kCoarseNuResolution = 8;

double DefaultLo(int dim) { return -2.0 * std::sqrt(double(dim)); }
double DefaultHi(int dim) { return 2.0 * std::sqrt(double(dim)) + 1.0; }

// Index in [lo, hi] maximizing a concave sequence; the final scan keeps the
// first maximizer.
int TernaryArgmax(int lo, int hi, const std::function<double(int)>& f) {
  while (hi - lo > 3) {
    const int m1 = lo + (hi - lo) / 3;
    const int m2 = hi - (hi - lo) / 3;
    const double f1 = f(m1);
    const double f2 = f(m2);
    if (f1 < f2) {
      lo = m1 + 1;
    } else if (f1 > f2) {
      hi = m2 - 1;
    } else {
      lo = m1;
      hi = m2;
    }
  }
  int best = lo;
  double best_v = f(lo);
  for (int i = lo + 1; i <= hi; ++i) {
    const double v = f(i);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  return best;
}

// Precomputed affine step maps Z = E x - c for every (pure u, sampled nu).
class DualStepper {
 public:
  DualStepper(const GameSpec& spec, const DualConfig& config)
      : dim_(spec.n_states),
        num_u_(spec.num_u()),
        num_v_(spec.num_v()),
        discount_factor_(std::exp(-spec.discount * config.tau)) {
    if (num_v_ == 1) {
      nus_.push_back(Eigen::VectorXd::Ones(1));
    } else if (num_v_ == 2) {
      const int m = config.nu_resolution;
      for (int j = 0; j <= m; ++j) {
        Eigen::VectorXd nu(2);
        nu << 1.0 - double(j) / m, double(j) / m;
        nus_.push_back(nu);
      }
    } else if (num_v_ == 3) {
      const int m = config.nu_resolution;
      for (int a = 0; a <= m; ++a) {
        row_start_.push_back(static_cast<int>(nus_.size()));
        for (int b = 0; a + b <= m; ++b) {
          Eigen::VectorXd nu(3);
          nu << double(m - a - b) / m, double(a) / m, double(b) / m;
          nus_.push_back(nu);
        }
      }
    } else {
      nus_ = MixedActionSamples(num_v_, kCoarseNuResolution + 1);
    }
    maps_.resize(static_cast<std::size_t>(num_u_) * nus_.size());
    const Eigen::VectorXd ones_u = Eigen::VectorXd::Ones(1);
    for (int u = 0; u < num_u_; ++u) {
      for (std::size_t j = 0; j < nus_.size(); ++j) {
        Eigen::MatrixXd rate = Eigen::MatrixXd::Zero(dim_, dim_);
        Eigen::VectorXd gbar = Eigen::VectorXd::Zero(dim_);
        for (int v = 0; v < num_v_; ++v) {
          rate += nus_[j](v) * spec.rate(u, v);
          gbar += nus_[j](v) * spec.PayoffVector(u, v);
        }
        Map& map = maps_[u * nus_.size() + j];
        const Eigen::MatrixXd drift =
            spec.discount * Eigen::MatrixXd::Identity(dim_, dim_) - rate;
        if (config.first_order) {
          map.e = Eigen::MatrixXd::Identity(dim_, dim_) + config.tau * drift;
          map.c = config.tau * spec.discount * gbar;
        } else {
          const ExpIntegral ei = ExpWithIntegral(drift, gbar, config.tau);
          map.e = ei.exp;
          map.c = spec.discount * ei.integral;
        }
      }
    }
  }

  // max over nu of min over u of e^{-r tau} f(Z(x, u, nu)).
  double Value(const DualField& f, const Eigen::VectorXd& x,
               bool* outside) const {
    const std::size_t n = nus_.size();
    std::vector<double> memo(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> out_memo(n, 0);
    Eigen::VectorXd z(dim_);
    auto at = [&](std::size_t j) {
      if (!std::isnan(memo[j])) return memo[j];
      double best = std::numeric_limits<double>::infinity();
      bool any_out = false;
      for (int u = 0; u < num_u_; ++u) {
        const Map& map = maps_[u * n + j];
        z.noalias() = map.e * x;
        z -= map.c;
        bool o = false;
        best = std::min(best, f.Eval(z, &o));
        any_out = any_out || o;
      }
      memo[j] = discount_factor_ * best;
      out_memo[j] = any_out;
      return memo[j];
    };
    std::size_t arg = 0;
    if (num_v_ == 1) {
      arg = 0;
    } else if (num_v_ == 2) {
      arg = static_cast<std::size_t>(TernaryArgmax(
          0, static_cast<int>(n) - 1, [&](int j) { return at(j); }));
    } else if (num_v_ == 3) {
      const int m = static_cast<int>(row_start_.size()) - 1;
      std::vector<int> inner_arg(m + 1, -1);
      auto row_best = [&](int a) {
        if (inner_arg[a] < 0) {
          inner_arg[a] = TernaryArgmax(0, m - a, [&](int b) {
            return at(static_cast<std::size_t>(row_start_[a] + b));
          });
        }
        return at(static_cast<std::size_t>(row_start_[a] + inner_arg[a]));
      };
      const int a = TernaryArgmax(0, m, row_best);
      row_best(a);
      arg = static_cast<std::size_t>(row_start_[a] + inner_arg[a]);
    } else {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (at(j) > best) {
          best = at(j);
          arg = j;
        }
      }
    }
    const double v = at(arg);
    if (outside) *outside = out_memo[arg];
    return v;
  }

 private:
  struct Map {
    Eigen::MatrixXd e;
    Eigen::VectorXd c;
  };
  int dim_;
  int num_u_;
  int num_v_;
  double discount_factor_;
  std::vector<Eigen::VectorXd> nus_;
  std::vector<int> row_start_;
  std::vector<Map> maps_;
};

DualField Step(const DualStepper& stepper, const DualField& field,
               std::size_t* outside_count) {
  const DualLattice& lat = field.lattice();
  std::vector<double> values(lat.size());
  std::vector<char> outside(lat.size(), 0);
  ParallelFor(lat.size(), [&](std::size_t i) {
    bool o = false;
    values[i] = stepper.Value(field, lat.Node(i), &o);
    outside[i] = o;
  });
  if (outside_count) {
    *outside_count = static_cast<std::size_t>(
        std::count(outside.begin(), outside.end(), 1));
  }
  return DualField(field.lattice_ptr(), std::move(values));
}

}  // namespace

DualLattice::DualLattice(int dim, double lo, double hi,
                         std::vector<int> resolution)
    : dim_(dim), lo_(lo), hi_(hi), resolution_(std::move(resolution)) {
  if (dim < 1 || dim > kMaxDualDim) {
    throw std::invalid_argument("DualLattice: unsupported dimension");
  }
  if (static_cast<int>(resolution_.size()) != dim) {
    throw std::invalid_argument("DualLattice: one resolution per axis");
  }
  if (!(lo <= -1.0 && hi >= 2.0)) {
    throw std::invalid_argument("DualLattice: box must contain [-1, 2]^K");
  }
  size_ = 1;
  for (int r : resolution_) {
    if (r < 2) throw std::invalid_argument("DualLattice: resolution < 2");
    spacing_.push_back((hi - lo) / (r - 1));
    size_ *= static_cast<std::size_t>(r);
  }
  const double center = 0.5 * (lo + hi);
  reference_index_ = static_cast<int>(std::lround((center - lo) / spacing_[0]));
  for (std::size_t i = 0; i < size_; ++i) {
    if (static_cast<int>(i % resolution_[0]) == reference_index_) {
      slice_.push_back(i);
    }
  }
}

Eigen::VectorXd DualLattice::Node(std::size_t index) const {
  Eigen::VectorXd x(dim_);
  for (int a = 0; a < dim_; ++a) {
    const int i = static_cast<int>(index % resolution_[a]);
    index /= resolution_[a];
    x(a) = Coordinate(a, i);
  }
  return x;
}

std::size_t DualLattice::Index(const std::vector<int>& idx) const {
  std::size_t out = 0;
  for (int a = dim_ - 1; a >= 0; --a) out = out * resolution_[a] + idx[a];
  return out;
}

DualField::DualField(std::shared_ptr<const DualLattice> lattice,
                     std::vector<double> values)
    : lattice_(std::move(lattice)),
      values_(std::move(values)),
      spread_(2.0 * std::sqrt(double(lattice_->dim()))) {
  const DualLattice& lat = *lattice_;
  if (values_.size() != lat.size()) {
    throw std::invalid_argument("DualField: one value per node");
  }
  const double x0 = lat.reference_x0();
  if (x0 - spread_ < lat.lo() - 1e-12 || x0 + spread_ > lat.hi() + 1e-12) {
    throw std::invalid_argument(
        "DualField: box too small for the canonical slice");
  }
  const auto& slice = lat.slice();
  if (lat.dim() == 2) {
    std::vector<double> x, y;
    for (std::size_t i : slice) {
      x.push_back(lat.Node(i)(1));
      y.push_back(values_[i]);
    }
    hull1d_ = UpperHull1D(std::move(x), std::move(y));
  } else if (lat.dim() >= 3) {
    std::vector<Eigen::VectorXd> coords;
    std::vector<double> y;
    std::vector<std::size_t> anchors;
    for (std::size_t s = 0; s < slice.size(); ++s) {
      const Eigen::VectorXd node = lat.Node(slice[s]);
      coords.push_back(node.tail(lat.dim() - 1));
      y.push_back(values_[slice[s]]);
      bool corner = true;
      for (int a = 1; a < lat.dim(); ++a) {
        corner = corner && (std::abs(node(a) - lat.lo()) < 1e-12 ||
                            std::abs(node(a) - lat.hi()) < 1e-12);
      }
      if (corner) anchors.push_back(s);
    }
    hull_ = std::make_shared<HullEvaluator>(std::move(coords), std::move(y),
                                            std::move(anchors));
  }
}

double DualField::Eval(const Eigen::VectorXd& x, bool* outside) const {
  const DualLattice& lat = *lattice_;
  const int k = lat.dim();
  std::array<double, kMaxDualDim> y;
  double m = x(0);
  for (int i = 1; i < k; ++i) m = std::min(m, x(i));
  for (int i = 0; i < k; ++i) y[i] = std::min(x(i), m + spread_);
  const double shift = lat.reference_x0() - y[0];
  bool out = false;
  for (int i = 1; i < k; ++i) {
    y[i] += shift;
    if (y[i] < lat.lo() - 1e-9 || y[i] > lat.hi() + 1e-9) out = true;
    y[i] = std::clamp(y[i], lat.lo(), lat.hi());
  }
  if (outside) *outside = out;
  if (k == 1) return values_[lat.slice()[0]] - shift;
  if (k == 2) return hull1d_.Eval(y[1]) - shift;
  Eigen::VectorXd q(k - 1);
  for (int i = 1; i < k; ++i) q(i - 1) = y[i];
  const auto r = hull_->Evaluate(q);
  if (!r.feasible) throw std::runtime_error("DualField::Eval: LP failure");
  return r.value - shift;
}

std::shared_ptr<const DualLattice> MakeDualLattice(int dim,
                                                   const DualConfig& config) {
  std::vector<int> res(dim);
  const int fine =
      config.axis_resolution > 0 ? config.axis_resolution : (dim == 2 ? 401 : 41);
  res[0] = dim == 1 ? fine : config.axis0_resolution;
  for (int a = 1; a < dim; ++a) res[a] = fine;
  return std::make_shared<const DualLattice>(
      dim, config.lo.value_or(DefaultLo(dim)),
      config.hi.value_or(DefaultHi(dim)), std::move(res));
}

Eigen::VectorXd DualStepMap(const Eigen::MatrixXd& rate,
                            const Eigen::VectorXd& gbar, double discount,
                            const Eigen::VectorXd& x, double tau,
                            bool first_order) {
  const Eigen::Index k = x.size();
  const Eigen::MatrixXd drift =
      discount * Eigen::MatrixXd::Identity(k, k) - rate;
  if (first_order) {
    return x + tau * (discount * x - rate * x - discount * gbar);
  }
  const ExpIntegral ei = ExpWithIntegral(drift, gbar, tau);
  return ei.exp * x - discount * ei.integral;
}

Eigen::VectorXd DualStepMap(const GameSpec& spec, const Eigen::VectorXd& x,
                            int u, int v, double tau, bool first_order) {
  return DualStepMap(spec.rate(u, v), spec.PayoffVector(u, v), spec.discount,
                     x, tau, first_order);
}

DualField ApplyDualOperator(const GameSpec& spec, const DualField& field,
                            const DualConfig& config,
                            std::size_t* outside_count) {
  const DualStepper stepper(spec, config);
  return Step(stepper, field, outside_count);
}

DualSolution SolveDual(const GameSpec& spec, const DualConfig& config,
                       const std::optional<DualField>& initial) {
  RequireValidSpec(spec);
  if (!(config.tau > 0.0) || !(config.tol_fp > 0.0)) {
    throw std::invalid_argument("SolveDual: tau and tol must be positive");
  }
  const auto start = std::chrono::steady_clock::now();
  const DualStepper stepper(spec, config);
  std::shared_ptr<const DualLattice> lattice =
      initial ? initial->lattice_ptr() : MakeDualLattice(spec.n_states, config);
  DualField field = [&] {
    if (initial) return *initial;
    std::vector<double> v(lattice->size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = lattice->Node(i).minCoeff() - 1.0;
    }
    return DualField(lattice, std::move(v));
  }();
  DualReport report;
  ConvergenceReport& conv = report.convergence;
  while (conv.iterations < config.max_iterations) {
    std::size_t outside = 0;
    DualField next = Step(stepper, field, &outside);
    double change = 0.0;
    for (std::size_t i = 0; i < lattice->size(); ++i) {
      change = std::max(change, std::abs(next.values()[i] - field.values()[i]));
    }
    field = std::move(next);
    report.outside_nodes = outside;
    ++conv.iterations;
    conv.residual = change;
    if (change <= config.tol_fp) {
      conv.converged = true;
      break;
    }
  }
  conv.apriori_bound =
      conv.residual / (1.0 - std::exp(-spec.discount * config.tau));
  conv.wall_time_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return {std::move(field), report};
}

DualField ConjugateOfPrimal(const ConcaveField& primal,
                            std::shared_ptr<const DualLattice> lattice) {
  std::vector<double> v(lattice->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = ConcaveConjugate(primal, lattice->Node(i));
  }
  return DualField(std::move(lattice), std::move(v));
}

std::vector<double> BackConjugate(const SimplexGrid& grid,
                                  const DualField& dual) {
  const DualLattice& lat = dual.lattice();
  std::vector<Eigen::VectorXd> nodes(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) nodes[i] = lat.Node(i);
  std::vector<double> out(grid.size());
  ParallelFor(grid.size(), [&](std::size_t g) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      best = std::min(best, nodes[i].dot(grid.point(g)) - dual.values()[i]);
    }
    out[g] = best;
  });
  return out;
}

double DualityGap(const ConcaveField& primal, const DualField& dual) {
  const std::vector<double> back = BackConjugate(primal.grid(), dual);
  double gap = 0.0;
  for (std::size_t g = 0; g < back.size(); ++g) {
    gap = std::max(gap, std::abs(back[g] - primal.envelope(g)));
  }
  return gap;
}

void WriteDualCsv(std::ostream& os, const DualField& field) {
  const DualLattice& lat = field.lattice();
  for (int k = 0; k < lat.dim(); ++k) os << "x" << (k + 1) << ",";
  os << "value\n";
  char buf[64];
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Eigen::VectorXd x = lat.Node(i);
    for (int k = 0; k < lat.dim(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.*g", kCsvPrecision, x(k));
      os << buf << ",";
    }
    std::snprintf(buf, sizeof(buf), "%.*g", kCsvPrecision, field.values()[i]);
    os << buf << "\n";
  }
}

}  // namespace asymgame
