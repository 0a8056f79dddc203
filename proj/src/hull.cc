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

#include "asymgame/hull.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "asymgame/lp.h"

namespace asymgame {
namespace {

constexpr std::size_t kSeedColumns = 24;
constexpr std::size_t kColumnsPerRound = 16;
constexpr double kPriceTol = 1e-11;
constexpr int kMaxRounds = 200;

}  // namespace

UpperHull1D::UpperHull1D(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.empty() || x_.size() != y_.size()) {
    throw std::invalid_argument("UpperHull1D: bad data");
  }
  // Monotone chain, keeping only strict turns.
  for (std::size_t i = 0; i < x_.size(); ++i) {
    while (vertices_.size() >= 2) {
      const std::size_t a = vertices_[vertices_.size() - 2];
      const std::size_t b = vertices_.back();
      const double cross = (x_[b] - x_[a]) * (y_[i] - y_[a]) -
                           (y_[b] - y_[a]) * (x_[i] - x_[a]);
      if (cross >= 0.0) {
        vertices_.pop_back();
      } else {
        break;
      }
    }
    vertices_.push_back(i);
  }
}

void UpperHull1D::Bracket(double t, std::size_t& lo, std::size_t& hi,
                          double& w) const {
  if (vertices_.size() == 1 || t <= x_[vertices_.front()]) {
    lo = hi = vertices_.front();
    w = 1.0;
    return;
  }
  if (t >= x_[vertices_.back()]) {
    lo = hi = vertices_.back();
    w = 1.0;
    return;
  }
  auto it = std::upper_bound(
      vertices_.begin(), vertices_.end(), t,
      [this](double v, std::size_t idx) { return v < x_[idx]; });
  const std::size_t b = *it;
  const std::size_t a = *(it - 1);
  if (t == x_[a]) {
    lo = hi = a;
    w = 1.0;
    return;
  }
  lo = a;
  hi = b;
  w = (x_[b] - t) / (x_[b] - x_[a]);
}

double UpperHull1D::Eval(double t) const {
  std::size_t lo, hi;
  double w;
  Bracket(t, lo, hi, w);
  if (lo == hi) return y_[lo];
  return w * y_[lo] + (1.0 - w) * y_[hi];
}

std::vector<double> UpperHull1D::ValuesAtData() const {
  std::vector<double> out(x_.size());
  for (std::size_t v = 0; v + 1 < vertices_.size(); ++v) {
    const std::size_t a = vertices_[v];
    const std::size_t b = vertices_[v + 1];
    out[a] = y_[a];
    for (std::size_t i = a + 1; i < b; ++i) {
      const double w = (x_[b] - x_[i]) / (x_[b] - x_[a]);
      out[i] = w * y_[a] + (1.0 - w) * y_[b];
    }
  }
  out[vertices_.back()] = y_[vertices_.back()];
  return out;
}

HullEvaluator::HullEvaluator(std::vector<Eigen::VectorXd> coords,
                             std::vector<double> values,
                             std::vector<std::size_t> anchors)
    : coords_(std::move(coords)),
      values_(std::move(values)),
      anchors_(std::move(anchors)) {
  if (coords_.size() != values_.size() || coords_.empty()) {
    throw std::invalid_argument("HullEvaluator: bad data");
  }
}

HullEvaluator::Result HullEvaluator::SolveOn(
    const std::vector<std::size_t>& cols, const Eigen::VectorXd& target) const {
  const int d = static_cast<int>(target.size());
  const int n = static_cast<int>(cols.size());
  lp::Problem prob;
  prob.a.resize(d + 1, n);
  prob.b.resize(d + 1);
  prob.c.resize(n);
  for (int j = 0; j < n; ++j) {
    prob.a.col(j).head(d) = coords_[cols[j]];
    prob.a(d, j) = 1.0;
    prob.c(j) = values_[cols[j]];
  }
  prob.b.head(d) = target;
  prob.b(d) = 1.0;
  prob.sense.assign(d + 1, lp::Sense::kEqual);
  const lp::Solution sol = lp::Maximize(prob);
  Result r;
  if (!sol.optimal()) return r;
  r.feasible = true;
  r.value = sol.objective;
  r.slope = sol.duals.head(d);
  r.offset = sol.duals(d);
  for (int j = 0; j < n; ++j) {
    if (sol.x(j) > 0.0) {
      r.support.push_back(cols[j]);
      r.weights.push_back(sol.x(j));
    }
  }
  return r;
}

HullEvaluator::Result HullEvaluator::Evaluate(
    const Eigen::VectorXd& target) const {
  const std::size_t n = values_.size();
  std::vector<char> in(n, 0);
  std::vector<std::size_t> cols;
  auto add = [&](std::size_t i) {
    if (!in[i]) {
      in[i] = 1;
      cols.push_back(i);
    }
  };
  if (n <= kSeedColumns + anchors_.size()) {
    for (std::size_t i = 0; i < n; ++i) add(i);
  } else {
    for (std::size_t a : anchors_) add(a);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = {(coords_[i] - target).squaredNorm(), i};
    }
    std::partial_sort(dist.begin(), dist.begin() + kSeedColumns, dist.end());
    for (std::size_t i = 0; i < kSeedColumns; ++i) add(dist[i].second);
  }
  for (int round = 0; round < kMaxRounds; ++round) {
    Result r = SolveOn(cols, target);
    if (!r.feasible) return r;
    if (cols.size() == n) return r;
    // Price every point against the supporting plane.
    std::vector<std::pair<double, std::size_t>> viol;
    for (std::size_t i = 0; i < n; ++i) {
      if (in[i]) continue;
      const double excess =
          values_[i] - (r.slope.dot(coords_[i]) + r.offset);
      if (excess > kPriceTol * (1.0 + std::abs(values_[i]))) {
        viol.emplace_back(-excess, i);
      }
    }
    if (viol.empty()) return r;
    const std::size_t take = std::min(kColumnsPerRound, viol.size());
    std::partial_sort(viol.begin(), viol.begin() + take, viol.end());
    for (std::size_t i = 0; i < take; ++i) add(viol[i].second);
  }
  throw std::runtime_error("HullEvaluator: column generation did not settle");
}

}  // namespace asymgame
