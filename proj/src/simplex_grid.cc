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

#include "asymgame/simplex_grid.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace asymgame {

std::size_t SimplexGridSize(int dim, int resolution) {
  // binomial(n, k) with n = N + K - 1, k = K - 1.
  const std::size_t n = static_cast<std::size_t>(resolution + dim - 1);
  const std::size_t k = static_cast<std::size_t>(dim - 1);
  long double c = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(std::numeric_limits<std::size_t>::max())) {
      return std::numeric_limits<std::size_t>::max();
    }
  }
  return static_cast<std::size_t>(std::llround(c));
}

SimplexGrid::SimplexGrid(int dim, int resolution, std::size_t cap)
    : dim_(dim), resolution_(resolution) {
  if (dim < 1 || resolution < 1) {
    throw std::invalid_argument("SimplexGrid: need dim >= 1, resolution >= 1");
  }
  const std::size_t expected = SimplexGridSize(dim, resolution);
  if (expected > cap) {
    throw std::length_error("SimplexGrid: " + std::to_string(expected) +
                            " points exceed the cap of " +
                            std::to_string(cap));
  }
  const long double span =
      std::pow(static_cast<long double>(resolution + 1), dim);
  if (span > static_cast<long double>(
                 std::numeric_limits<std::uint64_t>::max())) {
    throw std::length_error("SimplexGrid: index key overflow");
  }
  counts_.reserve(expected);
  // Lexicographic enumeration by depth-first assignment of coordinates.
  std::vector<int> q(dim, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == dim - 1) {
      q[pos] = left;
      counts_.push_back(q);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      q[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, resolution);
  points_.reserve(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    Eigen::VectorXd p(dim);
    for (int k = 0; k < dim; ++k) {
      p(k) = static_cast<double>(counts_[i][k]) / resolution;
    }
    points_.push_back(p);
    index_.emplace(Key(counts_[i]), i);
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    std::vector<int> q2 = counts_[i];
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        if (a == b || q2[b] == 0) continue;
        ++q2[a];
        --q2[b];
        const long j = Find(q2);
        if (j > static_cast<long>(i)) edges_.emplace_back(i, j);
        --q2[a];
        ++q2[b];
      }
    }
  }
}

std::uint64_t SimplexGrid::Key(const std::vector<int>& q) const {
  std::uint64_t key = 0;
  for (int k = 0; k < dim_; ++k) {
    key = key * static_cast<std::uint64_t>(resolution_ + 1) +
          static_cast<std::uint64_t>(q[k]);
  }
  return key;
}

long SimplexGrid::Find(const std::vector<int>& q) const {
  if (static_cast<int>(q.size()) != dim_) return -1;
  int s = 0;
  for (int v : q) {
    if (v < 0 || v > resolution_) return -1;
    s += v;
  }
  if (s != resolution_) return -1;
  auto it = index_.find(Key(q));
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

std::size_t SimplexGrid::Nearest(const Eigen::VectorXd& p) const {
  std::vector<int> q(dim_);
  std::vector<std::pair<double, int>> rem(dim_);
  int total = 0;
  for (int k = 0; k < dim_; ++k) {
    const double x = std::max(0.0, p(k)) * resolution_;
    q[k] = static_cast<int>(std::floor(x));
    rem[k] = {x - q[k], k};
    total += q[k];
  }
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int i = 0; total < resolution_; ++i, ++total) ++q[rem[i % dim_].second];
  for (int i = dim_ - 1; total > resolution_; --i) {
    const int k = rem[(i % dim_ + dim_) % dim_].second;
    if (q[k] > 0) {
      --q[k];
      --total;
    }
  }
  const long idx = Find(q);
  if (idx < 0) throw std::logic_error("SimplexGrid::Nearest failed");
  return static_cast<std::size_t>(idx);
}

std::size_t SimplexGrid::Vertex(int k) const {
  std::vector<int> q(dim_, 0);
  q[k] = resolution_;
  return static_cast<std::size_t>(Find(q));
}

}  // namespace asymgame
