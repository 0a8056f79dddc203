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

#ifndef ASYMGAME_SIMPLEX_GRID_H_
#define ASYMGAME_SIMPLEX_GRID_H_

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace asymgame {

// All points q / N of the simplex with q a nonnegative integer vector
// summing to N, in lexicographic order of q.
class SimplexGrid {
 public:
  static constexpr std::size_t kDefaultCap = 5'000'000;

  SimplexGrid(int dim, int resolution, std::size_t cap = kDefaultCap);

  int dim() const { return dim_; }
  int resolution() const { return resolution_; }
  std::size_t size() const { return counts_.size(); }

  const std::vector<int>& counts(std::size_t i) const { return counts_[i]; }
  const Eigen::VectorXd& point(std::size_t i) const { return points_[i]; }
  const std::vector<Eigen::VectorXd>& points() const { return points_; }

  // Index of the grid point with the given counts, or -1.
  long Find(const std::vector<int>& q) const;

  // Grid point nearest to the belief p (largest-remainder rounding).
  std::size_t Nearest(const Eigen::VectorXd& p) const;

  // Index of the vertex e_k.
  std::size_t Vertex(int k) const;

  // Unordered pairs of points differing by (e_i - e_j) / N.
  const std::vector<std::pair<std::size_t, std::size_t>>& Edges() const {
    return edges_;
  }

 private:
  std::uint64_t Key(const std::vector<int>& q) const;

  int dim_;
  int resolution_;
  std::vector<std::vector<int>> counts_;
  std::vector<Eigen::VectorXd> points_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

// binomial(N + K - 1, K - 1), saturating at SIZE_MAX.
std::size_t SimplexGridSize(int dim, int resolution);

}  // namespace asymgame

#endif  // ASYMGAME_SIMPLEX_GRID_H_
