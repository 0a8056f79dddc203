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

#ifndef ASYMGAME_RNG_H_
#define ASYMGAME_RNG_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace asymgame {

// Counter-based stream: draw i of stream s under seed is a SplitMix64 hash
// of (seed, s, i), so streams are reproducible and independent of the order
// in which other streams are consumed.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on (0, 1].
  double UniformPositive() { return 1.0 - Uniform(); }
  double Exponential(double rate);
  // Index drawn with probability proportional to weights (all >= 0).
  int Categorical(const Eigen::VectorXd& weights);
  int Categorical(const std::vector<double>& weights);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

  // Child stream derived from this stream's identity.
  RngStream Derive(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace asymgame

#endif  // ASYMGAME_RNG_H_
