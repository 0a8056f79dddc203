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

#include "asymgame/rng.h"

#include <cmath>
#include <stdexcept>

namespace asymgame {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed),
      stream_(stream),
      key_(SplitMix64(SplitMix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t RngStream::NextU64() {
  return SplitMix64(key_ + 0x9e3779b97f4a7c15ULL * (++counter_));
}

double RngStream::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double RngStream::Exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("Exponential: rate <= 0");
  return -std::log(UniformPositive()) / rate;
}

int RngStream::Categorical(const Eigen::VectorXd& weights) {
  const double total = weights.sum();
  if (!(total > 0.0)) throw std::invalid_argument("Categorical: zero mass");
  const double u = Uniform() * total;
  double acc = 0.0;
  int last = -1;
  for (int i = 0; i < weights.size(); ++i) {
    if (weights(i) <= 0.0) continue;
    acc += weights(i);
    last = i;
    if (u < acc) return i;
  }
  return last;
}

int RngStream::Categorical(const std::vector<double>& weights) {
  return Categorical(Eigen::Map<const Eigen::VectorXd>(
      weights.data(), static_cast<Eigen::Index>(weights.size())));
}

RngStream RngStream::Derive(std::uint64_t tag) const {
  return RngStream(key_, SplitMix64(tag + 0x632be59bd9b4e019ULL));
}

}  // namespace asymgame
