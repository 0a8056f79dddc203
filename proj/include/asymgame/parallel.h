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

#ifndef ASYMGAME_PARALLEL_H_
#define ASYMGAME_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace asymgame {

// Worker count: ASYMGAME_THREADS if set and positive, else the hardware
// concurrency (at least 1).
int WorkerCount();

// Calls fn(i) for every i in [0, n). Each index is visited exactly once;
// callers write results into per-index slots so the outcome does not depend
// on the number of workers.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace asymgame

#endif  // ASYMGAME_PARALLEL_H_
