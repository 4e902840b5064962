// SPDX-License-Identifier: Apache-2.0
//
// thzdpp: wideband terahertz massive MIMO delay-phase precoding library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// -------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <random>

#include "dpp/config.hpp"
#include "dpp/types.hpp"

namespace dpp {

// Deterministic per-trial random stream. Trials are keyed, not sequenced:
// stream (master_seed, i) never depends on stream (master_seed, j), so
// trials can run on any number of threads in any order and still reproduce.
// All draw kernels are implemented on top of the engine's raw 64-bit output
// to keep streams identical across standard-library implementations.
class TrialRng {
 public:
  explicit TrialRng(Seed seed);

  std::uint64_t next_u64();

  double uniform01();                    // [0, 1), 53-bit resolution
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();                       // N(0, 1), Box-Muller
  Complex cnormal();                     // CN(0, 1), unit total variance
  double laplace(double sigma);          // zero mean, std dev sigma

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Canonical way to obtain the stream for one trial.
TrialRng spawn_trial_rng(Seed seed);

}  // namespace dpp
