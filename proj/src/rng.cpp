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

#include "dpp/rng.hpp"

#include <cmath>

namespace dpp {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

TrialRng::TrialRng(Seed seed) {
  // Key the engine on (master_seed, trial_index) so that stream i is
  // independent of stream j and of the order trials are executed in.
  std::uint64_t s = seed.master_seed ^
                    (0x9E3779B97F4A7C15ull *
                     (static_cast<std::uint64_t>(seed.trial_index) + 1ull));
  const std::uint64_t a = splitmix64(s);
  const std::uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a),
                    static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(b >> 32)};
  eng_.seed(seq);
}

std::uint64_t TrialRng::next_u64() { return eng_(); }

double TrialRng::uniform01() {
  // Top 53 bits give a uniform double in [0, 1).
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double TrialRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double TrialRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

Complex TrialRng::cnormal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * std::sqrt(0.5);
}

double TrialRng::laplace(double sigma) {
  if (sigma == 0.0) {
    // Still consume one draw so call sequences stay aligned across configs.
    (void)uniform01();
    return 0.0;
  }
  const double b = sigma / std::sqrt(2.0);
  const double u = uniform01() - 0.5;
  const double t = std::max(1.0 - 2.0 * std::abs(u), 1e-300);
  return (u < 0.0 ? b : -b) * std::log(t);
}

TrialRng spawn_trial_rng(Seed seed) { return TrialRng(seed); }

}  // namespace dpp
