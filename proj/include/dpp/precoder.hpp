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

#include <vector>

#include "dpp/channel.hpp"
#include "dpp/config.hpp"
#include "dpp/types.hpp"

namespace dpp {

// Per-subcarrier unconstrained precoders F_k [n_t x n_s], the upper-bound
// design every hybrid solver tries to approximate.
struct FullyDigital {
  std::vector<CMat> f;
};

// Complete hybrid design: selected grid atoms, the hardware settings that
// realize them (phase weights and per-element delays), the resulting analog
// precoder at every subcarrier, and the digital precoders.
struct PrecodingSolution {
  IndexList atom_indices;     // 1-based grid columns, one per RF chain
  CMat phase;                 // [n_t x n_rf], unit modulus
  Mat delay;                  // [n_ttd x n_rf], seconds, in [0, t_max]
  std::vector<CMat> analog;   // K matrices [n_t x n_rf]
  std::vector<CMat> digital;  // K matrices [n_rf x n_s]
};

// Water-filled eigenbeamforming per subcarrier: F_k carries the n_s leading
// right singular vectors of H_k scaled by the allocated amplitudes, so
// ||F_k||_F^2 == n_s. Throws std::domain_error when some H_k has rank zero.
FullyDigital fully_digital(const ChannelSet& ch, const SystemConfig& cfg);

// Rate-optimal digital stage for a fixed analog precoder: whitens the
// analog columns with (A_k^H A_k)^(-1/2), takes the SVD of the equivalent
// channel H_k A_k (A_k^H A_k)^(-1/2) and water-fills its modes. The result
// satisfies ||A_k D_k||_F^2 == n_s. Throws when A_k is rank-deficient,
// naming coinciding columns.
std::vector<CMat> refine_digital(const ChannelSet& ch,
                                 const std::vector<CMat>& analog,
                                 const SystemConfig& cfg);

struct RateResult {
  double total = 0.0;           // bits/s/Hz summed over subcarriers
  double per_subcarrier = 0.0;  // total / K
};

// Gaussian-input spectral efficiency with per-stream power rho / n_s:
//   R = sum_k log2 det(I + rho/(n_s*sigma_n2) * H_k F_k F_k^H H_k^H),
// evaluated with F_k = analog_k * digital_k.
RateResult sum_rate(const ChannelSet& ch, const std::vector<CMat>& analog,
                    const std::vector<CMat>& digital, const SystemConfig& cfg);

// Same rate evaluated directly on precomputed products F_k.
RateResult rate_of_products(const ChannelSet& ch,
                            const std::vector<CMat>& products,
                            const SystemConfig& cfg);

// Normalized approximation error of the hybrid factorization:
//   (1 / (K * n_t * n_s)) * sum_k || F_k - A_k D_k ||_F^2.
double approx_mse(const FullyDigital& fd, const std::vector<CMat>& analog,
                  const std::vector<CMat>& digital, const SystemConfig& cfg);

// Hardware-constraint checks on a finished solution: phase entries unit
// modulus within 1e-12, delays within [0, t_max], per-subcarrier transmit
// power ||A_k D_k||_F^2 == n_s within 1e-9, atom indices distinct and in
// [1, g]. Throws std::runtime_error naming the first violated constraint.
void validate_solution(const PrecodingSolution& sol, const SystemConfig& cfg,
                       double t_max, int g);

}  // namespace dpp
