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

#include <string>
#include <vector>

#include "dpp/config.hpp"
#include "dpp/rng.hpp"
#include "dpp/types.hpp"

namespace dpp {

// One propagation subpath. Angles are stored as direction sines so the
// per-subcarrier equivalent angle is just (f_k / f_c) * sin_theta.
struct Subpath {
  Complex alpha;       // complex gain, CN(0, 1)
  double tau = 0.0;    // absolute delay [s], >= 0
  double sin_theta_t = 0.0;  // transmit direction sine, in [-1, 1]
  double sin_theta_r = 0.0;  // receive direction sine, in [-1, 1]
};

// The K per-subcarrier channel matrices [n_r x n_t] plus the subpaths that
// generated them (kept for oracle checks and fixtures).
struct ChannelSet {
  std::vector<CMat> h;
  std::vector<Subpath> subpaths;
  SystemConfig cfg;
};

// Unit-norm ULA steering vector of length n at direction sine x:
//   a(x)_i = exp(-j*pi*(i-1)*x) / sqrt(n), i = 1..n.
CVec ula_response(int n, double x);

// Draws n_c clusters of n_p subpaths each. Cluster means: transmit and
// receive angles uniform on [0, 2*pi), delay uniform on [0, tau_max].
// Subpath offsets are Laplacian with the configured standard deviations;
// delays are clamped at 0 from below; gains are CN(0, 1).
std::vector<Subpath> draw_clusters(const SystemConfig& cfg,
                                   const ClusterConfig& cc, TrialRng& rng);

// Assembles the wideband cluster channel at every subcarrier:
//   H_k = sqrt(n_t*n_r / L) * sum_l alpha_l * exp(-j*2*pi*f_k*tau_l)
//         * a_{n_r}((f_k/f_c)*sin_theta_r_l) * a_{n_t}((f_k/f_c)*sin_theta_t_l)^T
// where L = subpaths.size(). The transmit steering vector enters with a
// plain transpose, so the matched transmit direction is the conjugate
// steering vector. The equivalent angles scale with f_k/f_c: that frequency
// pull is the beam-split effect the precoder has to undo.
ChannelSet assemble_channels(const std::vector<Subpath>& subpaths,
                             const SystemConfig& cfg);

// draw_clusters + assemble_channels for one trial seed.
ChannelSet generate_channels(const SystemConfig& cfg, const ClusterConfig& cc,
                             Seed seed);

// Returns a copy whose matrices carry additive white estimation error with
// exactly the requested per-subcarrier relative power:
//   ||H_hat_k - H_k||_F^2 / ||H_k||_F^2 == nmse  for every k.
// nmse == 0 returns the input unchanged; negative nmse throws.
ChannelSet inject_channel_error(const ChannelSet& ch, double nmse,
                                TrialRng& rng);

// JSON fixture dump keyed by seed and config hash, for cross-language
// regression tests. import_channels round-trips exactly (bit-identical
// doubles via hex float serialization).
void export_channels(const ChannelSet& ch, const std::string& path, Seed seed);
ChannelSet import_channels(const std::string& path);

}  // namespace dpp
