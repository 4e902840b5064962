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
#include "dpp/types.hpp"

namespace dpp {

// Uniform angular grid over (-1, 1): phi_g = -1 + (2g - 1) / G, g = 1..G.
// The grid is symmetric around 0 and closed under negation.
struct AngularGrid {
  int g = 0;
  Vec phi;
};

AngularGrid make_grid(int g);

// Hardware codebook for one system configuration. phase holds unit-modulus
// per-antenna weights [n_t x G]; delay holds per-delay-element delays
// [n_ttd x G] in seconds; feasible holds the realized per-subcarrier
// dictionary [n_t x G] for each of the K subcarriers.
struct Codebook {
  AngularGrid grid;
  CMat phase;
  Mat delay;
  std::vector<CMat> feasible;
  double t_max = 0.0;
};

// Propagation delay across the full aperture at broadside grazing,
// (n_t - 1) / (2 f_c). Delays of the constructed codebook never exceed it.
double max_array_delay(const SystemConfig& cfg);

// Default delay-hardware range bound: twice max_array_delay, so codebook
// entries always fit and there is headroom for per-chain delay biases.
double default_t_max(const SystemConfig& cfg);

// Frequency-flat steering dictionary: column g is a_{n_t}(phi_g).
CMat narrowband_matrix(const AngularGrid& grid, const SystemConfig& cfg);

// Frequency-dependent ideal dictionaries: at subcarrier k, column g is
// a_{n_t}((f_k / f_c) * phi_g). The grid angles are predistorted by f_k/f_c
// so one column index tracks one physical direction across the whole band.
std::vector<CMat> ideal_matrices(const AngularGrid& grid,
                                 const SystemConfig& cfg);
// Single subcarrier variant (k_index is 1-based).
CMat ideal_matrix_at(const AngularGrid& grid, const SystemConfig& cfg,
                     int k_index);

// Delay codebook [n_ttd x G]. Element n (1-based) feeds the subarray whose
// middle antenna has 1-based index m_mid = floor((2*m*n - m) / 2) + 1; its
// delay for grid angle phi is (m_mid - 1) * phi / (2 f_c), shifted by
// max_array_delay on the phi < 0 half so every entry is non-negative.
// Throws std::invalid_argument when an entry would exceed t_max.
Mat delay_codebook(const AngularGrid& grid, const SystemConfig& cfg,
                   double t_max);

// Phase codebook [n_t x G]: the narrowband steering weights with each
// subarray counter-rotated by exp(+j*2*pi*f_c*delay) so that at the carrier
// frequency the cascade of phase shifters and delay lines reproduces the
// narrowband beam exactly. All entries are unit modulus.
CMat phase_codebook(const AngularGrid& grid, const Mat& delay,
                    const SystemConfig& cfg);

// Realized dictionary at every subcarrier: the phase weights combined with
// the delay-line response exp(-j*2*pi*f_k*delay), expanded per subarray and
// scaled by 1/sqrt(n_t) so every column has unit norm like the ideal
// steering columns.
std::vector<CMat> feasible_matrices(const CMat& phase, const Mat& delay,
                                    const SystemConfig& cfg);

// Convenience: grid + delay + phase + feasible with t_max = default_t_max.
Codebook build_codebook(const SystemConfig& cfg, int g);

// Mean squared column mismatch between the realized and ideal dictionaries:
//   (1 / (K * n_t * G)) * sum_k || ideal_k_aligned - feasible_k ||_F^2
// where the phi < 0 ideal columns are first rotated by the global phase
// exp(-j*2*pi*(f_k - f_c)*max_array_delay) that the non-negativity shift
// imprints on the realized columns. Throws on shape mismatch.
double codebook_error(const std::vector<CMat>& feasible,
                      const std::vector<CMat>& ideal, const AngularGrid& grid,
                      const SystemConfig& cfg);

// Same metric with the ideal dictionaries built one subcarrier at a time
// (full-scale grids would not fit in memory all at once).
double codebook_error(const Codebook& cb, const SystemConfig& cfg);

// JSON dump of the phase and delay codebooks (hex-float entries).
void export_codebook(const Codebook& cb, const SystemConfig& cfg,
                     const std::string& path);

}  // namespace dpp
