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
#include <string>
#include <vector>

namespace dpp {

// Static description of one OFDM hybrid-precoding link. Angles are radians
// and times are seconds everywhere in memory; configuration files carry
// angles in degrees and are converted on load.
struct SystemConfig {
  int n_t = 256;           // transmit antennas (ULA)
  int n_r = 4;             // receive antennas
  int n_rf = 4;            // RF chains
  int n_s = 4;             // data streams, n_s <= n_rf and n_s <= n_r
  int n_ttd = 16;          // true-time-delay elements per RF chain
  int m = 16;              // antennas per delay element, n_t = m * n_ttd
  double f_c = 100e9;      // carrier frequency [Hz]
  double f_s = 10e9;       // bandwidth [Hz]
  int k = 128;             // OFDM subcarriers
  double snr_db = 10.0;    // transmit SNR [dB]
  double rho = 10.0;       // transmit power; kept consistent with snr_db
  double sigma_n2 = 1.0;   // noise variance

  double subcarrier_spacing() const { return f_s / static_cast<double>(k); }
};

// Statistical description of the clustered multipath channel.
struct ClusterConfig {
  int n_c = 4;                  // clusters
  int n_p = 10;                 // subpaths per cluster
  double tau_max = 20e-9;       // cluster mean delay upper bound [s]
  double sigma_tau = 1e-9;      // subpath delay spread (std dev) [s]
  double sigma_theta_t = 0.0;   // transmit angle spread (std dev) [rad]
  double sigma_theta_r = 0.0;   // receive angle spread (std dev) [rad]
};

// Grid sizes and reduction factors for the low-complexity estimator.
struct LceConfig {
  int g = 1024;     // fine angular grid size (even)
  int g_c = 256;    // coarse grid size, divides g
  int g_a = 8;      // half-width of the fine refinement window
  int k_prime = 4;  // sampled subcarriers, divides k
};

// Identifies one Monte-Carlo trial. Every random draw in the library is
// reproducible given (master_seed, trial_index).
struct Seed {
  std::uint64_t master_seed = 0;
  std::uint32_t trial_index = 0;
};

// Full-scale configuration (256-antenna array, 128 subcarriers).
SystemConfig paper_system();
ClusterConfig paper_clusters();
LceConfig paper_lce();

// Scaled-down configuration for fast runs and the acceptance suite
// (64-antenna array, 32 subcarriers).
SystemConfig desk_system();
ClusterConfig desk_clusters();
LceConfig desk_lce();

// Sets snr_db and the implied (rho, sigma_n2) = (10^(snr_db/10), 1).
void set_snr_db(SystemConfig& cfg, double snr_db);

// Throws std::invalid_argument with a distinct message per violated rule:
// antenna/delay-element mismatch (n_t != m * n_ttd), stream overflow
// (n_s > n_rf or n_s > n_r), non-positive sizes, K < 1.
void validate(const SystemConfig& cfg);

// Throws std::invalid_argument when g is odd, g_c does not divide g,
// k_prime does not divide cfg.k, or any size is non-positive.
void validate(const LceConfig& lce, const SystemConfig& cfg);

// Center-symmetric subcarrier frequencies:
//   f_k = f_c + (k - 1 - (K-1)/2) * (f_s / K),  k = 1..K.
// Their mean equals f_c and the span is f_s * (K-1) / K.
std::vector<double> derive_subcarrier_frequencies(const SystemConfig& cfg);

struct ConfigBundle {
  SystemConfig system;
  ClusterConfig clusters;
  LceConfig lce;
};

// Loads a JSON configuration file. Top-level keys: optional "preset"
// ("desk" or "paper", applied first), then optional "system", "clusters",
// "lce" objects whose keys match the struct field names. Angle spreads
// (sigma_theta_t, sigma_theta_r) are given in degrees in files.
ConfigBundle load_config_file(const std::string& path);
ConfigBundle parse_config_json(const std::string& text);

// FNV-1a hash of the canonical serialization; stable across runs and
// platforms, used to key exported fixtures and run manifests.
std::uint64_t config_hash(const ConfigBundle& bundle);

}  // namespace dpp
