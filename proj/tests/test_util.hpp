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

#include "dpp/channel.hpp"
#include "dpp/config.hpp"
#include "dpp/types.hpp"

namespace dpp::test {

// Small link used where the full presets would be overkill: 16 antennas in
// four subarrays, two receive antennas, two streams, eight subcarriers.
inline SystemConfig tiny_system() {
  SystemConfig cfg;
  cfg.n_t = 16;
  cfg.n_r = 2;
  cfg.n_rf = 2;
  cfg.n_s = 2;
  cfg.n_ttd = 4;
  cfg.m = 4;
  cfg.f_c = 100e9;
  cfg.f_s = 10e9;
  cfg.k = 8;
  set_snr_db(cfg, 10.0);
  return cfg;
}

// Mid-size link for solver behavior tests.
inline SystemConfig small_system() {
  SystemConfig cfg;
  cfg.n_t = 32;
  cfg.n_r = 4;
  cfg.n_rf = 4;
  cfg.n_s = 4;
  cfg.n_ttd = 8;
  cfg.m = 4;
  cfg.f_c = 100e9;
  cfg.f_s = 10e9;
  cfg.k = 8;
  set_snr_db(cfg, 10.0);
  return cfg;
}

inline Subpath make_subpath(Complex alpha, double tau, double sin_t,
                            double sin_r) {
  Subpath sp;
  sp.alpha = alpha;
  sp.tau = tau;
  sp.sin_theta_t = sin_t;
  sp.sin_theta_r = sin_r;
  return sp;
}

// Directory for files a test writes; unique per tag, cleaned by the caller
// only if it cares.
std::string scratch_dir(const std::string& tag);

}  // namespace dpp::test
