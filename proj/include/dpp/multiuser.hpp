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
#include "dpp/codebook.hpp"
#include "dpp/config.hpp"
#include "dpp/precoder.hpp"
#include "dpp/types.hpp"

namespace dpp {

// Downlink with n_u single-antenna users: h[k] stacks the users' channel
// rows into an [n_u x n_t] matrix per subcarrier.
struct MultiUserChannelSet {
  std::vector<CMat> h;
  int n_u = 0;
  SystemConfig cfg;
};

// Draws n_u independent single-antenna user channels from one trial stream
// (user 0's clusters first, then user 1, ...) and stacks them.
MultiUserChannelSet generate_multiuser_channels(const SystemConfig& cfg,
                                                const ClusterConfig& cc,
                                                Seed seed, int n_u);

// Zero-forcing transmit precoder per subcarrier: W_k = H_k^H (H_k H_k^H)^-1
// with unit-normalized columns, then water-filling across users on the
// per-user effective gains. ||F_k||_F^2 == n_u. Throws when H_k H_k^H is
// numerically singular.
FullyDigital zf_fully_digital(const MultiUserChannelSet& mu,
                              const SystemConfig& cfg);

// Digital stage for a fixed analog precoder: zero-forcing (not SVD) on the
// whitened equivalent channel H_k A_k (A_k^H A_k)^(-1/2), normalized and
// water-filled the same way. ||A_k D_k||_F^2 == n_u.
std::vector<CMat> refine_digital_zf(const MultiUserChannelSet& mu,
                                    const std::vector<CMat>& analog,
                                    const SystemConfig& cfg);

// Sum of per-user SINR rates,
//   R = sum_k sum_u log2(1 + |h_uk f_uk|^2 /
//                            (sum_{v != u} |h_uk f_vk|^2 + n_u*sigma_n2/rho)),
// with f_uk the u-th column of analog_k * digital_k.
double multiuser_rate(const MultiUserChannelSet& mu,
                      const std::vector<CMat>& analog,
                      const std::vector<CMat>& digital,
                      const SystemConfig& cfg);
double multiuser_rate_of_products(const MultiUserChannelSet& mu,
                                  const std::vector<CMat>& products,
                                  const SystemConfig& cfg);

// Hybrid solvers for the multiuser link: the single-user atom selectors run
// on the zero-forcing targets, then the digital stage is zero-forcing on
// the equivalent channel.
PrecodingSolution essp_multiuser(const Codebook& cb, const FullyDigital& fd,
                                 const MultiUserChannelSet& mu,
                                 const SystemConfig& cfg);
PrecodingSolution lce_ssp_multiuser(const Codebook& cb, const FullyDigital& fd,
                                    const MultiUserChannelSet& mu,
                                    const SystemConfig& cfg,
                                    const LceConfig& lce);

}  // namespace dpp
