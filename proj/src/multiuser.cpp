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

#include "dpp/multiuser.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dpp/numerics.hpp"
#include "dpp/sparse_dpp.hpp"

namespace dpp {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Normalizes the columns of a zero-forcing direction matrix and water-fills
// across users; gains are the inverses of the unnormalized column norms.
CMat normalize_and_fill(const CMat& w, double gain_factor, int n_u) {
  Vec gains(n_u);
  CMat wn = w;
  for (int u = 0; u < n_u; ++u) {
    const double cn = w.col(u).norm();
    if (!(cn > 0.0)) {
      throw std::runtime_error("zero-forcing: degenerate direction column");
    }
    wn.col(u) /= cn;
    gains(u) = 1.0 / cn;
  }
  // water_fill wants descending gains; sort, fill, scatter back.
  std::vector<int> order(static_cast<std::size_t>(n_u));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&gains](int a, int b) { return gains(a) > gains(b); });
  Vec sorted(n_u);
  for (int i = 0; i < n_u; ++i) sorted(i) = gains(order[static_cast<std::size_t>(i)]);
  const PowerAllocation pa =
      water_fill(sorted, gain_factor, static_cast<double>(n_u));
  Vec p = Vec::Zero(n_u);
  for (int i = 0; i < n_u; ++i) p(order[static_cast<std::size_t>(i)]) = pa.p(i);
  return wn * p.asDiagonal();
}

}  // namespace

MultiUserChannelSet generate_multiuser_channels(const SystemConfig& cfg,
                                                const ClusterConfig& cc,
                                                Seed seed, int n_u) {
  validate(cfg);
  if (n_u < 1) {
    throw std::invalid_argument("generate_multiuser_channels: n_u must be >= 1");
  }
  SystemConfig user_cfg = cfg;
  user_cfg.n_r = 1;
  user_cfg.n_s = 1;

  TrialRng rng = spawn_trial_rng(seed);
  MultiUserChannelSet mu;
  mu.n_u = n_u;
  mu.cfg = cfg;
  mu.h.assign(static_cast<std::size_t>(cfg.k), CMat(n_u, cfg.n_t));
  for (int u = 0; u < n_u; ++u) {
    const ChannelSet one =
        assemble_channels(draw_clusters(user_cfg, cc, rng), user_cfg);
    for (int k = 0; k < cfg.k; ++k) {
      mu.h[static_cast<std::size_t>(k)].row(u) =
          one.h[static_cast<std::size_t>(k)].row(0);
    }
  }
  return mu;
}

FullyDigital zf_fully_digital(const MultiUserChannelSet& mu,
                              const SystemConfig& cfg) {
  const double gain_factor =
      cfg.rho / (static_cast<double>(mu.n_u) * cfg.sigma_n2);
  FullyDigital fd;
  fd.f.reserve(mu.h.size());
  for (std::size_t k = 0; k < mu.h.size(); ++k) {
    const CMat& h = mu.h[k];
    const CMat gram = h * h.adjoint();
    Eigen::FullPivLU<CMat> lu(gram);
    if (!lu.isInvertible()) {
      throw std::runtime_error(
          "zf_fully_digital: user channel Gram matrix singular at subcarrier " +
          std::to_string(k + 1));
    }
    const CMat w = h.adjoint() * lu.inverse();
    fd.f.push_back(normalize_and_fill(w, gain_factor, mu.n_u));
  }
  return fd;
}

std::vector<CMat> refine_digital_zf(const MultiUserChannelSet& mu,
                                    const std::vector<CMat>& analog,
                                    const SystemConfig& cfg) {
  if (analog.size() != mu.h.size()) {
    throw std::invalid_argument("refine_digital_zf: analog count mismatch");
  }
  const double gain_factor =
      cfg.rho / (static_cast<double>(mu.n_u) * cfg.sigma_n2);
  std::vector<CMat> digital;
  digital.reserve(analog.size());
  for (std::size_t k = 0; k < analog.size(); ++k) {
    const CMat white = inv_sqrt_gram(analog[k]);
    const CMat h_eq = mu.h[k] * analog[k] * white;  // [n_u x n_rf]
    const CMat gram = h_eq * h_eq.adjoint();
    Eigen::FullPivLU<CMat> lu(gram);
    if (!lu.isInvertible()) {
      throw std::runtime_error(
          "refine_digital_zf: equivalent channel singular at subcarrier " +
          std::to_string(k + 1));
    }
    const CMat w = h_eq.adjoint() * lu.inverse();
    // A_k * white has orthonormal columns, so the product's power equals the
    // filled direction matrix's power, n_u.
    digital.push_back(white * normalize_and_fill(w, gain_factor, mu.n_u));
  }
  return digital;
}

double multiuser_rate_of_products(const MultiUserChannelSet& mu,
                                  const std::vector<CMat>& products,
                                  const SystemConfig& cfg) {
  if (products.size() != mu.h.size()) {
    throw std::invalid_argument("multiuser_rate: precoder count mismatch");
  }
  const double noise =
      static_cast<double>(mu.n_u) * cfg.sigma_n2 / cfg.rho;
  double total = 0.0;
  for (std::size_t k = 0; k < mu.h.size(); ++k) {
    const CMat eff = mu.h[k] * products[k];  // [n_u x n_u] effective links
    for (int u = 0; u < mu.n_u; ++u) {
      const double sig = std::norm(eff(u, u));
      double interference = 0.0;
      for (int v = 0; v < mu.n_u; ++v) {
        if (v != u) interference += std::norm(eff(u, v));
      }
      total += std::log1p(sig / (interference + noise)) / kLn2;
    }
  }
  if (!std::isfinite(total)) {
    throw std::runtime_error("multiuser_rate: non-finite rate");
  }
  return total;
}

double multiuser_rate(const MultiUserChannelSet& mu,
                      const std::vector<CMat>& analog,
                      const std::vector<CMat>& digital,
                      const SystemConfig& cfg) {
  if (analog.size() != digital.size() || analog.size() != mu.h.size()) {
    throw std::invalid_argument("multiuser_rate: precoder count mismatch");
  }
  std::vector<CMat> products;
  products.reserve(analog.size());
  for (std::size_t k = 0; k < analog.size(); ++k) {
    products.push_back(analog[k] * digital[k]);
  }
  return multiuser_rate_of_products(mu, products, cfg);
}

namespace {

PrecodingSolution assemble_mu_solution(const Codebook& cb,
                                       const IndexList& atoms,
                                       const MultiUserChannelSet& mu,
                                       const SystemConfig& cfg) {
  PrecodingSolution sol;
  sol.atom_indices = atoms;
  sol.phase = CMat(cfg.n_t, static_cast<Eigen::Index>(atoms.size()));
  sol.delay = Mat(cfg.n_ttd, static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    sol.phase.col(static_cast<Eigen::Index>(i)) = cb.phase.col(atoms[i] - 1);
    sol.delay.col(static_cast<Eigen::Index>(i)) = cb.delay.col(atoms[i] - 1);
  }
  sol.analog.reserve(cb.feasible.size());
  for (const CMat& mk : cb.feasible) {
    CMat a(cfg.n_t, static_cast<Eigen::Index>(atoms.size()));
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      a.col(static_cast<Eigen::Index>(i)) = mk.col(atoms[i] - 1);
    }
    sol.analog.push_back(std::move(a));
  }
  sol.digital = refine_digital_zf(mu, sol.analog, cfg);
  return sol;
}

}  // namespace

PrecodingSolution essp_multiuser(const Codebook& cb, const FullyDigital& fd,
                                 const MultiUserChannelSet& mu,
                                 const SystemConfig& cfg) {
  const IndexList atoms = essp_select_atoms(cb.feasible, fd.f, cfg.n_rf);
  return assemble_mu_solution(cb, atoms, mu, cfg);
}

PrecodingSolution lce_ssp_multiuser(const Codebook& cb, const FullyDigital& fd,
                                    const MultiUserChannelSet& mu,
                                    const SystemConfig& cfg,
                                    const LceConfig& lce) {
  const IndexList atoms = lce_select_atoms(cb, fd.f, cfg, lce);
  return assemble_mu_solution(cb, atoms, mu, cfg);
}

}  // namespace dpp
