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

#include "dpp/precoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dpp/numerics.hpp"

namespace dpp {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::string coinciding_columns(const CMat& a) {
  std::string out;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      const double ni = a.col(i).norm();
      const double nj = a.col(j).norm();
      if (ni == 0.0 || nj == 0.0) continue;
      const double c = std::abs(a.col(i).dot(a.col(j))) / (ni * nj);
      if (c > 1.0 - 1e-9) {
        if (!out.empty()) out += ", ";
        out += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      }
    }
  }
  return out.empty() ? "none detected" : out;
}

}  // namespace

FullyDigital fully_digital(const ChannelSet& ch, const SystemConfig& cfg) {
  validate(cfg);
  if (static_cast<int>(ch.h.size()) != cfg.k) {
    throw std::invalid_argument("fully_digital: channel subcarrier count mismatch");
  }
  const double gain = cfg.rho / (static_cast<double>(cfg.n_s) * cfg.sigma_n2);
  FullyDigital fd;
  fd.f.reserve(ch.h.size());
  for (std::size_t k = 0; k < ch.h.size(); ++k) {
    const SvdResult d = svd(ch.h[k]);
    if (!(d.s(0) > 0.0)) {
      throw std::domain_error("fully_digital: channel at subcarrier " +
                              std::to_string(k + 1) + " has rank zero");
    }
    const Vec top = d.s.head(cfg.n_s);
    const PowerAllocation pa = water_fill(top, gain, cfg.n_s);
    fd.f.push_back(d.v.leftCols(cfg.n_s) * pa.p.asDiagonal());
  }
  return fd;
}

std::vector<CMat> refine_digital(const ChannelSet& ch,
                                 const std::vector<CMat>& analog,
                                 const SystemConfig& cfg) {
  validate(cfg);
  if (analog.size() != ch.h.size()) {
    throw std::invalid_argument("refine_digital: analog precoder count mismatch");
  }
  const double gain = cfg.rho / (static_cast<double>(cfg.n_s) * cfg.sigma_n2);
  std::vector<CMat> digital;
  digital.reserve(analog.size());
  for (std::size_t k = 0; k < analog.size(); ++k) {
    CMat white;
    try {
      white = inv_sqrt_gram(analog[k]);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(
          "refine_digital: analog precoder at subcarrier " +
          std::to_string(k + 1) + " is rank-deficient; coinciding column "
          "pairs: " + coinciding_columns(analog[k]) + " (" + e.what() + ")");
    }
    const CMat h_eq = ch.h[k] * analog[k] * white;
    const SvdResult d = svd(h_eq);
    const PowerAllocation pa = water_fill(d.s.head(cfg.n_s), gain, cfg.n_s);
    digital.push_back(white * d.v.leftCols(cfg.n_s) * pa.p.asDiagonal());
  }
  return digital;
}

RateResult rate_of_products(const ChannelSet& ch,
                            const std::vector<CMat>& products,
                            const SystemConfig& cfg) {
  if (products.size() != ch.h.size()) {
    throw std::invalid_argument("rate_of_products: precoder count mismatch");
  }
  const double gain = cfg.rho / (static_cast<double>(cfg.n_s) * cfg.sigma_n2);
  double total = 0.0;
  for (std::size_t k = 0; k < ch.h.size(); ++k) {
    const CMat hf = ch.h[k] * products[k];
    const CMat x = gain * (hf * hf.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(x);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("rate_of_products: eigendecomposition failed");
    }
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      total += std::log1p(std::max(0.0, es.eigenvalues()(i))) / kLn2;
    }
  }
  if (!std::isfinite(total)) {
    throw std::runtime_error("rate_of_products: non-finite rate");
  }
  return {total, total / static_cast<double>(ch.h.size())};
}

RateResult sum_rate(const ChannelSet& ch, const std::vector<CMat>& analog,
                    const std::vector<CMat>& digital,
                    const SystemConfig& cfg) {
  if (analog.size() != digital.size() || analog.size() != ch.h.size()) {
    throw std::invalid_argument("sum_rate: precoder count mismatch");
  }
  std::vector<CMat> products;
  products.reserve(analog.size());
  for (std::size_t k = 0; k < analog.size(); ++k) {
    products.push_back(analog[k] * digital[k]);
  }
  return rate_of_products(ch, products, cfg);
}

double approx_mse(const FullyDigital& fd, const std::vector<CMat>& analog,
                  const std::vector<CMat>& digital, const SystemConfig& cfg) {
  if (analog.size() != digital.size() || analog.size() != fd.f.size()) {
    throw std::invalid_argument("approx_mse: precoder count mismatch");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < fd.f.size(); ++k) {
    acc += (fd.f[k] - analog[k] * digital[k]).squaredNorm();
  }
  return acc / (static_cast<double>(fd.f.size()) *
                static_cast<double>(cfg.n_t) * static_cast<double>(cfg.n_s));
}

void validate_solution(const PrecodingSolution& sol, const SystemConfig& cfg,
                       double t_max, int g) {
  if (static_cast<int>(sol.atom_indices.size()) != cfg.n_rf) {
    throw std::runtime_error("solution: atom count != n_rf");
  }
  IndexList sorted = sol.atom_indices;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 1 || sorted[i] > g) {
      throw std::runtime_error("solution: atom index out of [1, g]");
    }
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      throw std::runtime_error("solution: duplicate atom index " +
                               std::to_string(sorted[i]));
    }
  }
  if (sol.phase.rows() != cfg.n_t || sol.phase.cols() != cfg.n_rf) {
    throw std::runtime_error("solution: phase matrix shape mismatch");
  }
  for (Eigen::Index c = 0; c < sol.phase.cols(); ++c) {
    for (Eigen::Index r = 0; r < sol.phase.rows(); ++r) {
      if (std::abs(std::abs(sol.phase(r, c)) - 1.0) > 1e-12) {
        throw std::runtime_error(
            "solution: phase entry off the unit circle at (" +
            std::to_string(r + 1) + "," + std::to_string(c + 1) + ")");
      }
    }
  }
  if (sol.delay.rows() != cfg.n_ttd || sol.delay.cols() != cfg.n_rf) {
    throw std::runtime_error("solution: delay matrix shape mismatch");
  }
  if ((sol.delay.array() < 0.0).any() ||
      (sol.delay.array() > t_max).any()) {
    throw std::runtime_error("solution: delay outside [0, t_max]");
  }
  if (sol.analog.size() != sol.digital.size() ||
      static_cast<int>(sol.analog.size()) != cfg.k) {
    throw std::runtime_error("solution: per-subcarrier matrix count mismatch");
  }
  for (std::size_t k = 0; k < sol.analog.size(); ++k) {
    const double p = (sol.analog[k] * sol.digital[k]).squaredNorm();
    if (std::abs(p - static_cast<double>(cfg.n_s)) > 1e-9) {
      throw std::runtime_error(
          "solution: transmit power " + std::to_string(p) +
          " != n_s at subcarrier " + std::to_string(k + 1));
    }
  }
}

}  // namespace dpp
