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

#include "dpp/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpp {

namespace {

void require_finite(const CMat& a, const char* who) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(who) +
                                ": input has non-finite entries");
  }
}

}  // namespace

SvdResult svd(const CMat& a) {
  require_finite(a, "svd");
  Eigen::JacobiSVD<CMat> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

CMat pinv(const CMat& a) {
  require_finite(a, "pinv");
  Eigen::JacobiSVD<CMat> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = dec.singularValues();
  const double cutoff = s.size() > 0 ? 1e-10 * s(0) : 0.0;
  Vec inv = Vec::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) inv(i) = 1.0 / s(i);
  }
  return dec.matrixV() * inv.asDiagonal() * dec.matrixU().adjoint();
}

CMat inv_sqrt_gram(const CMat& a) {
  require_finite(a, "inv_sqrt_gram");
  const CMat gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<CMat> es(gram);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("inv_sqrt_gram: eigendecomposition failed");
  }
  const Vec& ev = es.eigenvalues();  // ascending
  const double emax = ev(ev.size() - 1);
  if (!(emax > 0.0) || ev(0) < 1e-12 * emax) {
    throw std::runtime_error(
        "inv_sqrt_gram: Gram matrix numerically singular (column set is "
        "rank-deficient); min/max eigenvalue ratio " +
        std::to_string(emax > 0.0 ? ev(0) / emax : 0.0));
  }
  return es.eigenvectors() *
         ev.array().rsqrt().matrix().asDiagonal() *
         es.eigenvectors().adjoint();
}

PowerAllocation water_fill(const Vec& singular_values, double gain_factor,
                           double total) {
  if (!(gain_factor > 0.0) || !(total > 0.0)) {
    throw std::invalid_argument(
        "water_fill: gain_factor and total must be positive");
  }
  const Eigen::Index n = singular_values.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(singular_values(i) >= 0.0)) {
      throw std::invalid_argument("water_fill: singular values must be >= 0");
    }
    if (i > 0 && singular_values(i) > singular_values(i - 1) + 1e-12) {
      throw std::invalid_argument(
          "water_fill: singular values must be non-increasing");
    }
  }

  // Inverse gains for the usable channels, ascending because the singular
  // values are descending.
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sv = singular_values(i);
    if (sv > 0.0) a.push_back(1.0 / (gain_factor * sv * sv));
  }
  if (a.empty()) {
    throw std::domain_error("water_fill: all singular values are zero");
  }

  // Largest active set whose common water level keeps every member positive.
  std::size_t active = 0;
  double level = 0.0;
  double prefix = 0.0;
  std::vector<double> prefix_sums(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    prefix += a[i];
    prefix_sums[i] = prefix;
  }
  for (std::size_t m = a.size(); m >= 1; --m) {
    const double mu = (total + prefix_sums[m - 1]) / static_cast<double>(m);
    if (mu > a[m - 1]) {
      active = m;
      level = mu;
      break;
    }
  }
  // m = 1 always qualifies (mu = total + a[0] > a[0]), so active >= 1 here.

  Vec p = Vec::Zero(n);
  for (std::size_t i = 0; i < active; ++i) {
    p(static_cast<Eigen::Index>(i)) = std::sqrt(level - a[i]);
  }
  return {p};
}

}  // namespace dpp
