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

#include "dpp/types.hpp"

namespace dpp {

// Thin SVD, a = u * s.asDiagonal() * v.adjoint(), singular values descending.
struct SvdResult {
  CMat u;
  Vec s;
  CMat v;
};

SvdResult svd(const CMat& a);

// Moore-Penrose pseudoinverse. Singular values below 1e-10 * s_max are
// treated as zero. Throws std::invalid_argument on non-finite input.
CMat pinv(const CMat& a);

// (a^H a)^(-1/2) via the eigendecomposition of the Gram matrix. Throws
// std::runtime_error when the Gram matrix is numerically singular
// (min eigenvalue < 1e-12 * max eigenvalue).
CMat inv_sqrt_gram(const CMat& a);

// Per-stream amplitude allocation p (same length as singular_values);
// unused channels get exactly 0 and sum(p^2) == total.
struct PowerAllocation {
  Vec p;
};

// Water-filling over parallel channels with powers q_i = p_i^2:
// maximize sum_i log2(1 + gain_factor * s_i^2 * q_i) s.t. sum_i q_i = total.
// Solved exactly by the active-set method (sort inverse gains, find the
// largest feasible active set), no iterative bisection. singular_values must
// be non-negative and non-increasing; all-zero input throws
// std::domain_error.
PowerAllocation water_fill(const Vec& singular_values, double gain_factor,
                           double total);

}  // namespace dpp
