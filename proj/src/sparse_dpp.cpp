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

#include "dpp/sparse_dpp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "dpp/numerics.hpp"

namespace dpp {

namespace {

// Appends column src to dst (copy-grow; atom counts are tiny).
void append_column(CMat& dst, const CVec& src) {
  const Eigen::Index c = dst.cols();
  dst.conservativeResize(src.size(), c + 1);
  dst.col(c) = src;
}

CMat normalized_or_zero(const CMat& r) {
  const double n = r.norm();
  if (n > 1e-300) return r / n;
  return CMat::Zero(r.rows(), r.cols());
}

// Shared wideband selection loop. dict_col(k, g) returns column g (0-based)
// of the dictionary at 0-based subcarrier k; score_all(k, residual) returns
// the per-atom squared projections at that subcarrier.
IndexList somp_select(
    const std::function<const CMat&(std::size_t)>& dict_at,
    const std::vector<CMat>& measurements, int n_rf) {
  if (measurements.empty()) {
    throw std::invalid_argument("atom selection: no measurement matrices");
  }
  const Eigen::Index g_total = dict_at(0).cols();
  if (n_rf < 1 || static_cast<Eigen::Index>(n_rf) > g_total) {
    throw std::invalid_argument(
        "atom selection: fewer distinct selectable atoms than RF chains");
  }
  const std::size_t kk = measurements.size();

  IndexList atoms;
  // Round one scores the raw targets; later rounds score the normalized
  // least-squares residuals so every subcarrier keeps an equal vote.
  std::vector<CMat> residual = measurements;
  std::vector<CMat> analog(kk, CMat(dict_at(0).rows(), 0));

  for (int round = 0; round < n_rf; ++round) {
    Vec score = Vec::Zero(g_total);
    for (std::size_t k = 0; k < kk; ++k) {
      score += (dict_at(k).adjoint() * residual[k]).rowwise().squaredNorm();
    }
    for (int a : atoms) score(a - 1) = -1.0;  // mask picked atoms

    Eigen::Index best = 0;
    score.maxCoeff(&best);
    if (score(best) < 0.0) {
      throw std::runtime_error(
          "atom selection: ran out of selectable atoms");
    }
    atoms.push_back(static_cast<int>(best) + 1);

    for (std::size_t k = 0; k < kk; ++k) {
      append_column(analog[k], dict_at(k).col(best));
      const CMat d = pinv(analog[k]) * measurements[k];
      residual[k] = normalized_or_zero(measurements[k] - analog[k] * d);
    }
  }
  return atoms;
}

CMat slice_columns(const CMat& m, const IndexList& atoms) {
  CMat out(m.rows(), static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = m.col(atoms[i] - 1);
  }
  return out;
}

Mat slice_columns(const Mat& m, const IndexList& atoms) {
  Mat out(m.rows(), static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = m.col(atoms[i] - 1);
  }
  return out;
}

}  // namespace

NarrowbandSolution ssp_narrowband(const CMat& dict, const CMat& f, int n_rf) {
  if (dict.rows() != f.rows()) {
    throw std::invalid_argument("ssp_narrowband: dictionary/target row mismatch");
  }
  if (n_rf < 1 || static_cast<Eigen::Index>(n_rf) > dict.cols()) {
    throw std::invalid_argument("ssp_narrowband: n_rf out of range");
  }
  NarrowbandSolution sol;
  sol.analog = CMat(dict.rows(), 0);
  CMat residual = f;
  CMat digital;
  for (int round = 0; round < n_rf; ++round) {
    const Vec score =
        (dict.adjoint() * residual).rowwise().squaredNorm();
    Eigen::Index best = 0;
    score.maxCoeff(&best);
    sol.atoms.push_back(static_cast<int>(best) + 1);
    append_column(sol.analog, dict.col(best));
    digital = pinv(sol.analog) * f;
    residual = normalized_or_zero(f - sol.analog * digital);
  }
  // Rank check on the final atom set (duplicates or parallel columns).
  {
    Eigen::JacobiSVD<CMat> dec(sol.analog);
    const Vec& s = dec.singularValues();
    if (s(s.size() - 1) < 1e-10 * s(0)) {
      throw std::runtime_error(
          "ssp_narrowband: selected atoms are rank-deficient");
    }
  }
  const double p = (sol.analog * digital).norm();
  if (p == 0.0) {
    throw std::runtime_error("ssp_narrowband: zero-power solution");
  }
  sol.digital =
      digital * (std::sqrt(static_cast<double>(f.cols())) / p);
  return sol;
}

IndexList essp_select_atoms(const std::vector<CMat>& dict_k,
                            const std::vector<CMat>& measurements, int n_rf) {
  if (dict_k.size() != measurements.size()) {
    throw std::invalid_argument(
        "essp_select_atoms: dictionary/measurement count mismatch");
  }
  return somp_select(
      [&dict_k](std::size_t k) -> const CMat& { return dict_k[k]; },
      measurements, n_rf);
}

PrecodingSolution essp(const Codebook& cb, const FullyDigital& fd,
                       const ChannelSet& ch, const SystemConfig& cfg) {
  validate(cfg);
  if (static_cast<int>(fd.f.size()) != cfg.k ||
      static_cast<int>(cb.feasible.size()) != cfg.k) {
    throw std::invalid_argument("essp: subcarrier count mismatch");
  }
  PrecodingSolution sol;
  sol.atom_indices = essp_select_atoms(cb.feasible, fd.f, cfg.n_rf);
  sol.phase = slice_columns(cb.phase, sol.atom_indices);
  sol.delay = slice_columns(cb.delay, sol.atom_indices);
  sol.analog.reserve(fd.f.size());
  for (const CMat& mk : cb.feasible) {
    sol.analog.push_back(slice_columns(mk, sol.atom_indices));
  }
  sol.digital = refine_digital(ch, sol.analog, cfg);
  return sol;
}

IndexList peak_finder(const Vec& values, const IndexList& ids, int n_peak) {
  const Eigen::Index n = values.size();
  if (n != static_cast<Eigen::Index>(ids.size())) {
    throw std::invalid_argument("peak_finder: values/ids length mismatch");
  }
  if (n_peak < 0 || static_cast<Eigen::Index>(n_peak) > n) {
    throw std::invalid_argument("peak_finder: n_peak exceeds the list length");
  }

  std::vector<int> peaks, plain;
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || values(i) >= values(i - 1);
    const bool right_ok = i == n - 1 || values(i) >= values(i + 1);
    (left_ok && right_ok ? peaks : plain).push_back(static_cast<int>(i));
  }
  const auto by_value_then_id = [&](int a, int b) {
    if (values(a) != values(b)) return values(a) > values(b);
    return ids[static_cast<std::size_t>(a)] < ids[static_cast<std::size_t>(b)];
  };
  std::sort(peaks.begin(), peaks.end(), by_value_then_id);
  std::sort(plain.begin(), plain.end(), by_value_then_id);

  IndexList out;
  out.reserve(static_cast<std::size_t>(n_peak));
  for (int pos : peaks) {
    if (static_cast<int>(out.size()) == n_peak) break;
    out.push_back(ids[static_cast<std::size_t>(pos)]);
  }
  for (int pos : plain) {
    if (static_cast<int>(out.size()) == n_peak) break;
    out.push_back(ids[static_cast<std::size_t>(pos)]);
  }
  return out;
}

IndexList index_cleaner(const IndexList& ids, int lo, int hi) {
  IndexList out;
  std::set<int> seen;
  for (int id : ids) {
    if (id < lo || id > hi) continue;
    if (seen.insert(id).second) out.push_back(id);
  }
  return out;
}

IndexList lce_select_atoms(const std::function<CMat(int)>& dict_at,
                           const std::vector<CMat>& measurements,
                           const SystemConfig& cfg, const LceConfig& lce) {
  validate(lce, cfg);
  if (static_cast<int>(measurements.size()) != cfg.k) {
    throw std::invalid_argument("lce_select_atoms: measurement count mismatch");
  }
  const int dg = lce.g / lce.g_c;
  const int dk = cfg.k / lce.k_prime;

  IndexList sampled;  // 1-based subcarriers, the same subset in both stages
  for (int j = 0; j < lce.k_prime; ++j) sampled.push_back(1 + j * dk);

  // Stage 1: coarse subsampled grid.
  IndexList coarse_cols;  // 1-based fine-grid columns of the coarse atoms
  for (int p = 0; p < lce.g_c; ++p) coarse_cols.push_back(1 + p * dg);
  Vec psi_c = Vec::Zero(lce.g_c);
  for (int k1 : sampled) {
    const CMat dict = dict_at(k1);
    const CMat& f = measurements[static_cast<std::size_t>(k1 - 1)];
    for (int p = 0; p < lce.g_c; ++p) {
      psi_c(p) += (dict.col(coarse_cols[static_cast<std::size_t>(p)] - 1)
                       .adjoint() * f)
                      .squaredNorm();
    }
  }
  IndexList coarse_pos(static_cast<std::size_t>(lce.g_c));
  std::iota(coarse_pos.begin(), coarse_pos.end(), 1);
  const IndexList picks = peak_finder(psi_c, coarse_pos, cfg.n_rf);

  // Stage 2: fine windows of half-width g_a around each coarse pick.
  IndexList cand;
  for (int p : picks) {
    for (int g = dg * p - lce.g_a; g <= dg * p + lce.g_a; ++g) {
      cand.push_back(g);
    }
  }
  cand = index_cleaner(cand, 1, lce.g);
  if (static_cast<int>(cand.size()) < cfg.n_rf) {
    throw std::runtime_error(
        "lce_select_atoms: candidate set smaller than the RF chain count");
  }

  Vec psi_f = Vec::Zero(static_cast<Eigen::Index>(cand.size()));
  for (int k1 : sampled) {
    const CMat dict = dict_at(k1);
    const CMat& f = measurements[static_cast<std::size_t>(k1 - 1)];
    for (std::size_t i = 0; i < cand.size(); ++i) {
      psi_f(static_cast<Eigen::Index>(i)) +=
          (dict.col(cand[i] - 1).adjoint() * f).squaredNorm();
    }
  }
  return peak_finder(psi_f, cand, cfg.n_rf);
}

IndexList lce_select_atoms(const Codebook& cb,
                           const std::vector<CMat>& measurements,
                           const SystemConfig& cfg, const LceConfig& lce) {
  if (static_cast<int>(cb.feasible.size()) != cfg.k) {
    throw std::invalid_argument("lce_select_atoms: codebook subcarrier mismatch");
  }
  return lce_select_atoms(
      [&cb](int k1) { return cb.feasible[static_cast<std::size_t>(k1 - 1)]; },
      measurements, cfg, lce);
}

PrecodingSolution lce_ssp(const Codebook& cb, const FullyDigital& fd,
                          const ChannelSet& ch, const SystemConfig& cfg,
                          const LceConfig& lce) {
  validate(cfg);
  if (static_cast<int>(fd.f.size()) != cfg.k) {
    throw std::invalid_argument("lce_ssp: subcarrier count mismatch");
  }
  PrecodingSolution sol;
  sol.atom_indices = lce_select_atoms(cb, fd.f, cfg, lce);
  sol.phase = slice_columns(cb.phase, sol.atom_indices);
  sol.delay = slice_columns(cb.delay, sol.atom_indices);
  sol.analog.reserve(fd.f.size());
  for (const CMat& mk : cb.feasible) {
    sol.analog.push_back(slice_columns(mk, sol.atom_indices));
  }
  sol.digital = refine_digital(ch, sol.analog, cfg);
  return sol;
}

PrecodingSolution ssp_freq_independent(const CMat& narrowband_dict,
                                       const FullyDigital& fd,
                                       const ChannelSet& ch,
                                       const SystemConfig& cfg) {
  validate(cfg);
  if (narrowband_dict.rows() != cfg.n_t) {
    throw std::invalid_argument("ssp_freq_independent: dictionary row mismatch");
  }
  if (static_cast<int>(fd.f.size()) != cfg.k) {
    throw std::invalid_argument("ssp_freq_independent: subcarrier count mismatch");
  }
  PrecodingSolution sol;
  sol.atom_indices = somp_select(
      [&narrowband_dict](std::size_t) -> const CMat& {
        return narrowband_dict;
      },
      fd.f, cfg.n_rf);
  sol.phase = slice_columns(narrowband_dict, sol.atom_indices);
  // Steering weights are 1/sqrt(n_t)-scaled; the hardware phase matrix is
  // the unit-modulus weight pattern.
  sol.phase *= std::sqrt(static_cast<double>(cfg.n_t));
  sol.delay = Mat::Zero(cfg.n_ttd, cfg.n_rf);
  const CMat a = slice_columns(narrowband_dict, sol.atom_indices);
  sol.analog.assign(static_cast<std::size_t>(cfg.k), a);
  sol.digital = refine_digital(ch, sol.analog, cfg);
  return sol;
}

namespace {

ProjectionMap projection_map_impl(
    const std::function<CMat(int)>& dict_at, const FullyDigital& fd,
    const SystemConfig& cfg, const IndexList& grid_subset,
    const IndexList& subcarrier_subset) {
  if (grid_subset.empty() || subcarrier_subset.empty()) {
    throw std::invalid_argument("projection_map: empty subset");
  }
  for (int k1 : subcarrier_subset) {
    if (k1 < 1 || k1 > cfg.k) {
      throw std::invalid_argument("projection_map: subcarrier index out of range");
    }
  }
  ProjectionMap pm;
  pm.atom_ids = grid_subset;
  pm.subcarrier_ids = subcarrier_subset;
  pm.per_subcarrier = Mat(static_cast<Eigen::Index>(grid_subset.size()),
                          static_cast<Eigen::Index>(subcarrier_subset.size()));
  for (std::size_t c = 0; c < subcarrier_subset.size(); ++c) {
    const int k1 = subcarrier_subset[c];
    const CMat dict = dict_at(k1);
    const CMat& f = fd.f[static_cast<std::size_t>(k1 - 1)];
    for (std::size_t r = 0; r < grid_subset.size(); ++r) {
      const int g1 = grid_subset[r];
      if (g1 < 1 || g1 > dict.cols()) {
        throw std::invalid_argument("projection_map: grid index out of range");
      }
      pm.per_subcarrier(static_cast<Eigen::Index>(r),
                        static_cast<Eigen::Index>(c)) =
          (dict.col(g1 - 1).adjoint() * f).squaredNorm();
    }
  }
  pm.averaged = pm.per_subcarrier.rowwise().sum();
  return pm;
}

}  // namespace

ProjectionMap projection_map(const std::function<CMat(int)>& dict_at,
                             const FullyDigital& fd, const SystemConfig& cfg,
                             const IndexList& grid_subset,
                             const IndexList& subcarrier_subset) {
  return projection_map_impl(dict_at, fd, cfg, grid_subset, subcarrier_subset);
}

ProjectionMap projection_map(const CMat& dict, const FullyDigital& fd,
                             const SystemConfig& cfg,
                             const IndexList& grid_subset,
                             const IndexList& subcarrier_subset) {
  return projection_map_impl([&dict](int) { return dict; }, fd, cfg,
                             grid_subset, subcarrier_subset);
}

Vec find_representative_angles(const ChannelSet& ch, const SystemConfig& cfg,
                               const LceConfig& lce) {
  validate(cfg);
  if (static_cast<int>(ch.h.size()) != cfg.k) {
    throw std::invalid_argument(
        "find_representative_angles: subcarrier count mismatch");
  }
  const AngularGrid grid = make_grid(lce.g);
  std::vector<CMat> measurements;
  measurements.reserve(ch.h.size());
  for (const CMat& hk : ch.h) measurements.push_back(hk.adjoint());
  const IndexList atoms = lce_select_atoms(
      [&grid, &cfg](int k1) { return ideal_matrix_at(grid, cfg, k1); },
      measurements, cfg, lce);
  Vec angles(static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    angles(static_cast<Eigen::Index>(i)) = grid.phi(atoms[i] - 1);
  }
  return angles;
}

}  // namespace dpp
