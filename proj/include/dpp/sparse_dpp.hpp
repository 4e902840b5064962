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

#include <functional>
#include <vector>

#include "dpp/channel.hpp"
#include "dpp/codebook.hpp"
#include "dpp/config.hpp"
#include "dpp/precoder.hpp"
#include "dpp/types.hpp"

namespace dpp {

// Narrowband simultaneous matching pursuit over one dictionary: n_rf rounds
// of (project residual on all atoms, pick the largest squared row norm,
// least-squares refit, renormalize residual). The final digital matrix is
// rescaled so ||analog * digital||_F^2 equals the stream count. Throws when
// the selected atoms are rank-deficient.
struct NarrowbandSolution {
  IndexList atoms;  // 1-based dictionary columns, selection order
  CMat analog;
  CMat digital;
};

NarrowbandSolution ssp_narrowband(const CMat& dict, const CMat& f, int n_rf);

// Wideband atom selection: scores are per-subcarrier residual projections
// summed over all K subcarriers, one atom per round, previously selected
// atoms masked out. measurements[k] is the target [n_t x streams] at
// subcarrier k; dict_k is the realized dictionary at subcarrier k.
IndexList essp_select_atoms(const std::vector<CMat>& dict_k,
                            const std::vector<CMat>& measurements, int n_rf);

// Full wideband solver: atom selection on the codebook's realized
// dictionaries against the fully-digital targets, then the rate-optimal
// digital stage. hardware settings are the codebook columns of the chosen
// atoms.
PrecodingSolution essp(const Codebook& cb, const FullyDigital& fd,
                       const ChannelSet& ch, const SystemConfig& cfg);

// Local-maxima picker. values and ids run in parallel; position i is a peak
// when values(i) is >= both neighbors (one-sided at the ends). Returns the
// ids of the n_peak largest peaks; if fewer peaks exist, the remaining
// slots are filled with the largest non-peak values. Ties break toward the
// smaller id. Throws when n_peak exceeds the list length.
IndexList peak_finder(const Vec& values, const IndexList& ids, int n_peak);

// Deduplicates (keeping first occurrence) and drops ids outside [lo, hi];
// order is otherwise preserved.
IndexList index_cleaner(const IndexList& ids, int lo, int hi);

// Non-iterative two-stage selection: score a coarse subsampled grid on a
// subset of subcarriers, keep the n_rf best peaks, re-score a +/- g_a fine
// window around each, and pick the final n_rf peaks. dict_at(k) returns the
// dictionary at 1-based subcarrier k (only sampled subcarriers are
// requested, so dictionaries can be built lazily).
IndexList lce_select_atoms(const std::function<CMat(int)>& dict_at,
                           const std::vector<CMat>& measurements,
                           const SystemConfig& cfg, const LceConfig& lce);
IndexList lce_select_atoms(const Codebook& cb,
                           const std::vector<CMat>& measurements,
                           const SystemConfig& cfg, const LceConfig& lce);

// Full low-complexity solver: two-stage selection on the codebook, then the
// rate-optimal digital stage over all K subcarriers.
PrecodingSolution lce_ssp(const Codebook& cb, const FullyDigital& fd,
                          const ChannelSet& ch, const SystemConfig& cfg,
                          const LceConfig& lce);

// Beam-split-degradation baseline: the wideband selection loop run with the
// frequency-flat steering dictionary at every subcarrier and all delays
// pinned to zero.
PrecodingSolution ssp_freq_independent(const CMat& narrowband_dict,
                                       const FullyDigital& fd,
                                       const ChannelSet& ch,
                                       const SystemConfig& cfg);

// Projection energy of the targets on dictionary atoms, the quantity the
// selectors maximize: psi_k(g) = sum_streams |dict_k(:,g)^H F_k|^2.
struct ProjectionMap {
  Mat per_subcarrier;         // [atoms x subcarriers]
  Vec averaged;               // row sums over the subcarrier axis
  IndexList atom_ids;         // 1-based grid columns (rows of the map)
  IndexList subcarrier_ids;   // 1-based subcarriers (columns of the map)
};

ProjectionMap projection_map(const std::function<CMat(int)>& dict_at,
                             const FullyDigital& fd, const SystemConfig& cfg,
                             const IndexList& grid_subset,
                             const IndexList& subcarrier_subset);
// Fixed (frequency-flat) dictionary variant.
ProjectionMap projection_map(const CMat& dict, const FullyDigital& fd,
                             const SystemConfig& cfg,
                             const IndexList& grid_subset,
                             const IndexList& subcarrier_subset);

// Runs the two-stage selection against the channel columns themselves
// (measurements H_k^H) on the ideal frequency-dependent dictionaries and
// returns the grid angles of the selected atoms, one per RF chain. These
// are the dominant propagation directions as seen by the selector.
Vec find_representative_angles(const ChannelSet& ch, const SystemConfig& cfg,
                               const LceConfig& lce);

}  // namespace dpp
