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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "dpp/channel.hpp"
#include "dpp/codebook.hpp"
#include "dpp/precoder.hpp"
#include "dpp/sparse_dpp.hpp"
#include "test_util.hpp"

using namespace dpp;

namespace {

// Selection configuration with every reduction switched off: full coarse
// grid, every subcarrier sampled, refinement window covering the grid.
LceConfig no_reduction(int g, int k) {
  LceConfig lce;
  lce.g = g;
  lce.g_c = g;
  lce.g_a = g;
  lce.k_prime = k;
  return lce;
}

IndexList full_range(int n) {
  IndexList ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 1);
  return ids;
}

}  // namespace

TEST_CASE("peak finder: interior peaks, edge peaks, ranking") {
  Vec v(5);
  v << 1.0, 3.0, 2.0, 5.0, 4.0;
  const IndexList ids = full_range(5);

  // Peaks: position 2 (3 >= 1, 3 >= 2) and position 4 (5 >= 2, 5 >= 4).
  CHECK(peak_finder(v, ids, 1) == IndexList{4});
  CHECK(peak_finder(v, ids, 2) == IndexList{4, 2});
  // Fewer peaks than requested: filled from the largest non-peak values.
  CHECK(peak_finder(v, ids, 3) == IndexList{4, 2, 5});
  CHECK(peak_finder(v, ids, 5) == IndexList{4, 2, 5, 3, 1});
}

TEST_CASE("peak finder: plateaus and edges count, ties break to smaller id") {
  Vec flat(3);
  flat << 2.0, 2.0, 2.0;
  IndexList ids = {7, 8, 9};
  // Every position qualifies (>= both neighbors); ties order by id.
  CHECK(peak_finder(flat, ids, 2) == IndexList{7, 8});

  Vec edge(3);
  edge << 5.0, 1.0, 1.0;
  ids = {1, 2, 3};
  // Position 1 is a one-sided peak; position 3 ties its left neighbor.
  CHECK(peak_finder(edge, ids, 2) == IndexList{1, 3});

  Vec single(1);
  single << 4.0;
  CHECK(peak_finder(single, {42}, 1) == IndexList{42});

  CHECK_THROWS_AS(peak_finder(single, {42}, 2), std::invalid_argument);
  CHECK_THROWS_AS(peak_finder(edge, {1, 2}, 1), std::invalid_argument);
}

TEST_CASE("index cleaner: deduplicates keeping first, clamps to range") {
  CHECK(index_cleaner({3, 1, 3, 2, 9, 1}, 1, 5) == IndexList{3, 1, 2});
  CHECK(index_cleaner({0, -3, 6}, 1, 5) == IndexList{});
  CHECK(index_cleaner({5, 4, 5, 4}, 4, 5) == IndexList{5, 4});
  CHECK(index_cleaner({}, 1, 5) == IndexList{});
}

TEST_CASE("narrowband pursuit recovers a single planted atom") {
  const SystemConfig cfg = test::tiny_system();
  const AngularGrid grid = make_grid(32);
  const CMat dict = narrowband_matrix(grid, cfg);

  TrialRng rng(Seed{61, 0});
  for (int rep = 0; rep < 100; ++rep) {
    const int g0 = 1 + static_cast<int>(rng.uniform(0.0, 32.0));
    CMat weights(1, 2);
    weights(0, 0) = rng.cnormal();
    weights(0, 1) = rng.cnormal();
    const CMat target = dict.col(g0 - 1) * weights;

    const NarrowbandSolution sol = ssp_narrowband(dict, target, 1);
    REQUIRE(sol.atoms.size() == 1);
    CHECK(sol.atoms[0] == g0);
    // The same winner an exhaustive scan finds.
    int best = 0;
    double best_score = -1.0;
    for (int g = 0; g < 32; ++g) {
      const double s = (dict.col(g).adjoint() * target).squaredNorm();
      if (s > best_score) {
        best_score = s;
        best = g + 1;
      }
    }
    CHECK(sol.atoms[0] == best);
  }
}

TEST_CASE("narrowband pursuit: distinct atoms, exact output power") {
  const SystemConfig cfg = test::tiny_system();
  const AngularGrid grid = make_grid(64);
  const CMat dict = narrowband_matrix(grid, cfg);

  TrialRng rng(Seed{62, 0});
  for (int rep = 0; rep < 20; ++rep) {
    CMat target(cfg.n_t, 2);
    for (int j = 0; j < 2; ++j) {
      for (int i = 0; i < cfg.n_t; ++i) target(i, j) = rng.cnormal();
    }
    const NarrowbandSolution sol = ssp_narrowband(dict, target, 3);
    REQUIRE(sol.atoms.size() == 3);
    std::set<int> uniq(sol.atoms.begin(), sol.atoms.end());
    CHECK(uniq.size() == 3);
    CHECK((sol.analog * sol.digital).squaredNorm() ==
          doctest::Approx(2.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(ssp_narrowband(dict, CMat::Zero(8, 2), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(ssp_narrowband(dict, CMat::Zero(cfg.n_t, 2), 0),
                  std::invalid_argument);
}

TEST_CASE("wideband selection reduces to the narrowband rule for one "
          "subcarrier and per-antenna delays") {
  // One subcarrier at the carrier frequency and one delay line per antenna:
  // the realized dictionary equals the flat steering dictionary, so the
  // wideband selector must pick exactly the narrowband atoms.
  SystemConfig cfg = test::tiny_system();
  cfg.n_ttd = 16;
  cfg.m = 1;
  cfg.k = 1;
  const Codebook cb = build_codebook(cfg, 32);
  const CMat nb = narrowband_matrix(cb.grid, cfg);

  ClusterConfig cc;
  cc.n_c = 2;
  cc.n_p = 3;
  cc.sigma_theta_t = 0.05;
  for (std::uint32_t t = 0; t < 10; ++t) {
    const ChannelSet ch = generate_channels(cfg, cc, Seed{63, t});
    const FullyDigital fd = fully_digital(ch, cfg);
    const IndexList wide = essp_select_atoms(cb.feasible, fd.f, cfg.n_rf);
    const NarrowbandSolution narrow = ssp_narrowband(nb, fd.f[0], cfg.n_rf);
    CHECK(wide == narrow.atoms);
  }
}

TEST_CASE("one pure path puts the selected atom at the mirrored direction") {
  // The transmit response enters the channel unconjugated, so the matched
  // dictionary column sits at the negated direction sine.
  SystemConfig cfg;
  cfg.n_t = 32;
  cfg.n_ttd = 8;
  cfg.m = 4;
  cfg.n_r = 1;
  cfg.n_rf = 1;
  cfg.n_s = 1;
  cfg.k = 8;
  cfg.f_c = 100e9;
  cfg.f_s = 10e9;
  const int g = 128;
  const Codebook cb = build_codebook(cfg, g);

  for (double sine : {0.5, -0.3, 0.82}) {
    const ChannelSet ch = assemble_channels(
        {test::make_subpath(Complex(1.0, 0.0), 1e-10, sine, 0.0)}, cfg);
    const FullyDigital fd = fully_digital(ch, cfg);
    const PrecodingSolution sol = essp(cb, fd, ch, cfg);
    REQUIRE(sol.atom_indices.size() == 1);
    const double picked = cb.grid.phi(sol.atom_indices[0] - 1);
    CHECK(std::abs(picked - (-sine)) <= 2.0 / g);
    CHECK_NOTHROW(validate_solution(sol, cfg, cb.t_max, g));
  }
}

TEST_CASE("two-stage selection with reductions disabled equals one full "
          "pass") {
  const SystemConfig cfg = test::small_system();
  const int g = 64;
  const Codebook cb = build_codebook(cfg, g);
  const LceConfig lce = no_reduction(g, cfg.k);

  ClusterConfig cc;
  cc.n_c = 4;
  cc.n_p = 2;
  cc.sigma_theta_t = 0.03;
  cc.sigma_theta_r = 0.03;

  for (std::uint32_t t = 0; t < 10; ++t) {
    const ChannelSet ch = generate_channels(cfg, cc, Seed{64, t});
    const FullyDigital fd = fully_digital(ch, cfg);

    // Reference: projection energies over the whole grid and band, then one
    // peak pass.
    Vec psi = Vec::Zero(g);
    for (int k = 0; k < cfg.k; ++k) {
      const CMat& dk = cb.feasible[static_cast<std::size_t>(k)];
      for (int a = 0; a < g; ++a) {
        psi(a) += (dk.col(a).adjoint() * fd.f[static_cast<std::size_t>(k)])
                      .squaredNorm();
      }
    }
    const IndexList want = peak_finder(psi, full_range(g), cfg.n_rf);
    const IndexList got = lce_select_atoms(cb, fd.f, cfg, lce);
    CHECK(got == want);
  }
}

TEST_CASE("subcarrier subsampling barely changes the selected support") {
  SystemConfig cfg;
  cfg.n_t = 64;
  cfg.n_ttd = 8;
  cfg.m = 8;
  cfg.n_r = 4;
  cfg.n_rf = 4;
  cfg.n_s = 4;
  cfg.k = 32;
  cfg.f_c = 100e9;
  cfg.f_s = 10e9;
  const Codebook cb = build_codebook(cfg, 256);

  ClusterConfig cc;
  cc.n_c = 4;
  cc.n_p = 1;  // pure paths

  LceConfig sampled;
  sampled.g = 256;
  sampled.g_c = 64;
  sampled.g_a = 8;
  sampled.k_prime = 4;  // one sampled subcarrier per band quarter
  LceConfig full = sampled;
  full.k_prime = cfg.k;

  // Exact column ids can flip to a neighbor when a direction falls between
  // grid points, so supports are compared by grid distance.
  int exact = 0;
  int near = 0;
  int total = 0;
  for (std::uint32_t t = 0; t < 50; ++t) {
    const ChannelSet ch = generate_channels(cfg, cc, Seed{65, t});
    const FullyDigital fd = fully_digital(ch, cfg);
    const IndexList a = lce_select_atoms(cb, fd.f, cfg, sampled);
    const IndexList b = lce_select_atoms(cb, fd.f, cfg, full);
    const std::set<int> sa(a.begin(), a.end());
    for (int id : b) {
      ++total;
      if (sa.count(id)) ++exact;
      int dist = sampled.g;
      for (int other : a) dist = std::min(dist, std::abs(other - id));
      if (dist <= 1) ++near;
    }
  }
  CHECK(total == 50 * cfg.n_rf);
  // Disagreements concentrate on the marginal last atom (a weak path versus
  // a strong path's sidelobe); nine of ten atoms land within one column.
  CHECK(static_cast<double>(near) / total >= 0.9);
  CHECK(static_cast<double>(exact) / total >= 0.6);
}

TEST_CASE("representative directions recover the mirrored cluster sines") {
  SystemConfig cfg;
  cfg.n_t = 64;
  cfg.n_ttd = 8;
  cfg.m = 8;
  cfg.n_r = 4;
  cfg.n_rf = 4;
  cfg.n_s = 4;
  cfg.k = 16;
  cfg.f_c = 100e9;
  cfg.f_s = 10e9;
  LceConfig lce;
  lce.g = 256;
  lce.g_c = 64;
  lce.g_a = 8;
  lce.k_prime = 4;

  const std::vector<double> sines = {-0.6, -0.2, 0.3, 0.7};
  std::vector<Subpath> paths;
  for (std::size_t i = 0; i < sines.size(); ++i) {
    paths.push_back(test::make_subpath(Complex(1.0, 0.0), 1e-10 * (i + 1.0),
                                       sines[i], -0.5 + 0.3 * i));
  }
  const ChannelSet ch = assemble_channels(paths, cfg);

  Vec angles = find_representative_angles(ch, cfg, lce);
  REQUIRE(angles.size() == 4);
  std::sort(angles.data(), angles.data() + angles.size());
  // Expected: the negated sines, sorted: -0.7, -0.3, 0.2, 0.6.
  const std::vector<double> want = {-0.7, -0.3, 0.2, 0.6};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(angles(i) - want[static_cast<std::size_t>(i)]) <=
          2.0 / lce.g);
  }
}

TEST_CASE("frequency-flat baseline: zero delays, replicated analog") {
  const SystemConfig cfg = test::small_system();
  const AngularGrid grid = make_grid(64);
  const CMat nb = narrowband_matrix(grid, cfg);

  ClusterConfig cc;
  cc.n_c = 4;
  cc.n_p = 2;
  cc.sigma_theta_t = 0.05;
  const ChannelSet ch = generate_channels(cfg, cc, Seed{66, 1});
  const FullyDigital fd = fully_digital(ch, cfg);

  const PrecodingSolution sol = ssp_freq_independent(nb, fd, ch, cfg);
  REQUIRE(sol.atom_indices.size() == static_cast<std::size_t>(cfg.n_rf));
  CHECK(sol.delay.norm() == 0.0);
  for (std::size_t k = 1; k < sol.analog.size(); ++k) {
    CHECK((sol.analog[k] - sol.analog[0]).norm() == 0.0);
  }
  for (int i = 0; i < cfg.n_rf; ++i) {
    // Phase weights are the selected steering columns scaled to unit modulus.
    const CVec col = nb.col(sol.atom_indices[static_cast<std::size_t>(i)] - 1);
    CHECK((sol.phase.col(i) -
           col * std::sqrt(static_cast<double>(cfg.n_t))).norm() <= 1e-12);
  }
  CHECK_NOTHROW(validate_solution(sol, cfg, default_t_max(cfg), grid.g));
}

TEST_CASE("projection map: boresight energy peaks at the grid center") {
  SystemConfig cfg = test::small_system();
  cfg.n_r = 1;
  cfg.n_rf = 1;
  cfg.n_s = 1;
  const int g = 64;
  const AngularGrid grid = make_grid(g);

  const ChannelSet ch = assemble_channels(
      {test::make_subpath(Complex(1.0, 0.0), 0.0, 0.0, 0.0)}, cfg);
  const FullyDigital fd = fully_digital(ch, cfg);

  const ProjectionMap pm = projection_map(
      [&grid, &cfg](int k1) { return ideal_matrix_at(grid, cfg, k1); }, fd,
      cfg, full_range(g), full_range(cfg.k));
  REQUIRE(pm.per_subcarrier.rows() == g);
  REQUIRE(pm.per_subcarrier.cols() == cfg.k);
  REQUIRE(pm.averaged.size() == g);

  // Row sums match the averaged curve.
  for (int a = 0; a < g; ++a) {
    CHECK(pm.per_subcarrier.row(a).sum() ==
          doctest::Approx(pm.averaged(a)).epsilon(1e-12));
  }
  // The grid has no exact zero; boresight lands on one of the two middle
  // columns.
  Eigen::Index arg = 0;
  pm.averaged.maxCoeff(&arg);
  CHECK((arg == g / 2 - 1 || arg == g / 2));

  // Subsets are honored.
  const IndexList part_g = {1, 5, 9};
  const IndexList part_k = {2, 4};
  const ProjectionMap sub = projection_map(
      [&grid, &cfg](int k1) { return ideal_matrix_at(grid, cfg, k1); }, fd,
      cfg, part_g, part_k);
  CHECK(sub.per_subcarrier.rows() == 3);
  CHECK(sub.per_subcarrier.cols() == 2);
  CHECK(sub.atom_ids == part_g);
  CHECK(sub.subcarrier_ids == part_k);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 2; ++c) {
      CHECK(sub.per_subcarrier(r, c) ==
            doctest::Approx(pm.per_subcarrier(part_g[static_cast<std::size_t>(r)] - 1,
                                              part_k[static_cast<std::size_t>(c)] - 1))
                .epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(projection_map(
                      [&grid, &cfg](int k1) { return ideal_matrix_at(grid, cfg, k1); },
                      fd, cfg, IndexList{}, part_k),
                  std::invalid_argument);
  CHECK_THROWS_AS(projection_map(
                      [&grid, &cfg](int k1) { return ideal_matrix_at(grid, cfg, k1); },
                      fd, cfg, part_g, IndexList{0}),
                  std::invalid_argument);
}

TEST_CASE("full solvers satisfy the hardware contract end to end") {
  const SystemConfig cfg = test::small_system();
  const int g = 64;
  const Codebook cb = build_codebook(cfg, g);
  LceConfig lce;
  lce.g = g;
  lce.g_c = 16;
  lce.g_a = 4;
  lce.k_prime = 2;

  ClusterConfig cc;
  cc.n_c = 4;
  cc.n_p = 3;
  cc.sigma_theta_t = 0.05;
  cc.sigma_theta_r = 0.05;

  for (std::uint32_t t = 0; t < 5; ++t) {
    const ChannelSet ch = generate_channels(cfg, cc, Seed{67, t});
    const FullyDigital fd = fully_digital(ch, cfg);

    const PrecodingSolution wide = essp(cb, fd, ch, cfg);
    CHECK_NOTHROW(validate_solution(wide, cfg, cb.t_max, g));

    const PrecodingSolution fast = lce_ssp(cb, fd, ch, cfg, lce);
    CHECK_NOTHROW(validate_solution(fast, cfg, cb.t_max, g));

    // Hardware settings must match the selected codebook columns.
    for (std::size_t i = 0; i < wide.atom_indices.size(); ++i) {
      const int a = wide.atom_indices[i];
      CHECK((wide.phase.col(static_cast<Eigen::Index>(i)) -
             cb.phase.col(a - 1)).norm() == 0.0);
      CHECK((wide.delay.col(static_cast<Eigen::Index>(i)) -
             cb.delay.col(a - 1)).norm() == 0.0);
    }
  }
}

TEST_CASE("selection argument checks") {
  const SystemConfig cfg = test::tiny_system();
  const Codebook cb = build_codebook(cfg, 8);
  ClusterConfig cc;
  const ChannelSet ch = generate_channels(cfg, cc, Seed{68, 0});
  const FullyDigital fd = fully_digital(ch, cfg);

  CHECK_THROWS_AS(essp_select_atoms(cb.feasible, {}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(essp_select_atoms(cb.feasible, fd.f, 0),
                  std::invalid_argument);
  // More chains than atoms is rejected up front.
  CHECK_THROWS_AS(essp_select_atoms(cb.feasible, fd.f, 9),
                  std::invalid_argument);
}
