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

#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "dpp/bench.hpp"
#include "dpp/channel.hpp"
#include "dpp/codebook.hpp"
#include "dpp/numerics.hpp"
#include "dpp/precoder.hpp"
#include "dpp/sparse_dpp.hpp"

namespace dpp {

namespace {

struct Check {
  std::string name;
  std::function<bool()> fn;
};

}  // namespace

int run_selftest(std::ostream& os) {
  const SystemConfig cfg = desk_system();
  const LceConfig lce = desk_lce();

  std::vector<Check> checks;

  checks.push_back({"subcarrier frequencies symmetric around f_c", [&] {
    const std::vector<double> f = derive_subcarrier_frequencies(cfg);
    double mean = 0.0;
    for (double v : f) mean += v;
    mean /= static_cast<double>(f.size());
    return std::abs(mean - cfg.f_c) < 1e-6 * cfg.f_c &&
           std::abs((f.back() - f.front()) -
                    cfg.f_s * (cfg.k - 1.0) / cfg.k) < 1.0;
  }});

  checks.push_back({"water-filling satisfies the common-level condition", [&] {
    Vec s(4);
    s << 2.0, 1.3, 0.7, 0.2;
    const PowerAllocation pa = water_fill(s, 2.5, 4.0);
    double total = 0.0;
    double level = -1.0;
    for (int i = 0; i < 4; ++i) {
      const double q = pa.p(i) * pa.p(i);
      total += q;
      if (q > 0.0) {
        const double li = q + 1.0 / (2.5 * s(i) * s(i));
        if (level < 0.0) level = li;
        if (std::abs(li - level) > 1e-6) return false;
      }
    }
    return std::abs(total - 4.0) < 1e-9;
  }});

  checks.push_back({"pseudoinverse satisfies the Penrose identities", [&] {
    TrialRng rng = spawn_trial_rng(Seed{7, 0});
    CMat a(6, 3);
    for (Eigen::Index j = 0; j < 3; ++j)
      for (Eigen::Index i = 0; i < 6; ++i) a(i, j) = rng.cnormal();
    const CMat ap = pinv(a);
    return (a * ap * a - a).norm() < 1e-9 && (ap * a * ap - ap).norm() < 1e-9;
  }});

  const Codebook cb = build_codebook(cfg, lce.g);

  checks.push_back({"phase codebook entries are unit modulus", [&] {
    for (Eigen::Index c = 0; c < cb.phase.cols(); ++c)
      for (Eigen::Index r = 0; r < cb.phase.rows(); ++r)
        if (std::abs(std::abs(cb.phase(r, c)) - 1.0) > 1e-12) return false;
    return true;
  }});

  checks.push_back({"delay codebook entries lie in [0, t_max]", [&] {
    return (cb.delay.array() >= 0.0).all() &&
           (cb.delay.array() <= cb.t_max).all();
  }});

  checks.push_back({"realized dictionary columns are unit norm", [&] {
    for (const CMat& mk : cb.feasible)
      for (Eigen::Index c = 0; c < mk.cols(); ++c)
        if (std::abs(mk.col(c).norm() - 1.0) > 1e-12) return false;
    return true;
  }});

  checks.push_back({"one delay element per antenna reproduces the ideal "
                    "dictionary", [&] {
    SystemConfig fine = cfg;
    fine.n_ttd = fine.n_t;
    fine.m = 1;
    const Codebook cb1 = build_codebook(fine, lce.g);
    return codebook_error(cb1, fine) < 1e-12;
  }});

  checks.push_back({"phase bias exactly compensates a frequency shift", [&] {
    TrialRng rng = spawn_trial_rng(Seed{11, 0});
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double theta = rng.uniform(0.0, 2.0 * kPi);
      const double t = rng.uniform(0.0, default_t_max(cfg));
      const double df = rng.uniform(-cfg.f_s, cfg.f_s);
      const double fk = cfg.f_c + rng.uniform(-0.5, 0.5) * cfg.f_s;
      const Complex lhs = std::polar(1.0, theta - 2.0 * kPi * fk * t);
      const double theta2 = theta - 2.0 * kPi * df * t;
      const Complex rhs =
          std::polar(1.0, theta2 - 2.0 * kPi * (fk - df) * t);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst <= 1e-10;
  }});

  const ClusterConfig cc = desk_clusters();
  const ChannelSet ch = generate_channels(cfg, cc, Seed{3, 0});
  const FullyDigital fd = fully_digital(ch, cfg);

  checks.push_back({"per-chain delay bias leaves the hybrid product "
                    "unchanged", [&] {
    const PrecodingSolution sol = essp(cb, fd, ch, cfg);
    TrialRng rng = spawn_trial_rng(Seed{13, 0});
    Vec bias(cfg.n_rf);
    for (int i = 0; i < cfg.n_rf; ++i)
      bias(i) = rng.uniform(0.0, max_array_delay(cfg));
    const std::vector<double> freqs = derive_subcarrier_frequencies(cfg);
    for (int k = 0; k < cfg.k; ++k) {
      CMat biased = sol.analog[static_cast<std::size_t>(k)];
      for (int c = 0; c < cfg.n_rf; ++c) {
        biased.col(c) *= std::polar(
            1.0, -2.0 * kPi * freqs[static_cast<std::size_t>(k)] * bias(c));
      }
      const CMat d0 = pinv(sol.analog[static_cast<std::size_t>(k)]) *
                      fd.f[static_cast<std::size_t>(k)];
      const CMat d1 = pinv(biased) * fd.f[static_cast<std::size_t>(k)];
      const CMat p0 = sol.analog[static_cast<std::size_t>(k)] * d0;
      const CMat p1 = biased * d1;
      if ((p0 - p1).norm() > 1e-9) return false;
    }
    return true;
  }});

  checks.push_back({"wideband and low-complexity solutions respect the "
                    "hardware constraints", [&] {
    try {
      const PrecodingSolution s1 = essp(cb, fd, ch, cfg);
      validate_solution(s1, cfg, cb.t_max, cb.grid.g);
      const PrecodingSolution s2 = lce_ssp(cb, fd, ch, cfg, lce);
      validate_solution(s2, cfg, cb.t_max, cb.grid.g);
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }});

  checks.push_back({"well-separated steering atoms are near-orthogonal", [&] {
    const AngularGrid grid = make_grid(lce.g);
    const CMat nb = narrowband_matrix(grid, cfg);
    const double min_sep = 4.0 / static_cast<double>(cfg.n_t);
    for (int i = 0; i < grid.g; ++i) {
      for (int j = i + 1; j < grid.g; ++j) {
        // The steering correlation is periodic in the sine difference with
        // period 2 (spatial aliasing), so separation wraps around.
        const double d = std::abs(grid.phi(i) - grid.phi(j));
        if (std::min(d, 2.0 - d) < min_sep) continue;
        if (std::abs(nb.col(i).dot(nb.col(j))) > 0.2) return false;
      }
    }
    return true;
  }});

  checks.push_back({"channel energy matches the model normalization", [&] {
    // E||H_k||_F^2 == n_t * n_r; 40 trials keep the sample mean within 10%.
    double acc = 0.0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
      const ChannelSet c =
          generate_channels(cfg, cc, Seed{101, static_cast<std::uint32_t>(t)});
      double per = 0.0;
      for (const CMat& hk : c.h) per += hk.squaredNorm();
      acc += per / static_cast<double>(cfg.k);
    }
    acc /= static_cast<double>(trials);
    const double expect = static_cast<double>(cfg.n_t) * cfg.n_r;
    return std::abs(acc - expect) < 0.10 * expect;
  }});

  int failures = 0;
  for (const Check& c : checks) {
    bool ok = false;
    try {
      ok = c.fn();
    } catch (const std::exception& e) {
      os << "[FAIL] " << c.name << " (exception: " << e.what() << ")\n";
      ++failures;
      continue;
    }
    os << (ok ? "[ ok ] " : "[FAIL] ") << c.name << '\n';
    if (!ok) ++failures;
  }
  os << (failures == 0 ? "selftest passed" : "selftest FAILED") << " ("
     << checks.size() - static_cast<std::size_t>(failures) << "/"
     << checks.size() << " checks)\n";
  return failures;
}

}  // namespace dpp
