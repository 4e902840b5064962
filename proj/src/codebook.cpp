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

#include "dpp/codebook.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dpp/channel.hpp"

namespace dpp {

AngularGrid make_grid(int g) {
  if (g < 2 || g % 2 != 0) {
    throw std::invalid_argument("make_grid: grid size must be even and >= 2");
  }
  AngularGrid grid;
  grid.g = g;
  grid.phi = Vec(g);
  for (int i = 1; i <= g; ++i) {
    grid.phi(i - 1) = -1.0 + (2.0 * i - 1.0) / static_cast<double>(g);
  }
  return grid;
}

double max_array_delay(const SystemConfig& cfg) {
  return (static_cast<double>(cfg.n_t) - 1.0) / (2.0 * cfg.f_c);
}

double default_t_max(const SystemConfig& cfg) {
  return 2.0 * max_array_delay(cfg);
}

CMat narrowband_matrix(const AngularGrid& grid, const SystemConfig& cfg) {
  CMat a(cfg.n_t, grid.g);
  for (int g = 0; g < grid.g; ++g) {
    a.col(g) = ula_response(cfg.n_t, grid.phi(g));
  }
  return a;
}

CMat ideal_matrix_at(const AngularGrid& grid, const SystemConfig& cfg,
                     int k_index) {
  if (k_index < 1 || k_index > cfg.k) {
    throw std::invalid_argument("ideal_matrix_at: subcarrier index out of range");
  }
  const std::vector<double> freqs = derive_subcarrier_frequencies(cfg);
  const double pull = freqs[static_cast<std::size_t>(k_index - 1)] / cfg.f_c;
  CMat a(cfg.n_t, grid.g);
  for (int g = 0; g < grid.g; ++g) {
    a.col(g) = ula_response(cfg.n_t, pull * grid.phi(g));
  }
  return a;
}

std::vector<CMat> ideal_matrices(const AngularGrid& grid,
                                 const SystemConfig& cfg) {
  std::vector<CMat> out;
  out.reserve(static_cast<std::size_t>(cfg.k));
  for (int k = 1; k <= cfg.k; ++k) out.push_back(ideal_matrix_at(grid, cfg, k));
  return out;
}

Mat delay_codebook(const AngularGrid& grid, const SystemConfig& cfg,
                   double t_max) {
  validate(cfg);
  const double beta = max_array_delay(cfg);
  Mat t(cfg.n_ttd, grid.g);
  for (int n = 1; n <= cfg.n_ttd; ++n) {
    // Middle antenna (1-based) of subarray n; its narrowband phase is the
    // one the delay line reproduces for the whole subarray.
    const int m_mid = (2 * cfg.m * n - cfg.m) / 2 + 1;
    for (int g = 0; g < grid.g; ++g) {
      const double phi = grid.phi(g);
      double v = static_cast<double>(m_mid - 1) * phi / (2.0 * cfg.f_c);
      if (phi < 0.0) v += beta;  // keeps the negative-angle half non-negative
      if (v < 0.0 || v > t_max) {
        throw std::invalid_argument(
            "delay_codebook: entry outside [0, t_max] at element " +
            std::to_string(n) + ", grid column " + std::to_string(g + 1));
      }
      t(n - 1, g) = v;
    }
  }
  return t;
}

CMat phase_codebook(const AngularGrid& grid, const Mat& delay,
                    const SystemConfig& cfg) {
  validate(cfg);
  if (delay.rows() != cfg.n_ttd || delay.cols() != grid.g) {
    throw std::invalid_argument("phase_codebook: delay codebook shape mismatch");
  }
  // Hardware phase weights are unit modulus; the 1/sqrt(n_t) dictionary
  // scale is applied by feasible_matrices.
  const CMat base =
      narrowband_matrix(grid, cfg) * std::sqrt(static_cast<double>(cfg.n_t));
  CMat phase(cfg.n_t, grid.g);
  for (int g = 0; g < grid.g; ++g) {
    for (int n = 0; n < cfg.n_ttd; ++n) {
      // Counter-rotation cancels the delay line's carrier-frequency phase.
      const double ph = 2.0 * kPi * cfg.f_c * delay(n, g);
      const Complex rot(std::cos(ph), std::sin(ph));
      phase.col(g).segment(n * cfg.m, cfg.m) =
          base.col(g).segment(n * cfg.m, cfg.m) * rot;
    }
  }
  return phase;
}

std::vector<CMat> feasible_matrices(const CMat& phase, const Mat& delay,
                                    const SystemConfig& cfg) {
  validate(cfg);
  if (phase.rows() != cfg.n_t || delay.rows() != cfg.n_ttd ||
      phase.cols() != delay.cols()) {
    throw std::invalid_argument("feasible_matrices: codebook shape mismatch");
  }
  const std::vector<double> freqs = derive_subcarrier_frequencies(cfg);
  const Eigen::Index g_total = phase.cols();
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_t));

  std::vector<CMat> out;
  out.reserve(freqs.size());
  for (double fk : freqs) {
    CMat mk(cfg.n_t, g_total);
    for (Eigen::Index g = 0; g < g_total; ++g) {
      for (int n = 0; n < cfg.n_ttd; ++n) {
        const double ph = -2.0 * kPi * fk * delay(n, g);
        const Complex line(std::cos(ph) * scale, std::sin(ph) * scale);
        mk.col(g).segment(n * cfg.m, cfg.m) =
            phase.col(g).segment(n * cfg.m, cfg.m) * line;
      }
    }
    out.push_back(std::move(mk));
  }
  return out;
}

Codebook build_codebook(const SystemConfig& cfg, int g) {
  Codebook cb;
  cb.grid = make_grid(g);
  cb.t_max = default_t_max(cfg);
  cb.delay = delay_codebook(cb.grid, cfg, cb.t_max);
  cb.phase = phase_codebook(cb.grid, cb.delay, cfg);
  cb.feasible = feasible_matrices(cb.phase, cb.delay, cfg);
  return cb;
}

namespace {

// Shared accumulation for both codebook_error overloads; k is 0-based.
double column_mismatch(const CMat& feasible_k, const CMat& ideal_k,
                       const AngularGrid& grid, const SystemConfig& cfg,
                       double f_k) {
  if (feasible_k.rows() != ideal_k.rows() ||
      feasible_k.cols() != ideal_k.cols() || feasible_k.cols() != grid.g) {
    throw std::invalid_argument("codebook_error: dictionary shape mismatch");
  }
  // The non-negativity shift multiplies realized phi < 0 columns by a
  // global phase; align the ideal columns before differencing.
  const double ph = -2.0 * kPi * (f_k - cfg.f_c) * max_array_delay(cfg);
  const Complex rot(std::cos(ph), std::sin(ph));
  double acc = 0.0;
  for (int g = 0; g < grid.g; ++g) {
    const Complex align = grid.phi(g) < 0.0 ? rot : Complex(1.0, 0.0);
    acc += (ideal_k.col(g) * align - feasible_k.col(g)).squaredNorm();
  }
  return acc;
}

}  // namespace

double codebook_error(const std::vector<CMat>& feasible,
                      const std::vector<CMat>& ideal, const AngularGrid& grid,
                      const SystemConfig& cfg) {
  if (feasible.size() != ideal.size() ||
      static_cast<int>(feasible.size()) != cfg.k) {
    throw std::invalid_argument("codebook_error: subcarrier count mismatch");
  }
  const std::vector<double> freqs = derive_subcarrier_frequencies(cfg);
  double acc = 0.0;
  for (int k = 0; k < cfg.k; ++k) {
    acc += column_mismatch(feasible[static_cast<std::size_t>(k)],
                           ideal[static_cast<std::size_t>(k)], grid, cfg,
                           freqs[static_cast<std::size_t>(k)]);
  }
  return acc / (static_cast<double>(cfg.k) * static_cast<double>(cfg.n_t) *
                static_cast<double>(grid.g));
}

double codebook_error(const Codebook& cb, const SystemConfig& cfg) {
  if (static_cast<int>(cb.feasible.size()) != cfg.k) {
    throw std::invalid_argument("codebook_error: subcarrier count mismatch");
  }
  const std::vector<double> freqs = derive_subcarrier_frequencies(cfg);
  double acc = 0.0;
  for (int k = 0; k < cfg.k; ++k) {
    const CMat ideal_k = ideal_matrix_at(cb.grid, cfg, k + 1);
    acc += column_mismatch(cb.feasible[static_cast<std::size_t>(k)], ideal_k,
                           cb.grid, cfg, freqs[static_cast<std::size_t>(k)]);
  }
  return acc / (static_cast<double>(cfg.k) * static_cast<double>(cfg.n_t) *
                static_cast<double>(cb.grid.g));
}

void export_codebook(const Codebook& cb, const SystemConfig& cfg,
                     const std::string& path) {
  using nlohmann::json;
  auto hex = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", v);
    return std::string(buf);
  };
  json j;
  j["format"] = "thzdpp-codebook-v1";
  j["n_t"] = cfg.n_t;
  j["n_ttd"] = cfg.n_ttd;
  j["m"] = cfg.m;
  j["g"] = cb.grid.g;
  j["f_c"] = hex(cfg.f_c);
  j["t_max"] = hex(cb.t_max);
  json phase = json::array();
  for (Eigen::Index r = 0; r < cb.phase.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < cb.phase.cols(); ++c) {
      row.push_back(json::array(
          {hex(cb.phase(r, c).real()), hex(cb.phase(r, c).imag())}));
    }
    phase.push_back(row);
  }
  j["phase"] = phase;
  json delay = json::array();
  for (Eigen::Index r = 0; r < cb.delay.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < cb.delay.cols(); ++c) {
      row.push_back(hex(cb.delay(r, c)));
    }
    delay.push_back(row);
  }
  j["delay"] = delay;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_codebook: cannot open " + path);
  out << j.dump();
}

}  // namespace dpp
