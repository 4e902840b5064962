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

#include "dpp/channel.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dpp {

CVec ula_response(int n, double x) {
  if (n < 1) throw std::invalid_argument("ula_response: n must be >= 1");
  CVec a(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    const double phase = -kPi * static_cast<double>(i) * x;
    a(i) = Complex(std::cos(phase), std::sin(phase)) * scale;
  }
  return a;
}

std::vector<Subpath> draw_clusters(const SystemConfig& cfg,
                                   const ClusterConfig& cc, TrialRng& rng) {
  validate(cfg);
  if (cc.n_c < 1 || cc.n_p < 1) {
    throw std::invalid_argument("draw_clusters: n_c and n_p must be >= 1");
  }
  if (cc.tau_max < 0.0 || cc.sigma_tau < 0.0 || cc.sigma_theta_t < 0.0 ||
      cc.sigma_theta_r < 0.0) {
    throw std::invalid_argument("draw_clusters: spreads must be >= 0");
  }
  std::vector<Subpath> paths;
  paths.reserve(static_cast<std::size_t>(cc.n_c * cc.n_p));
  for (int c = 0; c < cc.n_c; ++c) {
    const double mean_theta_t = rng.uniform(0.0, 2.0 * kPi);
    const double mean_theta_r = rng.uniform(0.0, 2.0 * kPi);
    const double mean_tau = rng.uniform(0.0, cc.tau_max);
    for (int p = 0; p < cc.n_p; ++p) {
      Subpath sp;
      const double dt = rng.laplace(cc.sigma_theta_t);
      const double dr = rng.laplace(cc.sigma_theta_r);
      const double dtau = rng.laplace(cc.sigma_tau);
      sp.sin_theta_t = std::sin(mean_theta_t + dt);
      sp.sin_theta_r = std::sin(mean_theta_r + dr);
      sp.tau = std::max(0.0, mean_tau + dtau);
      sp.alpha = rng.cnormal();
      paths.push_back(sp);
    }
  }
  return paths;
}

ChannelSet assemble_channels(const std::vector<Subpath>& subpaths,
                             const SystemConfig& cfg) {
  validate(cfg);
  if (subpaths.empty()) {
    throw std::invalid_argument("assemble_channels: no subpaths");
  }
  const std::vector<double> freqs = derive_subcarrier_frequencies(cfg);
  const double scale =
      std::sqrt(static_cast<double>(cfg.n_t) * static_cast<double>(cfg.n_r) /
                static_cast<double>(subpaths.size()));

  ChannelSet ch;
  ch.cfg = cfg;
  ch.subpaths = subpaths;
  ch.h.reserve(freqs.size());
  for (double fk : freqs) {
    const double pull = fk / cfg.f_c;  // equivalent-angle stretch at f_k
    CMat hk = CMat::Zero(cfg.n_r, cfg.n_t);
    for (const Subpath& sp : subpaths) {
      const double delay_phase = -2.0 * kPi * fk * sp.tau;
      const Complex gain =
          sp.alpha * Complex(std::cos(delay_phase), std::sin(delay_phase));
      const CVec ar = ula_response(cfg.n_r, pull * sp.sin_theta_r);
      const CVec at = ula_response(cfg.n_t, pull * sp.sin_theta_t);
      hk.noalias() += gain * (ar * at.transpose());
    }
    ch.h.push_back(scale * hk);
  }
  return ch;
}

ChannelSet generate_channels(const SystemConfig& cfg, const ClusterConfig& cc,
                             Seed seed) {
  TrialRng rng = spawn_trial_rng(seed);
  return assemble_channels(draw_clusters(cfg, cc, rng), cfg);
}

ChannelSet inject_channel_error(const ChannelSet& ch, double nmse,
                                TrialRng& rng) {
  if (nmse < 0.0) {
    throw std::invalid_argument("inject_channel_error: nmse must be >= 0");
  }
  if (nmse == 0.0) return ch;
  ChannelSet out = ch;
  for (CMat& hk : out.h) {
    CMat e(hk.rows(), hk.cols());
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
      for (Eigen::Index i = 0; i < e.rows(); ++i) e(i, j) = rng.cnormal();
    }
    const double en = e.norm();
    if (en == 0.0) continue;  // zero-probability guard
    // Scale the draw so the realized per-subcarrier relative error power is
    // exactly nmse, not just in expectation.
    hk += e * (std::sqrt(nmse) * hk.norm() / en);
  }
  return out;
}

namespace {

using nlohmann::json;

std::string hex_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

json complex_to_json(const Complex& z) {
  return json::array({hex_double(z.real()), hex_double(z.imag())});
}

Complex complex_from_json(const json& j) {
  return Complex(parse_hex_double(j.at(0).get<std::string>()),
                 parse_hex_double(j.at(1).get<std::string>()));
}

}  // namespace

void export_channels(const ChannelSet& ch, const std::string& path,
                     Seed seed) {
  json j;
  j["format"] = "thzdpp-channelset-v1";
  j["master_seed"] = seed.master_seed;
  j["trial_index"] = seed.trial_index;
  j["config_hash"] = config_hash({ch.cfg, ClusterConfig{}, LceConfig{}});
  j["n_r"] = ch.cfg.n_r;
  j["n_t"] = ch.cfg.n_t;
  j["k"] = ch.cfg.k;
  j["f_c"] = hex_double(ch.cfg.f_c);
  j["f_s"] = hex_double(ch.cfg.f_s);
  j["n_rf"] = ch.cfg.n_rf;
  j["n_s"] = ch.cfg.n_s;
  j["n_ttd"] = ch.cfg.n_ttd;
  j["m"] = ch.cfg.m;
  j["snr_db"] = hex_double(ch.cfg.snr_db);

  json paths = json::array();
  for (const Subpath& sp : ch.subpaths) {
    paths.push_back({{"alpha", complex_to_json(sp.alpha)},
                     {"tau", hex_double(sp.tau)},
                     {"sin_theta_t", hex_double(sp.sin_theta_t)},
                     {"sin_theta_r", hex_double(sp.sin_theta_r)}});
  }
  j["subpaths"] = paths;

  json mats = json::array();
  for (const CMat& hk : ch.h) {
    json m = json::array();
    for (Eigen::Index r = 0; r < hk.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < hk.cols(); ++c) {
        row.push_back(complex_to_json(hk(r, c)));
      }
      m.push_back(row);
    }
    mats.push_back(m);
  }
  j["h"] = mats;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_channels: cannot open " + path);
  out << j.dump();
}

ChannelSet import_channels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("import_channels: cannot open " + path);
  json j;
  in >> j;
  if (j.value("format", "") != "thzdpp-channelset-v1") {
    throw std::runtime_error("import_channels: unrecognized format tag");
  }
  ChannelSet ch;
  ch.cfg.n_r = j.at("n_r").get<int>();
  ch.cfg.n_t = j.at("n_t").get<int>();
  ch.cfg.k = j.at("k").get<int>();
  ch.cfg.f_c = parse_hex_double(j.at("f_c").get<std::string>());
  ch.cfg.f_s = parse_hex_double(j.at("f_s").get<std::string>());
  ch.cfg.n_rf = j.at("n_rf").get<int>();
  ch.cfg.n_s = j.at("n_s").get<int>();
  ch.cfg.n_ttd = j.at("n_ttd").get<int>();
  ch.cfg.m = j.at("m").get<int>();
  set_snr_db(ch.cfg, parse_hex_double(j.at("snr_db").get<std::string>()));

  for (const json& p : j.at("subpaths")) {
    Subpath sp;
    sp.alpha = complex_from_json(p.at("alpha"));
    sp.tau = parse_hex_double(p.at("tau").get<std::string>());
    sp.sin_theta_t = parse_hex_double(p.at("sin_theta_t").get<std::string>());
    sp.sin_theta_r = parse_hex_double(p.at("sin_theta_r").get<std::string>());
    ch.subpaths.push_back(sp);
  }

  for (const json& m : j.at("h")) {
    CMat hk(ch.cfg.n_r, ch.cfg.n_t);
    for (Eigen::Index r = 0; r < hk.rows(); ++r) {
      for (Eigen::Index c = 0; c < hk.cols(); ++c) {
        hk(r, c) = complex_from_json(m.at(static_cast<std::size_t>(r))
                                         .at(static_cast<std::size_t>(c)));
      }
    }
    ch.h.push_back(hk);
  }
  if (static_cast<int>(ch.h.size()) != ch.cfg.k) {
    throw std::runtime_error("import_channels: subcarrier count mismatch");
  }
  return ch;
}

}  // namespace dpp
