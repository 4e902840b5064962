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

#include "dpp/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dpp {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

}  // namespace

SystemConfig paper_system() {
  SystemConfig cfg;
  cfg.n_t = 256;
  cfg.n_r = 4;
  cfg.n_rf = 4;
  cfg.n_s = 4;
  cfg.n_ttd = 16;
  cfg.m = 16;
  cfg.f_c = 100e9;
  cfg.f_s = 10e9;
  cfg.k = 128;
  set_snr_db(cfg, 10.0);
  return cfg;
}

ClusterConfig paper_clusters() {
  ClusterConfig cc;
  cc.n_c = 4;
  cc.n_p = 10;
  cc.tau_max = 20e-9;
  cc.sigma_tau = 1e-9;
  cc.sigma_theta_t = 5.0 * kDegToRad;
  cc.sigma_theta_r = 5.0 * kDegToRad;
  return cc;
}

LceConfig paper_lce() {
  LceConfig lce;
  lce.g = 1024;
  lce.g_c = 256;
  lce.g_a = 8;
  lce.k_prime = 4;
  return lce;
}

SystemConfig desk_system() {
  SystemConfig cfg = paper_system();
  cfg.n_t = 64;
  cfg.n_ttd = 8;
  cfg.m = 8;
  cfg.k = 32;
  return cfg;
}

ClusterConfig desk_clusters() { return paper_clusters(); }

LceConfig desk_lce() {
  LceConfig lce;
  lce.g = 256;
  lce.g_c = 64;
  lce.g_a = 8;
  lce.k_prime = 4;
  return lce;
}

void set_snr_db(SystemConfig& cfg, double snr_db) {
  cfg.snr_db = snr_db;
  cfg.sigma_n2 = 1.0;
  cfg.rho = std::pow(10.0, snr_db / 10.0);
}

void validate(const SystemConfig& cfg) {
  if (cfg.n_t < 1 || cfg.n_r < 1 || cfg.n_rf < 1 || cfg.n_s < 1 ||
      cfg.n_ttd < 1 || cfg.m < 1) {
    throw std::invalid_argument("SystemConfig: all array sizes must be >= 1");
  }
  if (cfg.n_t != cfg.m * cfg.n_ttd) {
    throw std::invalid_argument(
        "SystemConfig: n_t must equal m * n_ttd (antennas per delay element "
        "times delay elements), got n_t=" +
        std::to_string(cfg.n_t) + ", m*n_ttd=" +
        std::to_string(cfg.m * cfg.n_ttd));
  }
  if (cfg.n_s > cfg.n_rf) {
    throw std::invalid_argument(
        "SystemConfig: stream count n_s exceeds RF chain count n_rf");
  }
  if (cfg.n_s > cfg.n_r) {
    throw std::invalid_argument(
        "SystemConfig: stream count n_s exceeds receive antenna count n_r");
  }
  if (cfg.k < 1) {
    throw std::invalid_argument("SystemConfig: subcarrier count k must be >= 1");
  }
  if (!(cfg.f_c > 0.0) || !(cfg.f_s > 0.0)) {
    throw std::invalid_argument(
        "SystemConfig: carrier frequency and bandwidth must be positive");
  }
  if (!(cfg.sigma_n2 > 0.0) || !(cfg.rho > 0.0)) {
    throw std::invalid_argument(
        "SystemConfig: rho and sigma_n2 must be positive");
  }
}

void validate(const LceConfig& lce, const SystemConfig& cfg) {
  if (lce.g < 2 || lce.g_c < 1 || lce.g_a < 0 || lce.k_prime < 1) {
    throw std::invalid_argument("LceConfig: grid sizes out of range");
  }
  if (lce.g % 2 != 0) {
    throw std::invalid_argument("LceConfig: fine grid size g must be even");
  }
  if (lce.g % lce.g_c != 0) {
    throw std::invalid_argument(
        "LceConfig: coarse grid size g_c must divide g (non-integer grid "
        "reduction factor)");
  }
  if (cfg.k % lce.k_prime != 0) {
    throw std::invalid_argument(
        "LceConfig: sampled subcarrier count k_prime must divide k "
        "(non-integer subcarrier reduction factor)");
  }
}

std::vector<double> derive_subcarrier_frequencies(const SystemConfig& cfg) {
  validate(cfg);
  const double eta = cfg.subcarrier_spacing();
  std::vector<double> f(static_cast<std::size_t>(cfg.k));
  const double mid = (static_cast<double>(cfg.k) - 1.0) / 2.0;
  for (int k = 1; k <= cfg.k; ++k) {
    f[static_cast<std::size_t>(k - 1)] =
        cfg.f_c + (static_cast<double>(k - 1) - mid) * eta;
  }
  return f;
}

namespace {

using nlohmann::json;

void apply_system(const json& j, SystemConfig& cfg) {
  if (j.contains("n_t")) cfg.n_t = j.at("n_t").get<int>();
  if (j.contains("n_r")) cfg.n_r = j.at("n_r").get<int>();
  if (j.contains("n_rf")) cfg.n_rf = j.at("n_rf").get<int>();
  if (j.contains("n_s")) cfg.n_s = j.at("n_s").get<int>();
  if (j.contains("n_ttd")) cfg.n_ttd = j.at("n_ttd").get<int>();
  if (j.contains("m")) {
    cfg.m = j.at("m").get<int>();
  } else if (j.contains("n_ttd") || j.contains("n_t")) {
    if (cfg.n_ttd > 0 && cfg.n_t % cfg.n_ttd == 0) cfg.m = cfg.n_t / cfg.n_ttd;
  }
  if (j.contains("f_c")) cfg.f_c = j.at("f_c").get<double>();
  if (j.contains("f_s")) cfg.f_s = j.at("f_s").get<double>();
  if (j.contains("k")) cfg.k = j.at("k").get<int>();
  if (j.contains("snr_db")) set_snr_db(cfg, j.at("snr_db").get<double>());
}

void apply_clusters(const json& j, ClusterConfig& cc) {
  if (j.contains("n_c")) cc.n_c = j.at("n_c").get<int>();
  if (j.contains("n_p")) cc.n_p = j.at("n_p").get<int>();
  if (j.contains("tau_max")) cc.tau_max = j.at("tau_max").get<double>();
  if (j.contains("sigma_tau")) cc.sigma_tau = j.at("sigma_tau").get<double>();
  // Angle spreads are degrees in files, radians in memory.
  if (j.contains("sigma_theta_t"))
    cc.sigma_theta_t = j.at("sigma_theta_t").get<double>() * kDegToRad;
  if (j.contains("sigma_theta_r"))
    cc.sigma_theta_r = j.at("sigma_theta_r").get<double>() * kDegToRad;
}

void apply_lce(const json& j, LceConfig& lce) {
  if (j.contains("g")) lce.g = j.at("g").get<int>();
  if (j.contains("g_c")) lce.g_c = j.at("g_c").get<int>();
  if (j.contains("g_a")) lce.g_a = j.at("g_a").get<int>();
  if (j.contains("k_prime")) lce.k_prime = j.at("k_prime").get<int>();
}

ConfigBundle preset_bundle(const std::string& name) {
  if (name == "paper") return {paper_system(), paper_clusters(), paper_lce()};
  if (name == "desk") return {desk_system(), desk_clusters(), desk_lce()};
  throw std::invalid_argument("unknown preset '" + name +
                              "' (expected \"desk\" or \"paper\")");
}

}  // namespace

ConfigBundle parse_config_json(const std::string& text) {
  json j = json::parse(text);
  ConfigBundle bundle = {desk_system(), desk_clusters(), desk_lce()};
  if (j.contains("preset")) {
    bundle = preset_bundle(j.at("preset").get<std::string>());
  }
  if (j.contains("system")) apply_system(j.at("system"), bundle.system);
  if (j.contains("clusters")) apply_clusters(j.at("clusters"), bundle.clusters);
  if (j.contains("lce")) apply_lce(j.at("lce"), bundle.lce);
  validate(bundle.system);
  validate(bundle.lce, bundle.system);
  return bundle;
}

ConfigBundle load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::uint64_t config_hash(const ConfigBundle& b) {
  std::ostringstream s;
  s.precision(17);
  s << b.system.n_t << '|' << b.system.n_r << '|' << b.system.n_rf << '|'
    << b.system.n_s << '|' << b.system.n_ttd << '|' << b.system.m << '|'
    << b.system.f_c << '|' << b.system.f_s << '|' << b.system.k << '|'
    << b.system.snr_db << '|' << b.system.rho << '|' << b.system.sigma_n2
    << '|' << b.clusters.n_c << '|' << b.clusters.n_p << '|'
    << b.clusters.tau_max << '|' << b.clusters.sigma_tau << '|'
    << b.clusters.sigma_theta_t << '|' << b.clusters.sigma_theta_r << '|'
    << b.lce.g << '|' << b.lce.g_c << '|' << b.lce.g_a << '|' << b.lce.k_prime;
  const std::string text = s.str();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace dpp
