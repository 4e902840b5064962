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

#include "dpp/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "dpp/channel.hpp"
#include "dpp/codebook.hpp"
#include "dpp/numerics.hpp"
#include "dpp/precoder.hpp"
#include "dpp/sparse_dpp.hpp"

namespace dpp {

namespace {

constexpr double kDegToRad = kPi / 180.0;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kFullyDigital: return "fully_digital";
    case Algorithm::kEssp: return "essp";
    case Algorithm::kLceSsp: return "lce_ssp";
    case Algorithm::kSspFreqIndependent: return "ssp_freq_independent";
  }
  throw std::logic_error("algorithm_name: bad enum");
}

std::string axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::kSnrDb: return "snr_db";
    case SweepAxis::kSigmaThetaDeg: return "sigma_theta_deg";
    case SweepAxis::kNTtd: return "n_ttd";
    case SweepAxis::kFractionalBandwidth: return "fractional_bandwidth";
    case SweepAxis::kChannelNmseDb: return "channel_nmse_db";
    case SweepAxis::kKPrime: return "k_prime";
  }
  throw std::logic_error("axis_name: bad enum");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "fully_digital") return Algorithm::kFullyDigital;
  if (name == "essp") return Algorithm::kEssp;
  if (name == "lce_ssp") return Algorithm::kLceSsp;
  if (name == "ssp_freq_independent") return Algorithm::kSspFreqIndependent;
  throw std::invalid_argument("unknown algorithm: " + name);
}

SweepAxis axis_from_name(const std::string& name) {
  if (name == "snr_db") return SweepAxis::kSnrDb;
  if (name == "sigma_theta_deg") return SweepAxis::kSigmaThetaDeg;
  if (name == "n_ttd") return SweepAxis::kNTtd;
  if (name == "fractional_bandwidth") return SweepAxis::kFractionalBandwidth;
  if (name == "channel_nmse_db") return SweepAxis::kChannelNmseDb;
  if (name == "k_prime") return SweepAxis::kKPrime;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

Scenario parse_scenario_json(const std::string& text) {
  using nlohmann::json;
  const json j = json::parse(text);
  Scenario sc;
  sc.base = parse_config_json(text);  // preset/system/clusters/lce keys
  if (j.contains("algorithms")) {
    for (const json& a : j.at("algorithms")) {
      sc.algorithms.push_back(algorithm_from_name(a.get<std::string>()));
    }
  } else {
    sc.algorithms = {Algorithm::kFullyDigital, Algorithm::kEssp,
                     Algorithm::kLceSsp};
  }
  if (j.contains("sweep")) {
    sc.axis = axis_from_name(j.at("sweep").at("axis").get<std::string>());
    for (const json& v : j.at("sweep").at("values")) {
      sc.values.push_back(v.get<double>());
    }
  } else {
    sc.axis = SweepAxis::kSnrDb;
    sc.values = {sc.base.system.snr_db};
  }
  if (sc.values.empty()) {
    throw std::invalid_argument("scenario: sweep value list is empty");
  }
  if (j.contains("trials")) sc.trials = j.at("trials").get<int>();
  if (j.contains("master_seed"))
    sc.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("threads")) sc.threads = j.at("threads").get<int>();
  if (j.contains("channel_nmse_db") && !j.at("channel_nmse_db").is_null()) {
    sc.channel_nmse_db = j.at("channel_nmse_db").get<double>();
  }
  if (sc.trials < 1) throw std::invalid_argument("scenario: trials must be >= 1");
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str());
}

namespace {

struct SweptConfig {
  SystemConfig cfg;
  ClusterConfig cc;
  LceConfig lce;
  double nmse = 0.0;  // linear, 0 = perfect CSI
};

SweptConfig apply_sweep(const Scenario& sc, double value) {
  SweptConfig out{sc.base.system, sc.base.clusters, sc.base.lce, 0.0};
  if (std::isfinite(sc.channel_nmse_db)) {
    out.nmse = std::pow(10.0, sc.channel_nmse_db / 10.0);
  }
  switch (sc.axis) {
    case SweepAxis::kSnrDb:
      set_snr_db(out.cfg, value);
      break;
    case SweepAxis::kSigmaThetaDeg:
      out.cc.sigma_theta_t = value * kDegToRad;
      out.cc.sigma_theta_r = value * kDegToRad;
      break;
    case SweepAxis::kNTtd: {
      const int n_ttd = static_cast<int>(value);
      if (n_ttd < 1 || out.cfg.n_t % n_ttd != 0) {
        throw std::invalid_argument(
            "sweep: n_ttd value " + std::to_string(n_ttd) +
            " does not divide n_t = " + std::to_string(out.cfg.n_t));
      }
      out.cfg.n_ttd = n_ttd;
      out.cfg.m = out.cfg.n_t / n_ttd;
      break;
    }
    case SweepAxis::kFractionalBandwidth:
      if (!(value > 0.0)) {
        throw std::invalid_argument("sweep: fractional bandwidth must be > 0");
      }
      out.cfg.f_s = value * out.cfg.f_c;
      break;
    case SweepAxis::kChannelNmseDb:
      out.nmse = std::isfinite(value) ? std::pow(10.0, value / 10.0) : 0.0;
      break;
    case SweepAxis::kKPrime:
      out.lce.k_prime = static_cast<int>(value);
      break;
  }
  validate(out.cfg);
  validate(out.lce, out.cfg);
  return out;
}

struct TrialCell {
  double rate = 0.0;
  double mse = 0.0;
  double wall_ms = 0.0;
  bool ok = false;
  std::string error;
};

// Codebooks are channel-independent; one instance per distinct hardware
// configuration is shared read-only by all trial workers.
class CodebookCache {
 public:
  const Codebook& get(const SystemConfig& cfg, int g) {
    const Key key{cfg.n_t, cfg.n_ttd, cfg.m, cfg.k, cfg.f_c, cfg.f_s, g};
    auto it = store_.find(key);
    if (it == store_.end()) {
      it = store_.emplace(key, build_codebook(cfg, g)).first;
    }
    return it->second;
  }

 private:
  using Key = std::tuple<int, int, int, int, double, double, int>;
  std::map<Key, Codebook> store_;
};

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void run_one_trial(const Scenario& sc, const SweptConfig& sw,
                   const Codebook* cb, const CMat* narrowband,
                   std::uint32_t trial, std::vector<TrialCell>& cells) {
  try {
    TrialRng rng = spawn_trial_rng(
        Seed{sc.master_seed, trial});
    const ChannelSet truth =
        assemble_channels(draw_clusters(sw.cfg, sw.cc, rng), sw.cfg);
    const ChannelSet design =
        sw.nmse > 0.0 ? inject_channel_error(truth, sw.nmse, rng) : truth;

    const double t_fd0 = now_ms();
    const FullyDigital fd = fully_digital(design, sw.cfg);
    const double t_fd1 = now_ms();

    for (std::size_t a = 0; a < sc.algorithms.size(); ++a) {
      TrialCell& cell = cells[a];
      try {
        switch (sc.algorithms[a]) {
          case Algorithm::kFullyDigital: {
            cell.rate = rate_of_products(truth, fd.f, sw.cfg).per_subcarrier;
            cell.mse = 0.0;
            cell.wall_ms = t_fd1 - t_fd0;
            break;
          }
          case Algorithm::kEssp: {
            const double t0 = now_ms();
            const PrecodingSolution sol = essp(*cb, fd, design, sw.cfg);
            cell.wall_ms = now_ms() - t0;
            cell.rate =
                sum_rate(truth, sol.analog, sol.digital, sw.cfg).per_subcarrier;
            cell.mse = approx_mse(fd, sol.analog, sol.digital, sw.cfg);
            break;
          }
          case Algorithm::kLceSsp: {
            const double t0 = now_ms();
            const PrecodingSolution sol = lce_ssp(*cb, fd, design, sw.cfg, sw.lce);
            cell.wall_ms = now_ms() - t0;
            cell.rate =
                sum_rate(truth, sol.analog, sol.digital, sw.cfg).per_subcarrier;
            cell.mse = approx_mse(fd, sol.analog, sol.digital, sw.cfg);
            break;
          }
          case Algorithm::kSspFreqIndependent: {
            const double t0 = now_ms();
            const PrecodingSolution sol =
                ssp_freq_independent(*narrowband, fd, design, sw.cfg);
            cell.wall_ms = now_ms() - t0;
            cell.rate =
                sum_rate(truth, sol.analog, sol.digital, sw.cfg).per_subcarrier;
            cell.mse = approx_mse(fd, sol.analog, sol.digital, sw.cfg);
            break;
          }
        }
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
    }
  } catch (const std::exception& e) {
    for (TrialCell& cell : cells) {
      cell.ok = false;
      cell.error = e.what();
    }
  }
}

bool needs_codebook(const Scenario& sc) {
  for (Algorithm a : sc.algorithms) {
    if (a == Algorithm::kEssp || a == Algorithm::kLceSsp) return true;
  }
  return false;
}

bool needs_narrowband(const Scenario& sc) {
  for (Algorithm a : sc.algorithms) {
    if (a == Algorithm::kSspFreqIndependent) return true;
  }
  return false;
}

}  // namespace

std::vector<ResultRow> run_scenario(const Scenario& sc) {
  if (sc.algorithms.empty()) {
    throw std::invalid_argument("run_scenario: no algorithms requested");
  }
  CodebookCache cache;
  std::vector<ResultRow> rows;

  for (double value : sc.values) {
    const SweptConfig sw = apply_sweep(sc, value);
    const Codebook* cb =
        needs_codebook(sc) ? &cache.get(sw.cfg, sw.lce.g) : nullptr;
    CMat narrowband;
    if (needs_narrowband(sc)) {
      narrowband = narrowband_matrix(make_grid(sw.lce.g), sw.cfg);
    }

    // Per-trial cells, filled by the pool, reduced in trial order below.
    std::vector<std::vector<TrialCell>> all(
        static_cast<std::size_t>(sc.trials),
        std::vector<TrialCell>(sc.algorithms.size()));

    int n_threads = sc.threads > 0
                        ? sc.threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = std::min<int>(n_threads, sc.trials);

    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= sc.trials) break;
        run_one_trial(sc, sw, cb, &narrowband,
                      static_cast<std::uint32_t>(t),
                      all[static_cast<std::size_t>(t)]);
      }
    };
    if (n_threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(n_threads));
      for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
      for (std::thread& th : pool) th.join();
    }

    for (std::size_t a = 0; a < sc.algorithms.size(); ++a) {
      int ok = 0;
      std::string first_error;
      double sum_rate_acc = 0.0, sum_mse = 0.0, sum_wall = 0.0;
      for (int t = 0; t < sc.trials; ++t) {
        const TrialCell& cell = all[static_cast<std::size_t>(t)][a];
        if (cell.ok) {
          ++ok;
          sum_rate_acc += cell.rate;
          sum_mse += cell.mse;
          sum_wall += cell.wall_ms;
        } else if (first_error.empty()) {
          first_error = cell.error;
        }
      }
      const int failed = sc.trials - ok;
      if (failed * 10 > sc.trials) {
        throw std::runtime_error(
            "run_scenario: " + std::to_string(failed) + "/" +
            std::to_string(sc.trials) + " trials failed for " +
            algorithm_name(sc.algorithms[a]) + " at " + axis_name(sc.axis) +
            "=" + fmt_double(value) + "; first error: " + first_error);
      }
      const double n = static_cast<double>(ok);
      const double mean = sum_rate_acc / n;
      double var = 0.0;
      for (int t = 0; t < sc.trials; ++t) {
        const TrialCell& cell = all[static_cast<std::size_t>(t)][a];
        if (cell.ok) var += (cell.rate - mean) * (cell.rate - mean);
      }
      var = ok > 1 ? var / (n - 1.0) : 0.0;

      ResultRow row;
      row.algorithm = algorithm_name(sc.algorithms[a]);
      row.sweep_axis = axis_name(sc.axis);
      row.sweep_value = value;
      row.mean_rate_per_subcarrier = mean;
      row.std_err_rate = std::sqrt(var / n);
      row.mean_approx_mse = sum_mse / n;
      row.mean_wall_ms = sum_wall / n;
      row.trials = sc.trials;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_results_csv(const std::vector<ResultRow>& rows,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "algorithm,sweep_axis,sweep_value,mean_rate_per_subcarrier,"
         "std_err_rate,mean_approx_mse,trials\n";
  for (const ResultRow& r : rows) {
    out << r.algorithm << ',' << r.sweep_axis << ',' << fmt_double(r.sweep_value)
        << ',' << fmt_double(r.mean_rate_per_subcarrier) << ','
        << fmt_double(r.std_err_rate) << ',' << fmt_double(r.mean_approx_mse)
        << ',' << r.trials << '\n';
  }
}

void write_timings_csv(const std::vector<ResultRow>& rows,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "algorithm,sweep_axis,sweep_value,mean_wall_ms,trials\n";
  for (const ResultRow& r : rows) {
    out << r.algorithm << ',' << r.sweep_axis << ','
        << fmt_double(r.sweep_value) << ',' << fmt_double(r.mean_wall_ms)
        << ',' << r.trials << '\n';
  }
}

void write_manifest(const Scenario& sc, const std::string& path) {
  using nlohmann::json;
  json j;
  j["format"] = "thzdpp-manifest-v1";
  j["library_version"] = "0.1.0";
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(sc.base)));
  j["config_hash"] = hash;
  j["master_seed"] = sc.master_seed;
  j["trials"] = sc.trials;
  j["threads"] = sc.threads;
  j["sweep_axis"] = axis_name(sc.axis);
  j["sweep_values"] = sc.values;
  json algs = json::array();
  for (Algorithm a : sc.algorithms) algs.push_back(algorithm_name(a));
  j["algorithms"] = algs;
  if (std::isfinite(sc.channel_nmse_db)) {
    j["channel_nmse_db"] = sc.channel_nmse_db;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << '\n';
}

namespace {

void write_map_csv(const ProjectionMap& pm, const Vec& phi,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "angle";
  for (int k1 : pm.subcarrier_ids) out << ',' << k1;
  out << '\n';
  for (std::size_t r = 0; r < pm.atom_ids.size(); ++r) {
    out << fmt_double(phi(pm.atom_ids[r] - 1));
    for (std::size_t c = 0; c < pm.subcarrier_ids.size(); ++c) {
      out << ','
          << fmt_double(pm.per_subcarrier(static_cast<Eigen::Index>(r),
                                          static_cast<Eigen::Index>(c)));
    }
    out << '\n';
  }
}

void write_curve_csv(const ProjectionMap& pm, const Vec& phi,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "angle,projection\n";
  for (std::size_t r = 0; r < pm.atom_ids.size(); ++r) {
    out << fmt_double(phi(pm.atom_ids[r] - 1)) << ','
        << fmt_double(pm.averaged(static_cast<Eigen::Index>(r))) << '\n';
  }
}

int argmax_spread(const ProjectionMap& pm) {
  int lo = 0, hi = 0;
  for (Eigen::Index c = 0; c < pm.per_subcarrier.cols(); ++c) {
    Eigen::Index r = 0;
    pm.per_subcarrier.col(c).maxCoeff(&r);
    const int id = pm.atom_ids[static_cast<std::size_t>(r)];
    if (c == 0) {
      lo = hi = id;
    } else {
      lo = std::min(lo, id);
      hi = std::max(hi, id);
    }
  }
  return hi - lo;
}

}  // namespace

void emit_projection_heatmap(const Scenario& sc, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const SystemConfig& cfg = sc.base.system;
  ClusterConfig cc = sc.base.clusters;
  // The study isolates the frequency pull of the array response, so the
  // clusters collapse to pure paths.
  cc.sigma_theta_t = 0.0;
  cc.sigma_theta_r = 0.0;

  const ChannelSet ch = generate_channels(cfg, cc, Seed{sc.master_seed, 0});
  const FullyDigital fd = fully_digital(ch, cfg);
  const AngularGrid grid = make_grid(sc.base.lce.g);

  IndexList all_g(static_cast<std::size_t>(grid.g));
  std::iota(all_g.begin(), all_g.end(), 1);
  IndexList all_k(static_cast<std::size_t>(cfg.k));
  std::iota(all_k.begin(), all_k.end(), 1);

  const ProjectionMap dep = projection_map(
      [&grid, &cfg](int k1) { return ideal_matrix_at(grid, cfg, k1); }, fd,
      cfg, all_g, all_k);
  const ProjectionMap indep =
      projection_map(narrowband_matrix(grid, cfg), fd, cfg, all_g, all_k);

  write_map_csv(dep, grid.phi, out_dir + "/heatmap_freq_dependent.csv");
  write_map_csv(indep, grid.phi, out_dir + "/heatmap_freq_independent.csv");
  write_curve_csv(dep, grid.phi, out_dir + "/curve_freq_dependent.csv");
  write_curve_csv(indep, grid.phi, out_dir + "/curve_freq_independent.csv");

  nlohmann::json j;
  j["grid_size"] = grid.g;
  j["subcarriers"] = cfg.k;
  j["argmax_spread_freq_dependent"] = argmax_spread(dep);
  j["argmax_spread_freq_independent"] = argmax_spread(indep);
  std::ofstream out(out_dir + "/heatmap_summary.json");
  if (!out) throw std::runtime_error("cannot open heatmap summary");
  out << j.dump(2) << '\n';
}

void write_representative_angles_csv(const Scenario& sc,
                                     const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::ofstream out(out_dir + "/angles.csv");
  if (!out) throw std::runtime_error("cannot open angles.csv");
  out << "trial";
  for (int i = 1; i <= sc.base.system.n_rf; ++i) out << ",sine_" << i;
  out << '\n';
  for (int t = 0; t < sc.trials; ++t) {
    const ChannelSet ch =
        generate_channels(sc.base.system, sc.base.clusters,
                          Seed{sc.master_seed, static_cast<std::uint32_t>(t)});
    const Vec angles =
        find_representative_angles(ch, sc.base.system, sc.base.lce);
    out << t;
    for (Eigen::Index i = 0; i < angles.size(); ++i) {
      out << ',' << fmt_double(angles(i));
    }
    out << '\n';
  }
}

void write_codebook_error_csv(const ConfigBundle& bundle,
                              const std::string& out_dir,
                              const std::string& export_path) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const Codebook cb = build_codebook(bundle.system, bundle.lce.g);
  const double err = codebook_error(cb, bundle.system);
  std::ofstream out(out_dir + "/codebook_error.csv");
  if (!out) throw std::runtime_error("cannot open codebook_error.csv");
  out << "n_t,n_ttd,m,g,k,fractional_bandwidth,error\n";
  out << bundle.system.n_t << ',' << bundle.system.n_ttd << ','
      << bundle.system.m << ',' << bundle.lce.g << ',' << bundle.system.k
      << ',' << fmt_double(bundle.system.f_s / bundle.system.f_c) << ','
      << fmt_double(err) << '\n';
  if (!export_path.empty()) {
    export_codebook(cb, bundle.system, export_path);
  }
}

}  // namespace dpp
