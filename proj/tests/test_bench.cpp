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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpp/bench.hpp"
#include "test_util.hpp"

using namespace dpp;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Scenario tiny_scenario() {
  Scenario sc;
  SystemConfig cfg = test::small_system();  // 32 antennas, 8 subcarriers
  ClusterConfig cc;
  cc.n_c = 3;
  cc.n_p = 2;
  cc.sigma_theta_t = 0.05;
  cc.sigma_theta_r = 0.05;
  LceConfig lce;
  lce.g = 64;
  lce.g_c = 16;
  lce.g_a = 4;
  lce.k_prime = 2;
  sc.base = {cfg, cc, lce};
  sc.algorithms = {Algorithm::kEssp, Algorithm::kLceSsp};
  sc.axis = SweepAxis::kSnrDb;
  sc.values = {0.0, 10.0};
  sc.trials = 3;
  sc.master_seed = 7;
  sc.threads = 1;
  return sc;
}

}  // namespace

TEST_CASE("algorithm and axis names round-trip") {
  for (Algorithm a : {Algorithm::kFullyDigital, Algorithm::kEssp,
                      Algorithm::kLceSsp, Algorithm::kSspFreqIndependent}) {
    CHECK(algorithm_from_name(algorithm_name(a)) == a);
  }
  for (SweepAxis a :
       {SweepAxis::kSnrDb, SweepAxis::kSigmaThetaDeg, SweepAxis::kNTtd,
        SweepAxis::kFractionalBandwidth, SweepAxis::kChannelNmseDb,
        SweepAxis::kKPrime}) {
    CHECK(axis_from_name(axis_name(a)) == a);
  }
  CHECK_THROWS_AS(algorithm_from_name("gradient_descent"),
                  std::invalid_argument);
  CHECK_THROWS_AS(axis_from_name("carrier"), std::invalid_argument);
}

TEST_CASE("scenario parsing: explicit fields and defaults") {
  const std::string text = R"({
    "preset": "desk",
    "system": {"k": 16},
    "algorithms": ["fully_digital", "essp"],
    "sweep": {"axis": "snr_db", "values": [-10, 0, 10]},
    "trials": 7,
    "master_seed": 99,
    "threads": 2,
    "channel_nmse_db": -20.0
  })";
  const Scenario sc = parse_scenario_json(text);
  CHECK(sc.base.system.n_t == 64);
  CHECK(sc.base.system.k == 16);
  REQUIRE(sc.algorithms.size() == 2);
  CHECK(sc.algorithms[0] == Algorithm::kFullyDigital);
  CHECK(sc.algorithms[1] == Algorithm::kEssp);
  CHECK(sc.axis == SweepAxis::kSnrDb);
  CHECK(sc.values == std::vector<double>{-10.0, 0.0, 10.0});
  CHECK(sc.trials == 7);
  CHECK(sc.master_seed == 99);
  CHECK(sc.threads == 2);
  CHECK(sc.channel_nmse_db == -20.0);

  const Scenario defaults = parse_scenario_json(R"({"preset": "desk"})");
  REQUIRE(defaults.algorithms.size() == 3);
  CHECK(defaults.axis == SweepAxis::kSnrDb);
  REQUIRE(defaults.values.size() == 1);
  CHECK(defaults.values[0] == defaults.base.system.snr_db);
  CHECK(!std::isfinite(defaults.channel_nmse_db));  // perfect CSI marker

  CHECK_THROWS_AS(parse_scenario_json(R"({"trials": 0})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_scenario_json(R"({"sweep": {"axis": "snr_db", "values": []}})"),
      std::invalid_argument);
}

TEST_CASE("sweep runs are deterministic and thread-count independent") {
  const Scenario sc = tiny_scenario();
  const std::vector<ResultRow> rows1 = run_scenario(sc);
  const std::vector<ResultRow> rows2 = run_scenario(sc);
  Scenario threaded = sc;
  threaded.threads = 2;
  const std::vector<ResultRow> rows3 = run_scenario(threaded);

  REQUIRE(rows1.size() == 4);  // 2 algorithms x 2 sweep values
  const std::string dir = test::scratch_dir("bench_csv");
  write_results_csv(rows1, dir + "/a.csv");
  write_results_csv(rows2, dir + "/b.csv");
  write_results_csv(rows3, dir + "/c.csv");
  const std::string a = slurp(dir + "/a.csv");
  CHECK(a == slurp(dir + "/b.csv"));
  CHECK(a == slurp(dir + "/c.csv"));

  // Fixed column set, no timing data in the deterministic file.
  std::istringstream lines(a);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "algorithm,sweep_axis,sweep_value,mean_rate_per_subcarrier,"
        "std_err_rate,mean_approx_mse,trials");
  int data_lines = 0;
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty()) ++data_lines;
  }
  CHECK(data_lines == 4);

  // Timing lives in its own file with the same leading columns.
  write_timings_csv(rows1, dir + "/t.csv");
  std::istringstream tlines(slurp(dir + "/t.csv"));
  std::getline(tlines, header);
  CHECK(header == "algorithm,sweep_axis,sweep_value,mean_wall_ms,trials");
}

TEST_CASE("rates respond to the swept quantity") {
  Scenario sc = tiny_scenario();
  sc.algorithms = {Algorithm::kEssp};
  sc.values = {-10.0, 20.0};
  const std::vector<ResultRow> rows = run_scenario(sc);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].sweep_value == -10.0);
  CHECK(rows[1].sweep_value == 20.0);
  CHECK(rows[1].mean_rate_per_subcarrier > rows[0].mean_rate_per_subcarrier);
  for (const ResultRow& r : rows) {
    CHECK(r.trials == 3);
    CHECK(r.std_err_rate >= 0.0);
    CHECK(r.mean_approx_mse >= 0.0);
  }
}

TEST_CASE("sweeping delay-element counts validates divisibility") {
  Scenario sc = tiny_scenario();
  sc.axis = SweepAxis::kNTtd;
  sc.values = {5.0};  // does not divide 32 antennas
  CHECK_THROWS_WITH_AS(run_scenario(sc), doctest::Contains("divide"),
                       std::invalid_argument);
  sc.values = {4.0, 8.0};
  CHECK_NOTHROW(run_scenario(sc));
}

TEST_CASE("a failing cell aborts the sweep with a diagnostic") {
  Scenario sc = tiny_scenario();
  // Two-column grid cannot supply four RF chains: every trial fails.
  sc.base.lce.g = 2;
  sc.base.lce.g_c = 2;
  sc.base.lce.g_a = 1;
  sc.algorithms = {Algorithm::kEssp};
  sc.values = {10.0};
  CHECK_THROWS_WITH_AS(run_scenario(sc), doctest::Contains("trials failed"),
                       std::runtime_error);
}

TEST_CASE("manifest carries the reproduction key") {
  const Scenario sc = tiny_scenario();
  const std::string dir = test::scratch_dir("bench_manifest");
  write_manifest(sc, dir + "/manifest.json");
  const nlohmann::json j = nlohmann::json::parse(slurp(dir + "/manifest.json"));
  CHECK(j.at("format").get<std::string>() == "thzdpp-manifest-v1");
  CHECK(j.at("master_seed").get<std::uint64_t>() == 7);
  CHECK(j.at("trials").get<int>() == 3);
  CHECK(j.at("sweep_axis").get<std::string>() == "snr_db");
  CHECK(j.at("algorithms").size() == 2);
  CHECK(j.at("config_hash").get<std::string>().size() == 16);
  CHECK(j.at("sweep_values").size() == 2);
}

TEST_CASE("projection study writes maps, curves, and the spread summary") {
  Scenario sc = tiny_scenario();
  sc.base.lce.g = 32;
  sc.base.lce.g_c = 8;
  const std::string dir = test::scratch_dir("bench_heatmap");
  emit_projection_heatmap(sc, dir);

  for (const std::string name :
       {"heatmap_freq_dependent.csv", "heatmap_freq_independent.csv",
        "curve_freq_dependent.csv", "curve_freq_independent.csv"}) {
    CHECK(std::filesystem::exists(dir + "/" + name));
  }
  // Map layout: "angle,k1,...,kK" header, one row per grid angle.
  std::istringstream lines(slurp(dir + "/heatmap_freq_dependent.csv"));
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("angle,", 0) == 0);
  int rows = 0;
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 32);

  const nlohmann::json j =
      nlohmann::json::parse(slurp(dir + "/heatmap_summary.json"));
  CHECK(j.at("grid_size").get<int>() == 32);
  CHECK(j.at("subcarriers").get<int>() == 8);
  CHECK(j.at("argmax_spread_freq_dependent").get<int>() >= 0);
  CHECK(j.at("argmax_spread_freq_independent").get<int>() >= 0);
}

TEST_CASE("dominant-direction report has one row per trial") {
  Scenario sc = tiny_scenario();
  sc.trials = 2;
  const std::string dir = test::scratch_dir("bench_angles");
  write_representative_angles_csv(sc, dir);
  std::istringstream lines(slurp(dir + "/angles.csv"));
  std::string header;
  std::getline(lines, header);
  CHECK(header == "trial,sine_1,sine_2,sine_3,sine_4");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("codebook quality report") {
  ConfigBundle bundle{test::small_system(), ClusterConfig{}, LceConfig{}};
  bundle.lce.g = 32;
  const std::string dir = test::scratch_dir("bench_cberr");
  write_codebook_error_csv(bundle, dir, dir + "/cb.json");
  const std::string text = slurp(dir + "/codebook_error.csv");
  CHECK(text.find("error") != std::string::npos);
  CHECK(std::filesystem::exists(dir + "/cb.json"));
  const nlohmann::json j = nlohmann::json::parse(slurp(dir + "/cb.json"));
  CHECK(j.at("format").get<std::string>() == "thzdpp-codebook-v1");
}
