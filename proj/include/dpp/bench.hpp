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

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "dpp/config.hpp"

namespace dpp {

enum class Algorithm {
  kFullyDigital,
  kEssp,
  kLceSsp,
  kSspFreqIndependent,
};

enum class SweepAxis {
  kSnrDb,
  kSigmaThetaDeg,
  kNTtd,
  kFractionalBandwidth,
  kChannelNmseDb,
  kKPrime,
};

std::string algorithm_name(Algorithm a);
std::string axis_name(SweepAxis a);
Algorithm algorithm_from_name(const std::string& name);
SweepAxis axis_from_name(const std::string& name);

// Sentinel for "no estimation error injected".
inline constexpr double kPerfectCsi = -std::numeric_limits<double>::infinity();

// One Monte-Carlo experiment: a base configuration, the algorithms to
// compare, one sweep axis with its value list, and the trial budget.
struct Scenario {
  ConfigBundle base;
  std::vector<Algorithm> algorithms;
  SweepAxis axis = SweepAxis::kSnrDb;
  std::vector<double> values;
  int trials = 50;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  // Fixed estimation-error level in dB applied when the sweep axis is not
  // channel_nmse_db; kPerfectCsi disables error injection.
  double channel_nmse_db = kPerfectCsi;
};

Scenario load_scenario_file(const std::string& path);
Scenario parse_scenario_json(const std::string& text);

// One aggregated cell of the sweep. Rates are per-subcarrier spectral
// efficiencies averaged over trials; std_err_rate is the standard error of
// that mean. Wall-clock covers the solver call only (not channel synthesis)
// and is kept out of the deterministic results CSV.
struct ResultRow {
  std::string algorithm;
  std::string sweep_axis;
  double sweep_value = 0.0;
  double mean_rate_per_subcarrier = 0.0;
  double std_err_rate = 0.0;
  double mean_approx_mse = 0.0;
  double mean_wall_ms = 0.0;
  int trials = 0;
};

// Runs the full sweep. Trials are distributed over a worker pool; per-trial
// streams are keyed by (master_seed, trial_index), so the output is
// identical for any thread count. Per-trial solver errors are recorded and
// the run aborts if more than 10% of trials fail for any sweep cell.
std::vector<ResultRow> run_scenario(const Scenario& sc);

// results.csv: deterministic columns only (no timing), byte-identical for
// the same scenario and master seed. timings.csv: the wall-clock column.
void write_results_csv(const std::vector<ResultRow>& rows,
                       const std::string& path);
void write_timings_csv(const std::vector<ResultRow>& rows,
                       const std::string& path);

// JSON run manifest: config hash, seed, sweep description, versions.
void write_manifest(const Scenario& sc, const std::string& path);

// Projection-energy study on a sigma_theta = 0 channel drawn from
// (master_seed, 0): per-subcarrier maps plus subcarrier-summed curves for
// the frequency-dependent (predistorted) and frequency-flat dictionaries,
// and a JSON summary with the per-dictionary argmax spread across
// subcarriers. Map CSV layout: header row of subcarrier indices, first
// column of grid angles.
void emit_projection_heatmap(const Scenario& sc, const std::string& out_dir);

// Dominant-direction report: one row per trial with the selected grid
// angles (direction sines), written to <out_dir>/angles.csv.
void write_representative_angles_csv(const Scenario& sc,
                                     const std::string& out_dir);

// Codebook approximation error for one configuration; optional export_path
// dumps the phase/delay codebooks as JSON.
void write_codebook_error_csv(const ConfigBundle& bundle,
                              const std::string& out_dir,
                              const std::string& export_path);

// Fast invariant checks (hardware constraints, compensation identities,
// normalization); prints one line per check, returns the failure count.
int run_selftest(std::ostream& os);

}  // namespace dpp
