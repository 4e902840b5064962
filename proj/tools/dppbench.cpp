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
//
// Benchmark driver for the delay-phase precoding library. Subcommands:
//   run            Monte-Carlo sweep described by a scenario file
//   heatmap        projection-energy maps for one pure-path channel
//   codebook-error dictionary approximation error of one configuration
//   angles         dominant-direction report per trial
//   selftest       fast invariant checks

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dpp/bench.hpp"
#include "dpp/config.hpp"

namespace {

struct CommonOpts {
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int trials = 0;
  std::string preset;
  int threads = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_trials = true) {
  cmd->add_option("--out", opts.out_dir, "Output directory")
      ->capture_default_str();
  cmd->add_option("--seed", opts.seed, "Master seed override")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  if (with_trials) {
    cmd->add_option("--trials", opts.trials, "Trial count override");
  }
  cmd->add_option("--preset", opts.preset,
                  "Replace the configuration with a preset (desk|paper)");
  cmd->add_option("--threads", opts.threads,
                  "Worker threads (0 = hardware concurrency)");
}

void apply_overrides(dpp::Scenario& sc, const CommonOpts& opts) {
  if (!opts.preset.empty()) {
    if (opts.preset == "desk") {
      sc.base = {dpp::desk_system(), dpp::desk_clusters(), dpp::desk_lce()};
    } else if (opts.preset == "paper") {
      sc.base = {dpp::paper_system(), dpp::paper_clusters(), dpp::paper_lce()};
    } else {
      throw CLI::ValidationError("--preset must be desk or paper");
    }
  }
  if (opts.seed_set) sc.master_seed = opts.seed;
  if (opts.trials > 0) sc.trials = opts.trials;
  if (opts.threads >= 0) sc.threads = opts.threads;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delay-phase precoding benchmark"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string config_path;
  std::string export_path;
  CommonOpts opts;

  CLI::App* run = app.add_subcommand("run", "Monte-Carlo sweep");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  add_common(run, opts);

  CLI::App* heatmap =
      app.add_subcommand("heatmap", "Projection-energy maps");
  heatmap->add_option("scenario", scenario_path, "Scenario JSON file")
      ->required();
  add_common(heatmap, opts, false);

  CLI::App* cberr = app.add_subcommand(
      "codebook-error", "Dictionary approximation error");
  cberr->add_option("config", config_path, "Configuration JSON file")
      ->required();
  cberr->add_option("--out", opts.out_dir, "Output directory")
      ->capture_default_str();
  cberr->add_option("--export", export_path,
                    "Also dump the phase/delay codebooks to this JSON file");
  cberr->add_option("--preset", opts.preset,
                    "Replace the configuration with a preset (desk|paper)");

  CLI::App* angles =
      app.add_subcommand("angles", "Dominant-direction report");
  angles->add_option("scenario", scenario_path, "Scenario JSON file")
      ->required();
  add_common(angles, opts);

  app.add_subcommand("selftest", "Fast invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("selftest")) {
      return dpp::run_selftest(std::cout) == 0 ? 0 : 1;
    }
    if (app.got_subcommand("codebook-error")) {
      dpp::ConfigBundle bundle = dpp::load_config_file(config_path);
      if (opts.preset == "desk") {
        bundle = {dpp::desk_system(), dpp::desk_clusters(), dpp::desk_lce()};
      } else if (opts.preset == "paper") {
        bundle = {dpp::paper_system(), dpp::paper_clusters(),
                  dpp::paper_lce()};
      } else if (!opts.preset.empty()) {
        std::cerr << "--preset must be desk or paper\n";
        return 2;
      }
      dpp::write_codebook_error_csv(bundle, opts.out_dir, export_path);
      std::cout << "wrote " << opts.out_dir << "/codebook_error.csv\n";
      return 0;
    }

    dpp::Scenario sc = dpp::load_scenario_file(scenario_path);
    apply_overrides(sc, opts);
    std::filesystem::create_directories(opts.out_dir);

    if (app.got_subcommand("run")) {
      const std::vector<dpp::ResultRow> rows = dpp::run_scenario(sc);
      dpp::write_results_csv(rows, opts.out_dir + "/results.csv");
      dpp::write_timings_csv(rows, opts.out_dir + "/timings.csv");
      dpp::write_manifest(sc, opts.out_dir + "/manifest.json");
      std::cout << "wrote " << rows.size() << " rows to " << opts.out_dir
                << "/results.csv\n";
    } else if (app.got_subcommand("heatmap")) {
      dpp::emit_projection_heatmap(sc, opts.out_dir);
      dpp::write_manifest(sc, opts.out_dir + "/manifest.json");
      std::cout << "wrote projection maps to " << opts.out_dir << "\n";
    } else if (app.got_subcommand("angles")) {
      dpp::write_representative_angles_csv(sc, opts.out_dir);
      dpp::write_manifest(sc, opts.out_dir + "/manifest.json");
      std::cout << "wrote " << opts.out_dir << "/angles.csv\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
