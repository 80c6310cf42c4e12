// Copyright 2026 The nvnmr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// nvnmr: run one simulation command from a YAML config.
//
//   nvnmr --command spectrum --config run.yaml --out results/
//   nvnmr --from-sidecar results/spectrum-<hash>.json --out again/

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nvnmr/commands.hpp"
#include "nvnmr/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Single-molecule NMR with an NV centre: spectra, envelopes, detection times."};
  app.set_version_flag("--version", std::string(nvnmr::library_version()));

  std::string command_text, config_path, sidecar_path, out_dir = ".";
  std::vector<std::string> overrides;
  int workers = 0;
  bool serial = false;

  std::string choices;
  for (auto n : nvnmr::command_names()) choices += (choices.empty() ? "" : ", ") + std::string(n);
  app.add_option("--command", command_text, "One of: " + choices);
  app.add_option("--config", config_path, "YAML config; omitted keys take their defaults")->check(CLI::ExistingFile);
  app.add_option("--from-sidecar", sidecar_path, "Re-run the command and config recorded in a JSON sidecar")
      ->check(CLI::ExistingFile)
      ->excludes("--config");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--workers", workers, "OpenMP threads (0: all available)")->check(CLI::NonNegativeNumber);
  app.add_flag("--serial", serial, "Use the serial reference scheduler");
  app.add_option("--grid-override", overrides, "KEY=VALUE applied to the config, e.g. sweep.points=101");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    nvnmr::Command command{};
    nvnmr::RunConfig config;
    if (!sidecar_path.empty()) {
      if (!overrides.empty()) throw nvnmr::config_error("--grid-override cannot be combined with --from-sidecar");
      auto in = nvnmr::read_sidecar(sidecar_path);
      if (!command_text.empty() && command_text != nvnmr::command_name(in.command)) {
        throw nvnmr::config_error("--command disagrees with the sidecar");
      }
      command = in.command;
      config = std::move(in.config);
    } else {
      const auto parsed = nvnmr::parse_command(command_text);
      if (!parsed) throw nvnmr::config_error("--command must be one of: " + choices);
      command = *parsed;
      config = config_path.empty() ? nvnmr::parse_config("", overrides) : nvnmr::load_config(config_path, overrides);
    }
    const nvnmr::Execution exec =
        serial ? nvnmr::Execution::serial() : nvnmr::Execution{nvnmr::Schedule::openmp, workers};
    const auto artifact = nvnmr::dispatch(command, config, out_dir, exec);
    std::cout << artifact.csv.string() << " (" << artifact.rows << " rows)\n" << artifact.sidecar.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "nvnmr: error: " << e.what() << "\n";
    return nvnmr::exit_code_for(e);
  }
}
