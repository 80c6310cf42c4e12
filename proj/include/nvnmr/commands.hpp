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

// Command dispatch and artifact emission.
//
// Each command writes <command>-<hash>.csv and a <command>-<hash>.json
// sidecar into the output directory. The hash covers the command name and
// the resolved config, so the same inputs always land in the same files,
// and the sidecar alone reproduces the CSV byte for byte.

#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nvnmr/config.hpp"
#include "nvnmr/parallel.hpp"

namespace nvnmr {

enum class Command { spectrum, baseline, optimize, scan_distance, scan_t2, peaks };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);
std::span<const std::string_view> command_names();

std::string_view library_version();

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

struct CommandResult {
  Table table;
  nlohmann::json summary;  // command-specific headline numbers and per-point errors
};

/// Runs a command without touching the filesystem.
CommandResult execute(Command command, const RunConfig& config, const Execution& exec = {});

struct Artifact {
  std::filesystem::path csv;
  std::filesystem::path sidecar;
  std::size_t rows = 0;
  std::string hash;
};

/// execute, then write the CSV and its sidecar. Throws io_error when the
/// directory or files cannot be written.
Artifact dispatch(Command command, const RunConfig& config, const std::filesystem::path& out_dir,
                  const Execution& exec = {});

struct SidecarInput {
  Command command;
  RunConfig config;
};

/// Command and config recorded in a sidecar written by dispatch.
SidecarInput read_sidecar(const std::filesystem::path& path);

/// 2 config error, 3 computation error, 4 I/O error.
int exit_code_for(const std::exception& e);

}  // namespace nvnmr
