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

#include "nvnmr/commands.hpp"

#include <array>
#include <chrono>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "nvnmr/errors.hpp"
#include "nvnmr/units.hpp"

namespace nvnmr {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 6> names{"spectrum", "baseline", "optimize", "scan-distance", "scan-t2",
                                                "peaks"};
constexpr std::string_view not_available = "NA";

std::string num(double v) { return format_number(v); }
std::string hz(double omega) { return format_number(omega / (2.0 * std::numbers::pi)); }

std::string shots(const DetectionOutcome& o) { return o.n_shots ? std::to_string(*o.n_shots) : std::string(not_available); }
std::string total(const DetectionOutcome& o) { return o.total_time ? num(*o.total_time) : std::string(not_available); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double target_gamma(const ValidatedSystem& sys) {
  const auto& active = sys.active_nuclei();
  return active.empty() ? sys.spec().constants.gamma_proton : active.front().gamma;
}

CommandResult spectrum_table(const RunConfig& cfg, const Execution& exec, Spectrum* keep = nullptr) {
  const auto sys = validated(to_system_spec(cfg));
  Spectrum sp = run_sweep(sys, to_sweep_plan(cfg, sys), exec);
  CommandResult r;
  r.table.columns = {"omega_hz", "s_on", "s_off", "delta_s"};
  for (const auto& p : sp.points) r.table.rows.push_back({hz(p.omega), num(p.s_on), num(sp.s_off), num(p.delta_s)});
  r.summary = {{"b_nmr_t", sp.b_nmr}, {"s_off", sp.s_off}, {"points", sp.points.size()}};
  if (keep) *keep = std::move(sp);
  return r;
}

CommandResult peaks_table(const RunConfig& cfg, const Execution& exec) {
  Spectrum sp;
  const CommandResult sweep = spectrum_table(cfg, exec, &sp);
  CommandResult r;
  r.table.columns = {"omega_hz", "height", "half_width_hz"};
  for (const auto& p : find_peaks(sp, cfg.peaks.min_height)) r.table.rows.push_back({hz(p.omega), num(p.height), hz(p.half_width)});
  r.summary = sweep.summary;
  r.summary["peaks"] = r.table.rows.size();
  return r;
}

CommandResult baseline_table(const RunConfig& cfg, const Execution& exec) {
  const auto sys = validated(to_system_spec(cfg));
  const auto& b = cfg.baseline;
  std::vector<double> grid(b.points);
  for (std::size_t i = 0; i < b.points; ++i) {
    grid[i] = b.points == 1 ? b.t_min
                            : b.t_min + (b.t_max - b.t_min) * static_cast<double>(i) / static_cast<double>(b.points - 1);
  }
  const auto& seq = cfg.sequence;
  const auto off = baseline_curve(sys, cfg.model, seq.kind, seq.n, grid, cfg.evolution);
  const double omega = reference_frequency(sys);
  const double gamma = target_gamma(sys);
  const auto on = ordered_map(
      grid.size(),
      [&](std::size_t i) {
        if (grid[i] == 0.0) return off[i].s;  // nothing happens in zero time
        const PulseSequence s{seq.kind, seq.n, grid[i]};
        const DriveSpec drive{b.b_nmr.value_or(matched_drive(s, gamma)), omega, 0.0};
        return run_sequence(sys, cfg.model, drive, s, cfg.evolution).s;
      },
      exec);
  CommandResult r;
  r.table.columns = {"t_p_s", "s_off", "s_on", "delta_s"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r.table.rows.push_back({num(grid[i]), num(off[i].s), num(on[i]), num(off[i].s - on[i])});
  }
  r.summary = {{"points", grid.size()}, {"omega_rad_s", omega}, {"b_nmr_t", optional_number(b.b_nmr)}};
  return r;
}

CommandResult optimize_table(const RunConfig& cfg, const Execution& exec) {
  const auto sys = validated(to_system_spec(cfg));
  const auto req = make_request(sys, to_optimizer_settings(cfg));
  const auto res = optimize(sys, req, exec);
  CommandResult r;
  r.table.columns = {"b_nmr_t", "t_p_s", "delta_s", "n_shots", "total_time_s", "tag"};
  for (const auto& s : res.surface) {
    r.table.rows.push_back({num(s.b_nmr), num(s.t_p), num(s.outcome.delta_s), shots(s.outcome), total(s.outcome),
                            s.tag == SampleTag::grid ? "grid" : "refine"});
  }
  r.summary = {{"best_b_nmr_t", res.best_b_nmr},
               {"best_t_p_s", res.best_t_p},
               {"best_time_s", res.best_time},
               {"best_n_shots", *res.best.n_shots},
               {"best_delta_s", res.best.delta_s},
               {"transition_rad_s", req.transition_omega}};
  return r;
}

CommandResult scan_table(const RunConfig& cfg, const Execution& exec, ScanVariable var) {
  const SystemSpec base = to_system_spec(cfg);
  const auto settings = to_optimizer_settings(cfg);
  const bool distance = var == ScanVariable::r_max;
  const auto& values = distance ? cfg.scan.r_max : cfg.scan.t2_nv;
  if (distance && cfg.system.molecule.kind == MoleculeChoice::custom) {
    throw config_error("scan-distance needs a built-in molecule kind, not custom");
  }
  const TargetPlacement place = [&](const SystemSpec& b, double r) { return molecule_sites_at(cfg.system, r, b.constants); };
  const auto points = scan(base, var, values, settings, exec, place);

  CommandResult r;
  r.table.columns = {distance ? "r_max_m" : "t2_nv_s", "best_b_nmr_t", "best_t_p_s", "best_time_s",
                     "delta_s",                        "n_shots",      "status"};
  json errors = json::array();
  for (const auto& p : points) {
    if (p.result) {
      const auto& o = *p.result;
      r.table.rows.push_back({num(p.parameter), num(o.best_b_nmr), num(o.best_t_p), num(o.best_time),
                              num(o.best.delta_s), shots(o.best), "ok"});
    } else {
      const std::string na(not_available);
      r.table.rows.push_back({num(p.parameter), na, na, na, na, na, "failed"});
      errors.push_back({{"parameter", p.parameter}, {"message", p.error}});
    }
  }
  r.summary = {{"points", points.size()}, {"errors", errors}};
  return r;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  out.close();
  if (!out) throw io_error(fmt::format("error writing '{}'", path.string()));
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<Command>(i);
  }
  return std::nullopt;
}

std::string_view command_name(Command command) { return names[static_cast<std::size_t>(command)]; }
std::span<const std::string_view> command_names() { return names; }

std::string_view library_version() { return NVNMR_VERSION; }

std::string Table::to_csv() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

CommandResult execute(Command command, const RunConfig& config, const Execution& exec) {
  switch (command) {
    case Command::spectrum: return spectrum_table(config, exec);
    case Command::peaks: return peaks_table(config, exec);
    case Command::baseline: return baseline_table(config, exec);
    case Command::optimize: return optimize_table(config, exec);
    case Command::scan_distance: return scan_table(config, exec, ScanVariable::r_max);
    case Command::scan_t2: return scan_table(config, exec, ScanVariable::t2_nv);
  }
  throw std::logic_error("execute: unknown command");
}

Artifact dispatch(Command command, const RunConfig& config, const std::filesystem::path& out_dir,
                  const Execution& exec) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw io_error(fmt::format("cannot create output directory '{}': {}", out_dir.string(), ec.message()));

  const auto start = std::chrono::steady_clock::now();
  const CommandResult result = execute(command, config, exec);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Artifact a;
  a.hash = config_hash(config, std::string(command_name(command)));
  const std::string stem = fmt::format("{}-{}", command_name(command), a.hash);
  a.csv = out_dir / (stem + ".csv");
  a.sidecar = out_dir / (stem + ".json");
  a.rows = result.table.rows.size();

  const json sidecar = {{"command", command_name(command)},
                        {"version", library_version()},
                        {"hash", a.hash},
                        {"csv", a.csv.filename().string()},
                        {"columns", result.table.columns},
                        {"rows", a.rows},
                        {"wall_time_s", wall},
                        {"summary", result.summary},
                        {"config", to_json(config)}};
  write_file(a.csv, result.table.to_csv());
  write_file(a.sidecar, sidecar.dump(2) + "\n");
  return a;
}

SidecarInput read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(fmt::format("cannot read sidecar '{}'", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw config_error(fmt::format("sidecar '{}' is not valid JSON: {}", path.string(), e.what()));
  }
  if (!j.is_object() || !j.contains("command") || !j.contains("config") || !j["command"].is_string()) {
    throw config_error(fmt::format("sidecar '{}' lacks command/config", path.string()));
  }
  const auto command = parse_command(j["command"].get<std::string>());
  if (!command) throw config_error(fmt::format("sidecar '{}' names an unknown command", path.string()));
  return {*command, parse_config(j["config"].dump())};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const config_error*>(&e)) return 2;
  if (dynamic_cast<const io_error*>(&e)) return 4;
  if (dynamic_cast<const computation_error*>(&e)) return 3;
  if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::domain_error*>(&e)) return 2;
  return 3;
}

}  // namespace nvnmr
