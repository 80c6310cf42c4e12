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

#include "nvnmr/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "nvnmr/errors.hpp"
#include "nvnmr/units.hpp"

namespace nvnmr {
namespace {

using nlohmann::json;

std::string where(const YAML::Mark& m) {
  if (m.is_null()) return "override";
  return fmt::format("line {}, column {}", m.line + 1, m.column + 1);
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) {
  throw config_error(where(n.Mark()) + ": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Rejects keys outside `allowed`; null (absent/empty) sections are fine.
void check_keys(const YAML::Node& map, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!map || map.IsNull()) return;
  if (!map.IsMap()) fail(map, fmt::format("'{}' must be a mapping", path.empty() ? "document" : path));
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(kv.first, fmt::format("unknown key '{}'", join(path, key)));
    }
  }
}

const std::string& scalar(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) fail(n, fmt::format("'{}' must be a scalar", path));
  return n.Scalar();
}

double quantity(const YAML::Node& n, const std::string& path, Dimension dim) {
  try {
    return parse_quantity(scalar(n, path), dim);
  } catch (const config_error& e) {
    if (n.IsScalar()) fail(n, fmt::format("'{}': {}", path, e.what()));
    throw;
  }
}

double number(const YAML::Node& n, const std::string& path) {
  const std::string& s = scalar(n, path);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    fail(n, fmt::format("'{}' must be a finite number, got '{}'", path, s));
  }
  return v;
}

long integer(const YAML::Node& n, const std::string& path) {
  const std::string& s = scalar(n, path);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(n, fmt::format("'{}' must be an integer, got '{}'", path, s));
  return v;
}

std::size_t count(const YAML::Node& n, const std::string& path) {
  const long v = integer(n, path);
  if (v < 0) fail(n, fmt::format("'{}' must be nonnegative", path));
  return static_cast<std::size_t>(v);
}

bool boolean(const YAML::Node& n, const std::string& path) {
  scalar(n, path);
  bool v = false;
  if (!YAML::convert<bool>::decode(n, v)) fail(n, fmt::format("'{}' must be true or false", path));
  return v;
}

template <class E, std::size_t N>
using Names = std::array<std::pair<std::string_view, E>, N>;

template <class E, std::size_t N>
E choice(const YAML::Node& n, const std::string& path, const Names<E, N>& options) {
  const std::string& s = scalar(n, path);
  std::string names;
  for (const auto& [name, value] : options) {
    if (name == s) return value;
    names += (names.empty() ? "" : ", ") + std::string(name);
  }
  fail(n, fmt::format("'{}' must be one of {}; got '{}'", path, names, s));
}

// A quantity, or the keyword selecting an automatic value.
std::optional<double> quantity_or(const YAML::Node& n, const std::string& path, Dimension dim,
                                  std::string_view keyword) {
  if (n.IsScalar() && n.Scalar() == keyword) return std::nullopt;
  return quantity(n, path, dim);
}

std::vector<double> quantity_list(const YAML::Node& n, const std::string& path, Dimension dim) {
  if (!n.IsSequence()) fail(n, fmt::format("'{}' must be a list", path));
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(quantity(n[i], fmt::format("{}[{}]", path, i), dim));
  return out;
}

constexpr Names<MoleculeChoice, 5> molecule_names{{
    {"proton", MoleculeChoice::proton},
    {"aldehyde", MoleculeChoice::aldehyde},
    {"hydroxymethyl", MoleculeChoice::hydroxymethyl},
    {"methyl", MoleculeChoice::methyl},
    {"custom", MoleculeChoice::custom}}};
constexpr Names<Frame, 2> frame_names{{
    {"rotating_secular", Frame::rotating_secular}, {"lab_nuclear", Frame::lab_nuclear}}};
constexpr Names<NvCoupling, 2> coupling_names{{
    {"zz_only", NvCoupling::zz_only}, {"full_secular", NvCoupling::full_secular}}};
constexpr Names<SequenceKind, 3> sequence_names{{
    {"echo", SequenceKind::echo}, {"cpmg", SequenceKind::cpmg}, {"uhrig", SequenceKind::uhrig}}};
constexpr Names<Backend, 2> backend_names{{
    {"exact_piecewise", Backend::exact_piecewise}, {"stepped", Backend::stepped}}};

template <class E, std::size_t N>
std::string name_of(E value, const Names<E, N>& options) {
  for (const auto& [name, v] : options) {
    if (v == value) return std::string(name);
  }
  return "?";
}

CustomSite read_site(const YAML::Node& n, const std::string& path) {
  check_keys(n, path, {"label", "position", "gamma", "t1", "t2", "active"});
  if (!n.IsMap()) fail(n, fmt::format("'{}' must be a mapping", path));
  CustomSite s;
  s.label = n["label"] ? scalar(n["label"], path + ".label") : path;
  const auto pos = n["position"];
  if (!pos) fail(n, fmt::format("'{}' needs a position", path));
  const auto xyz = quantity_list(pos, path + ".position", Dimension::length);
  if (xyz.size() != 3) fail(pos, fmt::format("'{}.position' needs three coordinates", path));
  s.position = Vec3(xyz[0], xyz[1], xyz[2]);
  if (const auto g = n["gamma"]) {
    if (!(g.IsScalar() && g.Scalar() == "proton")) s.gamma = number(g, path + ".gamma");
  }
  if (const auto t = n["t1"]) s.t1 = quantity(t, path + ".t1", Dimension::time);
  if (const auto t = n["t2"]) s.t2 = quantity(t, path + ".t2", Dimension::time);
  if (const auto a = n["active"]) s.active = boolean(a, path + ".active");
  return s;
}

void read_system(const YAML::Node& n, SystemConfig& sys) {
  check_keys(n, "system", {"b0", "collection_efficiency", "nv", "nuclear", "molecule"});
  if (!n || n.IsNull()) return;
  if (const auto v = n["b0"]) sys.b0 = quantity(v, "system.b0", Dimension::field);
  if (const auto v = n["collection_efficiency"]) sys.collection_efficiency = number(v, "system.collection_efficiency");
  const auto nv = n["nv"];
  check_keys(nv, "system.nv", {"t1", "t2"});
  if (nv && nv.IsMap()) {
    if (const auto v = nv["t1"]) sys.nv_t1 = quantity(v, "system.nv.t1", Dimension::time);
    if (const auto v = nv["t2"]) sys.nv_t2 = quantity(v, "system.nv.t2", Dimension::time);
  }
  const auto nuc = n["nuclear"];
  check_keys(nuc, "system.nuclear", {"t1", "t2"});
  if (nuc && nuc.IsMap()) {
    if (const auto v = nuc["t1"]) sys.nuclear_t1 = quantity(v, "system.nuclear.t1", Dimension::time);
    if (const auto v = nuc["t2"]) sys.nuclear_t2 = quantity(v, "system.nuclear.t2", Dimension::time);
  }
  const auto mol = n["molecule"];
  check_keys(mol, "system.molecule", {"kind", "standoff", "azimuth", "sites"});
  if (mol && mol.IsMap()) {
    auto& m = sys.molecule;
    if (const auto v = mol["kind"]) m.kind = choice(v, "system.molecule.kind", molecule_names);
    if (const auto v = mol["standoff"]) m.standoff = quantity(v, "system.molecule.standoff", Dimension::length);
    if (const auto v = mol["azimuth"]) m.azimuth = quantity(v, "system.molecule.azimuth", Dimension::angle);
    if (const auto v = mol["sites"]) {
      if (!v.IsSequence()) fail(v, "'system.molecule.sites' must be a list");
      for (std::size_t i = 0; i < v.size(); ++i) m.sites.push_back(read_site(v[i], fmt::format("system.molecule.sites[{}]", i)));
    }
  }
}

RunConfig read(const YAML::Node& root) {
  check_keys(root, "",
             {"system", "model", "sequence", "evolution", "sweep", "baseline", "optimize", "scan", "peaks"});
  RunConfig c;
  if (!root || root.IsNull()) return c;
  read_system(root["system"], c.system);

  const auto model = root["model"];
  check_keys(model, "model", {"frame", "nv_coupling", "nuclear_dipolar"});
  if (model && model.IsMap()) {
    if (const auto v = model["frame"]) c.model.frame = choice(v, "model.frame", frame_names);
    if (const auto v = model["nv_coupling"]) c.model.nv_coupling = choice(v, "model.nv_coupling", coupling_names);
    if (const auto v = model["nuclear_dipolar"]) c.model.include_nuclear_dipolar = boolean(v, "model.nuclear_dipolar");
  }

  const auto seq = root["sequence"];
  check_keys(seq, "sequence", {"kind", "n", "t_p"});
  if (seq && seq.IsMap()) {
    if (const auto v = seq["kind"]) c.sequence.kind = choice(v, "sequence.kind", sequence_names);
    if (const auto v = seq["n"]) c.sequence.n = static_cast<int>(integer(v, "sequence.n"));
    if (const auto v = seq["t_p"]) c.sequence.t_p = quantity(v, "sequence.t_p", Dimension::time);
  }

  const auto evo = root["evolution"];
  check_keys(evo, "evolution", {"backend", "max_step", "tolerance"});
  if (evo && evo.IsMap()) {
    if (const auto v = evo["backend"]) c.evolution.backend = choice(v, "evolution.backend", backend_names);
    if (const auto v = evo["max_step"]) c.evolution.max_step = quantity(v, "evolution.max_step", Dimension::time);
    if (const auto v = evo["tolerance"]) c.evolution.tolerance = number(v, "evolution.tolerance");
  }

  const auto sweep = root["sweep"];
  check_keys(sweep, "sweep", {"center", "half_span", "points", "b_nmr"});
  if (sweep && sweep.IsMap()) {
    if (const auto v = sweep["center"]) c.sweep.center = quantity_or(v, "sweep.center", Dimension::frequency, "larmor");
    if (const auto v = sweep["half_span"]) c.sweep.half_span = quantity(v, "sweep.half_span", Dimension::frequency);
    if (const auto v = sweep["points"]) c.sweep.points = count(v, "sweep.points");
    if (const auto v = sweep["b_nmr"]) c.sweep.b_nmr = quantity_or(v, "sweep.b_nmr", Dimension::field, "matched");
  }

  const auto base = root["baseline"];
  check_keys(base, "baseline", {"t_min", "t_max", "points", "b_nmr"});
  if (base && base.IsMap()) {
    if (const auto v = base["t_min"]) c.baseline.t_min = quantity(v, "baseline.t_min", Dimension::time);
    if (const auto v = base["t_max"]) c.baseline.t_max = quantity(v, "baseline.t_max", Dimension::time);
    if (const auto v = base["points"]) c.baseline.points = count(v, "baseline.points");
    if (const auto v = base["b_nmr"]) c.baseline.b_nmr = quantity_or(v, "baseline.b_nmr", Dimension::field, "matched");
  }

  const auto opt = root["optimize"];
  check_keys(opt, "optimize",
             {"b_min", "b_max", "b_points", "t_min", "t_max", "t_points", "refine_iterations", "transition"});
  if (opt && opt.IsMap()) {
    auto& o = c.optimize;
    if (const auto v = opt["b_min"]) o.b_min = quantity(v, "optimize.b_min", Dimension::field);
    if (const auto v = opt["b_max"]) o.b_max = quantity(v, "optimize.b_max", Dimension::field);
    if (const auto v = opt["b_points"]) o.b_points = count(v, "optimize.b_points");
    if (const auto v = opt["t_min"]) o.t_min_factor = number(v, "optimize.t_min");
    if (const auto v = opt["t_max"]) o.t_max_factor = number(v, "optimize.t_max");
    if (const auto v = opt["t_points"]) o.t_points = count(v, "optimize.t_points");
    if (const auto v = opt["refine_iterations"]) o.refine_iterations = static_cast<int>(integer(v, "optimize.refine_iterations"));
    if (const auto v = opt["transition"]) o.transition = quantity_or(v, "optimize.transition", Dimension::frequency, "larmor");
  }

  const auto scan = root["scan"];
  check_keys(scan, "scan", {"r_max", "t2_nv"});
  if (scan && scan.IsMap()) {
    if (const auto v = scan["r_max"]) c.scan.r_max = quantity_list(v, "scan.r_max", Dimension::length);
    if (const auto v = scan["t2_nv"]) c.scan.t2_nv = quantity_list(v, "scan.t2_nv", Dimension::time);
  }

  const auto peaks = root["peaks"];
  check_keys(peaks, "peaks", {"min_height"});
  if (peaks && peaks.IsMap()) {
    if (const auto v = peaks["min_height"]) c.peaks.min_height = number(v, "peaks.min_height");
  }
  return c;
}

void set_path(YAML::Node node, const std::vector<std::string>& parts, std::size_t i, const YAML::Node& value,
              const std::string& text) {
  if (i + 1 == parts.size()) {
    node[parts[i]] = value;
    return;
  }
  YAML::Node child = node[parts[i]];
  if (!child || child.IsNull()) child = YAML::Node(YAML::NodeType::Map);
  if (!child.IsMap()) throw config_error(fmt::format("override '{}': '{}' is not a section", text, parts[i]));
  set_path(child, parts, i + 1, value, text);
}

void apply_override(YAML::Node& root, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw config_error(fmt::format("override '{}' is not KEY=VALUE", text));
  std::vector<std::string> parts;
  std::stringstream keys(text.substr(0, eq));
  for (std::string part; std::getline(keys, part, '.');) {
    if (part.empty()) throw config_error(fmt::format("override '{}' has an empty key segment", text));
    parts.push_back(part);
  }
  YAML::Node value;
  try {
    value = YAML::Load(text.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw config_error(fmt::format("override '{}': {}", text, e.msg));
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  set_path(root, parts, 0, value, text);
}

void check(std::vector<Violation>& out, bool ok, std::string field, std::string message) {
  if (!ok) out.push_back({std::move(field), std::move(message)});
}

json quantity_json(double v, Dimension d) { return format_quantity(v, d); }

json optional_json(const std::optional<double>& v, Dimension d, const char* keyword) {
  return v ? quantity_json(*v, d) : json(keyword);
}

}  // namespace

std::vector<SpinSite> molecule_sites_at(const SystemConfig& system, double r, const PhysicalConstants& constants) {
  const NuclearRelaxation relax{system.nuclear_t1, system.nuclear_t2};
  const auto& m = system.molecule;
  switch (m.kind) {
    case MoleculeChoice::proton:
      return {SpinSite{"H1", constants.gamma_proton, Vec3(0.0, 0.0, r), 0.5, relax.t1, relax.t2, true}};
    case MoleculeChoice::aldehyde:
      return builtin_molecule(MoleculeKind::aldehyde, r, m.azimuth, relax, {}, constants);
    case MoleculeChoice::hydroxymethyl:
      return builtin_molecule(MoleculeKind::hydroxymethyl, r, m.azimuth, relax, {}, constants);
    case MoleculeChoice::methyl:
      return builtin_molecule(MoleculeKind::methyl, r, m.azimuth, relax, {}, constants);
    case MoleculeChoice::custom:
      break;
  }
  throw config_error("a custom molecule has explicit positions and cannot be moved to a new distance");
}

std::vector<SpinSite> molecule_sites(const SystemConfig& system, const PhysicalConstants& constants) {
  if (system.molecule.kind != MoleculeChoice::custom) return molecule_sites_at(system, system.molecule.standoff, constants);
  std::vector<SpinSite> out;
  for (const auto& s : system.molecule.sites) {
    out.push_back({s.label, s.gamma.value_or(constants.gamma_proton), s.position, 0.5,
                   s.t1.value_or(system.nuclear_t1), s.t2.value_or(system.nuclear_t2), s.active});
  }
  return out;
}

SystemSpec to_system_spec(const RunConfig& c) {
  SystemSpec spec = default_system();
  spec.b0 = c.system.b0;
  spec.collection_c = c.system.collection_efficiency;
  spec.nv.t1 = c.system.nv_t1;
  spec.nv.t2 = c.system.nv_t2;
  spec.nuclei = molecule_sites(c.system, spec.constants);
  return spec;
}

std::vector<Violation> validate(const RunConfig& c) {
  std::vector<Violation> v;
  const auto& mol = c.system.molecule;
  if (mol.kind == MoleculeChoice::custom) {
    check(v, mol.sites.size() <= 16, "system.molecule.sites", "at most 16 sites");
  } else {
    check(v, mol.sites.empty(), "system.molecule.sites", "sites are only allowed for kind: custom");
    if (mol.kind == MoleculeChoice::proton) {
      check(v, mol.standoff > 1e-10 && std::isfinite(mol.standoff), "system.molecule.standoff", "must exceed 0.1 nm");
    } else {
      check(v, mol.standoff >= 1e-9 && mol.standoff <= 50e-9, "system.molecule.standoff", "must lie in [1 nm, 50 nm]");
    }
  }
  if (v.empty()) {
    // Report library field names as the config keys that set them.
    for (auto& x : validate(to_system_spec(c))) {
      std::string field = x.field;
      if (field == "collection_c") field = "collection_efficiency";
      if (field.starts_with("nuclei")) field = "molecule." + field;
      v.push_back({"system." + field, x.message});
    }
  }

  const auto& s = c.sequence;
  check(v, s.t_p > 0.0 && std::isfinite(s.t_p), "sequence.t_p", "must be positive");
  check(v, s.n >= 1, "sequence.n", "must be at least 1");

  const auto& e = c.evolution;
  check(v, e.max_step > 0.0, "evolution.max_step", "must be positive");
  check(v, e.tolerance > 0.0 && e.tolerance <= 1e-3, "evolution.tolerance", "must lie in (0, 1e-3]");
  check(v, c.model.frame != Frame::lab_nuclear || e.backend == Backend::stepped, "evolution.backend",
        "the lab_nuclear frame needs the stepped backend");

  const auto& w = c.sweep;
  check(v, w.points >= 1, "sweep.points", "must be at least 1");
  check(v, w.points == 1 || w.half_span > 0.0, "sweep.half_span", "must be positive for more than one point");
  check(v, !w.center || *w.center > 0.0, "sweep.center", "must be positive");
  check(v, !w.b_nmr || *w.b_nmr >= 0.0, "sweep.b_nmr", "must be nonnegative");

  const auto& b = c.baseline;
  check(v, b.t_min >= 0.0 && std::isfinite(b.t_max), "baseline.t_min", "must be nonnegative");
  check(v, b.points >= 1, "baseline.points", "must be at least 1");
  check(v, b.points == 1 ? b.t_max >= b.t_min : b.t_max > b.t_min, "baseline.t_max", "must exceed t_min");
  check(v, !b.b_nmr || *b.b_nmr >= 0.0, "baseline.b_nmr", "must be nonnegative");

  const auto& o = c.optimize;
  check(v, o.b_min > 0.0 && o.b_max >= o.b_min, "optimize.b_min", "need 0 < b_min <= b_max");
  check(v, o.b_points >= 1, "optimize.b_points", "must be at least 1");
  check(v, o.t_min_factor > 0.0 && o.t_max_factor >= o.t_min_factor, "optimize.t_min", "need 0 < t_min <= t_max");
  check(v, o.t_points >= 1, "optimize.t_points", "must be at least 1");
  check(v, o.refine_iterations >= 0, "optimize.refine_iterations", "must be nonnegative");
  check(v, !o.transition || *o.transition > 0.0, "optimize.transition", "must be positive");

  check(v, !c.scan.r_max.empty(), "scan.r_max", "must not be empty");
  for (double r : c.scan.r_max) check(v, r > 0.0, "scan.r_max", "values must be positive");
  check(v, !c.scan.t2_nv.empty(), "scan.t2_nv", "must not be empty");
  for (double t : c.scan.t2_nv) check(v, t > 0.0, "scan.t2_nv", "values must be positive");

  check(v, c.peaks.min_height > 0.0, "peaks.min_height", "must be positive");
  return v;
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw config_error(where(e.mark) + ": " + e.msg);
  }
  for (const auto& o : overrides) apply_override(root, o);
  RunConfig c;
  try {
    c = read(root);
  } catch (const YAML::Exception& e) {
    throw config_error(where(e.mark) + ": " + e.msg);
  }
  if (auto v = validate(c); !v.empty()) throw validation_error(std::move(v));
  return c;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(fmt::format("cannot read config '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw io_error(fmt::format("error reading config '{}'", path.string()));
  return parse_config(buf.str(), overrides);
}

SweepPlan to_sweep_plan(const RunConfig& c, const ValidatedSystem& system) {
  SweepPlan plan;
  plan.omega_grid = default_omega_grid(c.sweep.center.value_or(reference_frequency(system)), c.sweep.half_span,
                                       c.sweep.points);
  plan.b_nmr = c.sweep.b_nmr;
  plan.seq = c.sequence;
  plan.model = c.model;
  plan.evolution = c.evolution;
  return plan;
}

OptimizerSettings to_optimizer_settings(const RunConfig& c) {
  const auto& o = c.optimize;
  OptimizerSettings s;
  s.model = c.model;
  s.kind = c.sequence.kind;
  s.n = c.sequence.n;
  s.transition_omega = o.transition;
  s.b_grid.resize(o.b_points);
  const double lo = std::log10(o.b_min), hi = std::log10(o.b_max);
  for (std::size_t i = 0; i < o.b_points; ++i) {
    const double f = o.b_points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(o.b_points - 1);
    s.b_grid[i] = std::pow(10.0, lo + (hi - lo) * f);
  }
  s.t_min_factor = o.t_min_factor;
  s.t_max_factor = o.t_max_factor;
  s.t_points = o.t_points;
  s.refine_iterations = o.refine_iterations;
  s.evolution = c.evolution;
  return s;
}

json to_json(const RunConfig& c) {
  using D = Dimension;
  const auto& sys = c.system;
  json molecule = {{"kind", name_of(sys.molecule.kind, molecule_names)},
                   {"standoff", quantity_json(sys.molecule.standoff, D::length)},
                   {"azimuth", quantity_json(sys.molecule.azimuth, D::angle)}};
  if (sys.molecule.kind == MoleculeChoice::custom) {
    json sites = json::array();
    for (const auto& s : sys.molecule.sites) {
      json site = {{"label", s.label},
                   {"position",
                    {quantity_json(s.position.x(), D::length), quantity_json(s.position.y(), D::length),
                     quantity_json(s.position.z(), D::length)}},
                   {"active", s.active}};
      if (s.gamma) site["gamma"] = *s.gamma;
      if (s.t1) site["t1"] = quantity_json(*s.t1, D::time);
      if (s.t2) site["t2"] = quantity_json(*s.t2, D::time);
      sites.push_back(site);
    }
    molecule["sites"] = sites;
  }
  json scan_r = json::array(), scan_t = json::array();
  for (double r : c.scan.r_max) scan_r.push_back(quantity_json(r, D::length));
  for (double t : c.scan.t2_nv) scan_t.push_back(quantity_json(t, D::time));
  return {
      {"system",
       {{"b0", quantity_json(sys.b0, D::field)},
        {"collection_efficiency", sys.collection_efficiency},
        {"nv", {{"t1", quantity_json(sys.nv_t1, D::time)}, {"t2", quantity_json(sys.nv_t2, D::time)}}},
        {"nuclear", {{"t1", quantity_json(sys.nuclear_t1, D::time)}, {"t2", quantity_json(sys.nuclear_t2, D::time)}}},
        {"molecule", molecule}}},
      {"model",
       {{"frame", name_of(c.model.frame, frame_names)},
        {"nv_coupling", name_of(c.model.nv_coupling, coupling_names)},
        {"nuclear_dipolar", c.model.include_nuclear_dipolar}}},
      {"sequence",
       {{"kind", name_of(c.sequence.kind, sequence_names)},
        {"n", c.sequence.n},
        {"t_p", quantity_json(c.sequence.t_p, D::time)}}},
      {"evolution",
       {{"backend", name_of(c.evolution.backend, backend_names)},
        {"max_step", quantity_json(c.evolution.max_step, D::time)},
        {"tolerance", c.evolution.tolerance}}},
      {"sweep",
       {{"center", optional_json(c.sweep.center, D::frequency, "larmor")},
        {"half_span", quantity_json(c.sweep.half_span, D::frequency)},
        {"points", c.sweep.points},
        {"b_nmr", optional_json(c.sweep.b_nmr, D::field, "matched")}}},
      {"baseline",
       {{"t_min", quantity_json(c.baseline.t_min, D::time)},
        {"t_max", quantity_json(c.baseline.t_max, D::time)},
        {"points", c.baseline.points},
        {"b_nmr", optional_json(c.baseline.b_nmr, D::field, "matched")}}},
      {"optimize",
       {{"b_min", quantity_json(c.optimize.b_min, D::field)},
        {"b_max", quantity_json(c.optimize.b_max, D::field)},
        {"b_points", c.optimize.b_points},
        {"t_min", c.optimize.t_min_factor},
        {"t_max", c.optimize.t_max_factor},
        {"t_points", c.optimize.t_points},
        {"refine_iterations", c.optimize.refine_iterations},
        {"transition", optional_json(c.optimize.transition, D::frequency, "larmor")}}},
      {"scan", {{"r_max", scan_r}, {"t2_nv", scan_t}}},
      {"peaks", {{"min_height", c.peaks.min_height}}},
  };
}

std::string config_hash(const RunConfig& config, const std::string& salt) {
  const std::string text = salt + "\n" + to_json(config).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace nvnmr
