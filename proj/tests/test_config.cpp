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

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "nvnmr/config.hpp"
#include "nvnmr/errors.hpp"
#include "nvnmr/units.hpp"

using namespace nvnmr;
using std::numbers::pi;

namespace {

std::string message_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const config_error& e) {
    return e.what();
  }
  return "";
}

RunConfig round_trip(const RunConfig& c) { return parse_config(to_json(c).dump()); }

}  // namespace

TEST_CASE("quantities") {
  CHECK(parse_quantity("10 mT", Dimension::field) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(parse_quantity("10", Dimension::field) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(parse_quantity("5", Dimension::length) == doctest::Approx(5e-9).epsilon(1e-15));
  CHECK(parse_quantity("1.78 A", Dimension::length) == doctest::Approx(1.78e-10).epsilon(1e-15));
  CHECK(parse_quantity("1", Dimension::time) == 1e-3);
  CHECK(parse_quantity("250 us", Dimension::time) == doctest::Approx(250e-6).epsilon(1e-15));
  CHECK(parse_quantity("250 µs", Dimension::time) == doctest::Approx(250e-6).epsilon(1e-15));
  CHECK(std::isinf(parse_quantity("inf", Dimension::time)));
  CHECK(parse_quantity("425.8 kHz", Dimension::frequency) == doctest::Approx(2 * pi * 425.8e3).epsilon(1e-15));
  CHECK(parse_quantity("60", Dimension::frequency) == doctest::Approx(2 * pi * 6e4).epsilon(1e-15));
  CHECK(parse_quantity("1e6 rad/s", Dimension::frequency) == 1e6);
  CHECK(parse_quantity("90 deg", Dimension::angle) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(parse_quantity("90", Dimension::angle) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(parse_quantity("  2 T ", Dimension::field) == 2.0);

  CHECK_THROWS_AS(parse_quantity("10 ms", Dimension::field), config_error);
  CHECK_THROWS_AS(parse_quantity("fast", Dimension::time), config_error);
  CHECK_THROWS_AS(parse_quantity("inf", Dimension::length), config_error);
  CHECK_THROWS_AS(parse_quantity("", Dimension::length), config_error);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> expo(-15, 6), mant(-1, 1);
  for (auto dim : {Dimension::length, Dimension::field, Dimension::time, Dimension::frequency, Dimension::angle}) {
    for (int i = 0; i < 500; ++i) {
      const double v = mant(rng) * std::pow(10.0, expo(rng));
      CHECK(parse_quantity(format_quantity(v, dim), dim) == v);
    }
  }
  CHECK(format_quantity(std::numeric_limits<double>::infinity(), Dimension::time) == "inf");
}

TEST_CASE("empty config gives the defaults") {
  const RunConfig c = parse_config("");
  CHECK(c == RunConfig{});
  CHECK(parse_config("{}") == c);
  CHECK(c.system.b0 == 0.01);
  CHECK(c.system.collection_efficiency == 0.05);
  CHECK(c.system.nv_t1 == 5e-3);
  CHECK(c.system.nv_t2 == 1e-3);
  CHECK(c.system.nuclear_t1 == 10e-3);
  CHECK(c.system.nuclear_t2 == 1e-3);
  CHECK(c.sweep.points == 301);
  CHECK(to_system_spec(c) == default_system());
  CHECK(validate(c).empty());
}

TEST_CASE("human units") {
  const RunConfig c = parse_config(R"(
system:
  b0: 10 mT
  nv: {t1: 5, t2: 0.5 ms}
  molecule: {kind: methyl, standoff: 4 nm, azimuth: 30 deg}
sequence: {kind: cpmg, n: 4, t_p: 2}
sweep: {center: 425 kHz, half_span: 20, points: 41, b_nmr: 30 uT}
)");
  CHECK(c.system.b0 == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(c.system.nv_t2 == doctest::Approx(0.5e-3).epsilon(1e-15));
  CHECK(c.system.molecule.kind == MoleculeChoice::methyl);
  CHECK(c.system.molecule.standoff == doctest::Approx(4e-9).epsilon(1e-15));
  CHECK(c.system.molecule.azimuth == doctest::Approx(pi / 6).epsilon(1e-15));
  CHECK(c.sequence == PulseSequence{SequenceKind::cpmg, 4, 2e-3});
  CHECK(*c.sweep.center == doctest::Approx(2 * pi * 425e3).epsilon(1e-15));
  CHECK(c.sweep.half_span == doctest::Approx(2 * pi * 20e3).epsilon(1e-15));
  CHECK(*c.sweep.b_nmr == doctest::Approx(30e-6).epsilon(1e-15));
  CHECK(to_system_spec(c).nuclei.size() == 3);
}

TEST_CASE("errors carry locations and field names") {
  CHECK(message_of("system:\n  b0: 10 mT\n  bogus: 1\n").find("line 3, column 3") != std::string::npos);
  CHECK(message_of("system:\n  b0: 10 mT\n  bogus: 1\n").find("system.bogus") != std::string::npos);
  CHECK(message_of("sweeps: {}\n").find("unknown key 'sweeps'") != std::string::npos);
  CHECK(message_of("system: {b0: [1, 2}\n").find("line 1") != std::string::npos);
  CHECK(message_of("sequence: {kind: spin_lock}\n").find("sequence.kind") != std::string::npos);
  CHECK(message_of("sequence: {n: 1.5}\n").find("sequence.n") != std::string::npos);
  CHECK(message_of("system: {b0: 10 ms}\n").find("line 1") != std::string::npos);
  CHECK(message_of("model: {nuclear_dipolar: maybe}\n").find("true or false") != std::string::npos);

  try {
    parse_config("system:\n  nv: {t1: 1 ms, t2: 5 ms}\n  collection_efficiency: 2\n");
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    std::set<std::string> fields;
    for (const auto& v : e.violations()) fields.insert(v.field);
    CHECK(fields == std::set<std::string>{"system.nv.t2", "system.collection_efficiency"});
  }
  try {
    parse_config("model: {frame: lab_nuclear}\nsequence: {t_p: 0}\npeaks: {min_height: 0}\n");
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    std::vector<std::string> fields;
    for (const auto& v : e.violations()) fields.push_back(v.field);
    CHECK(fields == std::vector<std::string>{"sequence.t_p", "evolution.backend", "peaks.min_height"});
  }
  CHECK_THROWS_AS(parse_config("system: {molecule: {kind: aldehyde, standoff: 0.5 nm}}"), validation_error);
  CHECK_THROWS_AS(parse_config("system: {molecule: {kind: methyl, sites: [{position: [0, 0, 5]}]}}"),
                  validation_error);
  try {
    parse_config("system:\n  molecule:\n    kind: custom\n    sites: [{position: [0, 0, 5]}, {position: [0, 0, 5]}]\n");
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    REQUIRE(e.violations().size() == 1);
    CHECK(e.violations()[0].field.starts_with("system.molecule.nuclei[0]"));
  }
  CHECK_THROWS_AS(load_config("/nonexistent/run.yaml"), io_error);
}

TEST_CASE("overrides") {
  const RunConfig c = parse_config("sweep: {points: 101}\n", {"sweep.points=11", "scan.r_max=[3, 4]",
                                                              "peaks.min_height=0.01", "system.molecule.kind=methyl"});
  CHECK(c.sweep.points == 11);
  CHECK(c.scan.r_max.size() == 2);
  CHECK(c.scan.r_max[1] == doctest::Approx(4e-9).epsilon(1e-15));
  CHECK(c.peaks.min_height == 0.01);
  CHECK(c.system.molecule.kind == MoleculeChoice::methyl);
  CHECK(parse_config("", {"system.b0=20 mT"}).system.b0 == doctest::Approx(0.02).epsilon(1e-15));

  CHECK(message_of("", {"sweep.pointz=3"}).find("sweep.pointz") != std::string::npos);
  CHECK(message_of("", {"sweep.points"}).find("KEY=VALUE") != std::string::npos);
  CHECK(message_of("sweep: {points: 3}", {"sweep.points.x=1"}).find("not a section") != std::string::npos);
  CHECK_THROWS_AS(parse_config("", {"sweep.points=-2"}), config_error);
}

TEST_CASE("molecule placement") {
  RunConfig c;
  auto sites = molecule_sites(c.system);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].position == Vec3(0, 0, 5e-9));
  CHECK(molecule_sites_at(c.system, 3e-9)[0].position == Vec3(0, 0, 3e-9));

  c = parse_config(R"(
system:
  nuclear: {t1: 8 ms, t2: 2 ms}
  molecule:
    kind: custom
    sites:
      - {label: Ha, position: [0, 0, 5]}
      - {label: F, position: [0.2, 0, 5], gamma: 2.518e8, t2: 0.5 ms, active: false}
)");
  sites = molecule_sites(c.system);
  REQUIRE(sites.size() == 2);
  CHECK(sites[0].label == "Ha");
  CHECK(sites[0].gamma == PhysicalConstants{}.gamma_proton);
  CHECK(sites[0].t1 == 8e-3);
  CHECK(sites[1].gamma == 2.518e8);
  CHECK(sites[1].t2 == 0.5e-3);
  CHECK(sites[1].t1 == 8e-3);
  CHECK_FALSE(sites[1].active);
  CHECK_THROWS_AS(molecule_sites_at(c.system, 3e-9), config_error);
}

TEST_CASE("resolved config round-trips through its JSON form") {
  CHECK(round_trip(RunConfig{}) == RunConfig{});
  const RunConfig custom = parse_config(R"(
system:
  b0: 0.0123456789 T
  collection_efficiency: 0.0731
  nv: {t1: inf, t2: 0.77 ms}
  nuclear: {t1: 12.5 ms, t2: 0.3 ms}
  molecule:
    kind: custom
    azimuth: 17 deg
    sites:
      - {label: H1, position: [0.1, -0.2, 4.4], t1: inf}
      - {label: H2, position: [0.25, 0.05, 4.5], gamma: 267522187.44, active: false}
model: {frame: lab_nuclear, nv_coupling: zz_only, nuclear_dipolar: false}
sequence: {kind: uhrig, n: 3, t_p: 0.37 ms}
evolution: {backend: stepped, max_step: 10 ns, tolerance: 1e-7}
sweep: {center: 425.77 kHz, half_span: 33.3, points: 7, b_nmr: 0.021 mT}
baseline: {t_min: 0.1, t_max: 2.9, points: 9, b_nmr: 5 uT}
optimize: {b_min: 2 uT, b_max: 0.3 mT, b_points: 5, t_min: 0.1, t_max: 2, t_points: 6, refine_iterations: 3, transition: 2675000 rad/s}
scan: {r_max: [2.5, 3.5], t2_nv: [0.1, 0.2]}
peaks: {min_height: 0.002}
)");
  CHECK(round_trip(custom) == custom);
  CHECK(round_trip(round_trip(custom)) == custom);
  CHECK(to_json(round_trip(custom)) == to_json(custom));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    RunConfig c;
    c.system.b0 = 0.001 + 0.1 * u(rng);
    c.system.collection_efficiency = 0.01 + 0.9 * u(rng);
    c.system.nv_t1 = 5e-3 * (1 + u(rng));
    c.system.nv_t2 = 1e-3 * (0.1 + u(rng));
    c.system.molecule.kind = static_cast<MoleculeChoice>(i % 4);
    c.system.molecule.standoff = (2 + 10 * u(rng)) * 1e-9;
    c.system.molecule.azimuth = 6 * u(rng);
    c.sequence = {static_cast<SequenceKind>(i % 3), 1 + i % 5, 1e-4 + 2e-3 * u(rng)};
    if (i % 2) c.sweep.center = 2 * pi * 4e5 * (1 + u(rng));
    c.sweep.half_span = 2 * pi * 1e4 * (1 + u(rng));
    c.optimize.t_max_factor = 1 + u(rng);
    c.scan.t2_nv = {u(rng) * 1e-3 + 1e-5};
    REQUIRE(validate(c).empty());
    CHECK(round_trip(c) == c);
  }
}

TEST_CASE("config hash") {
  const RunConfig a;
  RunConfig b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.sweep.points = 300;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a, "spectrum") != config_hash(a, "peaks"));
  CHECK(config_hash(round_trip(a), "x") == config_hash(a, "x"));
}

TEST_CASE("derived plans") {
  RunConfig c = parse_config("sweep: {points: 5, half_span: 2}\noptimize: {b_points: 13}\n");
  const auto sys = validated(to_system_spec(c));
  const auto plan = to_sweep_plan(c, sys);
  REQUIRE(plan.omega_grid.size() == 5);
  CHECK(plan.omega_grid[2] == doctest::Approx(reference_frequency(sys)));
  CHECK(plan.omega_grid[4] - plan.omega_grid[0] == doctest::Approx(2 * pi * 4e3));
  const auto s = to_optimizer_settings(c);
  const auto ref = default_b_grid();
  REQUIRE(s.b_grid.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(s.b_grid[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  const auto req = make_request(sys, s);
  const auto tg = default_t_grid(1e-3);
  REQUIRE(req.t_grid.size() == tg.size());
  for (std::size_t i = 0; i < tg.size(); ++i) CHECK(req.t_grid[i] == doctest::Approx(tg[i]).epsilon(1e-12));
}
