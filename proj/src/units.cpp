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

#include "nvnmr/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <utility>

#include <fmt/format.h>

#include "nvnmr/errors.hpp"

namespace nvnmr {
namespace {

using Unit = std::pair<std::string_view, double>;

constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr std::array<Unit, 9> length_units{{{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"µm", 1e-6},
                                            {"nm", 1e-9}, {"A", 1e-10}, {"Å", 1e-10}, {"pm", 1e-12}}};
constexpr std::array<Unit, 6> field_units{{{"T", 1.0}, {"mT", 1e-3}, {"uT", 1e-6}, {"µT", 1e-6}, {"nT", 1e-9}, {"G", 1e-4}}};
constexpr std::array<Unit, 5> time_units{{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"µs", 1e-6}, {"ns", 1e-9}}};
constexpr std::array<Unit, 7> frequency_units{{{"rad/s", 1.0}, {"krad/s", 1e3}, {"Mrad/s", 1e6}, {"Hz", two_pi},
                                               {"kHz", two_pi * 1e3}, {"MHz", two_pi * 1e6}, {"GHz", two_pi * 1e9}}};
constexpr std::array<Unit, 2> angle_units{{{"rad", 1.0}, {"deg", std::numbers::pi / 180.0}}};

std::span<const Unit> table(Dimension dim) {
  switch (dim) {
    case Dimension::length: return length_units;
    case Dimension::field: return field_units;
    case Dimension::time: return time_units;
    case Dimension::frequency: return frequency_units;
    case Dimension::angle: return angle_units;
  }
  return {};
}

std::string_view dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::length: return "length";
    case Dimension::field: return "magnetic field";
    case Dimension::time: return "time";
    case Dimension::frequency: return "frequency";
    case Dimension::angle: return "angle";
  }
  return "?";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view default_unit(Dimension dim) {
  switch (dim) {
    case Dimension::length: return "nm";
    case Dimension::field: return "mT";
    case Dimension::time: return "ms";
    case Dimension::frequency: return "kHz";
    case Dimension::angle: return "deg";
  }
  return "";
}

std::string_view si_unit(Dimension dim) {
  switch (dim) {
    case Dimension::length: return "m";
    case Dimension::field: return "T";
    case Dimension::time: return "s";
    case Dimension::frequency: return "rad/s";
    case Dimension::angle: return "rad";
  }
  return "";
}

double unit_factor(Dimension dim, std::string_view unit) {
  for (const auto& [name, factor] : table(dim)) {
    if (name == unit) return factor;
  }
  throw config_error(fmt::format("unknown {} unit '{}'", dimension_name(dim), unit));
}

double from_plain_number(double value, Dimension dim) { return value * unit_factor(dim, default_unit(dim)); }

double parse_quantity(std::string_view text, Dimension dim) {
  const std::string_view s = trim(text);
  if (dim == Dimension::time && (s == "inf" || s == "infinity")) return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr == s.data()) {
    throw config_error(fmt::format("cannot read a {} from '{}'", dimension_name(dim), text));
  }
  const std::string_view unit = trim(s.substr(static_cast<std::size_t>(ptr - s.data())));
  if (dim == Dimension::time && unit == "s" && std::isinf(value)) return value;
  if (!std::isfinite(value)) throw config_error(fmt::format("non-finite {} '{}'", dimension_name(dim), text));
  if (unit.empty()) return from_plain_number(value, dim);
  return value * unit_factor(dim, unit);
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{}", value);  // shortest round-trip form
}

std::string format_quantity(double si_value, Dimension dim) {
  if (std::isinf(si_value) && dim == Dimension::time) return "inf";
  return format_number(si_value) + " " + std::string(si_unit(dim));
}

}  // namespace nvnmr
