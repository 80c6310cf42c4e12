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

// Physical quantities in configuration files.
//
// A quantity is either a plain number, read in the dimension's default
// human unit, or a string "<number> <unit>". Internally everything is SI with
// angular frequencies in rad/s; `format_quantity` writes the SI form with
// enough digits that parsing it back gives the identical double.

#pragma once

#include <string>
#include <string_view>

namespace nvnmr {

enum class Dimension { length, field, time, frequency, angle };

/// Default unit for plain numbers: nm, mT, ms, kHz, deg.
std::string_view default_unit(Dimension dim);

/// SI unit written by format_quantity: m, T, s, rad/s, rad.
std::string_view si_unit(Dimension dim);

/// Multiplier taking `unit` to SI for `dim`; throws config_error if the unit
/// does not belong to that dimension. Frequencies in Hz pick up 2 pi.
double unit_factor(Dimension dim, std::string_view unit);

/// "10 mT" -> 0.01. "inf" is accepted for times. Throws config_error.
double parse_quantity(std::string_view text, Dimension dim);
double from_plain_number(double value, Dimension dim);

/// Shortest decimal that round-trips, followed by the SI unit.
std::string format_quantity(double si_value, Dimension dim);

/// Shortest round-trip decimal representation of a double.
std::string format_number(double value);

}  // namespace nvnmr
