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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nvnmr {

/// Bad user input: malformed config, unknown key, failed validation.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation could not produce a result (integration failure, nothing detectable).
class computation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class undetectable_error : public computation_error {
 public:
  using computation_error::computation_error;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Violation {
  std::string field;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Carries every violation found, not just the first.
class validation_error : public config_error {
 public:
  explicit validation_error(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace nvnmr
