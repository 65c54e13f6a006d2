// Copyright 2026 The selforg Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace selforg {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BasisMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NegativeProduct : public Error {
 public:
  using Error::Error;
};

// The two lowest lattice bands are not separated from the rest of the spectrum.
class DegenerateBand : public Error {
 public:
  using Error::Error;
};

class StepSizeFailure : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class ToleranceFailure : public Error {
 public:
  using Error::Error;
};

class UndefinedRelaxation : public Error {
 public:
  using Error::Error;
};

class FitFailure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Wraps a failure inside one Monte Carlo trajectory of an ensemble.
class TrajectoryError : public Error {
 public:
  TrajectoryError(std::uint64_t traj_index, const std::string& what)
      : Error("trajectory " + std::to_string(traj_index) + ": " + what),
        traj_index_(traj_index) {}

  std::uint64_t traj_index() const noexcept { return traj_index_; }

 private:
  std::uint64_t traj_index_;
};

}  // namespace selforg
