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

// Command-line scenarios: configuration, sweeps over U0 and result files.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selforg/params.hpp"

namespace selforg {

enum class Scenario { single_full, single_bh, two_bh, two_full };
enum class Solver { mcwf, me, both };
enum class OutputFormat { csv, json };
enum class InitialChoice { right, left, mi, sf };

struct RunConfig {
  Scenario scenario = Scenario::single_bh;
  double V0 = -10.0;
  double kappa = 10.0;
  std::optional<double> DeltaC;  ///< unset: resonance rule
  bool resonance = false;        ///< resonance rule requested explicitly
  std::vector<double> u0_list{0.0};
  std::optional<InitialChoice> initial;  ///< default: right (one particle), mi (two)
  std::size_t n_traj = 100;
  std::uint64_t seed = 1;
  double t_max = 100.0;
  double dt_record = 0.5;
  std::optional<int> M;
  std::optional<int> n_max;
  Solver solver = Solver::both;
  std::string out_path = "selforg-out";
  OutputFormat format = OutputFormat::csv;
  bool allow_large = false;
  unsigned threads = 1;

  int particles() const;
  InitialChoice resolved_initial() const;
  /// Parameters of one sweep point.
  ModelParams model(double U0) const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

std::string to_string(Scenario s);
std::string to_string(Solver s);
std::string to_string(OutputFormat f);
std::string to_string(InitialChoice c);

/// Flat key = value document; keys mirror the long flags without dashes
/// (u0 may repeat or hold a comma separated list, '#' starts a comment).
/// Unknown keys and malformed values are rejected with their line number.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});

/// Command-line flags (without the program name). A --config file is read
/// first and the remaining flags override it.
RunConfig parse_config(const std::vector<std::string>& args);

/// Runs every sweep point and writes the result files. Returns 0 when all
/// points succeeded, 1 when some failed (their entries are marked in the
/// manifest). Throws ConfigError for invalid configurations.
int run(const RunConfig& config);

/// Product dimension of the scenario's Hilbert space for one sweep point.
std::size_t hilbert_dimension(const RunConfig& config, double U0);

}  // namespace selforg
