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

#include <iostream>
#include <string>
#include <vector>

#include "selforg/error.hpp"
#include "selforg/runner.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (const auto& a : args)
    if (a == "-h" || a == "--help") {
      std::cout << "usage: selforg [--config FILE] [--scenario single-full|single-bh|two-bh|two-full]\n"
                   "  [--v0 X] [--u0 X]... [--kappa X] [--delta-c X | --resonance]\n"
                   "  [--initial right|left|mi|sf] [--ntraj N] [--seed S] [--tmax T]\n"
                   "  [--dt-record DT] [--m-cutoff M] [--nmax N] [--solver mcwf|me|both]\n"
                   "  [--out DIR] [--format csv|json] [--allow-large] [--threads N]\n";
      return 0;
    }
  try {
    return selforg::run(selforg::parse_config(args));
  } catch (const selforg::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
