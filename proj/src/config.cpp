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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "selforg/error.hpp"
#include "selforg/runner.hpp"

namespace selforg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <class E>
E parse_enum(const std::string& field, const std::string& value,
             const std::map<std::string, E>& table) {
  const auto it = table.find(value);
  if (it == table.end()) {
    std::string allowed;
    for (const auto& [k, v] : table) allowed += (allowed.empty() ? "" : "|") + k;
    throw ConfigError(field + ": '" + value + "' is not one of " + allowed);
  }
  return it->second;
}

const std::map<std::string, Scenario> scenarios{{"single-full", Scenario::single_full},
                                                {"single-bh", Scenario::single_bh},
                                                {"two-bh", Scenario::two_bh},
                                                {"two-full", Scenario::two_full}};
const std::map<std::string, Solver> solvers{
    {"mcwf", Solver::mcwf}, {"me", Solver::me}, {"both", Solver::both}};
const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::csv},
                                                  {"json", OutputFormat::json}};
const std::map<std::string, InitialChoice> initials{{"right", InitialChoice::right},
                                                    {"left", InitialChoice::left},
                                                    {"mi", InitialChoice::mi},
                                                    {"sf", InitialChoice::sf}};

template <class E>
std::string enum_name(E e, const std::map<std::string, E>& table) {
  for (const auto& [k, v] : table)
    if (v == e) return k;
  return "?";
}

double parse_double(const std::string& field, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty() || !std::isfinite(x))
    throw ConfigError(field + ": '" + v + "' is not a finite number");
  return x;
}

long long parse_int(const std::string& field, const std::string& v) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw ConfigError(field + ": '" + v + "' is not an integer");
  return x;
}

bool parse_bool(const std::string& field, const std::string& v) {
  std::string l = v;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "true" || l == "1" || l == "yes" || l == "on") return true;
  if (l == "false" || l == "0" || l == "no" || l == "off") return false;
  throw ConfigError(field + ": '" + v + "' is not a boolean");
}

// Applies one key/value pair; returns false for unknown keys.
bool apply(RunConfig& c, const std::string& key, const std::string& v, bool& u0_reset) {
  if (key == "scenario") c.scenario = parse_enum(key, v, scenarios);
  else if (key == "v0") c.V0 = parse_double(key, v);
  else if (key == "u0") {
    if (!u0_reset) c.u0_list.clear(), u0_reset = true;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) c.u0_list.push_back(parse_double(key, trim(item)));
  } else if (key == "kappa") c.kappa = parse_double(key, v);
  else if (key == "delta-c") c.DeltaC = parse_double(key, v);
  else if (key == "resonance") c.resonance = parse_bool(key, v);
  else if (key == "initial") c.initial = parse_enum(key, v, initials);
  else if (key == "ntraj") {
    const long long n = parse_int(key, v);
    if (n < 1) throw ConfigError("ntraj: must be >= 1");
    c.n_traj = static_cast<std::size_t>(n);
  } else if (key == "seed") {
    const long long s = parse_int(key, v);
    if (s < 0) throw ConfigError("seed: must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "tmax") c.t_max = parse_double(key, v);
  else if (key == "dt-record") c.dt_record = parse_double(key, v);
  else if (key == "m-cutoff") c.M = static_cast<int>(parse_int(key, v));
  else if (key == "nmax") c.n_max = static_cast<int>(parse_int(key, v));
  else if (key == "solver") c.solver = parse_enum(key, v, solvers);
  else if (key == "out") c.out_path = v;
  else if (key == "format") c.format = parse_enum(key, v, formats);
  else if (key == "allow-large") c.allow_large = parse_bool(key, v);
  else if (key == "threads") {
    const long long t = parse_int(key, v);
    if (t < 0) throw ConfigError("threads: must be >= 0");
    c.threads = static_cast<unsigned>(t);
  } else return false;
  return true;
}

}  // namespace

std::string to_string(Scenario s) { return enum_name(s, scenarios); }
std::string to_string(Solver s) { return enum_name(s, solvers); }
std::string to_string(OutputFormat f) { return enum_name(f, formats); }
std::string to_string(InitialChoice c) { return enum_name(c, initials); }

int RunConfig::particles() const {
  return scenario == Scenario::single_bh || scenario == Scenario::single_full ? 1 : 2;
}

InitialChoice RunConfig::resolved_initial() const {
  if (initial) return *initial;
  return particles() == 1 ? InitialChoice::right : InitialChoice::mi;
}

ModelParams RunConfig::model(double U0) const {
  ModelParams p = ModelParams::defaults(particles(), U0);
  p.V0 = V0;
  p.kappa = kappa;
  p.DeltaC = DeltaC;
  if (M) p.M = *M;
  p.n_max = n_max ? *n_max : default_fock_cutoff(p);
  return p;
}

void RunConfig::validate() const {
  if (DeltaC && resonance)
    throw ConfigError("delta-c: an explicit cavity detuning conflicts with resonance");
  if (u0_list.empty()) throw ConfigError("u0: the sweep list is empty");
  for (double u : u0_list)
    if (!std::isfinite(u) || u > 0.0) throw ConfigError("u0: values must be finite and <= 0");
  if (!(t_max > 0.0)) throw ConfigError("tmax: must be > 0");
  if (!(dt_record > 0.0) || dt_record > t_max)
    throw ConfigError("dt-record: must be > 0 and <= tmax");
  if (n_traj < 1) throw ConfigError("ntraj: must be >= 1");
  if (!(kappa > 0.0)) throw ConfigError("kappa: must be > 0");
  if (!(V0 < 0.0)) throw ConfigError("v0: lattice depth must be negative");
  const auto init = resolved_initial();
  if (particles() == 1 && (init == InitialChoice::mi || init == InitialChoice::sf))
    throw ConfigError("initial: '" + to_string(init) + "' needs a two-particle scenario");
  if (M && *M < 8) throw ConfigError("m-cutoff: must be >= 8");
  if (n_max && *n_max < 4) throw ConfigError("nmax: must be >= 4");
  for (double u : u0_list) {
    try {
      model(u).validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("u0 = ") + std::to_string(u) + ": " + e.what());
    }
  }
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool u0_reset = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (!apply(base, key, value, u0_reset))
        throw ConfigError("unknown key '" + key + "'");
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"selforg"};
  std::map<std::string, std::string> single;
  std::vector<std::string> u0_values;
  std::string config_file;
  bool resonance = false, allow_large = false;
  const std::vector<std::string> keys{"scenario", "v0",        "kappa",    "delta-c", "initial",
                                      "ntraj",    "seed",      "tmax",     "dt-record",
                                      "m-cutoff", "nmax",      "solver",   "out",
                                      "format",   "threads"};
  for (const auto& k : keys) app.add_option("--" + k, single[k]);
  app.add_option("--u0", u0_values)->allow_extra_args(false)->take_all();
  app.add_flag("--resonance", resonance);
  app.add_flag("--allow-large", allow_large);
  app.add_option("--config", config_file);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("command line: ") + e.what());
  }

  RunConfig c;
  if (!config_file.empty()) {
    std::ifstream f(config_file);
    if (!f) throw ConfigError("config: cannot read '" + config_file + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    try {
      c = parse_config_text(ss.str(), c);
    } catch (const ConfigError& e) {
      throw ConfigError(config_file + ": " + e.what());
    }
  }
  bool u0_reset = false;
  for (const auto& k : keys)
    if (app.count("--" + k) > 0) {
      try {
        apply(c, k, single[k], u0_reset);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("--") + e.what());
      }
    }
  for (const auto& v : u0_values) {
    try {
      apply(c, "u0", v, u0_reset);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("--") + e.what());
    }
  }
  if (app.count("--resonance") > 0) c.resonance = resonance;
  if (app.count("--allow-large") > 0) c.allow_large = allow_large;
  c.validate();
  return c;
}

}  // namespace selforg
