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

#include "selforg/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "selforg/analysis.hpp"
#include "selforg/bose_hubbard.hpp"
#include "selforg/dynamics.hpp"
#include "selforg/error.hpp"
#include "selforg/lattice.hpp"
#include "selforg/rng.hpp"

#ifndef SELFORG_VERSION
#define SELFORG_VERSION "unknown"
#endif

namespace selforg {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::size_t kMaxDenseME = 2500;
constexpr std::size_t kMaxSteadyDim = 400;

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct Column {
  std::string name;
  std::vector<double> values;
};

struct Model {
  LinOp h;
  StateVector psi0;
  std::vector<Observable> observables;
  std::string primary;  ///< observable used for the relaxation fit
};

Model build_model(const RunConfig& c, const ModelParams& p) {
  const InitialChoice init = c.resolved_initial();
  const bool full = c.scenario == Scenario::single_full || c.scenario == Scenario::two_full;
  if (!full) {
    const BHParams bp = BHParams::from_model(p);
    LinOp h = build_bh_hamiltonian(bp);
    BHState which = BHState::localized_right;
    switch (init) {
      case InitialChoice::right: which = BHState::localized_right; break;
      case InitialChoice::left: which = BHState::localized_left; break;
      case InitialChoice::mi: which = BHState::mott_insulator; break;
      case InitialChoice::sf: which = BHState::superfluid; break;
    }
    StateVector psi0 = bh_state(which, p.N, p.n_max);
    std::vector<Observable> obs;
    if (p.N == 1) {
      const WannierPair w = wannier_states(p.V0, p.M);
      const double x_site = std::real(expectation(position_operator(p.M), w.right));
      obs.push_back({"kx", bh_kx_observable(1, p.n_max, x_site)});
    } else {
      obs.push_back({"nlnr", density_correlation_op(2, p.n_max)});
    }
    obs.push_back({"photons", bh_photon_number_op(p.N, p.n_max)});
    const std::string primary = obs.front().name;
    return {std::move(h), std::move(psi0), std::move(obs), primary};
  }
  LinOp h = build_full_hamiltonian(p);
  InitialState which = InitialState::localized_right;
  switch (init) {
    case InitialChoice::right: which = InitialState::localized_right; break;
    case InitialChoice::left: which = InitialState::localized_left; break;
    case InitialChoice::mi: which = InitialState::mott_insulator; break;
    case InitialChoice::sf: which = InitialState::superfluid; break;
  }
  StateVector psi0 = initial_state_full(p, which);
  std::vector<Observable> obs;
  if (p.N == 1)
    obs.push_back({"kx", kx_observable(h.basis())});
  else
    obs.push_back({"nlnr", pair_separation_op(p.M, p.n_max)});
  obs.push_back({"photons", lift(fock::number(p.n_max), h.basis(), 1)});
  const std::string primary = obs.front().name;
  return {std::move(h), std::move(psi0), std::move(obs), primary};
}

struct PointResult {
  double u0 = 0.0;
  bool ok = false;
  std::string error;
  std::string tau = "undefined";
  std::string regime;
  double w = std::numeric_limits<double>::quiet_NaN();
  double max_photon = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_jumps = 0;
  std::vector<std::string> files;
  ModelParams params;
};

std::string tag(double u0) { return "u0_" + fmt(u0); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

std::string series_file(const RunConfig& c, const std::vector<double>& t,
                        const std::vector<Column>& cols, const std::string& header) {
  std::ostringstream os;
  if (c.format == OutputFormat::csv) {
    os << "# " << header << "\n";
    os << "t";
    for (const auto& col : cols) os << "," << col.name;
    os << "\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
      os << fmt(t[i]);
      for (const auto& col : cols) os << "," << fmt(col.values[i]);
      os << "\n";
    }
    return os.str();
  }
  json j;
  j["version"] = 1;
  j["header"] = header;
  j["columns"] = json::array({"t"});
  for (const auto& col : cols) j["columns"].push_back(col.name);
  json data = json::object();
  json tj = json::array();
  for (double x : t) tj.push_back(num(x));
  data["t"] = tj;
  for (const auto& col : cols) {
    json v = json::array();
    for (double x : col.values) v.push_back(num(x));
    data[col.name] = v;
  }
  j["data"] = data;
  return j.dump(1) + "\n";
}

json config_json(const RunConfig& c) {
  json j;
  j["scenario"] = to_string(c.scenario);
  j["v0"] = c.V0;
  j["kappa"] = c.kappa;
  j["delta_c"] = c.DeltaC ? json(*c.DeltaC) : json("resonance");
  j["u0"] = c.u0_list;
  j["initial"] = to_string(c.resolved_initial());
  j["ntraj"] = c.n_traj;
  j["seed"] = c.seed;
  j["tmax"] = c.t_max;
  j["dt_record"] = c.dt_record;
  j["m_cutoff"] = c.M ? json(*c.M) : json("default");
  j["nmax"] = c.n_max ? json(*c.n_max) : json("default");
  j["solver"] = to_string(c.solver);
  j["format"] = to_string(c.format);
  j["allow_large"] = c.allow_large;
  return j;
}

void write_manifest(const RunConfig& c, const std::vector<PointResult>& done, bool complete) {
  json m;
  m["version"] = 1;
  m["code_version"] = SELFORG_VERSION;
  m["config"] = config_json(c);
  m["rng"] = {{"algorithm", std::string(CounterRng::algorithm)},
              {"seed", c.seed},
              {"streams", "trajectory index 0.." + std::to_string(c.n_traj - 1) +
                              " at every sweep point"}};
  json entries = json::array();
  for (const auto& r : done) {
    json e;
    e["u0"] = r.u0;
    e["status"] = r.ok ? "ok" : "incomplete";
    if (!r.ok) e["error"] = r.error;
    e["params"] = {{"V0", r.params.V0},   {"U0", r.params.U0},
                   {"kappa", r.params.kappa}, {"DeltaC", r.params.delta_c()},
                   {"N", r.params.N},     {"M", r.params.M},
                   {"n_max", r.params.n_max}};
    e["files"] = r.files;
    entries.push_back(e);
  }
  for (std::size_t i = done.size(); i < c.u0_list.size(); ++i)
    entries.push_back({{"u0", c.u0_list[i]}, {"status", "pending"}});
  m["entries"] = entries;
  m["complete"] = complete;
  write_text(fs::path(c.out_path) / "manifest.json", m.dump(1) + "\n");
}

void write_summary(const RunConfig& c, const std::vector<PointResult>& rows) {
  const fs::path dir(c.out_path);
  if (c.format == OutputFormat::csv) {
    std::ostringstream os;
    os << "u0,tau,regime,w,max_photon,n_jumps_total,status\n";
    for (const auto& r : rows)
      os << fmt(r.u0) << "," << r.tau << "," << r.regime << ","
         << (std::isnan(r.w) ? "" : fmt(r.w)) << ","
         << (std::isnan(r.max_photon) ? "" : fmt(r.max_photon)) << "," << r.n_jumps << ","
         << (r.ok ? "ok" : "incomplete") << "\n";
    write_text(dir / "summary.csv", os.str());
    return;
  }
  json j;
  j["version"] = 1;
  json arr = json::array();
  for (const auto& r : rows) {
    json e;
    e["u0"] = r.u0;
    e["tau"] = r.tau;
    e["regime"] = r.regime;
    e["w"] = num(r.w);
    e["max_photon"] = num(r.max_photon);
    e["n_jumps_total"] = r.n_jumps;
    e["status"] = r.ok ? "ok" : "incomplete";
    arr.push_back(e);
  }
  j["rows"] = arr;
  write_text(dir / "summary.json", j.dump(1) + "\n");
}

void run_point(const RunConfig& c, PointResult& out) {
  const ModelParams& p = out.params;
  const Model m = build_model(c, p);
  const std::vector<JumpChannel> channels{cavity_decay(m.h.basis(), p.kappa)};
  const std::vector<double> grid = uniform_grid(c.t_max, c.dt_record);
  const std::size_t dim = m.h.dimension();
  const bool want_me = c.solver != Solver::mcwf;
  const bool want_mcwf = c.solver != Solver::me;
  if (want_me && dim > kMaxDenseME)
    throw InvalidArgument("master equation on dimension " + std::to_string(dim) +
                          " exceeds the dense limit " + std::to_string(kMaxDenseME) +
                          "; use --solver mcwf");

  std::vector<Column> cols;
  const std::string ext = c.format == OutputFormat::csv ? ".csv" : ".json";
  const std::string header = "scenario=" + to_string(c.scenario) + " " + p.to_string() +
                             " rng=" + std::string(CounterRng::algorithm) +
                             " seed=" + std::to_string(c.seed);

  std::optional<MESolution> me;
  if (want_me) {
    me = me_evolve(m.h, channels, DensityOperator::pure(m.psi0), m.observables, grid);
    for (std::size_t k = 0; k < me->names.size(); ++k)
      cols.push_back({"me_" + me->names[k], me->series[k]});
  }
  std::optional<EnsembleResult> ens;
  if (want_mcwf) {
    ens = mcwf_ensemble(m.h, channels, m.psi0, m.observables, grid, c.n_traj, c.seed, {},
                        c.threads);
    out.n_jumps = ens->total_jumps;
    for (std::size_t k = 0; k < ens->names.size(); ++k) {
      cols.push_back({"mcwf_" + ens->names[k], ens->mean[k]});
      cols.push_back({"mcwf_" + ens->names[k] + "_stderr", ens->std_error[k]});
    }
    const auto& t0 = ens->trajectories.front();
    for (std::size_t k = 0; k < t0.names.size(); ++k)
      cols.push_back({"traj0_" + t0.names[k], t0.series[k]});

    std::ostringstream jumps;
    if (c.format == OutputFormat::csv) {
      jumps << "traj_index,jump_time\n";
      for (const auto& tr : ens->trajectories)
        for (double t : tr.jump_times) jumps << tr.traj_index << "," << fmt(t) << "\n";
    } else {
      json j;
      j["version"] = 1;
      json arr = json::array();
      for (const auto& tr : ens->trajectories) arr.push_back(tr.jump_times);
      j["jump_times"] = arr;
      jumps << j.dump(1) << "\n";
    }
    const std::string name = "jumps_" + tag(out.u0) + ext;
    write_text(fs::path(c.out_path) / name, jumps.str());
    out.files.push_back(name);
  }
  const std::string name = "timeseries_" + tag(out.u0) + ext;
  write_text(fs::path(c.out_path) / name, series_file(c, grid, cols, header));
  out.files.push_back(name);

  const auto& series = me ? (*me)[m.primary] : ens->mean[ens->index_of(m.primary)];
  const auto& photons = me ? (*me)["photons"] : ens->mean[ens->index_of("photons")];
  out.max_photon = *std::max_element(photons.begin(), photons.end());

  double steady_value = m.primary == "kx" ? 0.0 : series.back();
  if (dim <= kMaxSteadyDim) {
    const SteadyState ss = steady_state(m.h, channels);
    const auto& op = m.observables.front().op;
    steady_value = std::real(expectation(op, ss.rho));
    if (p.N == 2) out.w = organization_weight(ss.rho);
    if (ss.degenerate) std::cerr << "warning: U0 = " << fmt(out.u0) << ": steady state is not unique\n";
  }
  try {
    const RelaxationFit fit = relaxation_time(grid, series, steady_value);
    out.tau = fmt(fit.tau);
    out.regime = to_string(fit.regime);
  } catch (const UndefinedRelaxation&) {
    out.tau = "undefined";
  } catch (const FitFailure&) {
    out.tau = "fit-failed";
  }
}

}  // namespace

std::size_t hilbert_dimension(const RunConfig& config, double U0) {
  const ModelParams p = config.model(U0);
  const std::size_t fock = p.n_max + 1;
  switch (config.scenario) {
    case Scenario::single_bh: return 2 * fock;
    case Scenario::two_bh: return 3 * fock;
    case Scenario::single_full: return (2 * p.M + 1) * fock;
    case Scenario::two_full: {
      const std::size_t d = 2 * p.M + 1;
      return d * (d + 1) / 2 * fock;
    }
  }
  return 0;
}

int run(const RunConfig& config) {
  config.validate();
  if (config.scenario == Scenario::two_full) {
    for (double u : config.u0_list)
      std::cerr << "two-full: U0 = " << fmt(u) << " needs Hilbert dimension "
                << hilbert_dimension(config, u) << "\n";
    if (!config.allow_large)
      throw ConfigError("scenario: two-full requires --allow-large");
  }
  fs::create_directories(config.out_path);

  std::vector<PointResult> rows;
  bool all_ok = true;
  for (double u0 : config.u0_list) {
    PointResult r;
    r.u0 = u0;
    r.params = config.model(u0);
    try {
      run_point(config, r);
      r.ok = true;
    } catch (const Error& e) {
      r.error = "U0 = " + fmt(u0) + ": " + e.what();
      std::cerr << "error: " << r.error << "\n";
      all_ok = false;
    }
    rows.push_back(std::move(r));
    write_summary(config, rows);
    write_manifest(config, rows, false);
  }
  write_manifest(config, rows, all_ok);
  return all_ok ? 0 : 1;
}

}  // namespace selforg
