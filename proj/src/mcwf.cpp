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
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "selforg/dynamics.hpp"
#include "selforg/error.hpp"
#include "selforg/rng.hpp"

namespace selforg {

namespace {

const std::vector<double>& named_series(const std::vector<std::string>& names,
                                        const std::vector<std::vector<double>>& series,
                                        const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return series[i];
  throw InvalidArgument("no series named '" + name + "'");
}

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw InvalidArgument("time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw InvalidArgument("time grid must be strictly increasing");
}

// Root of norm2(advance(c, tau)) = r on (0, h], bracketed Illinois iteration
// with bisection fallback.
double locate_jump(const StatePropagator& prop, const Vector& c, double h, double f0,
                   double fh, double r, double tol) {
  double lo = 0.0, hi = h, flo = f0, fhi = fh;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fhi) <= tol * r) return hi;
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = prop.norm2(prop.advance(c, x)) - r;
    if (!std::isfinite(fx)) throw NonFiniteValue("non-finite norm while locating a jump");
    if (std::abs(fx) <= tol * r) return x;
    if (fx > 0.0) {
      lo = x;
      flo = fx;
      if (side == 1) fhi *= 0.5;
      side = 1;
    } else {
      hi = x;
      fhi = fx;
      if (side == -1) flo *= 0.5;
      side = -1;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) return hi;
  }
  return hi;
}

EvolutionOptions with_interval(EvolutionOptions o, const std::vector<double>& t_grid) {
  if (o.interval_hint <= 0.0 && t_grid.size() > 1)
    o.interval_hint = (t_grid.back() - t_grid.front()) / double(t_grid.size() - 1);
  return o;
}

}  // namespace

const std::vector<double>& TrajectoryResult::operator[](const std::string& name) const {
  return named_series(names, series, name);
}

std::size_t EnsembleResult::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  throw InvalidArgument("no series named '" + name + "'");
}

TrajectoryResult mcwf_trajectory(const LinOp& h, const std::vector<JumpChannel>& channels,
                                 const StateVector& psi0,
                                 const std::vector<Observable>& observables,
                                 const std::vector<double>& t_grid, std::uint64_t seed,
                                 std::uint64_t traj_index, const EvolutionOptions& options) {
  const StatePropagator prop(effective_hamiltonian(h, channels), with_interval(options, t_grid));
  require_same_basis(h.basis(), psi0.basis(), "mcwf_trajectory");
  return mcwf_trajectory(prop, channels, psi0, observables, t_grid, seed, traj_index, options);
}

TrajectoryResult mcwf_trajectory(const StatePropagator& prop,
                                 const std::vector<JumpChannel>& channels,
                                 const StateVector& psi0,
                                 const std::vector<Observable>& observables,
                                 const std::vector<double>& t_grid, std::uint64_t seed,
                                 std::uint64_t traj_index, const EvolutionOptions& options) {
  check_grid(t_grid);
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw InvalidArgument("mcwf_trajectory: initial state is not normalized");
  for (const auto& o : observables) require_same_basis(o.op.basis(), psi0.basis(), "observable");
  for (const auto& c : channels) require_same_basis(c.op.basis(), psi0.basis(), "jump channel");

  TrajectoryResult out;
  out.seed = seed;
  out.traj_index = traj_index;
  out.times = t_grid;
  for (const auto& o : observables) out.names.push_back(o.name);
  out.names.push_back("norm_deficit");
  out.series.assign(out.names.size(), std::vector<double>());
  for (auto& s : out.series) s.reserve(t_grid.size());

  CounterRng rng(seed, traj_index);
  double r = rng.uniform();
  Vector c = prop.to_coords(psi0.amplitudes());
  double n2 = prop.norm2(c);
  double t = t_grid.front();

  auto record = [&] {
    const Vector psi = prop.from_coords(c);
    const double nn = psi.squaredNorm();
    for (std::size_t k = 0; k < observables.size(); ++k)
      out.series[k].push_back(std::real(psi.dot(observables[k].op.matrix() * psi)) / nn);
    out.series.back().push_back(1.0 - n2);
  };
  record();

  for (std::size_t g = 1; g < t_grid.size(); ++g) {
    const double target = t_grid[g];
    while (t < target) {
      const double remaining = target - t;
      const double step = std::min(prop.max_step(), remaining);
      const bool last = step == remaining;
      Vector next = prop.advance(c, step);
      const double n2_next = prop.norm2(next);
      if (!std::isfinite(n2_next)) throw NonFiniteValue("non-finite state norm at t = " + std::to_string(t));
      if (n2_next > n2 * (1.0 + 1e-10))
        throw StepSizeFailure("state norm increased at t = " + std::to_string(t));
      if (n2_next > r) {
        c = std::move(next);
        n2 = n2_next;
        t = last ? target : t + step;
        continue;
      }
      const double tau = locate_jump(prop, c, step, n2 - r, n2_next - r, r, options.jump_tolerance);
      Vector psi = prop.from_coords(prop.advance(c, tau));
      t = (tau == step && last) ? target : t + tau;

      std::vector<Vector> candidates;
      std::vector<double> weights;
      double total = 0.0;
      for (const auto& ch : channels) {
        candidates.push_back(ch.op.matrix() * psi);
        weights.push_back(candidates.back().squaredNorm());
        total += weights.back();
      }
      if (!(total > 0.0) || !std::isfinite(total))
        throw NonFiniteValue("no jump channel has weight at t = " + std::to_string(t));
      const double u = rng.uniform() * total;
      std::size_t k = 0;
      for (double acc = weights[0]; k + 1 < weights.size() && acc < u; acc += weights[++k]) {
      }
      psi = candidates[k] / std::sqrt(weights[k]);
      if (!out.jump_times.empty() && !(t > out.jump_times.back()))
        t = std::nextafter(out.jump_times.back(), target);
      out.jump_times.push_back(t);
      c = prop.to_coords(psi);
      n2 = prop.norm2(c);
      r = rng.uniform();
    }
    record();
  }
  return out;
}

EnsembleResult mcwf_ensemble(const LinOp& h, const std::vector<JumpChannel>& channels,
                             const StateVector& psi0,
                             const std::vector<Observable>& observables,
                             const std::vector<double>& t_grid, std::size_t n_traj,
                             std::uint64_t seed, const EvolutionOptions& options,
                             unsigned threads) {
  if (n_traj == 0) throw InvalidArgument("mcwf_ensemble: n_traj must be >= 1");
  require_same_basis(h.basis(), psi0.basis(), "mcwf_ensemble");
  const StatePropagator prop(effective_hamiltonian(h, channels), with_interval(options, t_grid));

  std::vector<std::optional<TrajectoryResult>> results(n_traj);
  std::vector<std::string> errors(n_traj);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_traj; i = next++) {
      try {
        results[i] = mcwf_trajectory(prop, channels, psi0, observables, t_grid, seed, i, options);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        if (errors[i].empty()) errors[i] = "unknown failure";
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_traj));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < n_traj; ++i)
    if (!results[i]) throw TrajectoryError(i, errors[i]);

  EnsembleResult ens;
  ens.times = t_grid;
  ens.names = results[0]->names;
  ens.n_traj = n_traj;
  const std::size_t nt = t_grid.size(), no = ens.names.size();
  ens.mean.assign(no, std::vector<double>(nt, 0.0));
  ens.std_error.assign(no, std::vector<double>(nt, 0.0));
  for (std::size_t i = 0; i < n_traj; ++i) {
    ens.total_jumps += results[i]->jump_times.size();
    for (std::size_t k = 0; k < no; ++k)
      for (std::size_t j = 0; j < nt; ++j) ens.mean[k][j] += results[i]->series[k][j];
  }
  for (auto& s : ens.mean)
    for (auto& v : s) v /= double(n_traj);
  if (n_traj > 1) {
    for (std::size_t i = 0; i < n_traj; ++i)
      for (std::size_t k = 0; k < no; ++k)
        for (std::size_t j = 0; j < nt; ++j) {
          const double d = results[i]->series[k][j] - ens.mean[k][j];
          ens.std_error[k][j] += d * d;
        }
    for (auto& s : ens.std_error)
      for (auto& v : s) v = std::sqrt(v / double(n_traj - 1) / double(n_traj));
  }
  ens.trajectories.reserve(n_traj);
  for (auto& r : results) ens.trajectories.push_back(std::move(*r));
  return ens;
}

}  // namespace selforg
