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

#include "selforg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "selforg/bose_hubbard.hpp"
#include "selforg/error.hpp"
#include "selforg/lattice.hpp"

namespace selforg {

namespace {

constexpr double pi = std::numbers::pi;

void require_grid(int M, int grid_size) {
  if (grid_size < 2 || grid_size % 2 != 0)
    throw InvalidArgument("position grid size must be even and >= 2");
  if (2 * M >= grid_size)
    throw InvalidArgument("position grid of " + std::to_string(grid_size) +
                          " points aliases momentum cutoff " + std::to_string(M));
}

// (1/G) sum_j w_j e^{i (m' - m) x_j} for a real weight function on the grid.
template <class W>
LinOp grid_operator(int M, int grid_size, W weight) {
  require_grid(M, grid_size);
  const auto x = position_grid(grid_size);
  const int d = 2 * M + 1;
  // Fourier sums depend only on the difference k = m' - m in [-2M, 2M].
  std::vector<cplx> f(4 * M + 1, 0.0);
  for (int k = -2 * M; k <= 2 * M; ++k) {
    cplx s = 0.0;
    for (int j = 0; j < grid_size; ++j) s += weight(j, x[j]) * std::exp(cplx(0.0, k * x[j]));
    f[k + 2 * M] = s / double(grid_size);
  }
  DenseMatrix m(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) m(a, b) = f[(b - a) + 2 * M];
  m = 0.5 * (m + m.adjoint()).eval();
  return LinOp(BasisDescriptor({MomentumModes{M}}), m.sparseView(0.0, 0.0), true);
}

LinOp symmetric_hermitian(const LinOp& op) {
  SparseMatrix m = 0.5 * (op.matrix() + SparseMatrix(op.matrix().adjoint()));
  return LinOp(op.basis(), std::move(m), true);
}

struct DampedCosine : Eigen::DenseFunctor<double> {
  const Eigen::VectorXd& t;
  const Eigen::VectorXd& d;
  DampedCosine(const Eigen::VectorXd& t_, const Eigen::VectorXd& d_)
      : DenseFunctor<double>(4, static_cast<int>(t_.size())), t(t_), d(d_) {}
  int operator()(const InputType& x, ValueType& f) const {
    for (Eigen::Index j = 0; j < t.size(); ++j)
      f(j) = x(0) * std::exp(-x(1) * t(j)) * std::cos(x(2) * t(j) + x(3)) - d(j);
    return 0;
  }
  int df(const InputType& x, JacobianType& jac) const {
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      const double e = std::exp(-x(1) * t(j));
      const double c = std::cos(x(2) * t(j) + x(3)), s = std::sin(x(2) * t(j) + x(3));
      jac(j, 0) = e * c;
      jac(j, 1) = -t(j) * x(0) * e * c;
      jac(j, 2) = -t(j) * x(0) * e * s;
      jac(j, 3) = -x(0) * e * s;
    }
    return 0;
  }
};

struct Exponential : Eigen::DenseFunctor<double> {
  const Eigen::VectorXd& t;
  const Eigen::VectorXd& d;
  Exponential(const Eigen::VectorXd& t_, const Eigen::VectorXd& d_)
      : DenseFunctor<double>(2, static_cast<int>(t_.size())), t(t_), d(d_) {}
  int operator()(const InputType& x, ValueType& f) const {
    for (Eigen::Index j = 0; j < t.size(); ++j) f(j) = x(0) * std::exp(-x(1) * t(j)) - d(j);
    return 0;
  }
  int df(const InputType& x, JacobianType& jac) const {
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      const double e = std::exp(-x(1) * t(j));
      jac(j, 0) = e;
      jac(j, 1) = -t(j) * x(0) * e;
    }
    return 0;
  }
};

template <class F>
void run_lm(F& functor, Eigen::VectorXd& x) {
  Eigen::LevenbergMarquardt<F> lm(functor);
  lm.setMaxfev(4000);
  const auto status = lm.minimize(x);
  if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters ||
      status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation ||
      status == Eigen::LevenbergMarquardtSpace::UserAsked || !x.allFinite())
    throw FitFailure("relaxation fit did not converge (status " +
                     std::to_string(static_cast<int>(status)) + ")");
}

// Least-squares line through (t, log y); returns (slope, intercept).
std::pair<double, double> log_linear(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = double(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double ly = std::log(y[i]);
    st += t[i];
    sy += ly;
    stt += t[i] * t[i];
    sty += t[i] * ly;
  }
  const double den = n * stt - st * st;
  if (t.size() < 2 || den <= 0.0) return {0.0, sy / n};
  const double slope = (n * sty - st * sy) / den;
  return {slope, (sy - slope * st) / n};
}

}  // namespace

std::vector<double> position_grid(int grid_size) {
  if (grid_size < 2) throw InvalidArgument("position grid needs at least two points");
  std::vector<double> x(grid_size);
  for (int j = 0; j < grid_size; ++j) x[j] = -pi + 2.0 * pi * (j + 0.5) / grid_size;
  return x;
}

LinOp position_operator(int M, int grid_size) {
  return grid_operator(M, grid_size, [](int, double x) { return x; });
}

LinOp half_cell_operator(int M, bool right, int grid_size) {
  return grid_operator(M, grid_size, [=](int, double x) { return (x > 0.0) == right ? 1.0 : 0.0; });
}

LinOp kx_observable(const BasisDescriptor& basis, int grid_size) {
  const std::size_t im = basis.find<MomentumModes>();
  if (im < basis.size()) {
    const int M = std::get<MomentumModes>(basis.factors()[im]).cutoff;
    return lift(position_operator(M, grid_size), basis, im);
  }
  const std::size_t ip = basis.find<SymmetricMomentumPair>();
  if (ip < basis.size()) {
    const int M = std::get<SymmetricMomentumPair>(basis.factors()[ip]).cutoff;
    const auto s = symmetrize_two_particle(M);
    const LinOp x = symmetric_hermitian(0.5 * s.one_body(position_operator(M, grid_size)));
    return lift(x, basis, ip);
  }
  throw BasisMismatch("no momentum factor in " + basis.to_string());
}

LinOp bh_kx_observable(int N, int n_max, double x_site) {
  return (x_site / N) * (-1.0 * site_imbalance_op(N, n_max));
}

LinOp pair_separation_op(int M, int n_max, int grid_size) {
  const auto s = symmetrize_two_particle(M);
  const LinOp pl = half_cell_operator(M, false, grid_size);
  const LinOp pr = half_cell_operator(M, true, grid_size);
  const LinOp sep = symmetric_hermitian(2.0 * s.two_body(pl, pr));
  return kron(sep, identity(BasisDescriptor({FockSpace{n_max}})));
}

double mean_kx(const StateVector& psi, int grid_size) {
  const LinOp x = kx_observable(psi.basis(), grid_size);
  return std::real(expectation(x, psi)) / psi.amplitudes().squaredNorm();
}

double mean_kx(const DensityOperator& rho, int grid_size) {
  const LinOp x = kx_observable(rho.basis(), grid_size);
  return std::real(expectation(x, rho) / rho.trace());
}

std::string to_string(Regime r) {
  return r == Regime::underdamped ? "underdamped" : "overdamped";
}

RelaxationFit relaxation_time(const std::vector<double>& times,
                              const std::vector<double>& series, double steady_value) {
  if (times.size() != series.size() || times.size() < 4)
    throw InvalidArgument("relaxation_time: need matching series of at least four points");
  const double t0 = times.front();
  const double span = times.back() - t0;
  std::vector<double> d(series.size());
  double dmax = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = series[i] - steady_value;
    if (!std::isfinite(d[i])) throw NonFiniteValue("relaxation_time: non-finite sample");
    dmax = std::max(dmax, std::abs(d[i]));
  }
  if (dmax == 0.0) throw UndefinedRelaxation("relaxation_time: series equals its steady value");

  std::size_t end = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (std::abs(d[i]) >= 0.05 * dmax) end = i;
  end = std::max<std::size_t>(end, 3);

  std::vector<double> crossings;
  for (std::size_t i = 0; i < end; ++i)
    if ((d[i] > 0.0 && d[i + 1] <= 0.0) || (d[i] < 0.0 && d[i + 1] >= 0.0)) {
      const double f = d[i] / (d[i] - d[i + 1]);
      crossings.push_back(times[i] + f * (times[i + 1] - times[i]) - t0);
    }

  const auto n = static_cast<Eigen::Index>(end + 1);
  Eigen::VectorXd t(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) t(i) = times[i] - t0;

  RelaxationFit fit;
  fit.window_end = times[end];
  double rate = 0.0;
  if (crossings.size() >= 2) {
    fit.regime = Regime::underdamped;
    const double omega =
        pi * double(crossings.size() - 1) / (crossings.back() - crossings.front());
    // Envelope from the largest |d| between consecutive sign changes.
    std::vector<double> pt, py;
    std::size_t i = 0;
    for (std::size_t c = 0; c <= crossings.size(); ++c) {
      const double upto = c < crossings.size() ? crossings[c] : t(n - 1) + 1.0;
      double best = 0.0, tb = 0.0;
      for (; i < static_cast<std::size_t>(n) && t(i) < upto; ++i)
        if (std::abs(d[i]) > best) best = std::abs(d[i]), tb = t(i);
      if (best > 0.0) pt.push_back(tb), py.push_back(best);
    }
    const auto [slope, intercept] = log_linear(pt, py);
    for (Eigen::Index k = 0; k < n; ++k) y(k) = d[k];
    Eigen::VectorXd x(4);
    x << std::exp(intercept), std::max(-slope, 0.0), omega, 0.0;
    const double c0 = std::clamp(d[0] / x(0), -1.0, 1.0);
    x(3) = std::acos(c0);
    if (d[1] > d[0]) x(3) = -x(3);  // rising start means sin(phi) < 0
    DampedCosine functor(t, y);
    run_lm(functor, x);
    if (x(0) < 0.0) x(0) = -x(0), x(3) += pi;
    fit.amplitude = x(0);
    rate = x(1);
    fit.omega = std::abs(x(2));
    fit.phase = std::remainder(x(2) < 0 ? -x(3) : x(3), 2.0 * pi);
    double ss = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double m = x(0) * std::exp(-x(1) * t(k)) * std::cos(x(2) * t(k) + x(3));
      ss += std::pow(std::abs(d[k]) - std::abs(m), 2);
    }
    fit.residual = std::sqrt(ss / double(n));
  } else {
    fit.regime = Regime::overdamped;
    std::vector<double> pt, py;
    for (Eigen::Index k = 0; k < n; ++k) {
      y(k) = std::abs(d[k]);
      if (y(k) > 0.01 * dmax) pt.push_back(t(k)), py.push_back(y(k));
    }
    const auto [slope, intercept] = log_linear(pt, py);
    Eigen::VectorXd x(2);
    x << std::exp(intercept), std::max(-slope, 0.0);
    Exponential functor(t, y);
    run_lm(functor, x);
    fit.amplitude = x(0);
    rate = x(1);
    double ss = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
      ss += std::pow(y(k) - x(0) * std::exp(-x(1) * t(k)), 2);
    fit.residual = std::sqrt(ss / double(n));
  }
  if (!(rate * 10.0 * span > 1.0))
    throw UndefinedRelaxation("relaxation_time: no damping resolved within t_max = " +
                              std::to_string(span));
  fit.tau = 1.0 / rate;
  return fit;
}

double organization_weight(const DensityOperator& rho) {
  const auto& b = rho.basis();
  const std::size_t io = b.find<BHOccupation>();
  const std::size_t iff = b.find<FockSpace>();
  if (io < b.size() && b.size() == 2 && io == 0 && iff == 1) {
    const int N = std::get<BHOccupation>(b.factors()[0]).particles;
    if (N != 2) throw InvalidArgument("organization_weight needs two particles");
    const int n_max = std::get<FockSpace>(b.factors()[1]).n_max;
    return std::real(expectation(density_correlation_op(N, n_max), rho) / rho.trace());
  }
  const std::size_t ip = b.find<SymmetricMomentumPair>();
  if (ip == 0 && b.size() == 2 && iff == 1) {
    const int M = std::get<SymmetricMomentumPair>(b.factors()[0]).cutoff;
    const int n_max = std::get<FockSpace>(b.factors()[1]).n_max;
    return std::real(expectation(pair_separation_op(M, n_max), rho) / rho.trace());
  }
  throw InvalidArgument("organization_weight needs a two-particle state, got " + b.to_string());
}

BuildupComparison buildup_compare(const ModelParams& p, std::vector<double> t_grid,
                                  const EvolutionOptions& options) {
  if (p.N != 2) throw InvalidArgument("buildup_compare needs N = 2");
  const BHParams bp = BHParams::from_model(p);
  const LinOp h = build_bh_hamiltonian(bp);
  const std::vector<JumpChannel> channels{cavity_decay(h.basis(), p.kappa)};
  const std::vector<Observable> obs{{"photons", bh_photon_number_op(2, p.n_max)}};

  BuildupComparison out;
  out.probe_time = 5.0 / p.kappa;
  if (std::find(t_grid.begin(), t_grid.end(), out.probe_time) == t_grid.end()) {
    t_grid.push_back(out.probe_time);
    std::sort(t_grid.begin(), t_grid.end());
  }
  out.times = t_grid;
  const std::size_t probe = static_cast<std::size_t>(
      std::find(t_grid.begin(), t_grid.end(), out.probe_time) - t_grid.begin());

  auto run = [&](BHState which, std::vector<double>& photons, double& at_probe,
                 double& steady) {
    const auto rho0 = DensityOperator::pure(bh_state(which, 2, p.n_max));
    const MESolution sol = me_evolve(h, channels, rho0, obs, t_grid, options);
    photons = sol.series[0];
    at_probe = photons[probe];
    SteadyStateOptions so;
    so.method = SteadyStateMethod::relaxation;
    so.initial = *sol.final_state;
    so.residual_tolerance = 1e-12;
    DensityOperator rho = steady_state(h, channels, so).rho;
    steady = std::real(expectation(obs[0].op, rho));
    return rho;
  };
  const DensityOperator mi = run(BHState::mott_insulator, out.photons_mi, out.mi_at_probe, out.mi_steady);
  const DensityOperator sf = run(BHState::superfluid, out.photons_sf, out.sf_at_probe, out.sf_steady);
  out.steady_distance = trace_distance(mi, sf);
  return out;
}

}  // namespace selforg
