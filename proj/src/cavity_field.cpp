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

#include "selforg/cavity_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "selforg/error.hpp"

namespace selforg {

void ModelParams::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw InvalidArgument("ModelParams." + field + ": " + why);
  };
  if (!std::isfinite(V0)) fail("V0", "not finite");
  if (!std::isfinite(U0) || U0 > 0.0) fail("U0", "must be finite and <= 0");
  if (!std::isfinite(kappa) || kappa <= 0.0) fail("kappa", "must be > 0");
  if (DeltaC && !std::isfinite(*DeltaC)) fail("DeltaC", "not finite");
  if (N != 1 && N != 2) fail("N", "only 1 or 2 particles are supported");
  if (M < 8) fail("M", "momentum cutoff must be >= 8");
  if (n_max < 4) fail("n_max", "Fock cutoff must be >= 4");
}

ModelParams ModelParams::defaults(int N, double U0) {
  ModelParams p;
  p.N = N;
  p.U0 = U0;
  p.M = N == 1 ? 32 : 16;
  p.n_max = default_fock_cutoff(p);
  return p;
}

std::string ModelParams::to_string() const {
  std::ostringstream os;
  os << "V0=" << V0 << " U0=" << U0 << " kappa=" << kappa << " DeltaC=" << delta_c()
     << (DeltaC ? "" : " (resonance)") << " N=" << N << " M=" << M
     << " n_max=" << n_max;
  return os.str();
}

int default_fock_cutoff(const ModelParams& p) {
  const double alpha_max = p.N * std::abs(steady_field_amplitude(Site::right, p));
  const int rule = static_cast<int>(std::ceil(10.0 * alpha_max * alpha_max - 1e-9)) + 4;
  return std::max(8, rule);
}

std::complex<double> steady_field_amplitude(double kx, const ModelParams& p) {
  if (!(p.kappa > 0.0)) throw InvalidArgument("steady_field_amplitude: kappa must be > 0");
  if (p.U0 * p.V0 < 0.0)
    throw NegativeProduct("steady_field_amplitude: U0*V0 must be >= 0");
  const std::complex<double> denom(p.N * p.U0 - p.delta_c(), -p.kappa);
  return std::sqrt(p.U0 * p.V0) / denom * std::sin(kx);
}

std::complex<double> steady_field_amplitude(Site site, const ModelParams& p) {
  const double x = site == Site::right ? std::numbers::pi / 2 : -std::numbers::pi / 2;
  return steady_field_amplitude(x, p);
}

}  // namespace selforg
