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

#include <complex>

#include "selforg/params.hpp"

namespace selforg {

enum class Site { left, right };

/// Coherent amplitude radiated by one point particle held at position Kx:
/// sqrt(U0 V0) / (N U0 - Delta_C - i kappa) * sin(Kx).
/// With the resonance rule this is sqrt(U0 V0)/kappa * sin(Kx) / (1 - i).
std::complex<double> steady_field_amplitude(double kx, const ModelParams& p);

/// Same at a site centre, Kx = -pi/2 (left) or +pi/2 (right).
std::complex<double> steady_field_amplitude(Site site, const ModelParams& p);

}  // namespace selforg
