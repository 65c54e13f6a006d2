#!/usr/bin/env python3
# Copyright 2026 The selforg Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent dense oracle for the lowest-band tunnelling constants.

Builds p^2 + V0 sin^2(x) on a real-space grid (finite differences, periodic),
not in the plane-wave basis, so it shares no code path with the library.
Prints J = (E1 - E0) / 2 and s = <l|sin x|l> and checks them against the
frozen constants when --check is given.
"""
import argparse
import sys

import numpy as np

FROZEN_J = 0.038373418106446
FROZEN_S = -0.9066843057151153


def grid_constants(v0, n):
    x = -np.pi + 2 * np.pi * (np.arange(n) + 0.5) / n
    h = 2 * np.pi / n
    # Fourier (spectral) second derivative on the periodic grid.
    k = np.fft.fftfreq(n, d=h / (2 * np.pi))
    eye = np.eye(n)
    kin = np.real(np.fft.ifft(k[:, None] ** 2 * np.fft.fft(eye, axis=0), axis=0))
    ham = kin + np.diag(v0 * np.sin(x) ** 2)
    ham = 0.5 * (ham + ham.T)
    e, v = np.linalg.eigh(ham)
    even, odd = v[:, 0], v[:, 1]
    right_site = np.argmin(np.abs(x - np.pi / 2))
    even = even * np.sign(even[right_site])
    odd = odd * np.sign(even @ (np.sin(x) * odd))
    left = (even - odd) / np.sqrt(2)
    return (e[1] - e[0]) / 2, left @ (np.sin(x) * left), e[:4]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    results = [grid_constants(-10.0, n) for n in (64, 128)]
    for n, (j, s, e) in zip((64, 128), results):
        print(f"n={n} J={j:.15f} s={s:.16f} E={e}")
    j, s, _ = results[-1]
    if abs(results[0][0] - j) > 1e-8 or abs(results[0][1] - s) > 1e-8:
        print("grid convergence failed")
        return 1
    if args.check:
        ok = abs(j - FROZEN_J) < 1e-9 and abs(s - FROZEN_S) < 1e-9
        print("frozen constants", "match" if ok else "MISMATCH")
        return 0 if ok else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
