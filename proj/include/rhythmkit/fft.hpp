// Copyright 2026 The Rhythmkit Authors
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

#ifndef RHYTHMKIT_FFT_HPP_
#define RHYTHMKIT_FFT_HPP_

#include <complex>
#include <span>
#include <vector>

namespace rhythmkit {
namespace fft {

// Spectrum of a real signal zero-padded to n_fft; returns bins 0..n_fft/2.
// Backed by FFTW (plans created with FFTW_ESTIMATE so results do not
// depend on runtime timing). Plan creation is serialized internally;
// callers may run transforms from multiple threads.
std::vector<std::complex<double>> RealFft(std::span<const double> x,
                                          std::size_t n_fft);

// Analytic signal via the full-length FFT method: forward complex FFT,
// zero the negative-frequency half (doubling the positive half), inverse.
std::vector<std::complex<double>> AnalyticSignal(std::span<const double> x);

}  // namespace fft
}  // namespace rhythmkit

#endif  // RHYTHMKIT_FFT_HPP_
