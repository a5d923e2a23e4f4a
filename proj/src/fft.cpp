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

#include "rhythmkit/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "rhythmkit/error.hpp"

namespace rhythmkit {
namespace fft {

namespace {

// FFTW planning mutates global planner state and is not thread safe;
// execution of distinct plans on distinct buffers is.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    Require(ptr != nullptr, ErrorCode::kIoError, "fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

struct FftwRealBuffer {
  explicit FftwRealBuffer(std::size_t n)
      : ptr(static_cast<double*>(fftw_malloc(sizeof(double) * n))) {
    Require(ptr != nullptr, ErrorCode::kIoError, "fftw_malloc failed");
  }
  ~FftwRealBuffer() { fftw_free(ptr); }
  FftwRealBuffer(const FftwRealBuffer&) = delete;
  FftwRealBuffer& operator=(const FftwRealBuffer&) = delete;
  double* ptr;
};

}  // namespace

std::vector<std::complex<double>> RealFft(std::span<const double> x,
                                          std::size_t n_fft) {
  Require(n_fft >= 2, ErrorCode::kInvalidArgument, "FFT size must be >= 2");
  Require(x.size() <= n_fft, ErrorCode::kLengthMismatch,
          "signal longer than FFT size");
  FftwRealBuffer in(n_fft);
  FftwBuffer out(n_fft / 2 + 1);
  std::memset(in.ptr, 0, sizeof(double) * n_fft);
  std::copy(x.begin(), x.end(), in.ptr);

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_fft), in.ptr, out.ptr,
                                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan);
  }

  std::vector<std::complex<double>> spectrum(n_fft / 2 + 1);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    spectrum[k] = std::complex<double>(out.ptr[k][0], out.ptr[k][1]);
  }
  return spectrum;
}

std::vector<std::complex<double>> AnalyticSignal(std::span<const double> x) {
  const std::size_t n = x.size();
  Require(n >= 2, ErrorCode::kTooShort, "analytic signal needs >= 2 samples");

  FftwBuffer buf(n);
  FftwBuffer spec(n);
  for (std::size_t i = 0; i < n; ++i) {
    buf.ptr[i][0] = x[i];
    buf.ptr[i][1] = 0.0;
  }

  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fwd = fftw_plan_dft_1d(static_cast<int>(n), buf.ptr, spec.ptr,
                           FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(static_cast<int>(n), spec.ptr, buf.ptr,
                           FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(fwd);

  // One-sided spectrum weights: keep DC (and Nyquist for even n) as is,
  // double the positive frequencies, zero the negative ones. Includes the
  // 1/n normalization of the inverse transform.
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < n; ++k) {
    double w;
    if (k == 0 || (n % 2 == 0 && k == half)) {
      w = inv_n;
    } else if (k < half || (n % 2 == 1 && k == half)) {
      w = 2.0 * inv_n;
    } else {
      w = 0.0;
    }
    spec.ptr[k][0] *= w;
    spec.ptr[k][1] *= w;
  }

  fftw_execute(bwd);
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }

  std::vector<std::complex<double>> analytic(n);
  for (std::size_t i = 0; i < n; ++i) {
    analytic[i] = std::complex<double>(buf.ptr[i][0], buf.ptr[i][1]);
  }
  return analytic;
}

}  // namespace fft
}  // namespace rhythmkit
