// core/src/fft.cpp

// Copyright 2026  emgbio authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "emgbio/fft.hpp"

#include <map>
#include <mutex>

#include <fftw3.h>

#include "emgbio/errors.hpp"

namespace emgbio {

namespace {

// FFTW's planner is not thread-safe, and plan creation is expensive relative
// to a 410-point transform, so plans are cached per length for the process
// lifetime.  Plans are created with FFTW_UNALIGNED so the new-array execute
// interface accepts arbitrary caller buffers.
fftw_plan plan_for_length(int n) {
  static std::mutex mutex;
  static std::map<int, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> in(static_cast<std::size_t>(n));
  std::vector<std::complex<double>> out(static_cast<std::size_t>(spectrum_bins(n)));
  fftw_plan plan = fftw_plan_dft_r2c_1d(
      n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan == nullptr) throw Error("FFT planning failed for length " + std::to_string(n));
  cache.emplace(n, plan);
  return plan;
}

}  // namespace

void real_spectrum(const double* signal, int n, std::complex<double>* out) {
  if (n < 2) throw Error("FFT length must be at least 2, got " + std::to_string(n));
  fftw_plan plan = plan_for_length(n);
  // The r2c execute signature wants a mutable input pointer but leaves the
  // data untouched for out-of-place transforms.
  fftw_execute_dft_r2c(plan, const_cast<double*>(signal),
                       reinterpret_cast<fftw_complex*>(out));
}

std::vector<std::complex<double>> real_spectrum(const std::vector<double>& signal) {
  std::vector<std::complex<double>> out(
      static_cast<std::size_t>(spectrum_bins(static_cast<int>(signal.size()))));
  real_spectrum(signal.data(), static_cast<int>(signal.size()), out.data());
  return out;
}

std::vector<double> magnitude_spectrum(const std::vector<double>& signal) {
  const auto spectrum = real_spectrum(signal);
  std::vector<double> mags(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) mags[k] = std::abs(spectrum[k]);
  return mags;
}

}  // namespace emgbio
