// core/include/emgbio/fft.hpp

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

#ifndef EMGBIO_FFT_HPP_
#define EMGBIO_FFT_HPP_

#include <complex>
#include <vector>

namespace emgbio {

/// Number of non-redundant spectrum bins of a length-n real transform.
inline int spectrum_bins(int n) { return n / 2 + 1; }

/// Complex spectrum X_k, k = 0..floor(n/2), of a real sequence of length n.
/// No normalization is applied (plain DFT sums).  Plans are cached per
/// length; the call itself is thread-safe.
void real_spectrum(const double* signal, int n, std::complex<double>* out);

std::vector<std::complex<double>> real_spectrum(const std::vector<double>& signal);

/// Magnitudes |X_k| for k = 0..floor(n/2).
std::vector<double> magnitude_spectrum(const std::vector<double>& signal);

}  // namespace emgbio

#endif  // EMGBIO_FFT_HPP_
