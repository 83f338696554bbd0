// core/include/emgbio/dsp.hpp

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

#ifndef EMGBIO_DSP_HPP_
#define EMGBIO_DSP_HPP_

/// \file dsp.hpp
/// Raw signal -> feature pipeline: channel selection, common-average
/// re-referencing, sliding-window segmentation, and per-window band-energy
/// features.
///
/// A feature vector is built per window as follows.  Each selected channel is
/// transformed with an FFT over the whole window (no zero padding; taper off
/// by default), the magnitudes of the positive-frequency bins are summed per
/// configured band, and the natural logarithm of each sum (floored at
/// `epsilon_floor`) becomes one feature.  Channel blocks are concatenated in
/// selection order with bands ascending inside each block, giving
/// bands x channels features per window (48 for the 8-channel forearm ring,
/// 36 for the 6-channel wrist ring).

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "emgbio/record.hpp"

namespace emgbio {

/// An ordered pick of columns out of the raw sample matrix.  The corpus files
/// carry 32 columns but only one electrode ring is used at a time; which
/// columns form each ring is configuration, not file metadata.
struct ChannelSelection {
  std::string name;
  std::vector<int> channel_indices;
};

/// Default rings: the first eight columns for the forearm ring and columns
/// 22..27 for the wrist ring.  Override in the run config if a tree is laid
/// out differently.
ChannelSelection forearm_selection();
ChannelSelection wrist_selection();

struct WindowSpec {
  int window_len_samples = 410;  // ~200 ms at 2048 Hz
  int step_samples = 102;        // ~50 ms advance (150 ms overlap)
};

enum class Taper {
  kNone,
  kHann,
};

struct FdtConfig {
  /// Half-open [lo, hi) bands in Hz; the final band also includes hi.
  /// Defaults tile 20-450 Hz in six equal-width bands.
  std::vector<std::pair<double, double>> bands = {
      {20.0, 92.0},  {92.0, 163.0},  {163.0, 235.0},
      {235.0, 307.0}, {307.0, 378.0}, {378.0, 450.0}};
  double epsilon_floor = 1e-12;
  Taper taper = Taper::kNone;
  /// When set, bins within `notch_halfwidth_hz` of `notch_hz` are dropped
  /// from the band sums (mains interference).  Off by default: the corpus
  /// hardware already band-passes the signal.
  bool notch_enabled = false;
  double notch_hz = 50.0;
  double notch_halfwidth_hz = 1.0;
};

struct FeatureSeries {
  TrialId id;
  std::string selection_name;
  /// One row per window, one column per feature.
  Eigen::MatrixXd vectors;

  int window_count() const { return static_cast<int>(vectors.rows()); }
  int dims() const { return static_cast<int>(vectors.cols()); }
};

/// Restrict to the selected columns and subtract the per-sample mean across
/// them.  Row sums of the result are exactly zero.  Requires >= 2 channels.
Eigen::MatrixXd common_average_reference(const Eigen::MatrixXd& samples,
                                         const ChannelSelection& selection);

/// Number of windows a signal of n samples yields: floor((n - W)/S) + 1.
/// Throws if the signal is shorter than one window.
int window_count(std::int64_t sample_count, const WindowSpec& spec);

/// Materialized windows; window k covers rows [k*S, k*S + W).  The trailing
/// partial window is discarded.
std::vector<Eigen::MatrixXd> segment(const Eigen::MatrixXd& samples,
                                     const WindowSpec& spec);

/// FFT bin indices (k, frequency k*fs/W) each band sums over: bins 1..W/2
/// with f in [lo, hi) (final band closed at hi), minus notched bins.  This is
/// the single source of the bin mapping; analytic oracles reuse it.
std::vector<std::vector<int>> band_bin_indices(const FdtConfig& config,
                                               int window_len_samples,
                                               double sampling_rate_hz);

/// Feature vector of one window (rows = time, cols = channels already
/// selected/re-referenced).  Length = bands x channels.
Eigen::VectorXd fdt_features(const Eigen::MatrixXd& window,
                             const FdtConfig& config, double sampling_rate_hz);

/// Full per-trial pipeline: CAR -> segment -> per-window features.
FeatureSeries extract_series(const SignalRecord& record,
                             const ChannelSelection& selection,
                             const WindowSpec& wspec, const FdtConfig& fconfig);

}  // namespace emgbio

#endif  // EMGBIO_DSP_HPP_
