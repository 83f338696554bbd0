// core/src/dsp.cpp

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

#include "emgbio/dsp.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "emgbio/errors.hpp"
#include "emgbio/fft.hpp"

namespace emgbio {

namespace {

void validate_selection(const ChannelSelection& selection, int channel_count) {
  if (selection.channel_indices.size() < 2) {
    throw Error("channel selection '" + selection.name +
                "' needs at least 2 channels for common-average referencing");
  }
  std::set<int> seen;
  for (int idx : selection.channel_indices) {
    if (idx < 0 || idx >= channel_count) {
      throw Error("channel index " + std::to_string(idx) + " in selection '" +
                  selection.name + "' is out of range for " +
                  std::to_string(channel_count) + " channels");
    }
    if (!seen.insert(idx).second) {
      throw Error("duplicate channel index " + std::to_string(idx) +
                  " in selection '" + selection.name + "'");
    }
  }
}

void validate_window_spec(const WindowSpec& spec) {
  if (spec.window_len_samples < 2) {
    throw Error("window length must be at least 2 samples");
  }
  if (spec.step_samples < 1 || spec.step_samples > spec.window_len_samples) {
    throw Error("window step must be in [1, window length]; got step " +
                std::to_string(spec.step_samples) + ", window " +
                std::to_string(spec.window_len_samples));
  }
}

void validate_fdt_config(const FdtConfig& config, double sampling_rate_hz) {
  if (config.bands.empty()) throw Error("feature config needs at least one band");
  if (!(config.epsilon_floor > 0.0)) throw Error("epsilon floor must be positive");
  const double nyquist = sampling_rate_hz / 2.0;
  double prev_hi = -1.0;
  for (const auto& [lo, hi] : config.bands) {
    if (!(lo >= 0.0) || !(hi > lo)) {
      throw Error("band edges must satisfy 0 <= low < high; got [" +
                  std::to_string(lo) + ", " + std::to_string(hi) + ")");
    }
    if (hi >= nyquist) {
      throw Error("band edge " + std::to_string(hi) + " Hz is at or above Nyquist (" +
                  std::to_string(nyquist) + " Hz)");
    }
    if (lo < prev_hi) {
      throw Error("bands overlap at " + std::to_string(lo) + " Hz");
    }
    prev_hi = hi;
  }
}

}  // namespace

ChannelSelection forearm_selection() {
  return ChannelSelection{"forearm", {0, 1, 2, 3, 4, 5, 6, 7}};
}

ChannelSelection wrist_selection() {
  return ChannelSelection{"wrist", {22, 23, 24, 25, 26, 27}};
}

Eigen::MatrixXd common_average_reference(const Eigen::MatrixXd& samples,
                                         const ChannelSelection& selection) {
  validate_selection(selection, static_cast<int>(samples.cols()));
  const auto n_sel = static_cast<Eigen::Index>(selection.channel_indices.size());
  Eigen::MatrixXd out(samples.rows(), n_sel);
  for (Eigen::Index c = 0; c < n_sel; ++c) {
    out.col(c) = samples.col(selection.channel_indices[static_cast<std::size_t>(c)]);
  }
  const Eigen::VectorXd row_means = out.rowwise().mean();
  out.colwise() -= row_means;
  return out;
}

int window_count(std::int64_t sample_count, const WindowSpec& spec) {
  validate_window_spec(spec);
  if (sample_count < spec.window_len_samples) {
    throw Error("signal of " + std::to_string(sample_count) +
                " samples is shorter than one window (" +
                std::to_string(spec.window_len_samples) + " samples)");
  }
  return static_cast<int>((sample_count - spec.window_len_samples) /
                          spec.step_samples) + 1;
}

std::vector<Eigen::MatrixXd> segment(const Eigen::MatrixXd& samples,
                                     const WindowSpec& spec) {
  const int count = window_count(samples.rows(), spec);
  std::vector<Eigen::MatrixXd> windows;
  windows.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    windows.push_back(samples.middleRows(
        static_cast<Eigen::Index>(k) * spec.step_samples, spec.window_len_samples));
  }
  return windows;
}

std::vector<std::vector<int>> band_bin_indices(const FdtConfig& config,
                                               int window_len_samples,
                                               double sampling_rate_hz) {
  if (window_len_samples < 2) throw Error("feature window needs at least 2 samples");
  if (!(sampling_rate_hz > 0.0)) throw Error("sampling rate must be positive");
  validate_fdt_config(config, sampling_rate_hz);

  const double bin_hz = sampling_rate_hz / window_len_samples;
  const int half = window_len_samples / 2;
  const int bands = static_cast<int>(config.bands.size());

  std::vector<std::vector<int>> bins(static_cast<std::size_t>(bands));
  for (int b = 0; b < bands; ++b) {
    const auto [lo, hi] = config.bands[static_cast<std::size_t>(b)];
    const bool last = (b == bands - 1);
    // DC is skipped: every band of interest starts well above 0 Hz.
    for (int k = 1; k <= half; ++k) {
      const double f = k * bin_hz;
      const bool in_band = last ? (f >= lo && f <= hi) : (f >= lo && f < hi);
      if (!in_band) continue;
      if (config.notch_enabled &&
          std::abs(f - config.notch_hz) <= config.notch_halfwidth_hz) {
        continue;
      }
      bins[static_cast<std::size_t>(b)].push_back(k);
    }
  }
  return bins;
}

Eigen::VectorXd fdt_features(const Eigen::MatrixXd& window,
                             const FdtConfig& config, double sampling_rate_hz) {
  if (window.cols() < 1) throw Error("feature window needs at least 1 channel");
  const int w = static_cast<int>(window.rows());
  const auto bins = band_bin_indices(config, w, sampling_rate_hz);
  const int channels = static_cast<int>(window.cols());
  const int bands = static_cast<int>(config.bands.size());

  std::vector<double> taper;
  if (config.taper == Taper::kHann) {
    taper.resize(static_cast<std::size_t>(w));
    for (int n = 0; n < w; ++n) {
      taper[static_cast<std::size_t>(n)] =
          0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * n / (w - 1)));
    }
  }

  Eigen::VectorXd features(static_cast<Eigen::Index>(bands) * channels);
  std::vector<double> time(static_cast<std::size_t>(w));
  std::vector<std::complex<double>> spectrum(
      static_cast<std::size_t>(spectrum_bins(w)));

  for (int c = 0; c < channels; ++c) {
    for (int n = 0; n < w; ++n) {
      double v = window(n, c);
      if (!taper.empty()) v *= taper[static_cast<std::size_t>(n)];
      time[static_cast<std::size_t>(n)] = v;
    }
    real_spectrum(time.data(), w, spectrum.data());

    for (int b = 0; b < bands; ++b) {
      double sum = 0.0;
      for (int k : bins[static_cast<std::size_t>(b)]) {
        sum += std::abs(spectrum[static_cast<std::size_t>(k)]);
      }
      features(static_cast<Eigen::Index>(c) * bands + b) =
          std::log(std::max(sum, config.epsilon_floor));
    }
  }
  return features;
}

FeatureSeries extract_series(const SignalRecord& record,
                             const ChannelSelection& selection,
                             const WindowSpec& wspec, const FdtConfig& fconfig) {
  const Eigen::MatrixXd referenced =
      common_average_reference(record.samples, selection);
  const int windows = window_count(referenced.rows(), wspec);
  const int dims = static_cast<int>(fconfig.bands.size() *
                                    selection.channel_indices.size());

  FeatureSeries series;
  series.id = record.id;
  series.selection_name = selection.name;
  series.vectors.resize(windows, dims);
  for (int k = 0; k < windows; ++k) {
    const auto window = referenced.middleRows(
        static_cast<Eigen::Index>(k) * wspec.step_samples, wspec.window_len_samples);
    series.vectors.row(k) =
        fdt_features(window, fconfig, record.sampling_rate_hz).transpose();
  }
  return series;
}

}  // namespace emgbio
