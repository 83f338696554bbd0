// core/include/emgbio/synthgen.hpp

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

#ifndef EMGBIO_SYNTHGEN_HPP_
#define EMGBIO_SYNTHGEN_HPP_

/// \file synthgen.hpp
/// Deterministic generator of EMG-like multi-subject corpora.
///
/// Each channel of a trial is a sum over the six feature bands of
/// band-limited Gaussian noise: independent white noise pushed through a
/// fixed unit-energy FIR bandpass (windowed sinc, 101 taps), scaled by a
/// per-(subject, session, gesture, trial, channel, band) amplitude.  The log
/// amplitude decomposes additively:
///
///   ln A = base + gesture signature + separation * subject signature
///        + session_drift * day offset + noise_level * trial jitter
///
/// with every effect drawn N(0,1) (gesture signatures scaled 0.7) from an
/// RNG substream keyed by the ids involved, then clamped to a range the
/// 16-bit encoding tolerates.  Because amplitudes are the only thing that
/// distinguishes subjects, expected feature values have a closed form: the
/// process is stationary Gaussian with known autocovariance, so each FFT bin
/// magnitude is Rayleigh with computable scale.  expected_features() walks
/// that computation and serves as the generator's oracle.
///
/// Output trees mirror the real corpus layout
/// (`Session {s}/session{s}_subject{j}/...`) and are written through the
/// same record encoder the parser reads, with `ground_truth.json` beside the
/// tree root.  Generation is byte-deterministic for a given config,
/// independent of thread schedule.

#include <cstdint>
#include <filesystem>

#include "emgbio/dsp.hpp"
#include "emgbio/record.hpp"

namespace emgbio {

struct SynthConfig {
  int subjects = 12;
  int sessions = 3;
  int gestures = 9;
  int trials = 7;
  int sample_count = 10240;
  int channels = 8;
  double sampling_rate_hz = 2048.0;
  double separation = 1.0;     // between-subject signature spread
  double session_drift = 0.3;  // cross-day amplitude perturbation
  double noise_level = 0.1;    // trial-to-trial amplitude jitter
  double gain = 500.0;         // encoder gain for the written files
  std::uint64_t seed = 1;
};

void validate_synth_config(const SynthConfig& config);

/// Number of bands the generator shapes (the six default feature bands).
int synth_band_count();

/// ln A for one (subject, session, gesture, trial, channel, band) cell.
/// With `with_trial_noise` false the trial jitter term is dropped, which is
/// the expectation the oracle uses.
double synth_log_amplitude(const SynthConfig& config, int subject, int session,
                           int gesture, int trial, int channel, int band,
                           bool with_trial_noise);

/// One trial's samples (deterministic in config and identity alone).
SignalRecord synthesize_trial(const SynthConfig& config, const TrialId& id);

/// Writes the full tree plus ground_truth.json under `out_dir`.
void generate_dataset(const SynthConfig& config,
                      const std::filesystem::path& out_dir, int jobs = 1);

/// Analytic expectation of the per-window feature vector for a trial with
/// zero trial jitter, under the given analyzer settings.  Layout matches
/// extract_series output (selection-ordered channel blocks, bands ascending).
Eigen::VectorXd expected_features(const SynthConfig& config, int subject,
                                  int session, int gesture,
                                  const ChannelSelection& selection,
                                  const WindowSpec& wspec,
                                  const FdtConfig& fconfig);

}  // namespace emgbio

#endif  // EMGBIO_SYNTHGEN_HPP_
