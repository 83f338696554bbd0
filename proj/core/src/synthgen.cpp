// core/src/synthgen.cpp

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

#include "emgbio/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <vector>

#include <nlohmann/json.hpp>

#include "emgbio/errors.hpp"
#include "emgbio/parallel.hpp"
#include "emgbio/rng.hpp"

namespace emgbio {

namespace {

// Substream tags; each effect and the waveform noise live in disjoint
// label spaces under the same seed.
enum StreamTag : std::uint64_t {
  kTagGesture = 1,
  kTagSubject = 2,
  kTagSession = 3,
  kTagTrial = 4,
  kTagNoise = 5,
};

constexpr int kTaps = 101;
constexpr double kBaseLogAmplitude = -2.2;
constexpr double kGestureSpread = 0.7;
constexpr double kLogAmplitudeMin = -6.0;
constexpr double kLogAmplitudeMax = 1.0;

const std::vector<std::pair<double, double>>& synth_bands() {
  static const std::vector<std::pair<double, double>> bands =
      FdtConfig{}.bands;
  return bands;
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Unit-energy windowed-sinc bandpass for one band, at the given rate.
std::vector<double> design_bandpass(double lo_hz, double hi_hz, double fs) {
  const double f1 = lo_hz / fs;
  const double f2 = hi_hz / fs;
  std::vector<double> h(kTaps);
  const int mid = (kTaps - 1) / 2;
  double energy = 0.0;
  for (int n = 0; n < kTaps; ++n) {
    const double k = n - mid;
    const double ideal = 2.0 * f2 * sinc(2.0 * f2 * k) - 2.0 * f1 * sinc(2.0 * f1 * k);
    const double hamming =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (kTaps - 1));
    h[static_cast<std::size_t>(n)] = ideal * hamming;
    energy += h[static_cast<std::size_t>(n)] * h[static_cast<std::size_t>(n)];
  }
  const double scale = 1.0 / std::sqrt(energy);
  for (double& v : h) v *= scale;
  return h;
}

struct FilterBank {
  std::vector<std::vector<double>> filters;        // per band, kTaps long
  std::vector<std::vector<double>> autocorr;       // r_b[tau], tau = 0..kTaps-1
};

const FilterBank& filter_bank(double fs) {
  // The corpus rate is fixed in practice; cache the bank for the last rate.
  static FilterBank bank;
  static double bank_fs = 0.0;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  if (bank_fs != fs) {
    bank.filters.clear();
    bank.autocorr.clear();
    for (const auto& [lo, hi] : synth_bands()) {
      std::vector<double> h = design_bandpass(lo, hi, fs);
      std::vector<double> r(kTaps, 0.0);
      for (int tau = 0; tau < kTaps; ++tau) {
        double sum = 0.0;
        for (int n = 0; n + tau < kTaps; ++n) {
          sum += h[static_cast<std::size_t>(n)] * h[static_cast<std::size_t>(n + tau)];
        }
        r[static_cast<std::size_t>(tau)] = sum;
      }
      bank.filters.push_back(std::move(h));
      bank.autocorr.push_back(std::move(r));
    }
    bank_fs = fs;
  }
  return bank;
}

double effect(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) {
  Rng rng = Rng::stream(seed, labels);
  return rng.normal();
}

std::uint64_t u(int v) { return static_cast<std::uint64_t>(v); }

}  // namespace

void validate_synth_config(const SynthConfig& config) {
  auto check_range = [](int value, int lo, int hi, const char* what) {
    if (value < lo || value > hi) {
      throw Error(std::string(what) + " must lie in [" + std::to_string(lo) +
                  ", " + std::to_string(hi) + "], got " + std::to_string(value));
    }
  };
  // Upper bounds come from the identity ranges the record naming encodes.
  check_range(config.subjects, 1, 43, "subjects");
  check_range(config.sessions, 1, 3, "sessions");
  check_range(config.gestures, 1, 17, "gestures");
  check_range(config.trials, 1, 7, "trials");
  if (config.sample_count < 2) throw Error("sample_count must be at least 2");
  if (config.channels < 1) throw Error("channels must be positive");
  if (!(config.sampling_rate_hz > 0.0)) throw Error("sampling rate must be positive");
  const double nyquist = config.sampling_rate_hz / 2.0;
  if (synth_bands().back().second >= nyquist) {
    throw Error("sampling rate too low: the shaped bands reach " +
                std::to_string(synth_bands().back().second) + " Hz");
  }
  if (config.separation < 0.0 || config.session_drift < 0.0 ||
      config.noise_level < 0.0) {
    throw Error("separation, session_drift, and noise_level must be >= 0");
  }
  if (!(config.gain > 0.0)) throw Error("gain must be positive");
}

int synth_band_count() { return static_cast<int>(synth_bands().size()); }

double synth_log_amplitude(const SynthConfig& config, int subject, int session,
                           int gesture, int trial, int channel, int band,
                           bool with_trial_noise) {
  const std::uint64_t seed = config.seed;
  double ln_a = kBaseLogAmplitude;
  ln_a += kGestureSpread *
          effect(seed, {kTagGesture, u(gesture), u(channel), u(band)});
  ln_a += config.separation *
          effect(seed, {kTagSubject, u(subject), u(gesture), u(channel), u(band)});
  ln_a += config.session_drift *
          effect(seed, {kTagSession, u(subject), u(session), u(channel), u(band)});
  if (with_trial_noise) {
    ln_a += config.noise_level *
            effect(seed, {kTagTrial, u(subject), u(session), u(gesture), u(trial),
                          u(channel), u(band)});
  }
  return std::clamp(ln_a, kLogAmplitudeMin, kLogAmplitudeMax);
}

SignalRecord synthesize_trial(const SynthConfig& config, const TrialId& id) {
  validate_synth_config(config);
  const FilterBank& bank = filter_bank(config.sampling_rate_hz);
  const int n = config.sample_count;
  const int bands = synth_band_count();

  SignalRecord record;
  record.id = id;
  record.sampling_rate_hz = config.sampling_rate_hz;
  record.samples = Eigen::MatrixXd::Zero(n, config.channels);

  // Encoder headroom: values are clipped so round(v * gain) always fits
  // int16.  The clip sits ~10 sigma out, so it never fires in practice but
  // makes generation total.
  const double v_max = 32767.0 / config.gain;
  const double v_min = -32768.0 / config.gain;

  std::vector<double> white(static_cast<std::size_t>(n + kTaps - 1));
  for (int c = 0; c < config.channels; ++c) {
    for (int b = 0; b < bands; ++b) {
      const double amplitude = std::exp(synth_log_amplitude(
          config, id.subject, id.session, id.gesture, id.trial, c, b, true));
      Rng rng = Rng::stream(
          config.seed, {kTagNoise, u(id.subject), u(id.session), u(id.gesture),
                        u(id.trial), u(c), u(b)});
      for (double& w : white) w = rng.normal();

      const std::vector<double>& h = bank.filters[static_cast<std::size_t>(b)];
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = 0; k < kTaps; ++k) {
          acc += h[static_cast<std::size_t>(k)] *
                 white[static_cast<std::size_t>(i + k)];
        }
        record.samples(i, c) += amplitude * acc;
      }
    }
    for (int i = 0; i < n; ++i) {
      record.samples(i, c) = std::clamp(record.samples(i, c), v_min, v_max);
    }
  }
  return record;
}

Eigen::VectorXd expected_features(const SynthConfig& config, int subject,
                                  int session, int gesture,
                                  const ChannelSelection& selection,
                                  const WindowSpec& wspec,
                                  const FdtConfig& fconfig) {
  validate_synth_config(config);
  const FilterBank& bank = filter_bank(config.sampling_rate_hz);
  const int bands = synth_band_count();
  const int w = wspec.window_len_samples;
  const auto n_sel = selection.channel_indices.size();
  if (n_sel < 2) throw Error("expected_features needs a >= 2 channel selection");
  for (int c : selection.channel_indices) {
    if (c < 0 || c >= config.channels) {
      throw Error("selection channel " + std::to_string(c) +
                  " is outside the generated " + std::to_string(config.channels) +
                  " channels");
    }
  }

  // Autocovariance per selected channel: r_c[tau] = sum_b A^2 r_b[tau]
  // (bands use independent noise, so they add in covariance).
  std::vector<std::vector<double>> r(n_sel, std::vector<double>(kTaps, 0.0));
  for (std::size_t ci = 0; ci < n_sel; ++ci) {
    const int c = selection.channel_indices[ci];
    for (int b = 0; b < bands; ++b) {
      const double a = std::exp(synth_log_amplitude(config, subject, session,
                                                    gesture, 1, c, b, false));
      const double a2 = a * a;
      const auto& rb = bank.autocorr[static_cast<std::size_t>(b)];
      for (int tau = 0; tau < kTaps; ++tau) {
        r[ci][static_cast<std::size_t>(tau)] += a2 * rb[static_cast<std::size_t>(tau)];
      }
    }
  }

  // Common-average referencing of C independent channels maps channel c to
  // (1 - 1/C) x_c - (1/C) sum_{c' != c} x_{c'}, so its autocovariance is
  // (1 - 1/C)^2 r_c + (1/C^2) sum_{c' != c} r_{c'}.
  const double inv_c = 1.0 / static_cast<double>(n_sel);
  std::vector<double> r_total(kTaps, 0.0);
  for (const auto& rc : r) {
    for (int tau = 0; tau < kTaps; ++tau) {
      r_total[static_cast<std::size_t>(tau)] += rc[static_cast<std::size_t>(tau)];
    }
  }
  std::vector<std::vector<double>> r_car(n_sel, std::vector<double>(kTaps, 0.0));
  for (std::size_t ci = 0; ci < n_sel; ++ci) {
    const double own = (1.0 - inv_c) * (1.0 - inv_c);
    const double cross = inv_c * inv_c;
    for (int tau = 0; tau < kTaps; ++tau) {
      const double others = r_total[static_cast<std::size_t>(tau)] -
                            r[ci][static_cast<std::size_t>(tau)];
      r_car[ci][static_cast<std::size_t>(tau)] =
          own * r[ci][static_cast<std::size_t>(tau)] + cross * others;
    }
  }

  const auto bins = band_bin_indices(fconfig, w, config.sampling_rate_hz);
  const int out_bands = static_cast<int>(fconfig.bands.size());
  Eigen::VectorXd features(static_cast<Eigen::Index>(out_bands) *
                           static_cast<Eigen::Index>(n_sel));

  const int tau_max = std::min(kTaps - 1, w - 1);
  for (std::size_t ci = 0; ci < n_sel; ++ci) {
    // Var |X_k|^2 of the length-w DFT of a stationary zero-mean process:
    // nu_k = w r(0) + 2 sum_tau (w - tau) r(tau) cos(2 pi k tau / w).
    // Each in-band bin magnitude is Rayleigh, E|X_k| = sqrt(pi nu_k) / 2.
    auto nu = [&](int k) {
      double v = w * r_car[ci][0];
      for (int tau = 1; tau <= tau_max; ++tau) {
        v += 2.0 * (w - tau) * r_car[ci][static_cast<std::size_t>(tau)] *
             std::cos(2.0 * std::numbers::pi * k * tau / w);
      }
      return std::max(v, 0.0);
    };
    for (int b = 0; b < out_bands; ++b) {
      double expected_sum = 0.0;
      for (int k : bins[static_cast<std::size_t>(b)]) {
        expected_sum += std::sqrt(std::numbers::pi * nu(k)) / 2.0;
      }
      features(static_cast<Eigen::Index>(ci) * out_bands + b) =
          std::log(std::max(expected_sum, fconfig.epsilon_floor));
    }
  }
  return features;
}

void generate_dataset(const SynthConfig& config,
                      const std::filesystem::path& out_dir, int jobs) {
  validate_synth_config(config);
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  struct Unit {
    int subject;
    int session;
  };
  std::vector<Unit> units;
  for (int s = 1; s <= config.sessions; ++s) {
    for (int j = 1; j <= config.subjects; ++j) units.push_back(Unit{j, s});
  }

  parallel_for(units.size(), jobs, [&](std::size_t i) {
    const auto [subject, session] = units[i];
    const fs::path dir = out_dir /
                         ("Session " + std::to_string(session)) /
                         ("session" + std::to_string(session) + "_subject" +
                          std::to_string(subject));
    for (int g = 1; g <= config.gestures; ++g) {
      for (int t = 1; t <= config.trials; ++t) {
        const TrialId id{session, subject, g, t};
        const SignalRecord record = synthesize_trial(config, id);
        write_record(dir, record, config.gain);
      }
    }
  });

  // Ground truth for test assertions only; the pipeline under test never
  // reads it.  Expectations use the generator's own defaults: full-channel
  // selection, default window and bands.
  nlohmann::json truth;
  truth["format"] = "emgbio-synth-truth";
  truth["version"] = 1;
  truth["config"] = {{"subjects", config.subjects},
                     {"sessions", config.sessions},
                     {"gestures", config.gestures},
                     {"trials", config.trials},
                     {"sample_count", config.sample_count},
                     {"channels", config.channels},
                     {"sampling_rate_hz", config.sampling_rate_hz},
                     {"separation", config.separation},
                     {"session_drift", config.session_drift},
                     {"noise_level", config.noise_level},
                     {"gain", config.gain},
                     {"seed", config.seed}};

  ChannelSelection all{"all", {}};
  for (int c = 0; c < config.channels; ++c) all.channel_indices.push_back(c);
  const WindowSpec wspec;
  const FdtConfig fconfig;
  nlohmann::json expectations = nlohmann::json::array();
  if (config.channels >= 2) {
    for (int j = 1; j <= config.subjects; ++j) {
      for (int s = 1; s <= config.sessions; ++s) {
        for (int g = 1; g <= config.gestures; ++g) {
          const Eigen::VectorXd values =
              expected_features(config, j, s, g, all, wspec, fconfig);
          nlohmann::json row = {{"subject", j}, {"session", s}, {"gesture", g}};
          nlohmann::json list = nlohmann::json::array();
          for (Eigen::Index i = 0; i < values.size(); ++i) list.push_back(values(i));
          row["values"] = std::move(list);
          expectations.push_back(std::move(row));
        }
      }
    }
  }
  truth["expected_features"] = std::move(expectations);

  std::ofstream out(out_dir / "ground_truth.json", std::ios::binary);
  if (!out) {
    throw Error("cannot write ground truth file in " + out_dir.string());
  }
  out << truth.dump(2) << "\n";
}

}  // namespace emgbio
