// core/include/emgbio/evaluate.hpp

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

#ifndef EMGBIO_EVALUATE_HPP_
#define EMGBIO_EVALUATE_HPP_

/// \file evaluate.hpp
/// End-to-end verification benchmark over a dataset tree.
///
/// For every requested protocol the engine walks each subject's folds.  Per
/// fold it enrolls one template per pool gesture from the enrollment trials,
/// derives per-gesture vote weights from an internal leave-one-out pass over
/// those same trials (impostors replaying the gesture, so no claimant data
/// leaks into calibration), then scores every code sequence:
///   - genuine attempts: the subject's claimant trials performing each code;
///   - impostor attempts: every other cohort subject's claimant trials,
///     replaying the genuine sequence (leaked scenario) or presenting a
///     freshly sampled sequence distinct from the genuine one at the same
///     codelength (normal scenario).
/// Each sequence yields a fused DET curve and EER; sequence EERs average to
/// the fold EER, fold EERs average per day, day EERs average to the subject
/// EER, and subjects summarize as cohort quartiles.
///
/// Everything is deterministic in (dataset, config, seed); per-sequence and
/// per-impostor randomness comes from keyed substreams, so thread count
/// cannot change any number.

#include <string>
#include <utility>
#include <vector>

#include "emgbio/config.hpp"
#include "emgbio/dataset.hpp"
#include "emgbio/det.hpp"
#include "emgbio/fusion.hpp"

namespace emgbio {

struct SubjectEer {
  int subject = 0;
  std::vector<std::pair<int, double>> per_day;  // (day, mean over fold EERs)
  double eer = 0.0;                             // mean over days
};

/// Outcome of one (protocol, scenario, codelength) cell.
struct ConfigResult {
  Protocol protocol = Protocol::kWithinDay;
  Scenario scenario = Scenario::kNormal;
  int codelength = 0;
  std::vector<SubjectEer> subjects;  // ascending subject id
  Quartiles cohort;
  /// Pointwise mean of every fused DET curve in this cell (shared tau grid).
  std::vector<DetPoint> mean_curve;
};

struct EvalResult {
  std::string selection_name;
  std::vector<CodeSequence> sequences;  // the shared base sequences
  std::vector<ConfigResult> results;    // config order: protocol, scenario, M
  std::vector<std::pair<std::string, int>> skipped;  // (protocol name, subject)
  std::vector<std::string> warnings;
};

EvalResult evaluate(const DatasetManifest& manifest, const RunConfig& config);

}  // namespace emgbio

#endif  // EMGBIO_EVALUATE_HPP_
