// core/include/emgbio/protocol.hpp

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

#ifndef EMGBIO_PROTOCOL_HPP_
#define EMGBIO_PROTOCOL_HPP_

/// \file protocol.hpp
/// Enrollment/claimant fold planning.  Sessions play the role of days.
///
/// within_day:  for each day d and trial t, enroll on day d's other trials
///              and claim with (d, t).  Days with incomplete data are
///              skipped per subject.
/// single_cross_day:  enroll as in within_day on day d; claim with trial t
///              of each of the two remaining days.  Requires all 3 days.
/// cumulative_cross_day:  hold out day h; claim with (h, t); enroll on three
///              trials from each of the two remaining days, rotating the
///              trial triples with t so every fold sees a different six.
///              Requires all 3 days.
///
/// Every protocol yields days x trials folds per usable subject (21 on the
/// full 3x7 grid).  A fold's claimant trials never appear in its enrollment
/// set; for cross-day folds the sets do not even share a day.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emgbio/dataset.hpp"

namespace emgbio {

enum class Protocol {
  kWithinDay,
  kSingleCrossDay,
  kCumulativeCrossDay,
};

std::string protocol_name(Protocol protocol);
std::optional<Protocol> protocol_from_name(std::string_view name);

/// A (session, trial) slot; gestures are orthogonal to fold structure.
struct TrialRef {
  int session = 0;
  int trial = 0;

  auto operator<=>(const TrialRef&) const = default;
};

struct Fold {
  int subject = 0;
  /// Reporting day: the enrollment day for within_day/single_cross_day, the
  /// held-out claimant day for cumulative_cross_day.
  int day = 0;
  int fold_index = 0;  // 1-based claimant trial index
  std::vector<TrialRef> enrollment;
  std::vector<TrialRef> claimants;
};

struct FoldPlan {
  Protocol protocol = Protocol::kWithinDay;
  /// Sorted by (subject, day, fold_index).
  std::vector<Fold> folds;
  /// Subjects with no folds at all under this protocol.
  std::vector<int> skipped_subjects;
  std::vector<std::string> warnings;
};

/// True when the subject has every (gesture in pool, trial) record of the day.
bool subject_day_usable(const DatasetManifest& manifest, int subject, int day,
                        const std::vector<int>& gesture_pool);

/// Plans folds for every subject in the manifest grid.  `gesture_pool` is the
/// set of gestures evaluation will touch; completeness is checked against it
/// (a missing out-of-pool record does not disqualify a subject).
FoldPlan fold_plan(Protocol protocol, const DatasetManifest& manifest,
                   const std::vector<int>& gesture_pool);

}  // namespace emgbio

#endif  // EMGBIO_PROTOCOL_HPP_
