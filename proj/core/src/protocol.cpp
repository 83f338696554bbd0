// core/src/protocol.cpp

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

#include "emgbio/protocol.hpp"

#include <algorithm>

#include "emgbio/errors.hpp"

namespace emgbio {

std::string protocol_name(Protocol protocol) {
  switch (protocol) {
    case Protocol::kWithinDay: return "within_day";
    case Protocol::kSingleCrossDay: return "single_cross_day";
    case Protocol::kCumulativeCrossDay: return "cumulative_cross_day";
  }
  throw Error("unknown protocol");
}

std::optional<Protocol> protocol_from_name(std::string_view name) {
  if (name == "within_day") return Protocol::kWithinDay;
  if (name == "single_cross_day") return Protocol::kSingleCrossDay;
  if (name == "cumulative_cross_day") return Protocol::kCumulativeCrossDay;
  return std::nullopt;
}

bool subject_day_usable(const DatasetManifest& manifest, int subject, int day,
                        const std::vector<int>& gesture_pool) {
  for (int g : gesture_pool) {
    for (int t = 1; t <= manifest.grid.trials; ++t) {
      if (!manifest.has(TrialId{day, subject, g, t})) return false;
    }
  }
  return true;
}

namespace {

// Trial rotated i steps past t on a T-trial day, wrapping 1-based.
int rotate_trial(int t, int i, int trials) {
  return (t - 1 + i) % trials + 1;
}

std::vector<int> usable_days(const DatasetManifest& manifest, int subject,
                             const std::vector<int>& gesture_pool) {
  std::vector<int> days;
  for (int d = 1; d <= manifest.grid.sessions; ++d) {
    if (subject_day_usable(manifest, subject, d, gesture_pool)) days.push_back(d);
  }
  return days;
}

}  // namespace

FoldPlan fold_plan(Protocol protocol, const DatasetManifest& manifest,
                   const std::vector<int>& gesture_pool) {
  if (gesture_pool.empty()) throw Error("fold planning needs a non-empty gesture pool");
  const int trials = manifest.grid.trials;
  const int sessions = manifest.grid.sessions;
  if (trials < 2) throw Error("fold planning needs at least 2 trials per day");
  if (protocol != Protocol::kWithinDay && sessions != 3) {
    throw Error("cross-day protocols need a 3-session grid; manifest has " +
                std::to_string(sessions));
  }
  if (protocol == Protocol::kCumulativeCrossDay && trials < 3) {
    throw Error("cumulative_cross_day needs at least 3 trials per day");
  }

  FoldPlan plan;
  plan.protocol = protocol;

  for (int subject = 1; subject <= manifest.grid.subjects; ++subject) {
    const std::vector<int> days = usable_days(manifest, subject, gesture_pool);
    bool any_fold = false;

    if (protocol == Protocol::kWithinDay) {
      if (days.size() < static_cast<std::size_t>(sessions) && !days.empty()) {
        plan.warnings.push_back("subject " + std::to_string(subject) +
                                ": only " + std::to_string(days.size()) +
                                " usable day(s) for within_day");
      }
      for (int d : days) {
        for (int t = 1; t <= trials; ++t) {
          Fold fold;
          fold.subject = subject;
          fold.day = d;
          fold.fold_index = t;
          for (int e = 1; e <= trials; ++e) {
            if (e != t) fold.enrollment.push_back(TrialRef{d, e});
          }
          fold.claimants.push_back(TrialRef{d, t});
          plan.folds.push_back(std::move(fold));
          any_fold = true;
        }
      }
    } else if (days.size() == 3) {
      for (int d : days) {
        for (int t = 1; t <= trials; ++t) {
          Fold fold;
          fold.subject = subject;
          fold.day = d;
          fold.fold_index = t;
          std::vector<int> others;
          for (int o : days) {
            if (o != d) others.push_back(o);
          }
          if (protocol == Protocol::kSingleCrossDay) {
            for (int e = 1; e <= trials; ++e) {
              if (e != t) fold.enrollment.push_back(TrialRef{d, e});
            }
            for (int o : others) fold.claimants.push_back(TrialRef{o, t});
          } else {
            // Hold out day d; enroll on rotating trial triples of the others.
            for (int i = 0; i < 3; ++i) {
              fold.enrollment.push_back(TrialRef{others[0], rotate_trial(t, i, trials)});
            }
            for (int i = 3; i < 6; ++i) {
              fold.enrollment.push_back(TrialRef{others[1], rotate_trial(t, i, trials)});
            }
            fold.claimants.push_back(TrialRef{d, t});
          }
          plan.folds.push_back(std::move(fold));
          any_fold = true;
        }
      }
    } else if (!days.empty()) {
      plan.warnings.push_back("subject " + std::to_string(subject) +
                              " skipped for " + protocol_name(protocol) +
                              ": only " + std::to_string(days.size()) +
                              " of 3 days usable");
    }

    if (!any_fold) plan.skipped_subjects.push_back(subject);
  }

  for (const Fold& fold : plan.folds) {
    for (const TrialRef& claimant : fold.claimants) {
      if (std::find(fold.enrollment.begin(), fold.enrollment.end(), claimant) !=
          fold.enrollment.end()) {
        throw Error("fold hygiene violation: claimant trial appears in its own "
                    "enrollment set (subject " + std::to_string(fold.subject) + ")");
      }
    }
  }
  return plan;
}

}  // namespace emgbio
