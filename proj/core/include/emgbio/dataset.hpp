// core/include/emgbio/dataset.hpp

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

#ifndef EMGBIO_DATASET_HPP_
#define EMGBIO_DATASET_HPP_

/// \file dataset.hpp
/// Directory scanner for the on-disk trial layout
/// `Session {1,2,3}/session{i}_subject{j}/session{i}_subject{j}_gesture{k}_trial{l}.hea`.
/// The scanner indexes every header/signal pair it finds, checks the result
/// against an expected (session, subject, gesture, trial) grid, and reports
/// missing combinations so evaluation code can decide which subjects are
/// usable for which protocol.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "emgbio/record.hpp"

namespace emgbio {

/// The full grid of trials a dataset tree is expected to contain.  The
/// published corpus is 3 sessions x 43 subjects x 17 gestures x 7 trials;
/// synthetic trees shrink every axis.
struct ExpectedGrid {
  int sessions = 3;
  int subjects = 43;
  int gestures = 17;
  int trials = 7;

  std::int64_t total() const {
    return static_cast<std::int64_t>(sessions) * subjects * gestures * trials;
  }
};

struct DatasetManifest {
  std::string root;
  ExpectedGrid grid;
  /// Present trials, keyed by identity so iteration order is deterministic
  /// regardless of filesystem enumeration order.
  std::map<TrialId, std::filesystem::path> entries;
  std::vector<TrialId> missing;
  /// Files under the root that do not fit the naming scheme.
  std::vector<std::string> stray_files;

  bool has(const TrialId& id) const { return entries.count(id) != 0; }
  /// True when the subject has every (gesture, trial) cell of the session.
  bool subject_session_complete(int subject, int session) const;
  /// True when the subject is complete across all sessions in the grid.
  bool subject_complete(int subject) const;

  std::string to_json() const;
};

/// Walks the tree under `root` and builds the manifest.  Duplicate identities
/// (the same trial reachable through two paths) are an error; files that do
/// not parse as trial names are collected as strays.
DatasetManifest scan_dataset(const std::filesystem::path& root,
                             const ExpectedGrid& grid = ExpectedGrid{});

}  // namespace emgbio

#endif  // EMGBIO_DATASET_HPP_
