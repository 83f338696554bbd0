// core/src/dataset.cpp

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

#include "emgbio/dataset.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "emgbio/errors.hpp"

namespace emgbio {

bool DatasetManifest::subject_session_complete(int subject, int session) const {
  for (int g = 1; g <= grid.gestures; ++g) {
    for (int t = 1; t <= grid.trials; ++t) {
      if (!has(TrialId{session, subject, g, t})) return false;
    }
  }
  return true;
}

bool DatasetManifest::subject_complete(int subject) const {
  for (int s = 1; s <= grid.sessions; ++s) {
    if (!subject_session_complete(subject, s)) return false;
  }
  return true;
}

std::string DatasetManifest::to_json() const {
  nlohmann::json j;
  j["root"] = root;
  j["grid"] = {{"sessions", grid.sessions},
               {"subjects", grid.subjects},
               {"gestures", grid.gestures},
               {"trials", grid.trials}};
  auto& ents = j["entries"] = nlohmann::json::array();
  for (const auto& [id, path] : entries) {
    ents.push_back({{"session", id.session},
                    {"subject", id.subject},
                    {"gesture", id.gesture},
                    {"trial", id.trial},
                    {"path", path.generic_string()}});
  }
  auto& miss = j["missing"] = nlohmann::json::array();
  for (const auto& id : missing) {
    miss.push_back({{"session", id.session},
                    {"subject", id.subject},
                    {"gesture", id.gesture},
                    {"trial", id.trial}});
  }
  j["stray_files"] = stray_files;
  return j.dump(2) + "\n";
}

DatasetManifest scan_dataset(const std::filesystem::path& root,
                             const ExpectedGrid& grid) {
  namespace fs = std::filesystem;
  if (!fs::exists(root)) throw Error("dataset root does not exist: " + root.string());
  if (!fs::is_directory(root)) {
    throw Error("dataset root is not a directory: " + root.string());
  }

  DatasetManifest manifest;
  manifest.root = root.generic_string();
  manifest.grid = grid;

  std::error_code ec;
  for (fs::recursive_directory_iterator it(root, ec), end; it != end;
       it.increment(ec)) {
    if (ec) throw Error("cannot walk dataset tree: " + ec.message());
    if (!it->is_regular_file()) continue;
    const fs::path& p = it->path();
    const std::string ext = p.extension().string();
    if (ext == ".dat") continue;  // indexed through its header twin
    if (ext != ".hea") {
      manifest.stray_files.push_back(p.generic_string());
      continue;
    }
    const auto id = parse_trial_id(p.stem().string());
    if (!id) {
      manifest.stray_files.push_back(p.generic_string());
      continue;
    }
    auto [pos, inserted] = manifest.entries.emplace(*id, p);
    if (!inserted) {
      throw Error("duplicate trial '" + id->name() + "': " +
                  pos->second.generic_string() + " and " + p.generic_string());
    }
  }
  if (ec) throw Error("cannot walk dataset tree: " + ec.message());

  for (int s = 1; s <= grid.sessions; ++s) {
    for (int j = 1; j <= grid.subjects; ++j) {
      for (int g = 1; g <= grid.gestures; ++g) {
        for (int t = 1; t <= grid.trials; ++t) {
          const TrialId id{s, j, g, t};
          if (!manifest.has(id)) manifest.missing.push_back(id);
        }
      }
    }
  }
  std::sort(manifest.stray_files.begin(), manifest.stray_files.end());
  return manifest;
}

}  // namespace emgbio
