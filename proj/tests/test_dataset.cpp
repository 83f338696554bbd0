// tests/test_dataset.cpp

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

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "emgbio/errors.hpp"
#include "emgbio/rng.hpp"
#include "testutil.hpp"

using namespace emgbio;

namespace {

// Writes a tiny but complete tree: every cell of `grid` gets a short record.
void write_tree(const std::filesystem::path& root, const ExpectedGrid& grid) {
  Rng rng = Rng::stream(3, {77});
  for (int session = 1; session <= grid.sessions; ++session) {
    for (int subject = 1; subject <= grid.subjects; ++subject) {
      const auto dir = root / ("Session " + std::to_string(session)) /
                       ("session" + std::to_string(session) + "_subject" +
                        std::to_string(subject));
      for (int gesture = 1; gesture <= grid.gestures; ++gesture) {
        for (int trial = 1; trial <= grid.trials; ++trial) {
          SignalRecord record;
          record.id = TrialId{session, subject, gesture, trial};
          record.sampling_rate_hz = 2048.0;
          record.samples.resize(4, 2);
          for (Eigen::Index r = 0; r < 4; ++r)
            for (Eigen::Index c = 0; c < 2; ++c)
              record.samples(r, c) = rng.normal() * 0.01;
          write_record(dir, record, 500.0);
        }
      }
    }
  }
}

}  // namespace

TEST_CASE("scan indexes a complete tree with no gaps") {
  testutil::TempDir dir("dataset");
  const ExpectedGrid grid{2, 2, 2, 2};
  write_tree(dir.path(), grid);

  DatasetManifest manifest = scan_dataset(dir.path(), grid);
  CHECK(manifest.entries.size() == 16);
  CHECK(manifest.missing.empty());
  CHECK(manifest.stray_files.empty());
  CHECK(manifest.has(TrialId{2, 2, 2, 2}));
  CHECK(!manifest.has(TrialId{3, 1, 1, 1}));
  CHECK(manifest.subject_session_complete(1, 1));
  CHECK(manifest.subject_complete(2));

  // Manifest JSON parses and reflects the same counts.
  nlohmann::json j = nlohmann::json::parse(manifest.to_json());
  CHECK(j.at("entries").size() == 16);
  CHECK(j.at("missing").empty());
}

TEST_CASE("missing records are reported against the grid") {
  testutil::TempDir dir("dataset");
  const ExpectedGrid grid{2, 2, 2, 2};
  write_tree(dir.path(), grid);
  std::filesystem::remove(dir.path() / "Session 2" / "session2_subject1" /
                          "session2_subject1_gesture2_trial1.hea");
  std::filesystem::remove(dir.path() / "Session 2" / "session2_subject1" /
                          "session2_subject1_gesture2_trial1.dat");

  DatasetManifest manifest = scan_dataset(dir.path(), grid);
  CHECK(manifest.entries.size() == 15);
  REQUIRE(manifest.missing.size() == 1);
  CHECK(manifest.missing[0] == TrialId{2, 1, 2, 1});
  CHECK(!manifest.subject_session_complete(1, 2));
  CHECK(manifest.subject_session_complete(1, 1));
  CHECK(!manifest.subject_complete(1));
  CHECK(manifest.subject_complete(2));
}

TEST_CASE("files that do not fit the layout are strays") {
  testutil::TempDir dir("dataset");
  const ExpectedGrid grid{1, 1, 1, 1};
  write_tree(dir.path(), grid);
  testutil::write_file(dir.path() / "Session 1" / "README.txt", "hello\n");
  testutil::write_file(dir.path() / "Session 1" / "badname_trial1.hea", "x\n");

  DatasetManifest manifest = scan_dataset(dir.path(), grid);
  CHECK(manifest.entries.size() == 1);
  CHECK(manifest.stray_files.size() == 2);
}

TEST_CASE("duplicate identities are an error") {
  testutil::TempDir dir("dataset");
  const ExpectedGrid grid{1, 1, 1, 1};
  write_tree(dir.path(), grid);
  // Same record name reachable in a second directory.
  SignalRecord record;
  record.id = TrialId{1, 1, 1, 1};
  record.sampling_rate_hz = 2048.0;
  record.samples = Eigen::MatrixXd::Zero(4, 2);
  write_record(dir.path() / "copy", record, 500.0);

  CHECK_THROWS_AS(scan_dataset(dir.path(), grid), Error);
}

TEST_CASE("scanning a nonexistent root fails cleanly") {
  testutil::TempDir dir("dataset");
  CHECK_THROWS_AS(scan_dataset(dir.path() / "nope", ExpectedGrid{1, 1, 1, 1}),
                  Error);
}
