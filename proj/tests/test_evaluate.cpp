// tests/test_evaluate.cpp

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

#include "emgbio/evaluate.hpp"

#include <filesystem>
#include <set>
#include <vector>

#include "doctest.h"
#include "emgbio/errors.hpp"
#include "emgbio/report.hpp"
#include "emgbio/synthgen.hpp"
#include "testutil.hpp"

using namespace emgbio;

namespace {

SynthConfig tiny_synth() {
  SynthConfig s;
  s.subjects = 3;
  s.sessions = 3;
  s.gestures = 4;
  s.trials = 3;
  s.sample_count = 2048;
  s.channels = 4;
  s.separation = 1.2;
  s.session_drift = 0.2;
  s.noise_level = 0.1;
  s.seed = 21;
  return s;
}

RunConfig tiny_run(const std::filesystem::path& root) {
  RunConfig c;
  c.dataset_root = root.string();
  c.selection = "custom";
  c.custom_channels = {0, 1, 2, 3};
  c.grid = {3, 3, 4, 3};
  c.rest_gesture = 4;  // pool {1, 2, 3}
  c.codelengths = {1, 3};
  c.sequence_count = 3;
  c.seed = 77;
  c.jobs = 1;
  return c;
}

// One generated tree + one evaluation, shared by every case in this file.
struct Env {
  testutil::TempDir dir{"eval"};
  std::filesystem::path root;
  DatasetManifest manifest;
  RunConfig config;
  EvalResult result;

  Env() {
    root = dir.path() / "tree";
    generate_dataset(tiny_synth(), root, 1);
    config = tiny_run(root);
    manifest = scan_dataset(root, config.grid);
    result = evaluate(manifest, config);
  }
};

const Env& env() {
  static Env e;
  return e;
}

const ConfigResult& cell(const EvalResult& r, Protocol p, Scenario s, int m) {
  for (const ConfigResult& cr : r.results)
    if (cr.protocol == p && cr.scenario == s && cr.codelength == m) return cr;
  throw Error("cell not found");
}

}  // namespace

TEST_CASE("one result cell per (protocol, scenario, codelength)") {
  const EvalResult& r = env().result;
  CHECK(r.selection_name == "custom");
  REQUIRE(r.results.size() == 3 * 2 * 2);
  // Protocol-major, then scenario, then codelength.
  CHECK(r.results[0].protocol == Protocol::kWithinDay);
  CHECK(r.results[0].scenario == Scenario::kNormal);
  CHECK(r.results[0].codelength == 1);
  CHECK(r.results[1].codelength == 3);
  CHECK(r.results[2].scenario == Scenario::kLeaked);
  CHECK(r.results[4].protocol == Protocol::kSingleCrossDay);
  CHECK(r.results[8].protocol == Protocol::kCumulativeCrossDay);

  REQUIRE(r.sequences.size() == 3);
  for (const CodeSequence& s : r.sequences) {
    CHECK(s.length() == 3);  // base length = min(6, pool size)
    const std::set<int> codes(s.codes.begin(), s.codes.end());
    CHECK(codes.size() == 3);
    for (int c : s.codes) CHECK((c >= 1 && c <= 3));
  }
  CHECK(r.skipped.empty());
}

TEST_CASE("every cell covers the full cohort with sane numbers") {
  for (const ConfigResult& cr : env().result.results) {
    REQUIRE(cr.subjects.size() == 3);
    int prev = 0;
    for (const SubjectEer& se : cr.subjects) {
      CHECK(se.subject > prev);  // ascending ids
      prev = se.subject;
      CHECK(se.eer >= 0.0);
      CHECK(se.eer <= 1.0);
      REQUIRE(se.per_day.size() == 3);
      double mean = 0.0;
      for (const auto& [day, eer] : se.per_day) {
        CHECK((day >= 1 && day <= 3));
        CHECK(eer >= 0.0);
        CHECK(eer <= 1.0);
        mean += eer;
      }
      CHECK(se.eer == doctest::Approx(mean / 3.0));
    }
    CHECK(cr.cohort.q1 <= cr.cohort.median);
    CHECK(cr.cohort.median <= cr.cohort.q3);
  }
}

TEST_CASE("mean DET curves share the fused sweep grid") {
  for (const ConfigResult& cr : env().result.results) {
    // Sentinel + 514 tau points (default 512 interior + both endpoints).
    REQUIRE(cr.mean_curve.size() == 515);
    CHECK(cr.mean_curve.front().param == -1.0);
    CHECK(cr.mean_curve.front().far == 0.0);
    CHECK(cr.mean_curve.front().frr == 1.0);
    CHECK(cr.mean_curve[1].param == 0.0);
    CHECK(cr.mean_curve.back().param == 1.0);
    CHECK(cr.mean_curve.back().far == 1.0);
    CHECK(cr.mean_curve.back().frr == 0.0);
    for (std::size_t i = 1; i < cr.mean_curve.size(); ++i) {
      CHECK(cr.mean_curve[i].far >= cr.mean_curve[i - 1].far);
      CHECK(cr.mean_curve[i].frr <= cr.mean_curve[i - 1].frr);
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  const EvalResult again = evaluate(env().manifest, env().config);
  CHECK(report_json(env().config, again) ==
        report_json(env().config, env().result));
}

TEST_CASE("a missing day drops cross-day subjects but keeps within-day") {
  testutil::TempDir dir("evalmiss");
  const auto root = dir.path() / "tree";
  generate_dataset(tiny_synth(), root, 1);
  // Knock out one in-pool record of subject 2 on day 3.
  const auto victim = root / "Session 3" / "session3_subject2" /
                      "session3_subject2_gesture1_trial2";
  REQUIRE(std::filesystem::remove(victim.string() + ".hea"));
  REQUIRE(std::filesystem::remove(victim.string() + ".dat"));

  const RunConfig config = tiny_run(root);
  const DatasetManifest manifest = scan_dataset(root, config.grid);
  const EvalResult r = evaluate(manifest, config);

  const std::set<std::pair<std::string, int>> skipped(r.skipped.begin(),
                                                      r.skipped.end());
  CHECK(skipped.count({"single_cross_day", 2}) == 1);
  CHECK(skipped.count({"cumulative_cross_day", 2}) == 1);
  CHECK_FALSE(r.warnings.empty());

  const ConfigResult& wd = cell(r, Protocol::kWithinDay, Scenario::kNormal, 1);
  REQUIRE(wd.subjects.size() == 3);
  CHECK(wd.subjects[1].subject == 2);
  REQUIRE(wd.subjects[1].per_day.size() == 2);  // days 1 and 2 survive
  CHECK(wd.subjects[1].per_day[0].first == 1);
  CHECK(wd.subjects[1].per_day[1].first == 2);

  const ConfigResult& ccd =
      cell(r, Protocol::kCumulativeCrossDay, Scenario::kNormal, 1);
  CHECK(ccd.subjects.size() == 2);
  for (const SubjectEer& se : ccd.subjects) CHECK(se.subject != 2);
}

TEST_CASE("a cohort without impostors is an error") {
  SynthConfig s = tiny_synth();
  s.subjects = 1;
  testutil::TempDir dir("evalsolo");
  const auto root = dir.path() / "tree";
  generate_dataset(s, root, 1);
  RunConfig config = tiny_run(root);
  config.grid.subjects = 1;
  const DatasetManifest manifest = scan_dataset(root, config.grid);
  CHECK_THROWS_AS(evaluate(manifest, config), Error);
}

TEST_CASE("codelengths beyond the gesture pool are rejected") {
  RunConfig config = env().config;
  config.codelengths = {4};  // pool has 3 gestures
  CHECK_THROWS_AS(evaluate(env().manifest, config), Error);
  config.codelengths = {0};
  CHECK_THROWS_AS(evaluate(env().manifest, config), Error);
  config.codelengths = {1};
  config.sequence_count = 0;
  CHECK_THROWS_AS(evaluate(env().manifest, config), Error);
}

TEST_CASE("leaked replay is at least as strong as random impostors on median") {
  // With three subjects the gap can be noisy, so compare cohort medians with
  // slack rather than per subject: a leaked sequence removes the chance that
  // the impostor fails by presenting the wrong codes.
  const EvalResult& r = env().result;
  for (Protocol p : {Protocol::kWithinDay, Protocol::kSingleCrossDay,
                     Protocol::kCumulativeCrossDay}) {
    const double leaked = cell(r, p, Scenario::kLeaked, 3).cohort.median;
    const double normal = cell(r, p, Scenario::kNormal, 3).cohort.median;
    CHECK(leaked >= normal - 0.15);
  }
}
