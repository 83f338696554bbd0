// tests/test_config.cpp

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

#include "emgbio/config.hpp"

#include <algorithm>
#include <string>

#include "doctest.h"
#include "emgbio/errors.hpp"
#include "testutil.hpp"

using namespace emgbio;

TEST_CASE("config JSON round trip preserves every field") {
  RunConfig c;
  c.dataset_root = "/data/tree";
  c.output_dir = "results";
  c.template_store = "store.json";
  c.selection = "custom";
  c.custom_channels = {0, 3, 5};
  c.window.window_len_samples = 256;
  c.window.step_samples = 64;
  c.fdt.bands = {{10.0, 50.0}, {50.0, 90.0}};
  c.fdt.epsilon_floor = 1e-10;
  c.fdt.taper = Taper::kHann;
  c.fdt.notch_enabled = true;
  c.fdt.notch_hz = 60.0;
  c.fdt.notch_halfwidth_hz = 1.5;
  c.shrinkage = 0.05;
  c.attempt_reduce = AttemptReduce::kMedian;
  c.protocols = {Protocol::kCumulativeCrossDay};
  c.scenarios = {Scenario::kLeaked};
  c.codelengths = {1, 3, 6};
  c.sequence_count = 12;
  c.rest_gesture = 4;
  c.grid = {3, 5, 4, 3};
  c.seed = 99;
  c.jobs = 2;

  const RunConfig back = run_config_from_json(run_config_to_json(c));
  CHECK(back.dataset_root == c.dataset_root);
  CHECK(back.output_dir == c.output_dir);
  CHECK(back.template_store == c.template_store);
  CHECK(back.selection == c.selection);
  CHECK(back.custom_channels == c.custom_channels);
  CHECK(back.window.window_len_samples == c.window.window_len_samples);
  CHECK(back.window.step_samples == c.window.step_samples);
  CHECK(back.fdt.bands == c.fdt.bands);
  CHECK(back.fdt.epsilon_floor == c.fdt.epsilon_floor);
  CHECK(back.fdt.taper == c.fdt.taper);
  CHECK(back.fdt.notch_enabled == c.fdt.notch_enabled);
  CHECK(back.fdt.notch_hz == c.fdt.notch_hz);
  CHECK(back.fdt.notch_halfwidth_hz == c.fdt.notch_halfwidth_hz);
  CHECK(back.shrinkage == c.shrinkage);
  CHECK(back.attempt_reduce == c.attempt_reduce);
  CHECK(back.protocols == c.protocols);
  CHECK(back.scenarios == c.scenarios);
  CHECK(back.codelengths == c.codelengths);
  CHECK(back.sequence_count == c.sequence_count);
  CHECK(back.rest_gesture == c.rest_gesture);
  CHECK(back.grid.sessions == c.grid.sessions);
  CHECK(back.grid.subjects == c.grid.subjects);
  CHECK(back.grid.gestures == c.grid.gestures);
  CHECK(back.grid.trials == c.grid.trials);
  CHECK(back.seed == c.seed);
  CHECK(back.jobs == c.jobs);
}

TEST_CASE("defaults mirror the published recording setup") {
  const RunConfig c = run_config_from_json("{}");
  CHECK(c.selection == "forearm");
  CHECK(c.window.window_len_samples == 410);
  CHECK(c.window.step_samples == 102);
  CHECK(c.fdt.bands.size() == 6);
  CHECK(c.fdt.bands.front() == std::pair<double, double>(20.0, 92.0));
  CHECK(c.fdt.bands.back() == std::pair<double, double>(378.0, 450.0));
  CHECK(c.shrinkage == 0.01);
  CHECK(c.attempt_reduce == AttemptReduce::kMean);
  CHECK(c.protocols.size() == 3);
  CHECK(c.scenarios.size() == 2);
  CHECK(c.codelengths == std::vector<int>{1, 6});
  CHECK(c.rest_gesture == 17);
  CHECK(c.grid.subjects == 43);
  CHECK(c.grid.gestures == 17);
  CHECK(c.seed == 1);
}

TEST_CASE("unknown keys are rejected with the offending name") {
  const char* cases[] = {
      R"({"selektion": "forearm"})",
      R"({"window": {"length": 410, "hop": 102}})",
      R"({"features": {"floor": 1e-12}})",
      R"({"eval": {"code_lengths": [1]}})",
  };
  for (const char* text : cases) {
    CHECK_THROWS_AS(run_config_from_json(text), Error);
  }
  try {
    run_config_from_json(R"({"selektion": "forearm"})");
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("selektion") != std::string::npos);
  }
}

TEST_CASE("malformed values are rejected") {
  CHECK_THROWS_AS(run_config_from_json("not json"), Error);
  CHECK_THROWS_AS(run_config_from_json("[1,2]"), Error);
  CHECK_THROWS_AS(
      run_config_from_json(R"({"features": {"bands": [[20, 92, 5]]}})"), Error);
  CHECK_THROWS_AS(
      run_config_from_json(R"({"features": {"taper": "blackman"}})"), Error);
  CHECK_THROWS_AS(
      run_config_from_json(R"({"matcher": {"attempt_reduce": "max"}})"), Error);
  CHECK_THROWS_AS(
      run_config_from_json(R"({"eval": {"protocols": ["weekly"]}})"), Error);
  CHECK_THROWS_AS(
      run_config_from_json(R"({"eval": {"scenarios": ["stolen"]}})"), Error);
  CHECK_THROWS_AS(
      run_config_from_json(R"({"eval": {"codelengths": [0]}})"), Error);
  CHECK_THROWS_AS(
      run_config_from_json(R"({"eval": {"codelengths": [7]}})"), Error);
  CHECK_THROWS_AS(
      run_config_from_json(R"({"eval": {"sequence_count": 0}})"), Error);
}

TEST_CASE("config hash ignores jobs but tracks everything else") {
  RunConfig a;
  RunConfig b = a;
  b.jobs = 8;
  CHECK(config_hash(a) == config_hash(b));

  RunConfig c = a;
  c.seed = 2;
  CHECK(config_hash(c) != config_hash(a));
  RunConfig d = a;
  d.selection = "wrist";
  CHECK(config_hash(d) != config_hash(a));
  RunConfig e = a;
  e.sequence_count += 1;
  CHECK(config_hash(e) != config_hash(a));
}

TEST_CASE("feature hash tracks feature semantics only") {
  RunConfig a;
  RunConfig b = a;
  b.dataset_root = "/elsewhere";
  b.seed = 42;
  b.sequence_count = 7;
  b.jobs = 4;
  CHECK(feature_config_hash(a) == feature_config_hash(b));

  RunConfig c = a;
  c.selection = "wrist";
  CHECK(feature_config_hash(c) != feature_config_hash(a));
  RunConfig d = a;
  d.window.window_len_samples = 512;
  CHECK(feature_config_hash(d) != feature_config_hash(a));
  RunConfig e = a;
  e.fdt.notch_enabled = true;
  CHECK(feature_config_hash(e) != feature_config_hash(a));
  RunConfig f = a;
  f.shrinkage = 0.2;
  CHECK(feature_config_hash(f) != feature_config_hash(a));
}

TEST_CASE("hashes are stable across processes") {
  // FNV-1a of a fixed string; guards against accidental algorithm changes
  // that would silently invalidate stored template fingerprints.
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(hash_hex(0xdeadbeefull) == "0x00000000deadbeef");
  CHECK(hash_hex(0) == "0x0000000000000000");
}

TEST_CASE("selection resolution") {
  RunConfig c;
  CHECK(c.resolve_selection().channel_indices ==
        std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  c.selection = "wrist";
  CHECK(c.resolve_selection().channel_indices ==
        std::vector<int>{22, 23, 24, 25, 26, 27});
  c.selection = "custom";
  CHECK_THROWS_AS(c.resolve_selection(), Error);  // no channels given
  c.custom_channels = {2, 9};
  CHECK(c.resolve_selection().channel_indices == std::vector<int>{2, 9});
  c.selection = "palm";
  CHECK_THROWS_AS(c.resolve_selection(), Error);
}

TEST_CASE("gesture pool drops the rest gesture") {
  RunConfig c;
  c.grid.gestures = 5;
  c.rest_gesture = 5;
  CHECK(c.gesture_pool() == std::vector<int>{1, 2, 3, 4});
  c.rest_gesture = 0;
  CHECK(c.gesture_pool() == std::vector<int>{1, 2, 3, 4, 5});
  c.rest_gesture = 3;
  CHECK(c.gesture_pool() == std::vector<int>{1, 2, 4, 5});
  c.grid.gestures = 1;
  c.rest_gesture = 1;
  CHECK_THROWS_AS(c.gesture_pool(), Error);
}

TEST_CASE("load_run_config reads from disk") {
  testutil::TempDir dir("config");
  const auto path = dir.path() / "run.json";
  testutil::write_file(path, R"({"seed": 321, "selection": "wrist"})");
  const RunConfig c = load_run_config(path);
  CHECK(c.seed == 321);
  CHECK(c.selection == "wrist");
  CHECK_THROWS_AS(load_run_config(dir.path() / "absent.json"), Error);
}
