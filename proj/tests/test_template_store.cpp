// tests/test_template_store.cpp

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

#include "emgbio/template_store.hpp"

#include <string>

#include "doctest.h"
#include "emgbio/errors.hpp"
#include "emgbio/rng.hpp"
#include "testutil.hpp"

using namespace emgbio;

namespace {

TemplateStore sample_store() {
  TemplateStore store;
  store.selection_name = "forearm";
  store.feature_hash = "0x0123456789abcdef";
  store.seed = 7;
  Rng rng = Rng::stream(5, {1});
  for (int user : {1, 2}) {
    for (int gesture : {3, 4}) {
      Eigen::MatrixXd rows(20, 4);
      for (Eigen::Index r = 0; r < rows.rows(); ++r)
        for (Eigen::Index c = 0; c < rows.cols(); ++c)
          rows(r, c) = rng.normal() + user + 0.1 * gesture;
      StoredTemplate st;
      st.tmpl = enroll(rows, user, gesture, 0.01);
      st.self_scores = {0.5, 0.75, 1.25};
      store.templates[{user, gesture}] = std::move(st);
    }
  }
  return store;
}

}  // namespace

TEST_CASE("store round-trips through JSON with scoring intact") {
  const TemplateStore store = sample_store();
  const std::string text = store.to_json();
  const TemplateStore back = TemplateStore::from_json(text);

  CHECK(back.selection_name == store.selection_name);
  CHECK(back.feature_hash == store.feature_hash);
  CHECK(back.seed == store.seed);
  REQUIRE(back.templates.size() == store.templates.size());

  Eigen::VectorXd probe(4);
  probe << 0.7, -0.3, 1.1, 0.2;
  for (const auto& [key, stored] : store.templates) {
    const StoredTemplate* loaded = back.find(key.first, key.second);
    REQUIRE(loaded != nullptr);
    CHECK(loaded->tmpl.user == key.first);
    CHECK(loaded->tmpl.gesture == key.second);
    CHECK(loaded->self_scores == stored.self_scores);
    CHECK((loaded->tmpl.centroid - stored.tmpl.centroid).norm() < 1e-12);
    CHECK((loaded->tmpl.covariance - stored.tmpl.covariance).norm() < 1e-12);
    // The inverse is rebuilt on load, so scores agree to solver precision.
    CHECK(score_vector(probe, loaded->tmpl) ==
          doctest::Approx(score_vector(probe, stored.tmpl)).epsilon(1e-12));
  }
}

TEST_CASE("save and load hit the filesystem") {
  testutil::TempDir dir("store");
  const auto path = dir.path() / "templates.json";
  const TemplateStore store = sample_store();
  store.save(path);
  const TemplateStore back = TemplateStore::load(path);
  CHECK(back.templates.size() == 4);
  CHECK(back.find(1, 3) != nullptr);
  CHECK_THROWS_AS(TemplateStore::load(dir.path() / "missing.json"), Error);
}

TEST_CASE("find misses return null") {
  const TemplateStore store = sample_store();
  CHECK(store.find(1, 3) != nullptr);
  CHECK(store.find(1, 99) == nullptr);
  CHECK(store.find(99, 3) == nullptr);
}

TEST_CASE("format errors are rejected") {
  const TemplateStore store = sample_store();
  CHECK_THROWS_AS(TemplateStore::from_json("not json"), Error);
  CHECK_THROWS_AS(TemplateStore::from_json("[]"), Error);
  CHECK_THROWS_AS(TemplateStore::from_json(R"({"format": "who-knows"})"),
                  Error);
  // A tampered version number is refused even with the right format tag.
  std::string text = store.to_json();
  const auto pos = text.find("\"version\": 1");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 12, "\"version\": 9");
  CHECK_THROWS_AS(TemplateStore::from_json(text), Error);
}

TEST_CASE("serialization is deterministic") {
  CHECK(sample_store().to_json() == sample_store().to_json());
}
