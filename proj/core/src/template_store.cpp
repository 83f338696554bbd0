// core/src/template_store.cpp

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

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "emgbio/errors.hpp"

namespace emgbio {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "emgbio-templates";
constexpr int kVersion = 1;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) {
    throw Error(std::string("template store: ") + what + " must be a non-empty array");
  }
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != c) {
      throw Error(std::string("template store: ragged rows in ") + what);
    }
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

}  // namespace

const StoredTemplate* TemplateStore::find(int user, int gesture) const {
  const auto it = templates.find({user, gesture});
  return it == templates.end() ? nullptr : &it->second;
}

std::string TemplateStore::to_json() const {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["selection"] = selection_name;
  j["feature_hash"] = feature_hash;
  j["seed"] = seed;
  json entries = json::array();
  for (const auto& [key, stored] : templates) {
    const Template& t = stored.tmpl;
    json centroid = json::array();
    for (Eigen::Index i = 0; i < t.centroid.size(); ++i) {
      centroid.push_back(t.centroid(i));
    }
    entries.push_back({{"user", key.first},
                       {"gesture", key.second},
                       {"shrinkage", t.shrinkage},
                       {"training_vectors", t.training_vector_count},
                       {"centroid", std::move(centroid)},
                       {"covariance", matrix_to_json(t.covariance)},
                       {"self_scores", stored.self_scores}});
  }
  j["templates"] = std::move(entries);
  return j.dump(2) + "\n";
}

TemplateStore TemplateStore::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("template store is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kFormat) {
    throw Error("not a template store file (bad format tag)");
  }
  if (j.value("version", 0) != kVersion) {
    throw Error("unsupported template store version " +
                std::to_string(j.value("version", 0)));
  }

  TemplateStore store;
  store.selection_name = j.value("selection", "");
  store.feature_hash = j.value("feature_hash", "");
  store.seed = j.value("seed", std::uint64_t{0});
  for (const auto& entry : j.at("templates")) {
    StoredTemplate stored;
    Template& t = stored.tmpl;
    t.user = entry.at("user").get<int>();
    t.gesture = entry.at("gesture").get<int>();
    t.selection_name = store.selection_name;
    t.shrinkage = entry.at("shrinkage").get<double>();
    t.training_vector_count = entry.at("training_vectors").get<int>();
    const auto& centroid = entry.at("centroid");
    t.centroid.resize(static_cast<Eigen::Index>(centroid.size()));
    for (Eigen::Index i = 0; i < t.centroid.size(); ++i) {
      t.centroid(i) = centroid[i].get<double>();
    }
    t.covariance = matrix_from_json(entry.at("covariance"), "covariance");
    if (t.covariance.rows() != t.centroid.size() ||
        t.covariance.cols() != t.centroid.size()) {
      throw Error("template store: covariance shape does not match centroid for user " +
                  std::to_string(t.user) + ", gesture " + std::to_string(t.gesture));
    }
    refresh_inverse(&t);
    if (entry.contains("self_scores")) {
      stored.self_scores = entry.at("self_scores").get<std::vector<double>>();
    }
    const auto key = std::make_pair(t.user, t.gesture);
    if (!store.templates.emplace(key, std::move(stored)).second) {
      throw Error("template store: duplicate (user " + std::to_string(key.first) +
                  ", gesture " + std::to_string(key.second) + ") entry");
    }
  }
  return store;
}

void TemplateStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write template store: " + path.string());
  out << to_json();
}

TemplateStore TemplateStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open template store: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return from_json(text.str());
}

}  // namespace emgbio
