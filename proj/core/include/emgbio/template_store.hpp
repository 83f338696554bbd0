// core/include/emgbio/template_store.hpp

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

#ifndef EMGBIO_TEMPLATE_STORE_HPP_
#define EMGBIO_TEMPLATE_STORE_HPP_

/// \file template_store.hpp
/// JSON persistence for enrolled templates (format "emgbio-templates" v1).
/// A store belongs to one feature configuration: it records the feature
/// config hash and selection name, and loading verifies internal consistency
/// while scoring code checks the hash against the active config.  Covariance
/// matrices are stored in full precision; inverses are recomputed on load.

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "emgbio/matcher.hpp"

namespace emgbio {

struct StoredTemplate {
  Template tmpl;
  /// Attempt-level scores of each enrollment trial against its own template;
  /// single-attempt verification derives an operating threshold from these.
  std::vector<double> self_scores;
};

struct TemplateStore {
  std::string selection_name;
  std::string feature_hash;  // hex form of the producing feature config hash
  std::uint64_t seed = 0;
  std::map<std::pair<int, int>, StoredTemplate> templates;  // (user, gesture)

  const StoredTemplate* find(int user, int gesture) const;

  std::string to_json() const;
  static TemplateStore from_json(std::string_view text);

  void save(const std::filesystem::path& path) const;
  static TemplateStore load(const std::filesystem::path& path);
};

}  // namespace emgbio

#endif  // EMGBIO_TEMPLATE_STORE_HPP_
