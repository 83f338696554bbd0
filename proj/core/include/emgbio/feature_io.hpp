// core/include/emgbio/feature_io.hpp

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

#ifndef EMGBIO_FEATURE_IO_HPP_
#define EMGBIO_FEATURE_IO_HPP_

/// \file feature_io.hpp
/// On-disk form of a FeatureSeries, version 1:
///
///     emgbio-features v1
///     record <session{i}_subject{j}_gesture{k}_trial{l}>
///     selection <name>
///     windows <n> dims <d>
///     <n data lines, each d comma-separated values, %.17g>
///
/// Lines starting with '#' after the magic line are comments (provenance
/// notes such as the producing config hash).  Values round-trip bit-exactly.
/// Parse failures report 1-based line numbers.

#include <filesystem>
#include <string>
#include <string_view>

#include "emgbio/dsp.hpp"

namespace emgbio {

std::string feature_series_to_csv(const FeatureSeries& series,
                                  const std::string& comment = {});
FeatureSeries feature_series_from_csv(std::string_view text);

void write_feature_series(const std::filesystem::path& path,
                          const FeatureSeries& series,
                          const std::string& comment = {});
FeatureSeries read_feature_series(const std::filesystem::path& path);

}  // namespace emgbio

#endif  // EMGBIO_FEATURE_IO_HPP_
