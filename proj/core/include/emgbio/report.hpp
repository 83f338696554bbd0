// core/include/emgbio/report.hpp

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

#ifndef EMGBIO_REPORT_HPP_
#define EMGBIO_REPORT_HPP_

/// \file report.hpp
/// Evaluation artifacts.  Every artifact embeds the config hash and seed so a
/// number can always be traced back to the exact run that produced it.
///
///   report.json     full results: config snapshot, per-subject and per-day
///                   EERs, cohort quartiles, sequences, skips, warnings.
///                   Keys are sorted and floats use shortest round-trip
///                   formatting, so identical runs produce identical bytes.
///   eer_table.csv   one row per subject, one column per
///                   (protocol, codelength), normal scenario; cohort
///                   quartiles as trailing rows.  A *_leaked.csv twin covers
///                   the leaked scenario when it was evaluated.
///   det_curves.csv  cohort-mean fused DET curves, long format.

#include <filesystem>
#include <string>

#include "emgbio/config.hpp"
#include "emgbio/evaluate.hpp"

namespace emgbio {

std::string report_json(const RunConfig& config, const EvalResult& result);
std::string eer_table_csv(const RunConfig& config, const EvalResult& result,
                          Scenario scenario);
std::string det_curves_csv(const RunConfig& config, const EvalResult& result);

struct ReportPaths {
  std::filesystem::path report;
  std::filesystem::path eer_table;
  std::filesystem::path eer_table_leaked;  // empty if leaked was not evaluated
  std::filesystem::path det_curves;
};

/// Writes all artifacts under `dir` (created if needed).
ReportPaths write_reports(const std::filesystem::path& dir,
                          const RunConfig& config, const EvalResult& result);

/// Human-readable digest of a report.json payload.
std::string render_summary(const std::string& report_json_text);

}  // namespace emgbio

#endif  // EMGBIO_REPORT_HPP_
