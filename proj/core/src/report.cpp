// core/src/report.cpp

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

#include "emgbio/report.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "emgbio/errors.hpp"

namespace emgbio {
namespace {

using nlohmann::json;

std::string short_protocol(Protocol protocol) {
  switch (protocol) {
    case Protocol::kWithinDay: return "wd";
    case Protocol::kSingleCrossDay: return "scd";
    case Protocol::kCumulativeCrossDay: return "ccd";
  }
  throw Error("unknown protocol");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string stamp_line(const RunConfig& config, const EvalResult& result) {
  std::ostringstream out;
  out << "# config " << hash_hex(config_hash(config)) << " seed " << config.seed
      << " selection " << result.selection_name << "\n";
  return out.str();
}

}  // namespace

std::string report_json(const RunConfig& config, const EvalResult& result) {
  json root;
  root["format"] = "emgbio-report";
  root["version"] = 1;
  root["config"] = json::parse(run_config_to_json(config));
  root["config_hash"] = hash_hex(config_hash(config));
  root["seed"] = config.seed;
  root["selection"] = result.selection_name;

  json sequences = json::array();
  for (const CodeSequence& s : result.sequences) sequences.push_back(s.codes);
  root["sequences"] = sequences;

  json cells = json::array();
  for (const ConfigResult& cr : result.results) {
    json cell;
    cell["protocol"] = protocol_name(cr.protocol);
    cell["scenario"] = scenario_name(cr.scenario);
    cell["codelength"] = cr.codelength;
    cell["cohort"] = {{"q1", cr.cohort.q1},
                      {"median", cr.cohort.median},
                      {"q3", cr.cohort.q3}};
    json subjects = json::array();
    for (const SubjectEer& se : cr.subjects) {
      json days = json::array();
      for (const auto& [day, eer] : se.per_day)
        days.push_back({{"day", day}, {"eer", eer}});
      subjects.push_back(
          {{"subject", se.subject}, {"eer", se.eer}, {"per_day", days}});
    }
    cell["subjects"] = subjects;
    cells.push_back(cell);
  }
  root["results"] = cells;

  json skipped = json::array();
  for (const auto& [protocol, subject] : result.skipped)
    skipped.push_back({{"protocol", protocol}, {"subject", subject}});
  root["skipped"] = skipped;
  root["warnings"] = result.warnings;
  return root.dump(2) + "\n";
}

std::string eer_table_csv(const RunConfig& config, const EvalResult& result,
                          Scenario scenario) {
  std::vector<const ConfigResult*> cols;
  for (const ConfigResult& cr : result.results)
    if (cr.scenario == scenario) cols.push_back(&cr);

  std::set<int> subjects;
  std::vector<std::map<int, double>> lookup(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (const SubjectEer& se : cols[c]->subjects) {
      subjects.insert(se.subject);
      lookup[c][se.subject] = se.eer;
    }
  }

  std::ostringstream out;
  out << "# emgbio eer table, scenario " << scenario_name(scenario) << "\n";
  out << stamp_line(config, result);
  out << "subject";
  for (const ConfigResult* col : cols)
    out << "," << short_protocol(col->protocol) << "_m" << col->codelength;
  out << "\n";
  for (int subject : subjects) {
    out << subject;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      auto it = lookup[c].find(subject);
      out << ",";
      if (it != lookup[c].end()) out << fmt(it->second);
    }
    out << "\n";
  }
  const std::pair<const char*, double Quartiles::*> rows[] = {
      {"cohort_q1", &Quartiles::q1},
      {"cohort_median", &Quartiles::median},
      {"cohort_q3", &Quartiles::q3},
  };
  for (const auto& [label, member] : rows) {
    out << label;
    for (const ConfigResult* col : cols) out << "," << fmt(col->cohort.*member);
    out << "\n";
  }
  return out.str();
}

std::string det_curves_csv(const RunConfig& config, const EvalResult& result) {
  std::ostringstream out;
  out << "# emgbio det curves, cohort mean\n";
  out << stamp_line(config, result);
  out << "protocol,scenario,codelength,param,far,frr\n";
  for (const ConfigResult& cr : result.results) {
    for (const DetPoint& p : cr.mean_curve) {
      out << protocol_name(cr.protocol) << "," << scenario_name(cr.scenario)
          << "," << cr.codelength << "," << fmt(p.param) << "," << fmt(p.far)
          << "," << fmt(p.frr) << "\n";
    }
  }
  return out.str();
}

ReportPaths write_reports(const std::filesystem::path& dir,
                          const RunConfig& config, const EvalResult& result) {
  std::filesystem::create_directories(dir);
  ReportPaths paths;
  paths.report = dir / "report.json";
  write_text(paths.report, report_json(config, result));

  bool normal = false;
  bool leaked = false;
  for (Scenario s : config.scenarios) {
    normal = normal || s == Scenario::kNormal;
    leaked = leaked || s == Scenario::kLeaked;
  }
  if (normal) {
    paths.eer_table = dir / "eer_table.csv";
    write_text(paths.eer_table,
               eer_table_csv(config, result, Scenario::kNormal));
  }
  if (leaked) {
    paths.eer_table_leaked = dir / "eer_table_leaked.csv";
    write_text(paths.eer_table_leaked,
               eer_table_csv(config, result, Scenario::kLeaked));
  }
  paths.det_curves = dir / "det_curves.csv";
  write_text(paths.det_curves, det_curves_csv(config, result));
  return paths;
}

std::string render_summary(const std::string& report_json_text) {
  json root;
  try {
    root = json::parse(report_json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    std::ostringstream out;
    out << "report " << root.at("config_hash").get<std::string>() << "  seed "
        << root.at("seed").get<std::uint64_t>() << "  selection "
        << root.at("selection").get<std::string>() << "\n";
    out << "sequences: " << root.at("sequences").size() << "\n\n";
    out << std::left << std::setw(22) << "protocol" << std::setw(9)
        << "scenario" << std::setw(4) << "M" << std::right << std::setw(10)
        << "q1" << std::setw(10) << "median" << std::setw(10) << "q3"
        << std::setw(10) << "subjects" << "\n";
    for (const json& cell : root.at("results")) {
      char q1[16], med[16], q3[16];
      std::snprintf(q1, sizeof(q1), "%.4f",
                    cell.at("cohort").at("q1").get<double>());
      std::snprintf(med, sizeof(med), "%.4f",
                    cell.at("cohort").at("median").get<double>());
      std::snprintf(q3, sizeof(q3), "%.4f",
                    cell.at("cohort").at("q3").get<double>());
      out << std::left << std::setw(22)
          << cell.at("protocol").get<std::string>() << std::setw(9)
          << cell.at("scenario").get<std::string>() << std::setw(4)
          << cell.at("codelength").get<int>() << std::right << std::setw(10)
          << q1 << std::setw(10) << med << std::setw(10) << q3 << std::setw(10)
          << cell.at("subjects").size() << "\n";
    }
    const auto& skipped = root.at("skipped");
    const auto& warnings = root.at("warnings");
    if (!skipped.empty()) {
      out << "\nskipped:\n";
      for (const json& s : skipped)
        out << "  subject " << s.at("subject").get<int>() << " ("
            << s.at("protocol").get<std::string>() << ")\n";
    }
    if (!warnings.empty()) {
      out << "\nwarnings:\n";
      for (const json& w : warnings)
        out << "  " << w.get<std::string>() << "\n";
    }
    return out.str();
  } catch (const json::exception& e) {
    throw Error(std::string("report JSON missing expected fields: ") +
                e.what());
  }
}

}  // namespace emgbio
