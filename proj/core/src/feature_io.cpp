// core/src/feature_io.cpp

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

#include "emgbio/feature_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "emgbio/errors.hpp"

namespace emgbio {

namespace {

constexpr const char* kMagic = "emgbio-features v1";

std::string next_line(std::istringstream& in, int* line_no) {
  std::string line;
  for (;;) {
    if (!std::getline(in, line)) {
      throw ParseError(*line_no + 1, "unexpected end of feature file");
    }
    ++*line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] != '#') return line;
  }
}

std::string expect_field(const std::string& line, const std::string& key, int line_no) {
  const std::string prefix = key + " ";
  if (line.rfind(prefix, 0) != 0) {
    throw ParseError(line_no, "expected '" + key + " <value>', got '" + line + "'");
  }
  return line.substr(prefix.size());
}

}  // namespace

std::string feature_series_to_csv(const FeatureSeries& series,
                                  const std::string& comment) {
  std::ostringstream out;
  out << kMagic << "\n";
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "record " << series.id.name() << "\n";
  out << "selection " << series.selection_name << "\n";
  out << "windows " << series.window_count() << " dims " << series.dims() << "\n";
  char buf[40];
  for (int r = 0; r < series.window_count(); ++r) {
    for (int c = 0; c < series.dims(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", series.vectors(r, c));
      if (c) out << ',';
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

FeatureSeries feature_series_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  int line_no = 0;

  if (next_line(in, &line_no) != kMagic) {
    throw ParseError(1, std::string("bad magic; expected '") + kMagic + "'");
  }
  FeatureSeries series;
  const std::string record_name = expect_field(next_line(in, &line_no), "record", line_no);
  const auto id = parse_trial_id(record_name);
  if (!id) throw ParseError(line_no, "bad record name '" + record_name + "'");
  series.id = *id;
  series.selection_name = expect_field(next_line(in, &line_no), "selection", line_no);

  const std::string shape = next_line(in, &line_no);
  int windows = 0, dims = 0;
  if (std::sscanf(shape.c_str(), "windows %d dims %d", &windows, &dims) != 2 ||
      windows < 0 || dims < 1) {
    throw ParseError(line_no, "expected 'windows <n> dims <d>', got '" + shape + "'");
  }

  series.vectors.resize(windows, dims);
  for (int r = 0; r < windows; ++r) {
    const std::string line = next_line(in, &line_no);
    const char* p = line.c_str();
    for (int c = 0; c < dims; ++c) {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p) {
        throw ParseError(line_no, "expected " + std::to_string(dims) +
                                      " values, failed at column " + std::to_string(c + 1));
      }
      series.vectors(r, c) = v;
      p = end;
      if (c + 1 < dims) {
        if (*p != ',') {
          throw ParseError(line_no, "expected ',' after column " + std::to_string(c + 1));
        }
        ++p;
      }
    }
    if (*p != '\0') throw ParseError(line_no, "trailing characters after last column");
  }
  std::string extra;
  while (std::getline(in, extra)) {
    ++line_no;
    if (!extra.empty() && extra.back() == '\r') extra.pop_back();
    if (extra.empty() || extra[0] == '#') continue;
    throw ParseError(line_no, "more data rows than the declared " +
                                  std::to_string(windows) + " windows");
  }
  return series;
}

void write_feature_series(const std::filesystem::path& path,
                          const FeatureSeries& series, const std::string& comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write feature file: " + path.string());
  out << feature_series_to_csv(series, comment);
}

FeatureSeries read_feature_series(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open feature file: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return feature_series_from_csv(text.str());
}

}  // namespace emgbio
