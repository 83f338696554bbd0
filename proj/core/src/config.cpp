// core/src/config.cpp

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

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "emgbio/errors.hpp"

namespace emgbio {

using nlohmann::json;

std::string scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::kNormal: return "normal";
    case Scenario::kLeaked: return "leaked";
  }
  throw Error("unknown scenario");
}

std::optional<Scenario> scenario_from_name(std::string_view name) {
  if (name == "normal") return Scenario::kNormal;
  if (name == "leaked") return Scenario::kLeaked;
  return std::nullopt;
}

std::string attempt_reduce_name(AttemptReduce reduce) {
  switch (reduce) {
    case AttemptReduce::kMean: return "mean";
    case AttemptReduce::kMedian: return "median";
    case AttemptReduce::kMin: return "min";
  }
  throw Error("unknown attempt reduction");
}

std::optional<AttemptReduce> attempt_reduce_from_name(std::string_view name) {
  if (name == "mean") return AttemptReduce::kMean;
  if (name == "median") return AttemptReduce::kMedian;
  if (name == "min") return AttemptReduce::kMin;
  return std::nullopt;
}

std::string taper_name(Taper taper) {
  switch (taper) {
    case Taper::kNone: return "none";
    case Taper::kHann: return "hann";
  }
  throw Error("unknown taper");
}

std::optional<Taper> taper_from_name(std::string_view name) {
  if (name == "none") return Taper::kNone;
  if (name == "hann") return Taper::kHann;
  return std::nullopt;
}

ChannelSelection RunConfig::resolve_selection() const {
  if (selection == "forearm") return forearm_selection();
  if (selection == "wrist") return wrist_selection();
  if (selection == "custom") {
    if (custom_channels.empty()) {
      throw Error("selection 'custom' needs a non-empty custom_channels list");
    }
    return ChannelSelection{"custom", custom_channels};
  }
  throw Error("unknown selection '" + selection +
              "' (expected forearm, wrist, or custom)");
}

std::vector<int> RunConfig::gesture_pool() const {
  std::vector<int> pool;
  for (int g = 1; g <= grid.gestures; ++g) {
    if (g != rest_gesture) pool.push_back(g);
  }
  if (pool.empty()) throw Error("gesture pool is empty for this grid");
  return pool;
}

namespace {

json to_canonical_json(const RunConfig& c, bool include_runtime) {
  json bands = json::array();
  for (const auto& [lo, hi] : c.fdt.bands) bands.push_back({lo, hi});

  json protocols = json::array();
  for (Protocol p : c.protocols) protocols.push_back(protocol_name(p));
  json scenarios = json::array();
  for (Scenario s : c.scenarios) scenarios.push_back(scenario_name(s));

  json j{
      {"selection", c.selection},
      {"custom_channels", c.custom_channels},
      {"window", {{"length", c.window.window_len_samples},
                  {"step", c.window.step_samples}}},
      {"features",
       {{"bands", bands},
        {"epsilon_floor", c.fdt.epsilon_floor},
        {"taper", taper_name(c.fdt.taper)},
        {"notch_enabled", c.fdt.notch_enabled},
        {"notch_hz", c.fdt.notch_hz},
        {"notch_halfwidth_hz", c.fdt.notch_halfwidth_hz}}},
      {"matcher", {{"shrinkage", c.shrinkage},
                   {"attempt_reduce", attempt_reduce_name(c.attempt_reduce)}}},
  };
  if (include_runtime) {
    j["dataset_root"] = c.dataset_root;
    j["output_dir"] = c.output_dir;
    j["template_store"] = c.template_store;
    j["eval"] = {{"protocols", protocols},
                 {"scenarios", scenarios},
                 {"codelengths", c.codelengths},
                 {"sequence_count", c.sequence_count},
                 {"rest_gesture", c.rest_gesture}};
    j["grid"] = {{"sessions", c.grid.sessions},
                 {"subjects", c.grid.subjects},
                 {"gestures", c.grid.gestures},
                 {"trials", c.grid.trials}};
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
  }
  return j;
}

void expect_keys(const json& j, const std::set<std::string>& known,
                 const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) {
      throw Error("unknown config key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read_if(const json& j, const char* key, T* out) {
  if (j.contains(key)) *out = j.at(key).get<T>();
}

}  // namespace

std::string run_config_to_json(const RunConfig& config) {
  json j = to_canonical_json(config, true);
  return j.dump(2) + "\n";
}

RunConfig run_config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("config root must be a JSON object");

  expect_keys(j, {"dataset_root", "output_dir", "template_store", "selection",
                  "custom_channels", "window", "features", "matcher", "eval",
                  "grid", "seed", "jobs"},
              "config root");

  RunConfig c;
  read_if(j, "dataset_root", &c.dataset_root);
  read_if(j, "output_dir", &c.output_dir);
  read_if(j, "template_store", &c.template_store);
  read_if(j, "selection", &c.selection);
  read_if(j, "custom_channels", &c.custom_channels);

  if (j.contains("window")) {
    const json& w = j.at("window");
    expect_keys(w, {"length", "step"}, "window");
    read_if(w, "length", &c.window.window_len_samples);
    read_if(w, "step", &c.window.step_samples);
  }
  if (j.contains("features")) {
    const json& f = j.at("features");
    expect_keys(f, {"bands", "epsilon_floor", "taper", "notch_enabled",
                    "notch_hz", "notch_halfwidth_hz"},
                "features");
    if (f.contains("bands")) {
      c.fdt.bands.clear();
      for (const auto& pair : f.at("bands")) {
        if (!pair.is_array() || pair.size() != 2) {
          throw Error("each band must be a [low, high] pair");
        }
        c.fdt.bands.emplace_back(pair[0].get<double>(), pair[1].get<double>());
      }
    }
    read_if(f, "epsilon_floor", &c.fdt.epsilon_floor);
    if (f.contains("taper")) {
      const auto name = f.at("taper").get<std::string>();
      const auto taper = taper_from_name(name);
      if (!taper) throw Error("unknown taper '" + name + "'");
      c.fdt.taper = *taper;
    }
    read_if(f, "notch_enabled", &c.fdt.notch_enabled);
    read_if(f, "notch_hz", &c.fdt.notch_hz);
    read_if(f, "notch_halfwidth_hz", &c.fdt.notch_halfwidth_hz);
  }
  if (j.contains("matcher")) {
    const json& m = j.at("matcher");
    expect_keys(m, {"shrinkage", "attempt_reduce"}, "matcher");
    read_if(m, "shrinkage", &c.shrinkage);
    if (m.contains("attempt_reduce")) {
      const auto name = m.at("attempt_reduce").get<std::string>();
      const auto reduce = attempt_reduce_from_name(name);
      if (!reduce) throw Error("unknown attempt_reduce '" + name + "'");
      c.attempt_reduce = *reduce;
    }
  }
  if (j.contains("eval")) {
    const json& e = j.at("eval");
    expect_keys(e, {"protocols", "scenarios", "codelengths", "sequence_count",
                    "rest_gesture"},
                "eval");
    if (e.contains("protocols")) {
      c.protocols.clear();
      for (const auto& name : e.at("protocols")) {
        const auto p = protocol_from_name(name.get<std::string>());
        if (!p) throw Error("unknown protocol '" + name.get<std::string>() + "'");
        c.protocols.push_back(*p);
      }
    }
    if (e.contains("scenarios")) {
      c.scenarios.clear();
      for (const auto& name : e.at("scenarios")) {
        const auto s = scenario_from_name(name.get<std::string>());
        if (!s) throw Error("unknown scenario '" + name.get<std::string>() + "'");
        c.scenarios.push_back(*s);
      }
    }
    read_if(e, "codelengths", &c.codelengths);
    read_if(e, "sequence_count", &c.sequence_count);
    read_if(e, "rest_gesture", &c.rest_gesture);
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    expect_keys(g, {"sessions", "subjects", "gestures", "trials"}, "grid");
    read_if(g, "sessions", &c.grid.sessions);
    read_if(g, "subjects", &c.grid.subjects);
    read_if(g, "gestures", &c.grid.gestures);
    read_if(g, "trials", &c.grid.trials);
  }
  read_if(j, "seed", &c.seed);
  read_if(j, "jobs", &c.jobs);

  for (int m : c.codelengths) {
    if (m < 1 || m > 6) {
      throw Error("codelengths must lie in 1..6, got " + std::to_string(m));
    }
  }
  if (c.sequence_count < 1) throw Error("sequence_count must be positive");
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return run_config_from_json(text.str());
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::uint64_t config_hash(const RunConfig& config) {
  json j = to_canonical_json(config, true);
  j.erase("jobs");
  return fnv1a64(j.dump());
}

std::uint64_t feature_config_hash(const RunConfig& config) {
  return fnv1a64(to_canonical_json(config, false).dump());
}

std::string hash_hex(std::uint64_t hash) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace emgbio
