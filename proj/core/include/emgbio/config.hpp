// core/include/emgbio/config.hpp

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

#ifndef EMGBIO_CONFIG_HPP_
#define EMGBIO_CONFIG_HPP_

/// \file config.hpp
/// One serializable configuration drives every command.  Two hashes derive
/// from it:
///   - feature_config_hash covers the fields that change feature/score
///     semantics (selection, window, bands, matcher settings); a template
///     store records it and refuses to score against mismatched features.
///   - config_hash covers the full config minus the `jobs` knob; report
///     artifacts embed it.
/// Hashes are 64-bit FNV-1a over the canonical (sorted-key) JSON form.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "emgbio/dataset.hpp"
#include "emgbio/dsp.hpp"
#include "emgbio/matcher.hpp"
#include "emgbio/protocol.hpp"

namespace emgbio {

enum class Scenario {
  kNormal,  // impostor presents a random sequence other than the genuine one
  kLeaked,  // impostor replays the genuine sequence
};

std::string scenario_name(Scenario scenario);
std::optional<Scenario> scenario_from_name(std::string_view name);

std::string attempt_reduce_name(AttemptReduce reduce);
std::optional<AttemptReduce> attempt_reduce_from_name(std::string_view name);

std::string taper_name(Taper taper);
std::optional<Taper> taper_from_name(std::string_view name);

struct RunConfig {
  std::string dataset_root;
  std::string output_dir = "out";
  std::string template_store;

  std::string selection = "forearm";  // "forearm" | "wrist" | "custom"
  std::vector<int> custom_channels;   // consulted when selection == "custom"

  WindowSpec window;
  FdtConfig fdt;

  double shrinkage = 0.01;
  AttemptReduce attempt_reduce = AttemptReduce::kMean;

  std::vector<Protocol> protocols = {Protocol::kWithinDay,
                                     Protocol::kSingleCrossDay,
                                     Protocol::kCumulativeCrossDay};
  std::vector<Scenario> scenarios = {Scenario::kNormal, Scenario::kLeaked};
  std::vector<int> codelengths = {1, 6};
  int sequence_count = 50;
  /// Gesture excluded from the authentication pool (0 = none).
  int rest_gesture = 17;

  ExpectedGrid grid;

  std::uint64_t seed = 1;
  int jobs = 0;  // 0 = all hardware threads

  ChannelSelection resolve_selection() const;
  /// Gestures 1..grid.gestures minus the rest gesture.
  std::vector<int> gesture_pool() const;
};

std::string run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t config_hash(const RunConfig& config);
std::uint64_t feature_config_hash(const RunConfig& config);
std::string hash_hex(std::uint64_t hash);  // "0x" + 16 lowercase hex digits

}  // namespace emgbio

#endif  // EMGBIO_CONFIG_HPP_
