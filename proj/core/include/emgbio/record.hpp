// core/include/emgbio/record.hpp

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

#ifndef EMGBIO_RECORD_HPP_
#define EMGBIO_RECORD_HPP_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace emgbio {

// Reader/writer for the subset of the WFDB format the GrabMyo recordings use:
// single-segment records, storage format 16 (little-endian signed 16-bit,
// sample-major interleaved), one .dat file per record. Anything outside that
// subset is rejected with an explicit error rather than misread.

struct ChannelInfo {
  std::string file_name;
  double gain = 0.0;      // ADC units per physical unit; must be > 0
  double baseline = 0.0;  // ADC value corresponding to 0 physical units
  std::string units = "mV";
  std::string label;
  std::optional<int> checksum;  // 16-bit signed sum of all samples, if declared
};

struct RecordHeader {
  std::string record_name;
  int channel_count = 0;
  std::int64_t sample_count = 0;
  double sampling_rate_hz = 0.0;
  std::vector<ChannelInfo> channels;
};

// Identity encoded in a record name: session{i}_subject{j}_gesture{k}_trial{l}.
struct TrialId {
  int session = 0;
  int subject = 0;
  int gesture = 0;
  int trial = 0;

  auto operator<=>(const TrialId&) const = default;
  std::string name() const;
};

// Returns the identity if `record_name` matches the naming pattern.
std::optional<TrialId> parse_trial_id(std::string_view record_name);

struct SignalRecord {
  TrialId id;
  double sampling_rate_hz = 0.0;
  // Physical-unit samples, rows = time, cols = channels.
  Eigen::MatrixXd samples;
};

// Parses a .hea file. Throws ParseError (with line number) on malformed
// input and Error on unsupported WFDB features.
RecordHeader parse_header(std::string_view text);

// Decodes a .dat byte stream against its header. Byte length must equal
// sample_count * channel_count * 2. Checksum mismatches are reported through
// `warnings` (when non-null), never as errors.
SignalRecord decode_signal(const std::vector<std::uint8_t>& bytes,
                           const RecordHeader& header,
                           std::vector<std::string>* warnings = nullptr);

struct EncodedRecord {
  std::string header_text;
  std::vector<std::uint8_t> signal_bytes;
};

// Quantizes a record at the given gain and renders a .hea/.dat pair that
// parse_header + decode_signal reproduce exactly (up to the 1/gain
// quantization step). Values that do not fit in signed 16 bits after
// scaling raise an Error naming the channel and sample.
EncodedRecord encode_record(const SignalRecord& record, double gain);

// Filesystem convenience wrappers.
SignalRecord load_record(const std::filesystem::path& hea_path,
                         std::vector<std::string>* warnings = nullptr);
void write_record(const std::filesystem::path& dir, const SignalRecord& record,
                  double gain);

}  // namespace emgbio

#endif  // EMGBIO_RECORD_HPP_
