// tests/test_record.cpp

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

#include "emgbio/record.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "emgbio/errors.hpp"
#include "emgbio/rng.hpp"
#include "testutil.hpp"

using namespace emgbio;

namespace {

template <typename F>
std::string error_message(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

std::vector<std::uint8_t> le_bytes(const std::vector<std::int16_t>& values) {
  std::vector<std::uint8_t> bytes;
  for (std::int16_t v : values) {
    const auto u = static_cast<std::uint16_t>(v);
    bytes.push_back(static_cast<std::uint8_t>(u & 0xff));
    bytes.push_back(static_cast<std::uint8_t>(u >> 8));
  }
  return bytes;
}

}  // namespace

TEST_CASE("decode applies (raw - baseline) / gain column-wise") {
  // 2 samples x 2 channels, interleaved sample-major: raw stream
  // 100, -100, 0, 32767 at gain 500 and baseline 0 must decode to
  // [[0.2, -0.2], [0.0, 65.534]].
  const std::string hea =
      "session1_subject2_gesture3_trial4 2 2048 2\n"
      "session1_subject2_gesture3_trial4.dat 16 500(0)/mV 16 0 100 100 0 ch1\n"
      "session1_subject2_gesture3_trial4.dat 16 500(0)/mV 16 0 -100 32667 0 "
      "ch2\n";
  RecordHeader header = parse_header(hea);
  CHECK(header.record_name == "session1_subject2_gesture3_trial4");
  CHECK(header.channel_count == 2);
  CHECK(header.sample_count == 2);
  CHECK(header.sampling_rate_hz == doctest::Approx(2048.0));

  std::vector<std::string> warnings;
  SignalRecord record =
      decode_signal(le_bytes({100, -100, 0, 32767}), header, &warnings);
  CHECK(warnings.empty());
  CHECK(record.id.session == 1);
  CHECK(record.id.subject == 2);
  CHECK(record.id.gesture == 3);
  CHECK(record.id.trial == 4);
  CHECK(record.samples.rows() == 2);
  CHECK(record.samples.cols() == 2);
  CHECK(record.samples(0, 0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(record.samples(0, 1) == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(record.samples(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(record.samples(1, 1) == doctest::Approx(65.534).epsilon(1e-12));
}

TEST_CASE("nonzero baseline shifts the decoded zero point") {
  const std::string hea =
      "session1_subject1_gesture1_trial1 1 2048 2\n"
      "session1_subject1_gesture1_trial1.dat 16 200(50)/mV 16 0 50 100 0 ch1\n";
  RecordHeader header = parse_header(hea);
  SignalRecord record = decode_signal(le_bytes({50, 50}), header);
  CHECK(record.samples(0, 0) == doctest::Approx(0.0));
  CHECK(record.samples(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("baseline falls back to the adc zero field") {
  const std::string hea =
      "session1_subject1_gesture1_trial1 1 2048 1\n"
      "session1_subject1_gesture1_trial1.dat 16 100/mV 16 10 10 10 0 ch1\n";
  RecordHeader header = parse_header(hea);
  CHECK(header.channels[0].baseline == doctest::Approx(10.0));
  SignalRecord record = decode_signal(le_bytes({10}), header);
  CHECK(record.samples(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("a 10240x32 header parses to the exact dimensions") {
  std::string hea = "session1_subject5_gesture7_trial2 32 2048 10240\n";
  for (int c = 1; c <= 32; ++c)
    hea += "session1_subject5_gesture7_trial2.dat 16 500(0)/mV 16 0 0 0 0 ch" +
           std::to_string(c) + "\n";
  RecordHeader header = parse_header(hea);
  CHECK(header.channel_count == 32);
  CHECK(header.sample_count == 10240);
  CHECK(header.sampling_rate_hz == doctest::Approx(2048.0));
  CHECK(header.channels.size() == 32);
  CHECK(header.channels[31].label == "ch32");
}

TEST_CASE("unsupported WFDB features are rejected, not misread") {
  CHECK(error_message([] {
          parse_header("rec/2 1 2048 4\nrec.dat 16 500/mV 16 0 0 0 0 ch1\n");
        }).find("segment") != std::string::npos);
  CHECK(error_message([] {
          parse_header(
              "session1_subject1_gesture1_trial1 1 2048 4\n"
              "session1_subject1_gesture1_trial1.dat 212 500/mV 16 0 0 0 0 "
              "ch1\n");
        }).find("16") != std::string::npos);
}

TEST_CASE("malformed headers carry line numbers") {
  // Channel-line count differs from the declared signal count.
  const std::string msg = error_message([] {
    parse_header(
        "session1_subject1_gesture1_trial1 2 2048 4\n"
        "session1_subject1_gesture1_trial1.dat 16 500/mV 16 0 0 0 0 ch1\n");
  });
  CHECK(!msg.empty());
  const std::string msg2 = error_message([] {
    parse_header("session1_subject1_gesture1_trial1 x 2048 4\n");
  });
  CHECK(msg2.find("line 1") != std::string::npos);
}

TEST_CASE("decode rejects byte streams of the wrong length") {
  const std::string hea =
      "session1_subject1_gesture1_trial1 2 2048 4\n"
      "session1_subject1_gesture1_trial1.dat 16 500/mV 16 0 0 0 0 ch1\n"
      "session1_subject1_gesture1_trial1.dat 16 500/mV 16 0 0 0 0 ch2\n";
  RecordHeader header = parse_header(hea);
  const std::string msg =
      error_message([&] { decode_signal(le_bytes({1, 2, 3}), header); });
  CHECK(msg.find("16") != std::string::npos);  // expected byte count
  CHECK(msg.find("6") != std::string::npos);   // actual byte count
}

TEST_CASE("checksum mismatches warn but never fail") {
  const std::string hea =
      "session1_subject1_gesture1_trial1 1 2048 2\n"
      "session1_subject1_gesture1_trial1.dat 16 500/mV 16 0 1 999 0 ch1\n";
  RecordHeader header = parse_header(hea);
  std::vector<std::string> warnings;
  SignalRecord record = decode_signal(le_bytes({1, 2}), header, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("checksum") != std::string::npos);
  CHECK(record.samples.rows() == 2);
  // And with a null warning sink it still decodes.
  CHECK_NOTHROW(decode_signal(le_bytes({1, 2}), header));
}

TEST_CASE("encode rejects samples outside the 16-bit range") {
  SignalRecord record;
  record.id = TrialId{1, 1, 1, 1};
  record.sampling_rate_hz = 2048.0;
  record.samples.resize(2, 1);
  record.samples << 0.0, 100.0;  // 100 mV * 500 = 50000 > 32767
  const std::string msg = error_message([&] { encode_record(record, 500.0); });
  CHECK(msg.find("channel") != std::string::npos);
  CHECK(msg.find("sample") != std::string::npos);
}

TEST_CASE("encode-parse-decode round trip is lossless after quantization") {
  Rng rng = Rng::stream(99, {1});
  SignalRecord record;
  record.id = TrialId{2, 3, 4, 5};
  record.sampling_rate_hz = 2048.0;
  record.samples.resize(64, 3);
  for (Eigen::Index r = 0; r < record.samples.rows(); ++r)
    for (Eigen::Index c = 0; c < record.samples.cols(); ++c)
      record.samples(r, c) = rng.normal() * 10.0;

  const double gain = 500.0;
  EncodedRecord first = encode_record(record, gain);
  RecordHeader header = parse_header(first.header_text);
  SignalRecord once = decode_signal(first.signal_bytes, header);
  CHECK(once.id == record.id);
  // Quantization error is at most half an ADC step.
  const double step = 1.0 / gain;
  CHECK((once.samples - record.samples).cwiseAbs().maxCoeff() <=
        0.5 * step + 1e-12);

  // A second round trip reproduces the first decode bit-exactly.
  EncodedRecord second = encode_record(once, gain);
  CHECK(second.header_text == first.header_text);
  CHECK(second.signal_bytes == first.signal_bytes);
  SignalRecord twice = decode_signal(second.signal_bytes,
                                     parse_header(second.header_text));
  CHECK(twice.samples == once.samples);
}

TEST_CASE("write_record and load_record round trip through disk") {
  testutil::TempDir dir("record");
  SignalRecord record;
  record.id = TrialId{1, 2, 3, 4};
  record.sampling_rate_hz = 2048.0;
  record.samples.resize(8, 2);
  Rng rng = Rng::stream(5, {2});
  for (Eigen::Index r = 0; r < 8; ++r)
    for (Eigen::Index c = 0; c < 2; ++c)
      record.samples(r, c) = rng.normal();
  write_record(dir.path(), record, 1000.0);

  std::vector<std::string> warnings;
  SignalRecord loaded = load_record(
      dir.path() / "session1_subject2_gesture3_trial4.hea", &warnings);
  CHECK(warnings.empty());
  CHECK(loaded.id == record.id);
  CHECK((loaded.samples - record.samples).cwiseAbs().maxCoeff() <= 5e-4 + 1e-12);
}

TEST_CASE("trial identities parse from record names") {
  auto id = parse_trial_id("session2_subject13_gesture17_trial7");
  REQUIRE(id.has_value());
  CHECK(id->session == 2);
  CHECK(id->subject == 13);
  CHECK(id->gesture == 17);
  CHECK(id->trial == 7);
  CHECK(id->name() == "session2_subject13_gesture17_trial7");

  CHECK(!parse_trial_id("session0_subject1_gesture1_trial1").has_value());
  CHECK(!parse_trial_id("session4_subject1_gesture1_trial1").has_value());
  CHECK(!parse_trial_id("session1_subject44_gesture1_trial1").has_value());
  CHECK(!parse_trial_id("session1_subject1_gesture18_trial1").has_value());
  CHECK(!parse_trial_id("session1_subject1_gesture1_trial8").has_value());
  CHECK(!parse_trial_id("session1_subject1_gesture1").has_value());
  CHECK(!parse_trial_id("session1_subject1_gesture1_trial1_x").has_value());
  CHECK(!parse_trial_id("sessionA_subject1_gesture1_trial1").has_value());
  CHECK(!parse_trial_id("").has_value());
}
