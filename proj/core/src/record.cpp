// core/src/record.cpp

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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "emgbio/errors.hpp"

namespace emgbio {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

long long parse_int(const std::string& tok, int line_no, const char* what) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line_no, std::string("expected integer for ") + what + ", got '" + tok + "'");
  }
  return value;
}

double parse_real(const std::string& tok, int line_no, const char* what) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return value;
  } catch (const std::exception&) {
    throw ParseError(line_no, std::string("expected number for ") + what + ", got '" + tok + "'");
  }
}

// Gain field grammar: gain[(baseline)][/units], e.g. "500", "500(0)/mV".
void parse_gain_field(const std::string& tok, int line_no, ChannelInfo* ch,
                      bool* explicit_baseline) {
  std::string gain_part = tok;
  std::string units;
  if (const auto slash = gain_part.find('/'); slash != std::string::npos) {
    units = gain_part.substr(slash + 1);
    gain_part = gain_part.substr(0, slash);
  }
  std::string baseline_part;
  if (const auto open = gain_part.find('('); open != std::string::npos) {
    const auto close = gain_part.find(')', open);
    if (close == std::string::npos) {
      throw ParseError(line_no, "unterminated baseline in gain field '" + tok + "'");
    }
    baseline_part = gain_part.substr(open + 1, close - open - 1);
    gain_part = gain_part.substr(0, open);
  }
  ch->gain = parse_real(gain_part, line_no, "gain");
  if (!(ch->gain > 0.0)) {
    throw ParseError(line_no, "gain must be positive, got '" + gain_part + "'");
  }
  if (!baseline_part.empty()) {
    ch->baseline = static_cast<double>(parse_int(baseline_part, line_no, "baseline"));
    *explicit_baseline = true;
  }
  if (!units.empty()) ch->units = units;
}

}  // namespace

std::string TrialId::name() const {
  std::ostringstream os;
  os << "session" << session << "_subject" << subject << "_gesture" << gesture
     << "_trial" << trial;
  return os.str();
}

std::optional<TrialId> parse_trial_id(std::string_view record_name) {
  TrialId id;
  auto eat_field = [&record_name](std::string_view prefix, int* out) -> bool {
    if (record_name.substr(0, prefix.size()) != prefix) return false;
    record_name.remove_prefix(prefix.size());
    int value = 0;
    std::size_t digits = 0;
    while (digits < record_name.size() && record_name[digits] >= '0' &&
           record_name[digits] <= '9') {
      value = value * 10 + (record_name[digits] - '0');
      ++digits;
    }
    if (digits == 0) return false;
    record_name.remove_prefix(digits);
    *out = value;
    return true;
  };
  if (!eat_field("session", &id.session)) return std::nullopt;
  if (!eat_field("_subject", &id.subject)) return std::nullopt;
  if (!eat_field("_gesture", &id.gesture)) return std::nullopt;
  if (!eat_field("_trial", &id.trial)) return std::nullopt;
  if (!record_name.empty()) return std::nullopt;
  if (id.session < 1 || id.session > 3) return std::nullopt;
  if (id.subject < 1 || id.subject > 43) return std::nullopt;
  if (id.gesture < 1 || id.gesture > 17) return std::nullopt;
  if (id.trial < 1 || id.trial > 7) return std::nullopt;
  return id;
}

RecordHeader parse_header(std::string_view text) {
  RecordHeader header;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int signal_lines = 0;
  bool have_record_line = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    if (!have_record_line) {
      // Record line: name nsig [fs [nsamples]]; the subset requires all four.
      if (tokens.size() < 4) {
        throw ParseError(line_no, "record line needs 'name nsig fs nsamples'");
      }
      header.record_name = tokens[0];
      if (header.record_name.find('/') != std::string::npos) {
        throw Error("multi-segment records are not supported (record name '" +
                    header.record_name + "')");
      }
      const long long nsig = parse_int(tokens[1], line_no, "signal count");
      if (nsig < 1) throw ParseError(line_no, "signal count must be positive");
      header.channel_count = static_cast<int>(nsig);
      header.sampling_rate_hz = parse_real(tokens[2], line_no, "sampling rate");
      if (!(header.sampling_rate_hz > 0.0)) {
        throw ParseError(line_no, "sampling rate must be positive");
      }
      const long long nsamp = parse_int(tokens[3], line_no, "sample count");
      if (nsamp < 1) throw ParseError(line_no, "sample count must be positive");
      header.sample_count = nsamp;
      have_record_line = true;
      continue;
    }

    if (signal_lines >= header.channel_count) {
      throw ParseError(line_no, "more signal lines than declared channels");
    }
    // Signal line: file format gain [adc_res [adc_zero [init [chk [blk [label]]]]]]
    if (tokens.size() < 3) {
      throw ParseError(line_no, "signal line needs at least 'file format gain'");
    }
    ChannelInfo ch;
    ch.file_name = tokens[0];
    if (tokens[1] != "16") {
      throw Error("unsupported storage format '" + tokens[1] +
                  "' (only format 16 is supported), line " + std::to_string(line_no));
    }
    bool explicit_baseline = false;
    parse_gain_field(tokens[2], line_no, &ch, &explicit_baseline);
    if (tokens.size() > 4 && !explicit_baseline) {
      // Baseline defaults to the ADC zero when not spelled out in the gain field.
      ch.baseline = static_cast<double>(parse_int(tokens[4], line_no, "adc zero"));
    }
    if (tokens.size() > 6) {
      ch.checksum = static_cast<int>(parse_int(tokens[6], line_no, "checksum"));
    }
    if (tokens.size() > 8) {
      std::string label = tokens[8];
      for (std::size_t t = 9; t < tokens.size(); ++t) label += " " + tokens[t];
      ch.label = label;
    }
    if (ch.label.empty()) ch.label = "ch" + std::to_string(signal_lines + 1);
    header.channels.push_back(std::move(ch));
    ++signal_lines;
  }

  if (!have_record_line) throw ParseError(1, "empty header: no record line");
  if (signal_lines != header.channel_count) {
    throw Error("header declares " + std::to_string(header.channel_count) +
                " channels but has " + std::to_string(signal_lines) + " signal lines");
  }
  return header;
}

SignalRecord decode_signal(const std::vector<std::uint8_t>& bytes,
                           const RecordHeader& header,
                           std::vector<std::string>* warnings) {
  const std::size_t expected =
      static_cast<std::size_t>(header.sample_count) * header.channel_count * 2;
  if (bytes.size() != expected) {
    throw Error("signal byte length mismatch for '" + header.record_name +
                "': expected " + std::to_string(expected) + " bytes, got " +
                std::to_string(bytes.size()));
  }
  const auto id = parse_trial_id(header.record_name);
  if (!id) {
    throw Error("record name '" + header.record_name +
                "' does not encode a session/subject/gesture/trial identity");
  }

  SignalRecord record;
  record.id = *id;
  record.sampling_rate_hz = header.sampling_rate_hz;
  record.samples.resize(header.sample_count, header.channel_count);

  std::vector<std::int64_t> sums(header.channel_count, 0);
  const std::uint8_t* p = bytes.data();
  for (std::int64_t s = 0; s < header.sample_count; ++s) {
    for (int c = 0; c < header.channel_count; ++c) {
      const std::uint16_t lo = *p++;
      const std::uint16_t hi = *p++;
      const auto raw = static_cast<std::int16_t>(static_cast<std::uint16_t>(lo | (hi << 8)));
      sums[c] += raw;
      const ChannelInfo& ch = header.channels[c];
      record.samples(s, c) = (static_cast<double>(raw) - ch.baseline) / ch.gain;
    }
  }

  if (warnings != nullptr) {
    for (int c = 0; c < header.channel_count; ++c) {
      const auto& declared = header.channels[c].checksum;
      if (!declared) continue;
      const auto actual = static_cast<std::int16_t>(static_cast<std::uint16_t>(sums[c]));
      if (static_cast<int>(actual) != *declared) {
        warnings->push_back("checksum mismatch on '" + header.record_name +
                            "' channel " + std::to_string(c + 1) + ": declared " +
                            std::to_string(*declared) + ", computed " +
                            std::to_string(actual));
      }
    }
  }
  return record;
}

EncodedRecord encode_record(const SignalRecord& record, double gain) {
  if (!(gain > 0.0)) throw Error("encode gain must be positive");
  if (record.samples.rows() < 1 || record.samples.cols() < 1) {
    throw Error("cannot encode an empty record (sample and channel counts must be positive)");
  }
  const std::int64_t samples = record.samples.rows();
  const int channels = static_cast<int>(record.samples.cols());
  const std::string name = record.id.name();

  EncodedRecord out;
  out.signal_bytes.resize(static_cast<std::size_t>(samples) * channels * 2);
  std::vector<std::int64_t> sums(channels, 0);
  std::vector<std::int16_t> first(channels, 0);
  std::uint8_t* p = out.signal_bytes.data();
  for (std::int64_t s = 0; s < samples; ++s) {
    for (int c = 0; c < channels; ++c) {
      const double scaled = std::round(record.samples(s, c) * gain);
      if (!(scaled >= -32768.0 && scaled <= 32767.0)) {
        throw Error("value out of signed 16-bit range after gain scaling at channel " +
                    std::to_string(c + 1) + ", sample " + std::to_string(s + 1) +
                    " (scaled " + std::to_string(scaled) + ")");
      }
      const auto q = static_cast<std::int16_t>(scaled);
      if (s == 0) first[c] = q;
      sums[c] += q;
      const auto u = static_cast<std::uint16_t>(q);
      *p++ = static_cast<std::uint8_t>(u & 0xff);
      *p++ = static_cast<std::uint8_t>(u >> 8);
    }
  }

  std::ostringstream hea;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", record.sampling_rate_hz);
  hea << name << " " << channels << " " << buf << " " << samples << "\n";
  std::snprintf(buf, sizeof(buf), "%.12g", gain);
  for (int c = 0; c < channels; ++c) {
    const auto chk = static_cast<std::int16_t>(static_cast<std::uint16_t>(sums[c]));
    hea << name << ".dat 16 " << buf << "/mV 16 0 " << first[c] << " " << chk
        << " 0 ch" << (c + 1) << "\n";
  }
  out.header_text = hea.str();
  return out;
}

SignalRecord load_record(const std::filesystem::path& hea_path,
                         std::vector<std::string>* warnings) {
  std::ifstream hea(hea_path);
  if (!hea) throw Error("cannot open header file: " + hea_path.string());
  std::ostringstream text;
  text << hea.rdbuf();
  const RecordHeader header = parse_header(text.str());

  // All channels of the subset live in one .dat file next to the header.
  std::filesystem::path dat_path = hea_path.parent_path();
  dat_path /= header.channels.empty() ? header.record_name + ".dat"
                                      : header.channels.front().file_name;
  std::ifstream dat(dat_path, std::ios::binary);
  if (!dat) throw Error("cannot open signal file: " + dat_path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(dat)),
                                  std::istreambuf_iterator<char>());
  return decode_signal(bytes, header, warnings);
}

void write_record(const std::filesystem::path& dir, const SignalRecord& record,
                  double gain) {
  const EncodedRecord encoded = encode_record(record, gain);
  std::filesystem::create_directories(dir);
  const std::string name = record.id.name();
  {
    std::ofstream hea(dir / (name + ".hea"), std::ios::binary);
    if (!hea) throw Error("cannot write header file in " + dir.string());
    hea << encoded.header_text;
  }
  {
    std::ofstream dat(dir / (name + ".dat"), std::ios::binary);
    if (!dat) throw Error("cannot write signal file in " + dir.string());
    dat.write(reinterpret_cast<const char*>(encoded.signal_bytes.data()),
              static_cast<std::streamsize>(encoded.signal_bytes.size()));
  }
}

}  // namespace emgbio
