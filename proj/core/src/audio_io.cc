// Copyright 2026 The adscreen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adscreen/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

#include <spdlog/spdlog.h>

#include "adscreen/csv.h"

namespace adscreen {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const char* p) {
  const auto* b = reinterpret_cast<const unsigned char*>(p);
  return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 |
         std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24;
}

std::uint16_t read_u16(const char* p) {
  const auto* b = reinterpret_cast<const unsigned char*>(p);
  return static_cast<std::uint16_t>(b[0] | b[1] << 8);
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

double decode_sample(const char* p, const Format& fmt) {
  if (fmt.tag == kFormatFloat) {
    if (fmt.bits == 32) {
      float f;
      std::uint32_t u = read_u32(p);
      std::memcpy(&f, &u, sizeof f);
      return f;
    }
    double d;
    std::uint64_t u = std::uint64_t{read_u32(p)} | std::uint64_t{read_u32(p + 4)} << 32;
    std::memcpy(&d, &u, sizeof d);
    return d;
  }
  const auto* b = reinterpret_cast<const unsigned char*>(p);
  switch (fmt.bits) {
    case 8:
      return (static_cast<int>(b[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
    case 24: {
      std::int32_t v = b[0] | b[1] << 8 | b[2] << 16;
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    default:
      return static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
  }
}

}  // namespace

Waveform parse_wav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" ||
      bytes.substr(8, 4) != "WAVE") {
    throw InputError("not a RIFF/WAVE file");
  }
  std::optional<Format> fmt;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::string_view id = bytes.substr(pos, 4);
    std::uint32_t size = read_u32(bytes.data() + pos + 4);
    std::size_t body = pos + 8;
    if (id == "fmt ") {
      if (size < 16 || body + size > bytes.size()) {
        throw InputError("truncated fmt chunk");
      }
      const char* p = bytes.data() + body;
      Format f;
      f.tag = read_u16(p);
      f.channels = read_u16(p + 2);
      f.sample_rate = read_u32(p + 4);
      f.block_align = read_u16(p + 12);
      f.bits = read_u16(p + 14);
      if (f.tag == kFormatExtensible) {
        if (size < 40) throw InputError("truncated extensible fmt chunk");
        // The sub-format GUID starts with the plain format tag.
        f.tag = read_u16(p + 24);
      }
      fmt = f;
    } else if (id == "data") {
      if (!fmt) throw InputError("data chunk before fmt chunk");
      if (fmt->channels != 1) throw InputError("unsupported channel count");
      bool pcm_ok = fmt->tag == kFormatPcm &&
                    (fmt->bits == 8 || fmt->bits == 16 || fmt->bits == 24 ||
                     fmt->bits == 32);
      bool float_ok = fmt->tag == kFormatFloat && (fmt->bits == 32 || fmt->bits == 64);
      if (!pcm_ok && !float_ok) {
        throw InputError("unsupported codec (format tag " +
                         std::to_string(fmt->tag) + ", " +
                         std::to_string(fmt->bits) + " bits)");
      }
      if (fmt->sample_rate == 0) throw InputError("sample rate is zero");
      if (body + size > bytes.size()) throw InputError("truncated data chunk");
      std::size_t width = fmt->bits / 8;
      if (fmt->block_align != width) throw InputError("inconsistent block alignment");
      if (size % width != 0) throw InputError("truncated data chunk");
      Waveform w;
      w.sample_rate = static_cast<int>(fmt->sample_rate);
      w.samples.resize(size / width);
      for (std::size_t i = 0; i < w.samples.size(); ++i) {
        double v = decode_sample(bytes.data() + body + i * width, *fmt);
        if (!std::isfinite(v)) throw InputError("non-finite sample");
        w.samples[i] = v;
      }
      return w;
    }
    pos = body + size + (size & 1);
  }
  throw InputError(fmt ? "truncated file: no data chunk" : "missing fmt chunk");
}

Waveform read_wav(const std::filesystem::path& path) {
  try {
    return parse_wav(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string encode_wav16(const Waveform& w) {
  std::string out;
  auto data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (double s : w.samples) {
    double clipped = std::clamp(s, -1.0, 1.0);
    long q = std::lround(clipped * 32768.0);
    q = std::clamp(q, -32768L, 32767L);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const Waveform& w) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << encode_wav16(w);
}

std::vector<SegmentLabel> parse_segmentation_text(std::string_view text) {
  auto rows = csv::lines(text);
  if (rows.empty()) throw InputError("segmentation: empty file");
  if (csv::split_row(rows[0]) != std::vector<std::string>{"speaker", "start", "end"}) {
    throw InputError("segmentation: expected header 'speaker,start,end'");
  }
  std::vector<SegmentLabel> labels;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto fields = csv::split_row(rows[i]);
    std::string where = "segmentation row " + std::to_string(i);
    if (fields.size() != 3) throw InputError(where + ": expected 3 fields");
    SegmentLabel l;
    l.speaker = fields[0];
    if (l.speaker.empty()) throw InputError(where + ": empty speaker");
    if (!csv::parse_double(fields[1], l.start) || !csv::parse_double(fields[2], l.end)) {
      throw InputError(where + ": non-numeric time");
    }
    if (l.start < 0.0) throw InputError(where + ": negative start");
    if (l.end <= l.start) throw InputError(where + ": end <= start");
    labels.push_back(std::move(l));
  }
  std::stable_sort(labels.begin(), labels.end(),
                   [](const SegmentLabel& a, const SegmentLabel& b) {
                     return a.start < b.start;
                   });
  return labels;
}

std::vector<SegmentLabel> parse_segmentation(const std::filesystem::path& path) {
  try {
    return parse_segmentation_text(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string serialize_segmentation(const std::vector<SegmentLabel>& labels) {
  std::string out = "speaker,start,end\n";
  for (const auto& l : labels) {
    out += l.speaker + "," + csv::format_double(l.start) + "," +
           csv::format_double(l.end) + "\n";
  }
  return out;
}

std::vector<AudioSegment> slice_segments(const Waveform& w,
                                         const std::vector<SegmentLabel>& labels,
                                         std::string_view speaker) {
  std::vector<AudioSegment> out;
  const double total = w.duration();
  const auto n = static_cast<long>(w.samples.size());
  for (const auto& label : labels) {
    if (label.speaker != speaker) continue;
    SegmentLabel clamped = label;
    if (label.start >= total) {
      spdlog::warn("segment [{}, {}] starts after the end of the audio ({} s); dropped",
                   label.start, label.end, total);
      continue;
    }
    if (label.end > total) {
      spdlog::warn("segment [{}, {}] clamped to audio end {} s", label.start,
                   label.end, total);
      clamped.end = total;
    }
    long first = std::clamp(std::lround(clamped.start * w.sample_rate), 0L, n);
    long last = std::clamp(std::lround(clamped.end * w.sample_rate), 0L, n);
    if (last <= first) continue;
    AudioSegment seg;
    seg.label = clamped;
    seg.waveform.sample_rate = w.sample_rate;
    seg.waveform.samples.assign(w.samples.begin() + first, w.samples.begin() + last);
    out.push_back(std::move(seg));
  }
  return out;
}

}  // namespace adscreen
