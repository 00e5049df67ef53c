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

#ifndef ADSCREEN_AUDIO_IO_H_
#define ADSCREEN_AUDIO_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "adscreen/error.h"

namespace adscreen {

// Mono audio with amplitudes in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
  double time_of(std::size_t index) const {
    return static_cast<double>(index) / sample_rate;
  }
};

// One diarized turn: who spoke and when (seconds from file start).
struct SegmentLabel {
  std::string speaker;
  double start = 0.0;
  double end = 0.0;

  double duration() const { return end - start; }
  bool operator==(const SegmentLabel&) const = default;
};

struct AudioSegment {
  Waveform waveform;
  SegmentLabel label;
};

// Reads a RIFF/WAVE file. Accepts mono PCM (8/16/24/32-bit integer) and
// 32/64-bit IEEE float, including WAVE_FORMAT_EXTENSIBLE wrappers. Integer
// samples are divided by 2^(bits-1).
Waveform read_wav(const std::filesystem::path& path);
Waveform parse_wav(std::string_view bytes);

// Writes 16-bit mono PCM. Samples are clipped to [-1, 1].
void write_wav(const std::filesystem::path& path, const Waveform& w);
std::string encode_wav16(const Waveform& w);

// Segmentation CSV with header `speaker,start,end`. Rows come back sorted by
// start time (stable, so equal starts keep file order).
std::vector<SegmentLabel> parse_segmentation(const std::filesystem::path& path);
std::vector<SegmentLabel> parse_segmentation_text(std::string_view text);
std::string serialize_segmentation(const std::vector<SegmentLabel>& labels);

// Copies the samples [round(start*rate), round(end*rate)) of every label whose
// speaker matches. Labels running past the end of the waveform are clamped
// with a warning; labels starting past the end are dropped.
std::vector<AudioSegment> slice_segments(const Waveform& w,
                                         const std::vector<SegmentLabel>& labels,
                                         std::string_view speaker);

}  // namespace adscreen

#endif  // ADSCREEN_AUDIO_IO_H_
