// Copyright 2026 The Pseudopilot Authors.
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

// Speech boundary: push-to-talk segmentation, speech-to-text and
// text-to-speech adapters. Real recognisers and synthesisers live outside
// this process behind the wire protocol; the mocks keep the loop runnable
// and deterministic.

#ifndef PSEUDOPILOT_SPEECH_HPP_
#define PSEUDOPILOT_SPEECH_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pseudopilot/wire.hpp"

namespace pseudopilot::speech {

struct UtteranceCapture {
  std::string audio_ref;
  double ptt_start = 0.0;  // seconds
  double ptt_end = 0.0;
  int sample_rate = 16000;

  double duration() const { return ptt_end - ptt_start; }
};

struct AsrResult {
  std::string text;
  double confidence = 1.0;
};

class AsrAdapter {
 public:
  virtual ~AsrAdapter() = default;
  virtual AsrResult Transcribe(const UtteranceCapture &capture) = 0;
};

// Looks transcripts up in a sidecar table of `audio_ref<TAB>transcript`.
class MockAsr final : public AsrAdapter {
 public:
  explicit MockAsr(std::map<std::string, std::string> table)
      : table_(std::move(table)) {}

  static MockAsr ParseSidecar(std::string_view text);
  static MockAsr LoadSidecar(const std::string &path);
  static std::string FormatSidecar(const std::map<std::string, std::string> &table);

  AsrResult Transcribe(const UtteranceCapture &capture) override;

 private:
  std::map<std::string, std::string> table_;
};

// Request {"audio_ref": ...}; response {"text": ..., "confidence": ...}.
class ExternalAsr final : public AsrAdapter {
 public:
  ExternalAsr(wire::Endpoint endpoint, std::chrono::milliseconds timeout)
      : client_(std::move(endpoint), timeout) {}

  AsrResult Transcribe(const UtteranceCapture &capture) override;

 private:
  wire::Client client_;
};

class TtsAdapter {
 public:
  virtual ~TtsAdapter() = default;
  // Returns the path of the audio file holding the spoken prompt.
  virtual std::string Synthesize(std::span<const std::string> words) = 0;
};

inline constexpr int kMockSampleRate = 16000;
inline constexpr int kMockMsPerWord = 200;

// Writes 16 kHz mono 16-bit PCM WAV files with one 200 ms tone burst per
// word. File names derive from the prompt, so output is reproducible.
class MockTts final : public TtsAdapter {
 public:
  explicit MockTts(std::string output_dir) : dir_(std::move(output_dir)) {}
  std::string Synthesize(std::span<const std::string> words) override;

 private:
  std::string dir_;
};

// Request {"words": "..."}; the response frame holds audio bytes, which are
// written to the output directory unmodified.
class ExternalTts final : public TtsAdapter {
 public:
  ExternalTts(wire::Endpoint endpoint, std::chrono::milliseconds timeout,
              std::string output_dir)
      : client_(std::move(endpoint), timeout), dir_(std::move(output_dir)) {}

  std::string Synthesize(std::span<const std::string> words) override;

 private:
  wire::Client client_;
  std::string dir_;
};

struct WavInfo {
  int channels = 0;
  int sample_rate = 0;
  int bits_per_sample = 0;
  std::size_t frames = 0;

  double seconds() const {
    return sample_rate ? static_cast<double>(frames) / sample_rate : 0.0;
  }
};

// Parses a canonical PCM WAV header; throws kIo on malformed files.
WavInfo ReadWavInfo(const std::string &path);

enum class PttKind { kOn, kOff };

struct PttEvent {
  PttKind kind = PttKind::kOn;
  double t = 0.0;
};

// Incremental PTT segmentation. Each on/off pair yields one capture named
// "<stream>#<n>" (n from 0). Throws kOutOfOrderEvent for time going backwards, an off
// without an on or a zero-length press; kNestedPtt for on during on.
class PttSegmenter {
 public:
  explicit PttSegmenter(std::string stream_id, int sample_rate = 16000)
      : stream_(std::move(stream_id)), sample_rate_(sample_rate) {}

  std::optional<UtteranceCapture> Push(const PttEvent &event);
  bool open() const { return open_start_.has_value(); }

 private:
  std::string stream_;
  int sample_rate_;
  std::optional<double> last_t_;
  std::optional<double> open_start_;
  std::size_t count_ = 0;
};

// An on left open at the end of the stream yields no capture.
std::vector<UtteranceCapture> SegmentByPtt(std::span<const PttEvent> events,
                                           const std::string &stream_id,
                                           int sample_rate = 16000);

}  // namespace pseudopilot::speech

#endif  // PSEUDOPILOT_SPEECH_HPP_
