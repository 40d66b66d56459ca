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

#include "pseudopilot/speech.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "pseudopilot/error.hpp"
#include "pseudopilot/text.hpp"

namespace pseudopilot::speech {

namespace {

void PutLe(std::string &out, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t GetLe(const std::string &in, std::size_t pos, int bytes) {
  std::uint32_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(in[pos + i]);
  }
  return v;
}

std::string PromptFileName(std::span<const std::string> words,
                           std::string_view prefix, std::string_view ext) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(Fnv1a(JoinWords(words))));
  return std::string(prefix) + "-" + hex + std::string(ext);
}

std::string WriteSink(const std::string &dir, const std::string &name,
                      std::string_view bytes) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kSinkWriteFailure, "cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kSinkWriteFailure, "short write to " + path);
  return path;
}

// 16-bit mono PCM: a 1 kHz burst for the first 180 ms of every 200 ms slot.
std::string ToneBurstWav(std::size_t word_count) {
  constexpr int kFramesPerWord = kMockSampleRate * kMockMsPerWord / 1000;
  constexpr int kToneFrames = kFramesPerWord * 9 / 10;
  const std::uint32_t frames = static_cast<std::uint32_t>(word_count * kFramesPerWord);
  const std::uint32_t data_bytes = frames * 2;

  std::string wav;
  wav.reserve(44 + data_bytes);
  wav += "RIFF";
  PutLe(wav, 36 + data_bytes, 4);
  wav += "WAVEfmt ";
  PutLe(wav, 16, 4);              // fmt chunk size
  PutLe(wav, 1, 2);               // PCM
  PutLe(wav, 1, 2);               // mono
  PutLe(wav, kMockSampleRate, 4);
  PutLe(wav, kMockSampleRate * 2, 4);
  PutLe(wav, 2, 2);               // block align
  PutLe(wav, 16, 2);
  wav += "data";
  PutLe(wav, data_bytes, 4);
  for (std::uint32_t f = 0; f < frames; ++f) {
    int in_slot = static_cast<int>(f % kFramesPerWord);
    double s = 0.0;
    if (in_slot < kToneFrames) {
      s = 0.3 * std::sin(2.0 * std::numbers::pi * 1000.0 * in_slot / kMockSampleRate);
    }
    auto v = static_cast<std::int16_t>(std::lround(s * 32767.0));
    PutLe(wav, static_cast<std::uint16_t>(v), 2);
  }
  return wav;
}

}  // namespace

// ---------------------------------------------------------------------------
// ASR

MockAsr MockAsr::ParseSidecar(std::string_view text) {
  std::map<std::string, std::string> table;
  std::size_t line_no = 0;
  for (const std::string &raw : SplitFields(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty() || Trim(line).front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::kDataFormat,
                  "sidecar line " + std::to_string(line_no) +
                      ": expected audio_ref<TAB>transcript");
    }
    std::string ref(Trim(line.substr(0, tab)));
    if (!table.emplace(ref, std::string(line.substr(tab + 1))).second) {
      throw Error(ErrorCode::kDuplicateEntry, "sidecar line " + std::to_string(line_no) +
                                                  ": duplicate audio_ref '" + ref + "'");
    }
  }
  return MockAsr(std::move(table));
}

MockAsr MockAsr::LoadSidecar(const std::string &path) {
  return ParseSidecar(ReadFile(path));
}

std::string MockAsr::FormatSidecar(
    const std::map<std::string, std::string> &table) {
  std::string out;
  for (const auto &[ref, text] : table) out += ref + "\t" + text + "\n";
  return out;
}

AsrResult MockAsr::Transcribe(const UtteranceCapture &capture) {
  auto it = table_.find(capture.audio_ref);
  if (it == table_.end()) {
    throw Error(ErrorCode::kUnknownAudioRef,
                "no transcript for audio ref '" + capture.audio_ref + "'");
  }
  return {it->second, 1.0};
}

AsrResult ExternalAsr::Transcribe(const UtteranceCapture &capture) {
  nlohmann::json request = {{"audio_ref", capture.audio_ref},
                            {"ptt_start", capture.ptt_start},
                            {"ptt_end", capture.ptt_end},
                            {"sample_rate", capture.sample_rate}};
  auto reply = nlohmann::json::parse(client_.Call(request.dump()), nullptr, false);
  if (reply.is_discarded() || !reply.contains("text") ||
      !reply["text"].is_string()) {
    throw Error(ErrorCode::kAdapterUnavailable, "ASR adapter: malformed reply");
  }
  AsrResult r;
  r.text = reply["text"].get<std::string>();
  r.confidence = reply.value("confidence", 1.0);
  if (!(r.confidence >= 0.0 && r.confidence <= 1.0)) {
    throw Error(ErrorCode::kAdapterUnavailable,
                "ASR adapter: confidence outside [0, 1]");
  }
  return r;
}

// ---------------------------------------------------------------------------
// TTS

std::string MockTts::Synthesize(std::span<const std::string> words) {
  if (words.empty()) throw Error(ErrorCode::kEmptyPrompt, "empty prompt");
  return WriteSink(dir_, PromptFileName(words, "tts", ".wav"),
                   ToneBurstWav(words.size()));
}

std::string ExternalTts::Synthesize(std::span<const std::string> words) {
  if (words.empty()) throw Error(ErrorCode::kEmptyPrompt, "empty prompt");
  nlohmann::json request = {{"words", JoinWords(words)}};
  std::string audio = client_.Call(request.dump());
  return WriteSink(dir_, PromptFileName(words, "tts-ext", ".wav"), audio);
}

WavInfo ReadWavInfo(const std::string &path) {
  std::string bytes = ReadFile(path);
  auto bad = [&] { return Error(ErrorCode::kIo, "not a PCM WAV file: " + path); };
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0) {
    throw bad();
  }
  WavInfo info;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::string id = bytes.substr(pos, 4);
    std::uint32_t size = GetLe(bytes, pos + 4, 4);
    std::size_t body = pos + 8;
    if (id == "fmt " && size >= 16 && body + 16 <= bytes.size()) {
      info.channels = static_cast<int>(GetLe(bytes, body + 2, 2));
      info.sample_rate = static_cast<int>(GetLe(bytes, body + 4, 4));
      info.bits_per_sample = static_cast<int>(GetLe(bytes, body + 14, 2));
      have_fmt = true;
    } else if (id == "data" && have_fmt) {
      std::size_t frame_bytes =
          static_cast<std::size_t>(info.channels) * info.bits_per_sample / 8;
      if (frame_bytes == 0) throw bad();
      info.frames = size / frame_bytes;
      return info;
    }
    pos = body + size + (size & 1);
  }
  throw bad();
}

// ---------------------------------------------------------------------------
// PTT

std::optional<UtteranceCapture> PttSegmenter::Push(const PttEvent &event) {
  if (last_t_ && event.t < *last_t_) {
    throw Error(ErrorCode::kOutOfOrderEvent,
                "PTT event at " + std::to_string(event.t) + " s precedes " +
                    std::to_string(*last_t_) + " s");
  }
  last_t_ = event.t;
  if (event.kind == PttKind::kOn) {
    if (open_start_) {
      throw Error(ErrorCode::kNestedPtt,
                  "PTT on at " + std::to_string(event.t) +
                      " s while already keyed");
    }
    open_start_ = event.t;
    return std::nullopt;
  }
  if (!open_start_) {
    throw Error(ErrorCode::kOutOfOrderEvent,
                "PTT off at " + std::to_string(event.t) + " s without on");
  }
  if (event.t <= *open_start_) {
    throw Error(ErrorCode::kOutOfOrderEvent, "zero-length PTT press");
  }
  UtteranceCapture c;
  c.audio_ref = stream_ + "#" + std::to_string(count_++);
  c.ptt_start = *open_start_;
  c.ptt_end = event.t;
  c.sample_rate = sample_rate_;
  open_start_.reset();
  return c;
}

std::vector<UtteranceCapture> SegmentByPtt(std::span<const PttEvent> events,
                                           const std::string &stream_id,
                                           int sample_rate) {
  PttSegmenter seg(stream_id, sample_rate);
  std::vector<UtteranceCapture> out;
  for (const PttEvent &e : events) {
    if (auto c = seg.Push(e)) out.push_back(std::move(*c));
  }
  return out;
}

}  // namespace pseudopilot::speech
