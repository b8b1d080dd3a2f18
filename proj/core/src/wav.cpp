// Copyright 2026  The soundscape authors
//
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

// RIFF/WAVE reading and writing.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "soundscape/audio_io.hpp"
#include "soundscape/error.hpp"

namespace soundscape {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct ParsedWav {
  WavInfo info;
  std::uint16_t format = 0;
  std::size_t block_align = 0;
  const std::uint8_t* data = nullptr;
};

ParsedWav parse_wav(std::span<const std::uint8_t> bytes,
                    const std::string& source_id) {
  auto fail = [&](const std::string& what) -> ValidationError {
    return ValidationError(source_id + ": " + what);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }

  ParsedWav out;
  bool have_fmt = false;
  bool have_data = false;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) throw fail("truncated fmt chunk");
      const std::uint8_t* f = bytes.data() + body;
      out.format = read_u16(f);
      out.info.channels = read_u16(f + 2);
      out.info.sample_rate_hz = static_cast<int>(read_u32(f + 4));
      out.block_align = read_u16(f + 12);
      out.info.bits_per_sample = read_u16(f + 14);
      if (out.format == kFormatExtensible) {
        if (size < 40) throw fail("truncated WAVE_FORMAT_EXTENSIBLE header");
        // First two bytes of the sub-format GUID carry the format code.
        out.format = read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      out.data = bytes.data() + body;
      // Streaming writers leave the size as 0 or 0xFFFFFFFF.
      data_size = (size == 0 || size > available) ? available : size;
      have_data = true;
    }
    if (have_fmt && have_data) break;
    pos = body + size + (size & 1U);
  }
  if (!have_fmt) throw fail("missing fmt chunk");
  if (!have_data) throw fail("missing data chunk");

  const int bits = out.info.bits_per_sample;
  const bool pcm_ok = out.format == kFormatPcm &&
                      (bits == 8 || bits == 16 || bits == 24 || bits == 32);
  const bool float_ok = out.format == kFormatFloat && (bits == 32 || bits == 64);
  if (!pcm_ok && !float_ok) {
    throw fail("unsupported codec (format " + std::to_string(out.format) +
               ", " + std::to_string(bits) + " bits)");
  }
  if (out.info.channels < 1) throw fail("no channels");
  if (out.info.sample_rate_hz <= 0) throw fail("invalid sample rate");
  const std::size_t expected_align =
      static_cast<std::size_t>(out.info.channels) * (bits / 8);
  if (out.block_align != expected_align) out.block_align = expected_align;
  out.info.frames = data_size / out.block_align;
  if (out.info.frames == 0) throw fail("zero-length audio");
  return out;
}

double decode_sample(const std::uint8_t* p, std::uint16_t format, int bits) {
  if (format == kFormatFloat) {
    if (bits == 32) {
      return static_cast<double>(std::bit_cast<float>(read_u32(p)));
    }
    const std::uint64_t lo = read_u32(p);
    const std::uint64_t hi = read_u32(p + 4);
    return std::bit_cast<double>(lo | (hi << 32));
  }
  switch (bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    default:
      return static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

}  // namespace

AudioClip decode_wav_bytes(std::span<const std::uint8_t> bytes,
                           std::string source_id) {
  const ParsedWav wav = parse_wav(bytes, source_id);
  const int channels = wav.info.channels;
  const int bits = wav.info.bits_per_sample;
  const std::size_t bytes_per_sample = static_cast<std::size_t>(bits / 8);

  AudioClip clip;
  clip.sample_rate_hz = wav.info.sample_rate_hz;
  clip.samples.resize(wav.info.frames);
  for (std::size_t i = 0; i < wav.info.frames; ++i) {
    const std::uint8_t* frame = wav.data + i * wav.block_align;
    double sum = 0.0;
    for (int c = 0; c < channels; ++c) {
      const double v =
          decode_sample(frame + c * bytes_per_sample, wav.format, bits);
      if (!std::isfinite(v)) {
        throw ValidationError(source_id + ": non-finite sample at frame " +
                              std::to_string(i));
      }
      sum += v;
    }
    clip.samples[i] = static_cast<float>(std::clamp(sum / channels, -1.0, 1.0));
  }
  clip.source_id = std::move(source_id);
  return clip;
}

AudioClip decode_wav(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return decode_wav_bytes(bytes, path.string());
}

WavInfo probe_wav(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_wav(bytes, path.string()).info;
}

std::vector<std::uint8_t> encode_wav_pcm16(const AudioClip& clip) {
  if (clip.sample_rate_hz <= 0) throw ValidationError("invalid sample rate");
  const std::size_t data_bytes = clip.samples.size() * 2;
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, static_cast<std::uint32_t>(36 + data_bytes));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, static_cast<std::uint32_t>(data_bytes));
  for (float s : clip.samples) {
    const double scaled = std::round(std::clamp<double>(s, -1.0, 1.0) * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put_u16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

void write_wav_pcm16(const std::filesystem::path& path, const AudioClip& clip) {
  const auto bytes = encode_wav_pcm16(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace soundscape
