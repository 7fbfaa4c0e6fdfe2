// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/wavio.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "maskaid/errors.hpp"

namespace maskaid {

namespace {

constexpr uint16_t kFmtPcm = 1;
constexpr uint16_t kFmtFloat = 3;

uint32_t rd_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}
uint16_t rd_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void wr_u32(std::vector<uint8_t>& b, uint32_t v) {
  b.push_back(v & 0xff);
  b.push_back((v >> 8) & 0xff);
  b.push_back((v >> 16) & 0xff);
  b.push_back((v >> 24) & 0xff);
}
void wr_u16(std::vector<uint8_t>& b, uint16_t v) {
  b.push_back(v & 0xff);
  b.push_back((v >> 8) & 0xff);
}

}  // namespace

AudioSignal wav_read(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("wav_read: cannot open " + path);
  std::vector<uint8_t> raw((std::istreambuf_iterator<char>(f)),
                           std::istreambuf_iterator<char>());
  if (raw.size() < 44 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
      std::memcmp(raw.data() + 8, "WAVE", 4) != 0)
    throw FormatError("wav_read: not a RIFF/WAVE file: " + path);

  uint16_t fmt = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const uint8_t* data = nullptr;
  uint32_t data_len = 0;
  bool have_fmt = false;

  std::size_t pos = 12;
  while (pos + 8 <= raw.size()) {
    const uint8_t* hdr = raw.data() + pos;
    const uint32_t len = rd_u32(hdr + 4);
    const uint8_t* body = hdr + 8;
    if (pos + 8 + len > raw.size())
      throw FormatError("wav_read: truncated chunk in " + path);
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (len < 16) throw FormatError("wav_read: short fmt chunk in " + path);
      fmt = rd_u16(body);
      channels = rd_u16(body + 2);
      rate = rd_u32(body + 4);
      bits = rd_u16(body + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = body;
      data_len = len;
    }
    pos += 8 + len + (len & 1);
  }
  if (!have_fmt || data == nullptr)
    throw FormatError("wav_read: missing fmt or data chunk in " + path);
  if (channels != 1)
    throw FormatError("wav_read: only mono supported, got " +
                      std::to_string(channels) + " channels in " + path);
  if (rate != static_cast<uint32_t>(kSampleRate))
    throw FormatError("wav_read: sample rate must be 16000 Hz, got " +
                      std::to_string(rate) + " in " + path);

  AudioSignal out;
  if (fmt == kFmtPcm && bits == 16) {
    const std::size_t n = data_len / 2;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      int16_t v;
      std::memcpy(&v, data + 2 * i, 2);
      out.samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else if (fmt == kFmtFloat && bits == 32) {
    const std::size_t n = data_len / 4;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      float v;
      std::memcpy(&v, data + 4 * i, 4);
      out.samples[i] = static_cast<double>(v);
    }
  } else {
    throw FormatError("wav_read: unsupported encoding (fmt=" +
                      std::to_string(fmt) + ", bits=" + std::to_string(bits) +
                      ") in " + path);
  }
  return out;
}

void wav_write(const std::string& path, const AudioSignal& x, WavEncoding enc) {
  const uint16_t bits = (enc == WavEncoding::pcm16) ? 16 : 32;
  const uint16_t fmt = (enc == WavEncoding::pcm16) ? kFmtPcm : kFmtFloat;
  const uint32_t rate = static_cast<uint32_t>(kSampleRate);
  const uint32_t bytes_per_sample = bits / 8;
  const uint32_t data_len = static_cast<uint32_t>(x.samples.size()) * bytes_per_sample;

  std::vector<uint8_t> b;
  b.reserve(44 + data_len);
  b.insert(b.end(), {'R', 'I', 'F', 'F'});
  wr_u32(b, 36 + data_len);
  b.insert(b.end(), {'W', 'A', 'V', 'E'});
  b.insert(b.end(), {'f', 'm', 't', ' '});
  wr_u32(b, 16);
  wr_u16(b, fmt);
  wr_u16(b, 1);  // mono
  wr_u32(b, rate);
  wr_u32(b, rate * bytes_per_sample);
  wr_u16(b, static_cast<uint16_t>(bytes_per_sample));
  wr_u16(b, bits);
  b.insert(b.end(), {'d', 'a', 't', 'a'});
  wr_u32(b, data_len);

  if (enc == WavEncoding::pcm16) {
    for (double v : x.samples) {
      double s = v * 32768.0;
      if (s > 32767.0) s = 32767.0;
      if (s < -32768.0) s = -32768.0;
      const int16_t q = static_cast<int16_t>(std::lrint(s));
      b.push_back(static_cast<uint8_t>(q & 0xff));
      b.push_back(static_cast<uint8_t>((q >> 8) & 0xff));
    }
  } else {
    for (double v : x.samples) {
      const float fv = static_cast<float>(v);
      uint8_t tmp[4];
      std::memcpy(tmp, &fv, 4);
      b.insert(b.end(), tmp, tmp + 4);
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("wav_write: cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(b.data()),
          static_cast<std::streamsize>(b.size()));
  if (!f) throw IoError("wav_write: write failed for " + path);
}

}  // namespace maskaid
