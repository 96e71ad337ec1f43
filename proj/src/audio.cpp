#include "audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "error.hpp"
#include "rng.hpp"
#include "textutil.hpp"

namespace stkit::audio {

namespace {

uint32_t read_u32le(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16le(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32le(std::vector<uint8_t>* out, uint32_t v) {
  out->push_back(static_cast<uint8_t>(v));
  out->push_back(static_cast<uint8_t>(v >> 8));
  out->push_back(static_cast<uint8_t>(v >> 16));
  out->push_back(static_cast<uint8_t>(v >> 24));
}

void put_u16le(std::vector<uint8_t>* out, uint16_t v) {
  out->push_back(static_cast<uint8_t>(v));
  out->push_back(static_cast<uint8_t>(v >> 8));
}

void put_tag(std::vector<uint8_t>* out, const char* tag) {
  out->insert(out->end(), tag, tag + 4);
}

double mean_square(const std::vector<float>& samples) {
  double acc = 0.0;
  for (float s : samples) acc += static_cast<double>(s) * s;
  return samples.empty() ? 0.0 : acc / static_cast<double>(samples.size());
}

}  // namespace

AudioSignal parse_wav(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::NotRiff, "not a RIFF/WAVE container");
  }

  bool have_fmt = false, have_data = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_len = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* hdr = bytes.data() + pos;
    uint32_t size = read_u32le(hdr + 4);
    const size_t body = pos + 8;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (body + 16 > bytes.size() || size < 16)
        throw Error(ErrorCode::Truncated, "fmt chunk shorter than declared");
      const uint8_t* f = bytes.data() + body;
      format = read_u16le(f);
      channels = read_u16le(f + 2);
      rate = read_u32le(f + 4);
      bits = read_u16le(f + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      if (body + size > bytes.size())
        throw Error(ErrorCode::Truncated, "data chunk shorter than declared");
      data_off = body;
      data_len = size;
      have_data = true;
    }
    pos = body + size + (size & 1);  // chunks pad to even length
  }

  if (!have_fmt || !have_data)
    throw Error(ErrorCode::Truncated, "missing fmt or data chunk");
  if (format != 1)
    throw Error(ErrorCode::UnsupportedFormat, "only PCM (format 1) supported");
  if (bits != 16)
    throw Error(ErrorCode::UnsupportedFormat, "only 16-bit samples supported");
  if (channels != 1)
    throw Error(ErrorCode::UnsupportedFormat, "only mono supported");
  if (rate == 0)
    throw Error(ErrorCode::UnsupportedFormat, "sample rate must be positive");
  if (data_len % 2 != 0)
    throw Error(ErrorCode::Truncated, "data chunk holds a partial sample");

  AudioSignal out;
  out.sample_rate_hz = static_cast<int>(rate);
  out.samples.resize(data_len / 2);
  for (size_t i = 0; i < out.samples.size(); ++i) {
    int16_t q = static_cast<int16_t>(read_u16le(bytes.data() + data_off + 2 * i));
    out.samples[i] = static_cast<float>(q) / 32768.0f;
  }
  return out;
}

std::vector<uint8_t> write_wav(const AudioSignal& signal) {
  if (signal.sample_rate_hz <= 0)
    throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
  const uint32_t data_len = static_cast<uint32_t>(signal.samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_len);
  put_tag(&out, "RIFF");
  put_u32le(&out, 36 + data_len);
  put_tag(&out, "WAVE");
  put_tag(&out, "fmt ");
  put_u32le(&out, 16);
  put_u16le(&out, 1);  // PCM
  put_u16le(&out, 1);  // mono
  put_u32le(&out, static_cast<uint32_t>(signal.sample_rate_hz));
  put_u32le(&out, static_cast<uint32_t>(signal.sample_rate_hz) * 2);
  put_u16le(&out, 2);
  put_u16le(&out, 16);
  put_tag(&out, "data");
  put_u32le(&out, data_len);
  for (float s : signal.samples) {
    long q = std::lrint(static_cast<double>(s) * 32768.0);
    q = std::clamp(q, -32768L, 32767L);
    put_u16le(&out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  return out;
}

AudioSignal speed_perturb(const AudioSignal& signal, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw Error(ErrorCode::BadFactor, "speed factor must be positive and finite");

  const size_t n = signal.samples.size();
  AudioSignal out;
  out.sample_rate_hz = signal.sample_rate_hz;
  if (n == 0) return out;

  const size_t out_len =
      static_cast<size_t>(std::llround(static_cast<double>(n) / factor));
  out.samples.resize(out_len);
  for (size_t i = 0; i < out_len; ++i) {
    double pos = static_cast<double>(i) * factor;
    size_t idx = static_cast<size_t>(pos);
    if (idx >= n - 1) {
      out.samples[i] = signal.samples[n - 1];
      continue;
    }
    double frac = pos - static_cast<double>(idx);
    out.samples[i] = static_cast<float>(
        static_cast<double>(signal.samples[idx]) * (1.0 - frac) +
        static_cast<double>(signal.samples[idx + 1]) * frac);
  }
  return out;
}

AudioSignal add_noise(const AudioSignal& signal, double snr_db, uint64_t seed) {
  const double p_signal = mean_square(signal.samples);
  if (p_signal <= 0.0)
    throw Error(ErrorCode::SilentSignal, "zero-power signal: SNR undefined");

  const double p_noise = p_signal / std::pow(10.0, snr_db / 10.0);
  const double sigma = std::sqrt(p_noise);

  Rng rng(seed);
  AudioSignal out;
  out.sample_rate_hz = signal.sample_rate_hz;
  out.samples.resize(signal.samples.size());
  for (size_t i = 0; i < signal.samples.size(); ++i) {
    out.samples[i] = static_cast<float>(
        static_cast<double>(signal.samples[i]) + sigma * rng.gaussian());
  }
  return out;
}

std::vector<Fragment> energy_vad(const AudioSignal& signal, double frame_ms,
                                 double energy_threshold, int min_gap_frames) {
  const long long spf =
      std::llround(frame_ms * signal.sample_rate_hz / 1000.0);
  if (spf < 1)
    throw Error(ErrorCode::BadFrame, "frame shorter than one sample");
  if (min_gap_frames < 1)
    throw Error(ErrorCode::InvalidArgument, "min_gap_frames must be >= 1");

  const size_t n = signal.samples.size();
  const size_t frame = static_cast<size_t>(spf);
  std::vector<bool> speech;
  for (size_t start = 0; start < n; start += frame) {
    size_t end = std::min(n, start + frame);
    double acc = 0.0;
    for (size_t i = start; i < end; ++i)
      acc += static_cast<double>(signal.samples[i]) * signal.samples[i];
    speech.push_back(acc / static_cast<double>(end - start) > energy_threshold);
  }

  // Speech frame runs, then merge runs across short gaps.
  struct Run {
    size_t first, last;
  };
  std::vector<Run> runs;
  for (size_t f = 0; f < speech.size(); ++f) {
    if (!speech[f]) continue;
    if (!runs.empty() &&
        f - runs.back().last - 1 < static_cast<size_t>(min_gap_frames)) {
      runs.back().last = f;
    } else {
      runs.push_back({f, f});
    }
  }

  std::vector<Fragment> out;
  const double rate = static_cast<double>(signal.sample_rate_hz);
  for (const Run& r : runs) {
    double start_s = static_cast<double>(r.first * frame) / rate;
    double end_s = static_cast<double>(std::min(n, (r.last + 1) * frame)) / rate;
    out.push_back({start_s, end_s});
  }
  return out;
}

std::vector<std::vector<Fragment>> splice_min_duration(
    const std::vector<Fragment>& fragments, double min_s) {
  if (!(min_s > 0.0))
    throw Error(ErrorCode::InvalidArgument, "min_s must be positive");

  std::vector<std::vector<Fragment>> groups;
  std::vector<Fragment> current;
  double accum = 0.0;
  for (const Fragment& f : fragments) {
    current.push_back(f);
    accum += f.duration();
    if (accum >= min_s) {
      groups.push_back(std::move(current));
      current = {};
      accum = 0.0;
    }
  }
  if (!current.empty()) groups.push_back(std::move(current));
  return groups;
}

std::string format_fragments(const std::vector<Fragment>& fragments) {
  std::string out;
  for (const Fragment& f : fragments) {
    out += format_double(f.start_s, 3);
    out += '\t';
    out += format_double(f.end_s, 3);
    out += '\n';
  }
  return out;
}

std::vector<Fragment> parse_fragments(const std::string& text) {
  std::vector<Fragment> out;
  for (const std::string& line : split_lines(text)) {
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    double start, end;
    if (tab == std::string::npos || !parse_double(line.substr(0, tab), &start) ||
        !parse_double(line.substr(tab + 1), &end)) {
      throw Error(ErrorCode::MalformedLine, "bad fragment line: '" + line + "'");
    }
    if (start < 0.0 || end <= start)
      throw Error(ErrorCode::MalformedLine,
                  "fragment must satisfy 0 <= start < end: '" + line + "'");
    if (!out.empty() && start < out.back().end_s)
      throw Error(ErrorCode::MalformedLine,
                  "fragments must be sorted and non-overlapping");
    out.push_back({start, end});
  }
  return out;
}

std::string format_splice_groups(
    const std::vector<std::vector<Fragment>>& groups) {
  std::string out;
  for (size_t g = 0; g < groups.size(); ++g) {
    for (const Fragment& f : groups[g]) {
      out += std::to_string(g);
      out += '\t';
      out += format_double(f.start_s, 3);
      out += '\t';
      out += format_double(f.end_s, 3);
      out += '\n';
    }
  }
  return out;
}

}  // namespace stkit::audio
