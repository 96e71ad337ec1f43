#ifndef STKIT_AUDIO_HPP
#define STKIT_AUDIO_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace stkit::audio {

// Mono PCM signal. Samples are nominally in [-1, 1]; operations may push
// values outside that range, which write_wav clamps at quantization time.
struct AudioSignal {
  std::vector<float> samples;
  int sample_rate_hz = 0;

  double duration_s() const {
    return sample_rate_hz > 0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
};

// Speech region in seconds, relative to the parent signal.
struct Fragment {
  double start_s = 0.0;
  double end_s = 0.0;

  double duration() const { return end_s - start_s; }
  bool operator==(const Fragment&) const = default;
};

// RIFF/WAVE, PCM 16-bit mono only. Samples scale to [-1, 1] by 1/32768.
// Throws NotRiff, UnsupportedFormat, or Truncated.
AudioSignal parse_wav(const std::vector<uint8_t>& bytes);

// 16-bit mono container; samples clamp to [-1, 1] before quantization, so
// parse_wav(write_wav(s)) reproduces s within one quantization step.
std::vector<uint8_t> write_wav(const AudioSignal& signal);

// Resamples so output length = round(len/factor); sample i is the linear
// interpolation of the input at position i*factor. The nominal rate is kept,
// so both tempo and pitch shift. Throws BadFactor.
AudioSignal speed_perturb(const AudioSignal& signal, double factor);

// Additive white Gaussian noise at the requested signal-to-noise ratio,
// deterministic per seed. Throws SilentSignal when the input has zero power.
AudioSignal add_noise(const AudioSignal& signal, double snr_db, uint64_t seed);

// Frames with mean-square energy above the threshold are speech; speech runs
// separated by fewer than min_gap_frames silent frames merge into one
// fragment. Throws BadFrame when frame_ms is under one sample.
std::vector<Fragment> energy_vad(const AudioSignal& signal, double frame_ms,
                                 double energy_threshold, int min_gap_frames);

// Greedy left-to-right grouping of consecutive fragments; a group closes once
// its summed duration reaches min_s. Only the final group may fall short.
std::vector<std::vector<Fragment>> splice_min_duration(
    const std::vector<Fragment>& fragments, double min_s);

// Text form: one "start<TAB>end" line per fragment, 3 decimal places.
std::string format_fragments(const std::vector<Fragment>& fragments);
std::vector<Fragment> parse_fragments(const std::string& text);

// Splice groups as "group_index<TAB>start<TAB>end" lines.
std::string format_splice_groups(const std::vector<std::vector<Fragment>>& groups);

}  // namespace stkit::audio

#endif  // STKIT_AUDIO_HPP
