// stkit command-line front end. Links the C API only; all domain logic lives
// behind include/stkit/stkit.h.
#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "stkit/stkit.h"

namespace {

// ---------------------------------------------------------------- plumbing

struct CliError {
  std::string message;
  int exit_code = 1;
};

[[noreturn]] void fail(const std::string& message, int exit_code = 1) {
  throw CliError{message, exit_code};
}

void check(stk_status status) {
  if (status != STK_OK) {
    fail(std::string(stk_status_name(status)) + ": " + stk_last_error());
  }
}

// Owned C string from the library.
struct OwnedString {
  char* value = nullptr;
  OwnedString() = default;
  OwnedString(const OwnedString&) = delete;
  OwnedString& operator=(const OwnedString&) = delete;
  ~OwnedString() { stk_string_free(value); }
  std::string str() const { return value ? value : ""; }
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
  Handle& operator=(Handle&& other) noexcept {
    if (this != &other) {
      Free(ptr);
      ptr = other.ptr;
      other.ptr = nullptr;
    }
    return *this;
  }
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using AudioHandle = Handle<stk_audio, stk_audio_free>;
using FragmentsHandle = Handle<stk_fragments, stk_fragments_free>;
using SpliceHandle = Handle<stk_splice_groups, stk_splice_groups_free>;
using HomophonesHandle = Handle<stk_homophones, stk_homophones_free>;
using BoundaryHandle = Handle<stk_boundary_model, stk_boundary_model_free>;
using LexiconHandle = Handle<stk_lexicon, stk_lexicon_free>;
using NBestHandle = Handle<stk_nbest, stk_nbest_free>;
using WeightsHandle = Handle<stk_weights, stk_weights_free>;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Atomic replace: write a sibling temp file, then rename over the target.
void write_file(const std::string& path, const void* data, size_t len) {
  if (path == "-") {
    std::fwrite(data, 1, len, stdout);
    std::fflush(stdout);
    return;
  }
  std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot write '" + tmp + "'");
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!out) fail("short write to '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    fail("cannot rename '" + tmp + "' to '" + path + "'");
  }
}

void write_file(const std::string& path, const std::string& data) {
  write_file(path, data.data(), data.size());
}

// ---------------------------------------------------------------- options

struct FlagSpec {
  const char* name;  // without leading dashes
  bool takes_value;
  bool repeatable;
  const char* help;
};

struct Args {
  std::map<std::string, std::vector<std::string>> flags;
  std::vector<std::string> positional;
  std::map<std::string, std::string> config;
  std::string stage;

  bool has(const std::string& name) const { return flags.count(name) > 0; }

  // flag > config "<stage>.<name>" > fallback
  std::string get(const std::string& name, const std::string& fallback) const {
    auto it = flags.find(name);
    if (it != flags.end()) return it->second.back();
    auto c = config.find(stage + "." + name);
    if (c != config.end()) return c->second;
    return fallback;
  }

  std::string require(const std::string& name) const {
    std::string v = get(name, "");
    if (v.empty()) fail("missing required --" + name);
    return v;
  }

  std::vector<std::string> get_all(const std::string& name) const {
    auto it = flags.find(name);
    if (it != flags.end()) return it->second;
    auto c = config.find(stage + "." + name);
    if (c != config.end()) return {c->second};
    return {};
  }

  double get_double(const std::string& name, double fallback) const {
    std::string v = get(name, "");
    if (v.empty()) return fallback;
    char* end = nullptr;
    double parsed = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size())
      fail("bad numeric value for --" + name + ": '" + v + "'");
    return parsed;
  }

  long long get_int(const std::string& name, long long fallback) const {
    std::string v = get(name, "");
    if (v.empty()) return fallback;
    char* end = nullptr;
    long long parsed = std::strtoll(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size())
      fail("bad integer value for --" + name + ": '" + v + "'");
    return parsed;
  }

  bool get_bool(const std::string& name) const {
    if (flags.count(name)) return true;
    auto c = config.find(stage + "." + name);
    return c != config.end() && (c->second == "true" || c->second == "1");
  }
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Flat "key = value" lines; '#' starts a comment line.
std::map<std::string, std::string> parse_config(const std::string& path) {
  std::map<std::string, std::string> out;
  std::string text = read_file(path);
  size_t start = 0;
  int lineno = 0;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    std::string line = text.substr(
        start, nl == std::string::npos ? std::string::npos : nl - start);
    ++lineno;
    start = nl == std::string::npos ? text.size() : nl + 1;

    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      fail("config line " + std::to_string(lineno) + " is not 'key = value'");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail("config line " + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

// ---------------------------------------------------------------- helpers

uint64_t stage_seed(const Args& args) {
  uint64_t top = 0;
  auto it = args.flags.find("seed");
  if (it != args.flags.end()) {
    top = std::strtoull(it->second.back().c_str(), nullptr, 10);
  } else {
    auto c = args.config.find("seed");
    if (c != args.config.end())
      top = std::strtoull(c->second.c_str(), nullptr, 10);
  }
  return stk_derive_seed(top, args.stage.c_str());
}

std::vector<std::string> split_lines_local(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  for (auto& line : out)
    if (!line.empty() && line.back() == '\r') line.pop_back();
  return out;
}

stk_corrupt_params corruption_params(const Args& args) {
  stk_corrupt_params params;
  params.homophone_rate = args.get_double("homophone-rate", 0.0);
  params.sub_rate = args.get_double("sub-rate", 0.0);
  params.del_rate = args.get_double("del-rate", 0.0);
  params.ins_rate = args.get_double("ins-rate", 0.0);
  params.seed = stage_seed(args);
  return params;
}

HomophonesHandle load_homophones(const Args& args) {
  HomophonesHandle table;
  std::string path = args.get("homophones", "");
  std::string text = path.empty() ? "" : read_file(path);
  check(stk_homophones_parse(text.c_str(), table.out()));
  return table;
}

std::string load_vocab(const Args& args) {
  std::string path = args.get("vocab", "");
  return path.empty() ? "" : read_file(path);
}

std::string reference_lines(const Args& args) {
  std::string ref = args.get("ref", "");
  std::string ctm = args.get("ref-ctm", "");
  if (ref.empty() == ctm.empty())
    fail("exactly one of --ref or --ref-ctm is required");
  if (!ref.empty()) return read_file(ref);
  OwnedString segments;
  std::string text = read_file(ctm);
  check(stk_ctm_to_segments(text.c_str(), &segments.value));
  return segments.str();
}

// ---------------------------------------------------------------- commands

int cmd_wav_info(const Args& args) {
  std::string bytes = read_file(args.require("in"));
  AudioHandle audio;
  check(stk_wav_parse(bytes.data(), bytes.size(), audio.out()));
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "sample_rate = %d\nsamples = %zu\nduration_s = %.3f\n",
                stk_audio_sample_rate(audio.get()),
                stk_audio_num_samples(audio.get()),
                stk_audio_duration_s(audio.get()));
  write_file(args.get("out", "-"), std::string(buf));
  return 0;
}

int cmd_perturb(const Args& args) {
  std::string bytes = read_file(args.require("in"));
  AudioHandle audio;
  check(stk_wav_parse(bytes.data(), bytes.size(), audio.out()));

  bool any = false;
  AudioHandle current;
  const stk_audio* head = audio.get();
  if (!args.get("speed", "").empty()) {
    AudioHandle next;
    check(stk_audio_speed_perturb(head, args.get_double("speed", 1.0), next.out()));
    current = std::move(next);
    head = current.get();
    any = true;
  }
  if (!args.get("noise-snr", "").empty()) {
    AudioHandle next;
    check(stk_audio_add_noise(head, args.get_double("noise-snr", 20.0),
                              stage_seed(args), next.out()));
    current = std::move(next);
    head = current.get();
    any = true;
  }
  if (!any) fail("perturb needs --speed and/or --noise-snr");

  void* out_bytes = nullptr;
  size_t out_len = 0;
  check(stk_wav_render(head, &out_bytes, &out_len));
  write_file(args.require("out"), out_bytes, out_len);
  stk_buffer_free(out_bytes);
  return 0;
}

int cmd_vad(const Args& args) {
  std::string bytes = read_file(args.require("in"));
  AudioHandle audio;
  check(stk_wav_parse(bytes.data(), bytes.size(), audio.out()));
  FragmentsHandle fragments;
  check(stk_audio_energy_vad(audio.get(), args.get_double("frame-ms", 25.0),
                             args.get_double("threshold", 0.01),
                             static_cast<int>(args.get_int("min-gap", 10)),
                             fragments.out()));
  OwnedString text;
  check(stk_fragments_format(fragments.get(), &text.value));
  write_file(args.get("out", "-"), text.str());
  return 0;
}

int cmd_splice(const Args& args) {
  std::string text = read_file(args.require("fragments"));
  FragmentsHandle fragments;
  check(stk_fragments_parse(text.c_str(), fragments.out()));
  SpliceHandle groups;
  check(stk_fragments_splice(fragments.get(), args.get_double("min-s", 10.0),
                             groups.out()));
  OwnedString formatted;
  check(stk_splice_groups_format(groups.get(), &formatted.value));
  write_file(args.get("out", "-"), formatted.str());
  return 0;
}

int cmd_normalize(const Args& args) {
  std::string text = read_file(args.get("in", "-"));
  std::string out;
  for (const std::string& line : split_lines_local(text)) {
    OwnedString spoken;
    check(stk_normalize_spoken(line.c_str(), &spoken.value));
    out += spoken.str();
    out += '\n';
  }
  write_file(args.get("out", "-"), out);
  return 0;
}

int cmd_num2words(const Args& args) {
  std::vector<std::string> numerals = args.positional;
  if (numerals.empty()) {
    std::string in = args.get("in", "");
    if (in.empty()) fail("num2words needs numerals or --in");
    numerals = split_lines_local(read_file(in));
  }
  std::string out;
  for (const std::string& numeral : numerals) {
    OwnedString words;
    check(stk_number_to_words(numeral.c_str(), &words.value));
    out += words.str();
    out += '\n';
  }
  write_file(args.get("out", "-"), out);
  return 0;
}

int cmd_corrupt(const Args& args) {
  std::string text = read_file(args.get("in", "-"));
  HomophonesHandle table = load_homophones(args);
  std::string vocab = load_vocab(args);
  stk_corrupt_params params = corruption_params(args);

  std::string out;
  size_t index = 0;
  for (const std::string& line : split_lines_local(text)) {
    stk_corrupt_params per_line = params;
    per_line.seed =
        stk_derive_seed(params.seed, std::to_string(index++).c_str());
    OwnedString corrupted;
    check(stk_corrupt(line.c_str(), table.get(), &per_line, vocab.c_str(),
                      &corrupted.value));
    out += corrupted.str();
    out += '\n';
  }
  write_file(args.get("out", "-"), out);
  return 0;
}

int cmd_augment(const Args& args) {
  std::string text = read_file(args.require("in"));
  HomophonesHandle table = load_homophones(args);
  std::string vocab = load_vocab(args);
  stk_corrupt_params params = corruption_params(args);
  OwnedString out;
  check(stk_augment_bitext(text.c_str(), table.get(), &params, vocab.c_str(),
                           &out.value));
  write_file(args.get("out", "-"), out.str());
  return 0;
}

int cmd_seg_train(const Args& args) {
  std::string paragraphs = read_file(args.require("in"));
  BoundaryHandle model;
  check(stk_boundary_train(paragraphs.c_str(),
                           static_cast<int>(args.get_int("window", 2)),
                           static_cast<int>(args.get_int("epochs", 10)),
                           args.get_double("lr", 0.1), stage_seed(args),
                           model.out()));
  OwnedString text;
  check(stk_boundary_model_format(model.get(), &text.value));
  write_file(args.require("out"), text.str());
  return 0;
}

int cmd_seg_apply(const Args& args) {
  std::string model_text = read_file(args.require("model"));
  BoundaryHandle model;
  check(stk_boundary_model_parse(model_text.c_str(), model.out()));

  int min_len = static_cast<int>(args.get_int("min-len", 1));
  int max_len = static_cast<int>(args.get_int("max-len", 100));

  std::string out;
  for (const std::string& line :
       split_lines_local(read_file(args.get("in", "-")))) {
    if (trim(line).empty()) continue;
    OwnedString segments;
    check(stk_segment(model.get(), line.c_str(), min_len, max_len,
                      &segments.value));
    out += segments.str();
  }
  write_file(args.get("out", "-"), out);
  return 0;
}

int cmd_filter(const Args& args) {
  std::string bitext = args.get("bitext", "");
  std::string scores = args.get("scores", "");
  if (bitext.empty() == scores.empty())
    fail("exactly one of --bitext or --scores is required");

  if (!scores.empty()) {
    std::string text = read_file(scores);
    OwnedString kept;
    check(stk_filter_outlier_scores(text.c_str(), args.get_double("z", 2.0),
                                    &kept.value));
    write_file(args.get("out", "-"), kept.str());
    return 0;
  }

  std::string current = read_file(bitext);
  if (!args.get("max-words", "").empty()) {
    OwnedString next;
    check(stk_bitext_filter_length(
        current.c_str(), static_cast<int>(args.get_int("max-words", 100)),
        &next.value));
    current = next.str();
  }
  if (args.get_bool("dedup")) {
    OwnedString next;
    check(stk_bitext_dedup(current.c_str(), &next.value));
    current = next.str();
  }
  std::string lexicon_path = args.get("sim-lexicon", "");
  if (!lexicon_path.empty()) {
    LexiconHandle forward;
    std::string lex_text = read_file(lexicon_path);
    check(stk_lexicon_parse(lex_text.c_str(), forward.out()));
    LexiconHandle reverse;
    std::string reverse_path = args.get("sim-reverse", "");
    if (!reverse_path.empty()) {
      std::string rev_text = read_file(reverse_path);
      check(stk_lexicon_parse(rev_text.c_str(), reverse.out()));
    }
    OwnedString next;
    check(stk_bitext_filter_similarity(
        current.c_str(), forward.get(), reverse.get(),
        args.get_double("sim-threshold", 0.0), &next.value));
    current = next.str();
  }
  write_file(args.get("out", "-"), current);
  return 0;
}

int cmd_lexicon_train(const Args& args) {
  std::string text = read_file(args.require("in"));
  LexiconHandle lexicon;
  check(stk_lexicon_train(text.c_str(),
                          static_cast<int>(args.get_int("iterations", 5)),
                          args.get_bool("reverse") ? 1 : 0, lexicon.out()));
  OwnedString formatted;
  check(stk_lexicon_format(lexicon.get(), &formatted.value));
  write_file(args.require("out"), formatted.str());
  return 0;
}

int cmd_similarity(const Args& args) {
  std::string bitext = read_file(args.require("in"));
  LexiconHandle forward;
  std::string lex_text = read_file(args.require("lexicon"));
  check(stk_lexicon_parse(lex_text.c_str(), forward.out()));
  LexiconHandle reverse;
  std::string reverse_path = args.get("reverse-lexicon", "");
  if (!reverse_path.empty()) {
    std::string rev_text = read_file(reverse_path);
    check(stk_lexicon_parse(rev_text.c_str(), reverse.out()));
  }

  std::string out;
  size_t index = 0;
  char buf[64];
  for (const std::string& line : split_lines_local(bitext)) {
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      fail("bitext line " + std::to_string(index) + " has no tab");
    double score = 0.0;
    check(stk_similarity(line.substr(0, tab).c_str(),
                         line.substr(tab + 1).c_str(), forward.get(),
                         reverse.get(), &score));
    std::snprintf(buf, sizeof(buf), "%zu\t%.6f\n", index, score);
    out += buf;
    ++index;
  }
  write_file(args.get("out", "-"), out);
  return 0;
}

int cmd_score(const Args& args) {
  std::string refs = reference_lines(args);
  std::string hyp = read_file(args.require("hyp"));
  int case_sensitive = args.get_bool("case-insensitive") ? 0 : 1;

  stk_score_report report;
  OwnedString segments;
  if (args.get_bool("no-resegment")) {
    check(stk_bleu(refs.c_str(), hyp.c_str(), case_sensitive, &report));
  } else {
    check(stk_score_speech_translation(hyp.c_str(), refs.c_str(),
                                       case_sensitive, &report,
                                       &segments.value));
  }

  OwnedString block;
  check(stk_score_report_format(&report, &block.value));
  write_file(args.get("out", "-"), block.str());

  std::string segments_out = args.get("segments-out", "");
  if (!segments_out.empty()) {
    if (!segments.value) fail("--segments-out requires resegmentation");
    write_file(segments_out, segments.str());
  }
  return 0;
}

int cmd_resegment(const Args& args) {
  std::string refs = reference_lines(args);
  std::string hyp = read_file(args.require("hyp"));
  OwnedString segments;
  check(stk_mwer_resegment(hyp.c_str(), refs.c_str(), &segments.value));
  write_file(args.get("out", "-"), segments.str());
  return 0;
}

int cmd_nbest_merge(const Args& args) {
  std::vector<std::string> inputs = args.get_all("in");
  if (inputs.empty()) fail("nbest-merge needs at least one --in");

  std::vector<NBestHandle> sets;
  std::vector<const stk_nbest*> raw;
  for (const std::string& path : inputs) {
    std::string text = read_file(path);
    NBestHandle set;
    check(stk_nbest_parse(text.c_str(), set.out()));
    raw.push_back(set.get());
    sets.push_back(std::move(set));
  }

  std::string policy = args.get("policy", "impute_worst");
  stk_merge_policy p;
  if (policy == "impute_worst")
    p = STK_MERGE_IMPUTE_WORST;
  else if (policy == "drop")
    p = STK_MERGE_DROP;
  else
    fail("--policy must be impute_worst or drop");

  NBestHandle merged;
  check(stk_nbest_merge(raw.data(), raw.size(), p, merged.out()));
  OwnedString text;
  check(stk_nbest_format(merged.get(), &text.value));
  write_file(args.get("out", "-"), text.str());
  return 0;
}

int cmd_rescore(const Args& args) {
  std::string text = read_file(args.require("in"));
  NBestHandle set;
  check(stk_nbest_parse(text.c_str(), set.out()));
  WeightsHandle weights;
  std::string weights_text = read_file(args.require("weights"));
  check(stk_weights_parse(weights_text.c_str(), weights.out()));

  NBestHandle ranked;
  check(stk_nbest_rescore(set.get(), weights.get(), ranked.out()));

  OwnedString out;
  if (args.get_bool("top1")) {
    check(stk_nbest_top1(ranked.get(), &out.value));
  } else {
    check(stk_nbest_format(ranked.get(), &out.value));
  }
  write_file(args.get("out", "-"), out.str());
  return 0;
}

int cmd_tune(const Args& args) {
  std::string dev_text = read_file(args.require("dev"));
  NBestHandle dev;
  check(stk_nbest_parse(dev_text.c_str(), dev.out()));
  std::string refs = read_file(args.require("refs"));

  WeightsHandle best;
  check(stk_tune_grid(dev.get(), refs.c_str(), args.require("grid").c_str(),
                      args.require("alphas").c_str(), best.out()));
  OwnedString text;
  check(stk_weights_format(best.get(), &text.value));
  write_file(args.get("out", "-"), text.str());
  return 0;
}

// ---------------------------------------------------------------- dispatch

struct Command {
  const char* name;
  int (*run)(const Args&);
  const char* summary;
  std::vector<FlagSpec> flags;
};

const std::vector<FlagSpec> kGlobalFlags = {
    {"config", true, false, "flat key = value config file"},
    {"seed", true, false, "top-level seed; stages derive their own"},
};

const std::vector<Command>& commands() {
  static const std::vector<Command> kCommands = {
      {"wav-info", cmd_wav_info, "print rate/samples/duration of a WAV file",
       {{"in", true, false, "input WAV"},
        {"out", true, false, "output path (default stdout)"}}},
      {"perturb", cmd_perturb, "speed and/or noise perturbation of a WAV file",
       {{"in", true, false, "input WAV"},
        {"out", true, false, "output WAV"},
        {"speed", true, false, "speed factor, e.g. 0.8 or 1.2"},
        {"noise-snr", true, false, "add white noise at this SNR (dB)"}}},
      {"vad", cmd_vad, "energy voice-activity detection to fragment list",
       {{"in", true, false, "input WAV"},
        {"frame-ms", true, false, "frame length in ms (default 25)"},
        {"threshold", true, false, "mean-square energy threshold (default 0.01)"},
        {"min-gap", true, false,
         "merge runs closer than this many frames (default 10)"},
        {"out", true, false, "fragment list output (default stdout)"}}},
      {"splice", cmd_splice, "group fragments up to a minimum duration",
       {{"fragments", true, false, "fragment list file"},
        {"min-s", true, false, "minimum group duration in seconds (default 10)"},
        {"out", true, false, "group list output (default stdout)"}}},
      {"normalize", cmd_normalize, "written text to spoken form, per line",
       {{"in", true, false, "input text (default stdin)"},
        {"out", true, false, "output text (default stdout)"}}},
      {"num2words", cmd_num2words, "spell numerals as English words",
       {{"in", true, false, "file with one numeral per line"},
        {"out", true, false, "output path (default stdout)"}}},
      {"corrupt", cmd_corrupt, "simulate ASR errors on spoken-form lines",
       {{"in", true, false, "spoken-form text (default stdin)"},
        {"homophones", true, false, "homophone table file"},
        {"homophone-rate", true, false, "homophone swap probability"},
        {"sub-rate", true, false, "random substitution probability"},
        {"del-rate", true, false, "deletion probability"},
        {"ins-rate", true, false, "insertion probability"},
        {"vocab", true, false, "vocab file for substitutions/insertions"},
        {"out", true, false, "output text (default stdout)"}}},
      {"augment", cmd_augment, "normalize + corrupt bitext sources",
       {{"in", true, false, "bitext TSV"},
        {"homophones", true, false, "homophone table file"},
        {"homophone-rate", true, false, "homophone swap probability"},
        {"sub-rate", true, false, "random substitution probability"},
        {"del-rate", true, false, "deletion probability"},
        {"ins-rate", true, false, "insertion probability"},
        {"vocab", true, false, "vocab file for substitutions/insertions"},
        {"out", true, false, "output TSV (default stdout)"}}},
      {"seg-train", cmd_seg_train, "train the sentence-boundary model",
       {{"in", true, false, "punctuated paragraphs, one per line"},
        {"out", true, false, "model file"},
        {"window", true, false, "context window width (default 2)"},
        {"epochs", true, false, "training epochs (default 10)"},
        {"lr", true, false, "learning rate (default 0.1)"}}},
      {"seg-apply", cmd_seg_apply, "re-segment token streams into sentences",
       {{"model", true, false, "model file from seg-train"},
        {"in", true, false, "token streams, one per line (default stdin)"},
        {"min-len", true, false, "minimum segment length (default 1)"},
        {"max-len", true, false, "maximum segment length (default 100)"},
        {"out", true, false, "segments, one per line (default stdout)"}}},
      {"filter", cmd_filter, "bitext cleaning or score-outlier rejection",
       {{"bitext", true, false, "bitext TSV to filter"},
        {"max-words", true, false, "drop pairs with a side over this length"},
        {"dedup", false, false, "drop duplicated pairs"},
        {"sim-lexicon", true, false, "lexicon for similarity filtering"},
        {"sim-reverse", true, false, "reverse-direction lexicon"},
        {"sim-threshold", true, false, "keep pairs with similarity >= this"},
        {"scores", true, false, "id<TAB>score list for outlier filtering"},
        {"z", true, false, "z-score threshold (default 2)"},
        {"out", true, false, "output (default stdout)"}}},
      {"lexicon-train", cmd_lexicon_train, "EM word-translation lexicon",
       {{"in", true, false, "bitext TSV"},
        {"iterations", true, false, "EM iterations (default 5)"},
        {"reverse", false, false, "swap sides before training"},
        {"out", true, false, "lexicon file"}}},
      {"similarity", cmd_similarity, "per-pair cross-lingual similarity",
       {{"in", true, false, "bitext TSV"},
        {"lexicon", true, false, "forward lexicon file"},
        {"reverse-lexicon", true, false, "reverse lexicon file"},
        {"out", true, false, "index<TAB>score lines (default stdout)"}}},
      {"score", cmd_score, "BLEU/WER report, realigned to the reference",
       {{"ref", true, false, "reference segments, one per line"},
        {"ref-ctm", true, false, "reference as CTM"},
        {"hyp", true, false, "hypothesis text (stream or lines)"},
        {"no-resegment", false, false, "score line-aligned, skip realignment"},
        {"case-insensitive", false, false, "lowercase before scoring"},
        {"segments-out", true, false, "write realigned segments here"},
        {"out", true, false, "report output (default stdout)"}}},
      {"resegment", cmd_resegment, "mWER realignment of a hypothesis stream",
       {{"ref", true, false, "reference segments, one per line"},
        {"ref-ctm", true, false, "reference as CTM"},
        {"hyp", true, false, "hypothesis stream"},
        {"out", true, false, "realigned segments (default stdout)"}}},
      {"nbest-merge", cmd_nbest_merge, "merge n-best lists across systems",
       {{"in", true, true, "n-best file (repeatable)"},
        {"policy", true, false, "impute_worst (default) or drop"},
        {"out", true, false, "merged n-best (default stdout)"}}},
      {"rescore", cmd_rescore, "log-linear rescoring of n-best lists",
       {{"in", true, false, "n-best file"},
        {"weights", true, false, "weights file"},
        {"top1", false, false, "emit only the best hypothesis per sentence"},
        {"out", true, false, "output (default stdout)"}}},
      {"tune", cmd_tune, "grid-search weights for corpus BLEU",
       {{"dev", true, false, "dev n-best file"},
        {"refs", true, false, "dev references, one per line"},
        {"grid", true, false, "model=v1,v2,...;model2=..."},
        {"alphas", true, false, "comma-separated length-penalty exponents"},
        {"out", true, false, "weights output (default stdout)"}}},
  };
  return kCommands;
}

void print_usage(std::FILE* to) {
  std::fprintf(to, "usage: stkit <command> [flags]\n\ncommands:\n");
  for (const Command& cmd : commands())
    std::fprintf(to, "  %-14s %s\n", cmd.name, cmd.summary);
  std::fprintf(to,
               "\nglobal flags: --config FILE, --seed N, --help, --version\n"
               "Config keys use '<command>.<flag> = value'; flags win.\n");
}

void print_command_help(const Command& cmd) {
  std::printf("usage: stkit %s [flags]\n  %s\n\nflags:\n", cmd.name,
              cmd.summary);
  for (const FlagSpec& flag : cmd.flags)
    std::printf("  --%-16s %s\n", flag.name, flag.help);
  for (const FlagSpec& flag : kGlobalFlags)
    std::printf("  --%-16s %s\n", flag.name, flag.help);
  std::printf("  --%-16s %s\n", "help", "show this help");
  std::printf("  --%-16s %s\n", "version", "print the version");
}

const FlagSpec* find_flag(const Command& cmd, const std::string& name) {
  for (const FlagSpec& flag : cmd.flags)
    if (name == flag.name) return &flag;
  for (const FlagSpec& flag : kGlobalFlags)
    if (name == flag.name) return &flag;
  return nullptr;
}

int run(int argc, char** argv) {
  if (argc < 2) {
    print_usage(stderr);
    return 2;
  }
  std::string first = argv[1];
  if (first == "--help" || first == "-h" || first == "help") {
    print_usage(stdout);
    return 0;
  }
  if (first == "--version" || first == "version") {
    std::printf("stkit %s\n", stk_version());
    return 0;
  }

  const Command* command = nullptr;
  for (const Command& cmd : commands())
    if (first == cmd.name) command = &cmd;
  if (!command) {
    std::fprintf(stderr, "error: unknown subcommand '%s'\n", first.c_str());
    return 2;
  }

  Args args;
  args.stage = command->name;
  for (int i = 2; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--help" || arg == "-h") {
      print_command_help(*command);
      return 0;
    }
    if (arg == "--version") {
      std::printf("stkit %s\n", stk_version());
      return 0;
    }
    if (arg.rfind("--", 0) == 0) {
      std::string name = arg.substr(2);
      std::string value;
      bool has_value = false;
      size_t eq = name.find('=');
      if (eq != std::string::npos) {
        value = name.substr(eq + 1);
        name = name.substr(0, eq);
        has_value = true;
      }
      const FlagSpec* flag = find_flag(*command, name);
      if (!flag) fail("unknown flag --" + name);
      if (flag->takes_value && !has_value) {
        if (i + 1 >= argc) fail("--" + name + " needs a value");
        value = argv[++i];
      } else if (!flag->takes_value && has_value) {
        fail("--" + name + " takes no value");
      }
      if (!flag->repeatable && args.flags.count(name))
        fail("--" + name + " given twice");
      args.flags[name].push_back(flag->takes_value ? value : "true");
    } else {
      args.positional.push_back(arg);
    }
  }

  auto config_flag = args.flags.find("config");
  if (config_flag != args.flags.end())
    args.config = parse_config(config_flag->second.back());

  return command->run(args);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
