#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "error.hpp"
#include "textnorm.hpp"
#include "textutil.hpp"

namespace stkit::metrics {

Tokens SegmentedText::flatten() const {
  Tokens out;
  for (const auto& seg : segments) out.insert(out.end(), seg.begin(), seg.end());
  return out;
}

EditCounts edit_distance(const Tokens& a, const Tokens& b) {
  const size_t n = a.size(), m = b.size();
  std::vector<long long> d((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> long long& { return d[i * (m + 1) + j]; };

  for (size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<long long>(i);
  for (size_t j = 0; j <= m; ++j) at(0, j) = static_cast<long long>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      long long diag = at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  EditCounts counts;
  counts.distance = at(n, m);
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        at(i, j) == at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)) {
      if (!(a[i - 1] == b[j - 1])) ++counts.substitutions;
      --i, --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

double wer(const Tokens& ref, const Tokens& hyp) {
  if (ref.empty())
    throw Error(ErrorCode::EmptyReference, "WER needs a non-empty reference");
  return static_cast<double>(edit_distance(ref, hyp).distance) /
         static_cast<double>(ref.size());
}

namespace {

Tokens lowered(const Tokens& tokens) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(textnorm::lowercase(t));
  return out;
}

void count_ngrams(const Tokens& tokens, int n,
                  std::unordered_map<std::string, long long>* counts) {
  if (tokens.size() < static_cast<size_t>(n)) return;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) {
      if (k) key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++(*counts)[key];
  }
}

}  // namespace

ScoreReport bleu_corpus(const std::vector<Tokens>& refs,
                        const std::vector<Tokens>& hyps, int max_n,
                        bool case_sensitive) {
  if (refs.empty() || refs.size() != hyps.size())
    throw Error(ErrorCode::LengthMismatch,
                "reference and hypothesis segment counts differ");
  if (max_n < 1 || max_n > 4)
    throw Error(ErrorCode::InvalidArgument, "max_n must lie in [1, 4]");

  std::vector<long long> matched(max_n, 0), total(max_n, 0);
  long long ref_len = 0, hyp_len = 0, edit_total = 0;

  for (size_t s = 0; s < refs.size(); ++s) {
    Tokens ref = case_sensitive ? refs[s] : lowered(refs[s]);
    Tokens hyp = case_sensitive ? hyps[s] : lowered(hyps[s]);
    ref_len += static_cast<long long>(ref.size());
    hyp_len += static_cast<long long>(hyp.size());
    edit_total += edit_distance(ref, hyp).distance;
    for (int n = 1; n <= max_n; ++n) {
      std::unordered_map<std::string, long long> ref_counts, hyp_counts;
      count_ngrams(ref, n, &ref_counts);
      count_ngrams(hyp, n, &hyp_counts);
      for (const auto& [gram, c] : hyp_counts) {
        total[n - 1] += c;
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matched[n - 1] += std::min(c, it->second);
      }
    }
  }

  ScoreReport report;
  report.segments = refs.size();
  report.wer = ref_len > 0 ? static_cast<double>(edit_total) /
                                 static_cast<double>(ref_len)
                           : 0.0;

  double log_sum = 0.0;
  bool any_zero = false;
  for (int n = 1; n <= max_n; ++n) {
    double p = total[n - 1] > 0 ? static_cast<double>(matched[n - 1]) /
                                      static_cast<double>(total[n - 1])
                                : 0.0;
    report.precisions[n - 1] = p;
    if (p <= 0.0)
      any_zero = true;
    else
      log_sum += std::log(p);
  }

  report.brevity_penalty =
      (hyp_len < ref_len && hyp_len > 0)
          ? std::exp(1.0 - static_cast<double>(ref_len) /
                               static_cast<double>(hyp_len))
          : (hyp_len == 0 ? 0.0 : 1.0);

  report.bleu = any_zero || hyp_len == 0
                    ? 0.0
                    : 100.0 * report.brevity_penalty *
                          std::exp(log_sum / static_cast<double>(max_n));
  return report;
}

SegmentedText mwer_resegment(const Tokens& hyp_stream,
                             const SegmentedText& ref_segments) {
  const size_t K = ref_segments.segments.size();
  if (K == 0)
    throw Error(ErrorCode::InvalidArgument, "reference needs >= 1 segment");

  const Tokens& hyp = hyp_stream;
  const size_t N = hyp.size();

  Tokens flat_ref;
  std::vector<size_t> bound;  // cumulative ref token counts, T_0..T_K
  bound.push_back(0);
  for (const auto& seg : ref_segments.segments) {
    flat_ref.insert(flat_ref.end(), seg.begin(), seg.end());
    bound.push_back(flat_ref.size());
  }
  const size_t R = flat_ref.size();

  // Suffix edit distances B[t][j] = D(ref[t..R), hyp[j..N)), computed with a
  // rolling row; only the rows at segment boundaries are kept. The minimal
  // total segmented cost equals D(flattened ref, stream): any optimal
  // alignment path splits at the reference boundaries into per-segment
  // alignments and vice versa.
  std::vector<std::vector<long long>> boundary_rows(K + 1);
  std::vector<long long> row(N + 1), next(N + 1);
  for (size_t j = 0; j <= N; ++j) row[j] = static_cast<long long>(N - j);
  for (size_t k = 0; k <= K; ++k)
    if (bound[k] == R) boundary_rows[k] = row;

  for (size_t t = R; t-- > 0;) {
    next[N] = static_cast<long long>(R - t);
    for (size_t j = N; j-- > 0;) {
      long long diag = row[j + 1] + (flat_ref[t] == hyp[j] ? 0 : 1);
      next[j] = std::min({diag, row[j] + 1, next[j + 1] + 1});
    }
    std::swap(row, next);
    for (size_t k = 0; k <= K; ++k)
      if (bound[k] == t) boundary_rows[k] = row;
  }

  // Earliest-cut reconstruction: segment k running from hyp position i picks
  // the smallest end j whose cost plus the optimal suffix matches B at i.
  std::vector<size_t> cuts;  // hyp end position of segments 1..K-1
  size_t i = 0;
  for (size_t k = 1; k < K; ++k) {
    const size_t seg_begin = bound[k - 1], seg_end = bound[k];
    const size_t L = seg_end - seg_begin;
    const long long want = boundary_rows[k - 1][i];

    std::vector<long long> col(L + 1);
    for (size_t u = 0; u <= L; ++u) col[u] = static_cast<long long>(u);
    size_t j = i;
    while (true) {
      if (col[L] + boundary_rows[k][j] == want) break;
      if (j >= N)
        throw std::logic_error("resegmentation reconstruction ran off the stream");
      // extend the segment by hyp[j]
      std::vector<long long> ncol(L + 1);
      ncol[0] = col[0] + 1;
      for (size_t u = 1; u <= L; ++u) {
        long long diag =
            col[u - 1] + (flat_ref[seg_begin + u - 1] == hyp[j] ? 0 : 1);
        ncol[u] = std::min({diag, col[u] + 1, ncol[u - 1] + 1});
      }
      col = std::move(ncol);
      ++j;
    }
    cuts.push_back(j);
    i = j;
  }

  SegmentedText out;
  size_t prev = 0;
  for (size_t k = 0; k < K; ++k) {
    size_t end = k + 1 < K ? cuts[k] : N;
    out.segments.emplace_back(hyp.begin() + static_cast<long>(prev),
                              hyp.begin() + static_cast<long>(end));
    prev = end;
  }
  return out;
}

ScoreReport score_speech_translation(const Tokens& hyp_stream,
                                     const SegmentedText& ref_segments,
                                     bool case_sensitive) {
  SegmentedText realigned = mwer_resegment(hyp_stream, ref_segments);
  ScoreReport report = bleu_corpus(ref_segments.segments, realigned.segments,
                                   4, case_sensitive);
  size_t pos = 0;
  for (size_t k = 0; k + 1 < realigned.segments.size(); ++k) {
    pos += realigned.segments[k].size();
    report.boundaries.push_back(pos);
  }
  return report;
}

std::string ScoreReport::format() const {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "bleu = %.4f\n", bleu);
  out += buf;
  for (int n = 0; n < 4; ++n) {
    std::snprintf(buf, sizeof(buf), "p%d = %.6f\n", n + 1, precisions[n]);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "bp = %.6f\n", brevity_penalty);
  out += buf;
  std::snprintf(buf, sizeof(buf), "wer = %.6f\n", wer);
  out += buf;
  out += "segments = " + std::to_string(segments) + "\n";
  if (!boundaries.empty()) {
    out += "boundaries =";
    for (size_t b : boundaries) out += ' ' + std::to_string(b);
    out += '\n';
  }
  return out;
}

SegmentedText parse_segments(const std::string& text) {
  SegmentedText out;
  for (const std::string& line : split_lines(text))
    out.segments.push_back(split_tokens(line));
  return out;
}

std::string format_segments(const SegmentedText& segmented) {
  std::string out;
  for (const auto& seg : segmented.segments) {
    out += join_tokens(seg);
    out += '\n';
  }
  return out;
}

SegmentedText parse_ctm(const std::string& text) {
  struct Word {
    double start;
    size_t order;
    std::string word;
  };
  std::vector<std::string> utt_order;
  std::unordered_map<std::string, std::vector<Word>> by_utt;

  size_t order = 0;
  for (const std::string& line : split_lines(text)) {
    if (line.empty() || line[0] == ';') continue;  // ;; comment lines
    std::vector<std::string> fields = split_tokens(line);
    double start;
    if (fields.size() < 5 || !parse_double(fields[2], &start))
      throw Error(ErrorCode::MalformedLine, "bad CTM line: '" + line + "'");
    auto [it, fresh] = by_utt.try_emplace(fields[0]);
    if (fresh) utt_order.push_back(fields[0]);
    it->second.push_back({start, order++, fields[4]});
  }

  SegmentedText out;
  for (const auto& utt : utt_order) {
    auto& words = by_utt[utt];
    std::stable_sort(words.begin(), words.end(),
                     [](const Word& a, const Word& b) { return a.start < b.start; });
    Tokens seg;
    for (const auto& w : words) seg.push_back(w.word);
    out.segments.push_back(std::move(seg));
  }
  return out;
}

}  // namespace stkit::metrics
