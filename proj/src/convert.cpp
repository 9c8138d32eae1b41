#include "zhconv/convert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "zhconv/utf8.hpp"

namespace zhconv {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct TcBeamItem {
  TokenSeq chosen;                // UTF-8 TC subwords
  std::vector<size_t> cand_idx;   // candidate index per consumed mapping
  double score = 0.0;
};

bool tc_item_less(const TcBeamItem& a, const TcBeamItem& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.cand_idx < b.cand_idx;  // earlier candidate wins ties
}

void expand_tc_beam(std::vector<TcBeamItem>& beam, const MappingEntry& entry,
                    const LmScorer& tc_lm, size_t beam_width) {
  std::vector<TcBeamItem> next;
  next.reserve(beam.size() * entry.tc_candidates.size());
  for (const TcBeamItem& item : beam) {
    for (size_t c = 0; c < entry.tc_candidates.size(); ++c) {
      std::string tok = encode_utf8(entry.tc_candidates[c]);
      TcBeamItem ext = item;
      ext.score += tc_lm.token_log_prob(ext.chosen, tok);
      ext.chosen.push_back(std::move(tok));
      ext.cand_idx.push_back(c);
      next.push_back(std::move(ext));
    }
  }
  std::sort(next.begin(), next.end(), tc_item_less);
  if (next.size() > beam_width) next.resize(beam_width);
  beam = std::move(next);
}

std::vector<TcBeamItem> finish_tc_beam(const std::vector<TcBeamItem>& beam,
                                       const LmScorer& tc_lm) {
  std::vector<TcBeamItem> done = beam;
  for (TcBeamItem& item : done) item.score += tc_lm.end_log_prob(item.chosen);
  std::sort(done.begin(), done.end(), tc_item_less);
  return done;
}

double aggregate(const std::vector<TcBeamItem>& beam, TcAggregation mode) {
  if (beam.empty()) return kNegInf;
  double best = beam.front().score;
  for (const TcBeamItem& item : beam) best = std::max(best, item.score);
  if (mode == TcAggregation::Max) return best;
  if (best == kNegInf) return kNegInf;
  double sum = 0.0;
  for (const TcBeamItem& item : beam) sum += std::exp(item.score - best);
  return best + std::log(sum);
}

TokenSeq sc_tokens_of(std::span<const MappingEntry> path) {
  TokenSeq tokens;
  tokens.reserve(path.size());
  for (const MappingEntry& e : path) tokens.push_back(encode_utf8(e.sc));
  return tokens;
}

}  // namespace

double score_mapping_sequence(std::span<const MappingEntry> path,
                              const LmScorer& sc_lm, const LmScorer& tc_lm,
                              const ConvertConfig& config) {
  double sc = sc_lm.sequence_log_prob(sc_tokens_of(path), true);
  std::vector<TcBeamItem> beam{{{}, {}, 0.0}};
  for (const MappingEntry& e : path)
    expand_tc_beam(beam, e, tc_lm, config.beam_width);
  double a = aggregate(finish_tc_beam(beam, tc_lm), config.tc_aggregation);
  return config.alpha * sc + config.beta * a;
}

MappingSequence best_mapping_sequence(const ConversionLattice& lattice,
                                      const LmScorer& sc_lm,
                                      const LmScorer& tc_lm,
                                      const ConvertConfig& config) {
  struct Hyp {
    std::vector<const MappingEntry*> path;
    std::vector<size_t> bounds;
    TokenSeq sc_tokens;
    double sc_score = 0.0;
    std::vector<TcBeamItem> tc_beam{{{}, {}, 0.0}};
  };
  auto partial_score = [&](const Hyp& h) {
    return config.alpha * h.sc_score +
           config.beta * aggregate(h.tc_beam, config.tc_aggregation);
  };
  auto hyp_less = [&](const Hyp& a, const Hyp& b) {
    double sa = partial_score(a), sb = partial_score(b);
    if (sa != sb) return sa > sb;
    return a.bounds < b.bounds;
  };

  size_t n = lattice.length();
  std::vector<std::vector<Hyp>> at(n + 1);
  at[0].push_back({});
  for (size_t pos = 0; pos < n; ++pos) {
    if (at[pos].empty()) continue;
    std::sort(at[pos].begin(), at[pos].end(), hyp_less);
    if (at[pos].size() > config.beam_width) at[pos].resize(config.beam_width);
    for (const Hyp& hyp : at[pos]) {
      for (const LatticeEdge& edge : lattice.edges[pos]) {
        Hyp ext = hyp;
        ext.path.push_back(edge.entry);
        ext.bounds.push_back(edge.end);
        std::string sc_tok = encode_utf8(edge.entry->sc);
        ext.sc_score += sc_lm.token_log_prob(ext.sc_tokens, sc_tok);
        ext.sc_tokens.push_back(std::move(sc_tok));
        expand_tc_beam(ext.tc_beam, *edge.entry, tc_lm, config.beam_width);
        at[edge.end].push_back(std::move(ext));
      }
    }
  }

  if (at[n].empty()) throw TableError("lattice has no complete path");
  MappingSequence best;
  double best_score = kNegInf;
  std::vector<size_t> best_bounds;
  std::sort(at[n].begin(), at[n].end(), hyp_less);
  for (const Hyp& hyp : at[n]) {
    double sc = hyp.sc_score + sc_lm.end_log_prob(hyp.sc_tokens);
    double a = aggregate(finish_tc_beam(hyp.tc_beam, tc_lm),
                         config.tc_aggregation);
    double score = config.alpha * sc + config.beta * a;
    if (score > best_score ||
        (score == best_score && hyp.bounds < best_bounds)) {
      best_score = score;
      best_bounds = hyp.bounds;
      best.path.clear();
      for (const MappingEntry* e : hyp.path) best.path.push_back(*e);
      best.joint_score = score;
    }
  }
  return best;
}

std::string beam_search_tc(std::span<const MappingEntry> path,
                           const LmScorer& tc_lm, const ConvertConfig& config) {
  std::vector<TcBeamItem> beam{{{}, {}, 0.0}};
  for (const MappingEntry& e : path)
    expand_tc_beam(beam, e, tc_lm, config.beam_width);
  auto done = finish_tc_beam(beam, tc_lm);
  std::string out;
  for (const std::string& tok : done.front().chosen) out += tok;
  return out;
}

std::string Converter::convert(std::string_view sc_utf8) const {
  std::u32string source = decode_utf8(sc_utf8);
  if (source.empty()) return {};
  ConversionLattice lattice = build_lattice(source, table_);
  MappingSequence seq = best_mapping_sequence(lattice, sc_lm_, tc_lm_, config_);
  return beam_search_tc(seq.path, tc_lm_, config_);
}

std::string Converter::convert_greedy(std::string_view sc_utf8) const {
  std::u32string source = decode_utf8(sc_utf8);
  std::u32string out;
  size_t pos = 0;
  while (pos < source.size()) {
    const MappingEntry* e =
        table_.longest_prefix(std::u32string_view(source).substr(pos));
    if (!e) {
      out += source[pos];
      ++pos;
    } else {
      out += e->tc_candidates.front();
      pos += e->sc.size();
    }
  }
  return encode_utf8(out);
}

std::vector<std::string> Converter::convert_batch_serial(
    std::span<const std::string> sentences) const {
  std::vector<std::string> out(sentences.size());
  for (size_t i = 0; i < sentences.size(); ++i) out[i] = convert(sentences[i]);
  return out;
}

std::vector<std::string> Converter::convert_batch(
    std::span<const std::string> sentences, int jobs) const {
  std::vector<std::string> out(sentences.size());
  const long count = static_cast<long>(sentences.size());
#ifdef _OPENMP
  if (jobs > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long i = 0; i < count; ++i) out[i] = convert(sentences[i]);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) out[i] = convert(sentences[i]);
  }
#else
  (void)jobs;
  for (long i = 0; i < count; ++i) out[i] = convert(sentences[i]);
#endif
  return out;
}

}  // namespace zhconv
