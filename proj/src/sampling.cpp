#include "zhconv/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "zhconv/utf8.hpp"

namespace zhconv {

std::vector<TokenSeq> sample_subsequences(const TokenSeq& sentence, Rng& rng,
                                          SubsequencePolicy policy) {
  if (sentence.empty()) throw LmError("cannot split an empty sentence");
  size_t internal = sentence.size() - 1;  // boundaries 1..size-1
  size_t want = std::min(policy.splits, internal);
  std::set<size_t> cuts;
  std::uniform_int_distribution<size_t> pick(1, internal == 0 ? 1 : internal);
  while (cuts.size() < want) cuts.insert(pick(rng));
  std::vector<TokenSeq> parts;
  size_t start = 0;
  for (size_t cut : cuts) {
    parts.emplace_back(sentence.begin() + start, sentence.begin() + cut);
    start = cut;
  }
  parts.emplace_back(sentence.begin() + start, sentence.end());
  return parts;
}

Segmentation sample_segmentation(std::u32string_view sentence,
                                 const LmScorer& lm, const Dictionary& dict,
                                 size_t n, Rng& rng, size_t beam) {
  auto candidates = nbest_segmentations(sentence, lm, dict, n, beam);
  if (candidates.size() == 1) return candidates.front();
  double best = *candidates.front().score;
  std::vector<double> weights;
  weights.reserve(candidates.size());
  double total = 0.0;
  for (const auto& seg : candidates) {
    total += std::exp(*seg.score - best);
    weights.push_back(total);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = unit(rng) * total;
  size_t idx = std::lower_bound(weights.begin(), weights.end(), u) -
               weights.begin();
  if (idx >= candidates.size()) idx = candidates.size() - 1;
  return candidates[idx];
}

SegmentedCorpus augment_corpus(const SegmentedCorpus& corpus,
                               const LmScorer& lm, const Dictionary& dict,
                               size_t epochs, size_t nbest, Rng& rng,
                               SubsequencePolicy policy) {
  SegmentedCorpus out;
  for (size_t epoch = 0; epoch < epochs; ++epoch) {
    for (const auto& sentence : corpus.sentences) {
      for (const TokenSeq& part : sample_subsequences(sentence, rng, policy)) {
        if (part.empty()) continue;
        std::u32string raw;
        for (const auto& tok : part) raw += decode_utf8(tok);
        out.sentences.push_back(
            sample_segmentation(raw, lm, dict, nbest, rng).tokens);
      }
    }
  }
  return out;
}

}  // namespace zhconv
