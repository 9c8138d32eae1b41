#pragma once

#include <random>
#include <string_view>
#include <vector>

#include "zhconv/lm.hpp"
#include "zhconv/segment.hpp"

namespace zhconv {

using Rng = std::mt19937_64;

struct SubsequencePolicy {
  size_t splits = 1;  // number of random split points per sentence
};

// Partitions a sentence into contiguous subsequences at uniformly random
// split points. Concatenation always reproduces the input.
std::vector<TokenSeq> sample_subsequences(const TokenSeq& sentence, Rng& rng,
                                          SubsequencePolicy policy = {});

// Draws one of the n best-scoring segmentations with probability
// proportional to exp(score), normalized over the n candidates.
// n = 1 degenerates to the Viterbi segmentation.
Segmentation sample_segmentation(std::u32string_view sentence,
                                 const LmScorer& lm, const Dictionary& dict,
                                 size_t n, Rng& rng,
                                 size_t beam = kDefaultTrellisBeam);

// Per-epoch training-corpus rewrite: split each sentence into
// subsequences, then re-segment each subsequence's raw text by sampling
// from its n-best segmentations. Produces `epochs` concatenated copies.
SegmentedCorpus augment_corpus(const SegmentedCorpus& corpus,
                               const LmScorer& lm, const Dictionary& dict,
                               size_t epochs, size_t nbest, Rng& rng,
                               SubsequencePolicy policy = {});

}  // namespace zhconv
