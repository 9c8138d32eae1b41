#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zhconv/lm.hpp"
#include "zhconv/mapping.hpp"

namespace zhconv {

class SegmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Word list for dictionary-driven segmentation. Single characters are
// always legal tokens whether or not they are listed.
class Dictionary {
 public:
  static Dictionary from_words(std::vector<std::u32string> words);
  static Dictionary from_table(const MappingTable& table);
  // Plain UTF-8 word-per-line file; '#' comments and blanks skipped.
  static Dictionary read(std::istream& in);
  static Dictionary read_file(const std::string& path);

  bool contains(std::u32string_view word) const;
  size_t max_word_length() const { return max_len_; }
  size_t size() const { return words_.size(); }

  // Lengths of dictionary words that prefix text, ascending.
  std::vector<size_t> prefix_lengths(std::u32string_view text) const;

 private:
  std::set<std::u32string, std::less<>> words_;
  size_t max_len_ = 0;
};

struct Segmentation {
  TokenSeq tokens;               // UTF-8 subword tokens
  std::optional<double> score;   // LM log-prob, when an LM was involved
};

// Character boundary positions after each token: [len(t0), len(t0)+len(t1), ...].
std::vector<size_t> token_boundaries(const TokenSeq& tokens);

// Greedy left-to-right longest dictionary match; single character when
// nothing matches.
Segmentation max_match(std::u32string_view sentence, const Dictionary& dict);

inline constexpr size_t kDefaultTrellisBeam = 8;

// Best-scoring segmentation into dictionary words or single characters.
// The trellis keeps the top `beam` LM-history states per boundary; exact
// whenever `beam` covers all states at every boundary.
Segmentation viterbi_segment(std::u32string_view sentence, const LmScorer& lm,
                             const Dictionary& dict,
                             size_t beam = kDefaultTrellisBeam);

// Top-n segmentations, score-descending. Ties broken by lexicographic
// order of token boundaries (earlier first boundary wins). Forward DP
// over the trellis followed by backward A* path enumeration.
std::vector<Segmentation> nbest_segmentations(std::u32string_view sentence,
                                              const LmScorer& lm,
                                              const Dictionary& dict, size_t n,
                                              size_t beam = kDefaultTrellisBeam);

// Brute-force oracle: every segmentation into dictionary words or single
// characters, scored by lm when given. Refuses sentences longer than
// max_len characters.
std::vector<Segmentation> enumerate_segmentations(std::u32string_view sentence,
                                                  const Dictionary& dict,
                                                  size_t max_len = 14,
                                                  const LmScorer* lm = nullptr);

}  // namespace zhconv
