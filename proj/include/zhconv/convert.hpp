#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zhconv/lm.hpp"
#include "zhconv/mapping.hpp"

namespace zhconv {

enum class TcAggregation { LogSumExp, Max };

struct ConvertConfig {
  size_t beam_width = 8;
  TcAggregation tc_aggregation = TcAggregation::LogSumExp;
  double alpha = 1.0;  // weight on the SC language-model term
  double beta = 1.0;   // weight on the aggregated TC term
};

// One concrete TC realization of a mapping path.
struct TcHypothesis {
  TokenSeq chosen;  // one TC subword per consumed mapping, UTF-8
  double score = 0.0;
};

// Complete lattice path plus its joint score.
struct MappingSequence {
  std::vector<MappingEntry> path;  // tiles boundaries 0..length contiguously
  double joint_score = 0.0;
};

// alpha * log p_SC(sc tokens) + beta * A, where A aggregates the TC-side
// scores retained by a width-beam_width left-to-right beam over each
// mapping's candidates (log-sum-exp or max).
double score_mapping_sequence(std::span<const MappingEntry> path,
                              const LmScorer& sc_lm, const LmScorer& tc_lm,
                              const ConvertConfig& config);

// Viterbi over the lattice; per boundary keeps the top beam_width
// hypotheses (SC history plus TC candidate beam). Exact when beam_width
// covers every partial path.
MappingSequence best_mapping_sequence(const ConversionLattice& lattice,
                                      const LmScorer& sc_lm,
                                      const LmScorer& tc_lm,
                                      const ConvertConfig& config);

// Resolves one-to-many candidates along a fixed path; returns the best
// complete hypothesis's concatenated TC text. Ties broken by candidate
// order in the mapping entry.
std::string beam_search_tc(std::span<const MappingEntry> path,
                           const LmScorer& tc_lm, const ConvertConfig& config);

// Full pipeline bundling the table, the two scorers, and the knobs.
class Converter {
 public:
  Converter(const MappingTable& table, const LmScorer& sc_lm,
            const LmScorer& tc_lm, ConvertConfig config = {})
      : table_(table), sc_lm_(sc_lm), tc_lm_(tc_lm), config_(config) {}

  // build_lattice -> best_mapping_sequence -> beam_search_tc.
  // Character count is preserved; characters without a table entry pass
  // through unchanged.
  std::string convert(std::string_view sc_utf8) const;

  // Greedy longest-table-key match, first candidate per entry. The
  // baseline the joint decoder is compared against.
  std::string convert_greedy(std::string_view sc_utf8) const;

  // Element-wise convert; OpenMP across sentences, order-preserving.
  // jobs = 0 means the OpenMP default.
  std::vector<std::string> convert_batch(std::span<const std::string> sentences,
                                         int jobs = 0) const;
  // Single-threaded reference for tests and benchmarks.
  std::vector<std::string> convert_batch_serial(
      std::span<const std::string> sentences) const;

  const ConvertConfig& config() const { return config_; }

 private:
  const MappingTable& table_;
  const LmScorer& sc_lm_;
  const LmScorer& tc_lm_;
  ConvertConfig config_;
};

}  // namespace zhconv
