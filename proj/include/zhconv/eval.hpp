#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zhconv/mapping.hpp"

namespace zhconv {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalReport {
  double ded = 0.0;  // edit distance per 1000 ambiguous SC source chars
  double sa = 0.0;   // percent of sentences converted exactly
  int64_t total_edit_distance = 0;
  int64_t total_ambiguous_chars = 0;  // counted source-side, with multiplicity
  int64_t sentence_count = 0;
  int64_t correct_sentence_count = 0;
  bool zero_ambiguous_denominator = false;

  // key<TAB>value lines, machine-parseable
  void write(std::ostream& out) const;
};

// Character-level Levenshtein distance, unit costs.
int64_t edit_distance(std::u32string_view a, std::u32string_view b);
int64_t edit_distance_utf8(std::string_view a, std::string_view b);

// predictions/references/sources are aligned sentence lists; the table
// supplies single-character ambiguity for the denominator.
EvalReport evaluate(const std::vector<std::string>& predictions,
                    const std::vector<std::string>& references,
                    const std::vector<std::string>& sources,
                    const MappingTable& table);

struct TokenStats {
  std::vector<std::pair<std::string, int64_t>> ranked;  // count-descending
  double slope = 0.0;  // |least-squares slope| of log freq vs log rank
  size_t fit_ranks = 0;

  void write(std::ostream& out) const;
};

TokenStats zipf_slope(const std::map<std::string, int64_t>& counts,
                      size_t top_k = 10000);
TokenStats zipf_slope(const std::vector<std::string>& tokens,
                      size_t top_k = 10000);

}  // namespace zhconv
