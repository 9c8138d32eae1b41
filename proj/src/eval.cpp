#include "zhconv/eval.hpp"

#include <algorithm>
#include <cmath>

#include "zhconv/utf8.hpp"

namespace zhconv {

int64_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<int64_t> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<int64_t>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    int64_t diag = row[0];
    row[0] = static_cast<int64_t>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      int64_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
    }
  }
  return row[b.size()];
}

int64_t edit_distance_utf8(std::string_view a, std::string_view b) {
  return edit_distance(decode_utf8(a), decode_utf8(b));
}

EvalReport evaluate(const std::vector<std::string>& predictions,
                    const std::vector<std::string>& references,
                    const std::vector<std::string>& sources,
                    const MappingTable& table) {
  if (predictions.size() != references.size() ||
      predictions.size() != sources.size())
    throw EvalError("prediction/reference/source lists differ in length");
  EvalReport report;
  report.sentence_count = static_cast<int64_t>(predictions.size());
  for (size_t i = 0; i < predictions.size(); ++i) {
    int64_t dist = edit_distance_utf8(predictions[i], references[i]);
    report.total_edit_distance += dist;
    if (dist == 0) ++report.correct_sentence_count;
    for (char32_t c : decode_utf8(sources[i]))
      if (table.is_ambiguous(c)) ++report.total_ambiguous_chars;
  }
  if (report.total_ambiguous_chars > 0) {
    report.ded = static_cast<double>(report.total_edit_distance) /
                 static_cast<double>(report.total_ambiguous_chars) * 1000.0;
  } else {
    report.ded = 0.0;
    report.zero_ambiguous_denominator = true;
  }
  report.sa = report.sentence_count > 0
                  ? static_cast<double>(report.correct_sentence_count) /
                        static_cast<double>(report.sentence_count) * 100.0
                  : 0.0;
  return report;
}

void EvalReport::write(std::ostream& out) const {
  out << "ded\t" << ded << "\n";
  out << "sa\t" << sa << "\n";
  out << "total_edit_distance\t" << total_edit_distance << "\n";
  out << "total_ambiguous_chars\t" << total_ambiguous_chars << "\n";
  out << "sentence_count\t" << sentence_count << "\n";
  out << "correct_sentence_count\t" << correct_sentence_count << "\n";
  out << "ambiguous_side\tsource\n";
  out << "zero_ambiguous_denominator\t" << (zero_ambiguous_denominator ? 1 : 0)
      << "\n";
}

TokenStats zipf_slope(const std::map<std::string, int64_t>& counts,
                      size_t top_k) {
  std::vector<std::pair<std::string, int64_t>> ranked(counts.begin(),
                                                      counts.end());
  if (ranked.size() < 2)
    throw EvalError("zipf_slope needs at least 2 distinct tokens");
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  size_t fit = std::min(top_k, ranked.size());
  // fit log relative frequency; dividing by the top count only shifts the
  // intercept, and it makes the slope exactly invariant under uniform
  // count scaling (s*a / s*b rounds to the same double as a / b)
  double top = static_cast<double>(ranked.front().second);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t r = 0; r < fit; ++r) {
    double x = std::log(static_cast<double>(r + 1));
    double y = std::log(static_cast<double>(ranked[r].second) / top);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double nfit = static_cast<double>(fit);
  double denom = nfit * sxx - sx * sx;
  double slope = denom != 0.0 ? (nfit * sxy - sx * sy) / denom : 0.0;
  TokenStats stats;
  stats.ranked = std::move(ranked);
  stats.slope = std::fabs(slope);
  stats.fit_ranks = fit;
  return stats;
}

TokenStats zipf_slope(const std::vector<std::string>& tokens, size_t top_k) {
  std::map<std::string, int64_t> counts;
  for (const auto& tok : tokens) ++counts[tok];
  return zipf_slope(counts, top_k);
}

void TokenStats::write(std::ostream& out) const {
  out << "slope\t" << slope << "\n";
  out << "fit_ranks\t" << fit_ranks << "\n";
  for (size_t r = 0; r < ranked.size(); ++r)
    out << (r + 1) << "\t" << ranked[r].first << "\t" << ranked[r].second
        << "\n";
}

}  // namespace zhconv
