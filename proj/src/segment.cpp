#include "zhconv/segment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>

#include "zhconv/utf8.hpp"

namespace zhconv {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

// ----------------------------------------------------------- dictionary

Dictionary Dictionary::from_words(std::vector<std::u32string> words) {
  Dictionary d;
  for (auto& w : words) {
    if (w.empty()) continue;
    d.max_len_ = std::max(d.max_len_, w.size());
    d.words_.insert(std::move(w));
  }
  return d;
}

Dictionary Dictionary::from_table(const MappingTable& table) {
  return from_words(table.word_list());
}

Dictionary Dictionary::read(std::istream& in) {
  std::vector<std::u32string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.push_back(decode_utf8(line));
  }
  return from_words(std::move(words));
}

Dictionary Dictionary::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SegmentError("cannot open dictionary: " + path);
  return read(in);
}

bool Dictionary::contains(std::u32string_view word) const {
  return words_.find(word) != words_.end();
}

std::vector<size_t> Dictionary::prefix_lengths(std::u32string_view text) const {
  std::vector<size_t> lengths;
  size_t limit = std::min(max_len_, text.size());
  for (size_t len = 1; len <= limit; ++len) {
    if (contains(text.substr(0, len))) lengths.push_back(len);
  }
  return lengths;
}

std::vector<size_t> token_boundaries(const TokenSeq& tokens) {
  std::vector<size_t> bounds;
  size_t pos = 0;
  for (const auto& tok : tokens) {
    pos += decode_utf8(tok).size();
    bounds.push_back(pos);
  }
  return bounds;
}

// ------------------------------------------------------------ max match

Segmentation max_match(std::u32string_view sentence, const Dictionary& dict) {
  Segmentation seg;
  size_t pos = 0;
  while (pos < sentence.size()) {
    auto lengths = dict.prefix_lengths(sentence.substr(pos));
    size_t take = lengths.empty() ? 1 : lengths.back();
    seg.tokens.push_back(encode_utf8(sentence.substr(pos, take)));
    pos += take;
  }
  return seg;
}

// --------------------------------------------------------------- trellis

namespace {

// Candidate token lengths at a position: dictionary words plus the bare
// single character.
std::vector<size_t> candidate_lengths(std::u32string_view rest,
                                      const Dictionary& dict) {
  std::vector<size_t> lengths = dict.prefix_lengths(rest);
  if (lengths.empty() || lengths.front() != 1)
    lengths.insert(lengths.begin(), 1);
  return lengths;
}

struct TrellisState {
  size_t pos = 0;
  std::vector<std::string> ctx;  // last context_size() emitted tokens
  double forward = kNegInf;      // best prefix score
  bool alive = true;
};

struct TrellisEdge {
  int from = -1;  // global state id
  double score = 0.0;
  std::string word;  // empty for the EOS edge
};

struct Trellis {
  std::vector<TrellisState> states;
  std::vector<std::vector<TrellisEdge>> incoming;  // by target state id
  int start = -1;
  int finish = -1;  // virtual end-of-sentence node
};

Trellis build_trellis(std::u32string_view sentence, const LmScorer& lm,
                      const Dictionary& dict, size_t beam) {
  Trellis t;
  size_t n = sentence.size();
  size_t ctx_size = lm.context_size();

  // per-boundary state index: context -> global id
  std::vector<std::map<std::vector<std::string>, int>> by_pos(n + 1);
  auto get_state = [&](size_t pos, std::vector<std::string> ctx) {
    auto [it, inserted] = by_pos[pos].emplace(std::move(ctx), -1);
    if (inserted) {
      it->second = static_cast<int>(t.states.size());
      t.states.push_back({pos, it->first, kNegInf, true});
      t.incoming.emplace_back();
    }
    return it->second;
  };

  t.start = get_state(0, {});
  t.states[t.start].forward = 0.0;

  t.finish = static_cast<int>(t.states.size());
  t.states.push_back({n + 1, {}, kNegInf, true});
  t.incoming.emplace_back();

  for (size_t pos = 0; pos <= n; ++pos) {
    // keep the top `beam` states at this boundary
    std::vector<int> here;
    for (const auto& [ctx, id] : by_pos[pos]) here.push_back(id);
    std::sort(here.begin(), here.end(), [&](int a, int b) {
      if (t.states[a].forward != t.states[b].forward)
        return t.states[a].forward > t.states[b].forward;
      return t.states[a].ctx < t.states[b].ctx;
    });
    for (size_t i = beam; i < here.size(); ++i)
      t.states[here[i]].alive = false;
    if (here.size() > beam) here.resize(beam);

    for (int id : here) {
      const std::vector<std::string> ctx = t.states[id].ctx;
      const double f = t.states[id].forward;
      if (f == kNegInf) continue;
      if (pos == n) {
        double s = lm.end_log_prob(ctx);
        t.incoming[t.finish].push_back({id, s, {}});
        t.states[t.finish].forward =
            std::max(t.states[t.finish].forward, f + s);
        continue;
      }
      for (size_t len : candidate_lengths(sentence.substr(pos), dict)) {
        std::string word = encode_utf8(sentence.substr(pos, len));
        double s = lm.token_log_prob(ctx, word);
        std::vector<std::string> next_ctx = ctx;
        next_ctx.push_back(word);
        if (next_ctx.size() > ctx_size)
          next_ctx.erase(next_ctx.begin(),
                         next_ctx.end() - static_cast<long>(ctx_size));
        int target = get_state(pos + len, std::move(next_ctx));
        t.incoming[target].push_back({id, s, std::move(word)});
        t.states[target].forward = std::max(t.states[target].forward, f + s);
      }
    }
  }
  return t;
}

bool boundaries_less(const TokenSeq& a, const TokenSeq& b) {
  return token_boundaries(a) < token_boundaries(b);
}

}  // namespace

std::vector<Segmentation> nbest_segmentations(std::u32string_view sentence,
                                              const LmScorer& lm,
                                              const Dictionary& dict, size_t n,
                                              size_t beam) {
  if (n < 1) throw SegmentError("n-best size must be >= 1");
  Trellis t = build_trellis(sentence, lm, dict, beam);

  // Backward A* from the finish node; the forward DP score is the exact
  // in-graph heuristic for the remaining prefix.
  struct Node {
    double g;          // exact suffix score
    double priority;   // forward[state] + g
    int state;
    TokenSeq suffix;
  };
  auto cmp = [](const Node& a, const Node& b) {
    return a.priority < b.priority;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> queue(cmp);
  queue.push({0.0, t.states[t.finish].forward, t.finish, {}});

  std::vector<Segmentation> results;
  const size_t tie_slack = 256;
  while (!queue.empty()) {
    Node node = queue.top();
    queue.pop();
    if (results.size() >= n) {
      // keep draining only exact ties with the nth result
      if (node.priority < *results[n - 1].score ||
          results.size() >= n + tie_slack)
        break;
    }
    if (node.state == t.start) {
      results.push_back({node.suffix, node.g});
      continue;
    }
    for (const TrellisEdge& e : t.incoming[node.state]) {
      double g = node.g + e.score;
      double f = t.states[e.from].forward;
      if (f == kNegInf) continue;
      TokenSeq suffix;
      if (!e.word.empty()) suffix.push_back(e.word);
      suffix.insert(suffix.end(), node.suffix.begin(), node.suffix.end());
      queue.push({g, f + g, e.from, std::move(suffix)});
    }
  }

  std::stable_sort(results.begin(), results.end(),
                   [](const Segmentation& a, const Segmentation& b) {
                     if (*a.score != *b.score) return *a.score > *b.score;
                     return boundaries_less(a.tokens, b.tokens);
                   });
  if (results.size() > n) results.resize(n);
  return results;
}

Segmentation viterbi_segment(std::u32string_view sentence, const LmScorer& lm,
                             const Dictionary& dict, size_t beam) {
  auto best = nbest_segmentations(sentence, lm, dict, 1, beam);
  if (best.empty()) throw SegmentError("no segmentation found");
  return best.front();
}

// ----------------------------------------------------------------- oracle

std::vector<Segmentation> enumerate_segmentations(std::u32string_view sentence,
                                                  const Dictionary& dict,
                                                  size_t max_len,
                                                  const LmScorer* lm) {
  if (sentence.size() > max_len)
    throw SegmentError("sentence too long for exhaustive enumeration (" +
                       std::to_string(sentence.size()) + " > " +
                       std::to_string(max_len) + " characters)");
  std::vector<Segmentation> out;
  TokenSeq current;
  auto rec = [&](auto&& self, size_t pos) -> void {
    if (pos == sentence.size()) {
      Segmentation seg{current, std::nullopt};
      if (lm) seg.score = lm->sequence_log_prob(seg.tokens, true);
      out.push_back(std::move(seg));
      return;
    }
    for (size_t len : candidate_lengths(sentence.substr(pos), dict)) {
      current.push_back(encode_utf8(sentence.substr(pos, len)));
      self(self, pos + len);
      current.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace zhconv
