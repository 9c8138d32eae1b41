#include "zhconv/lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace zhconv {

namespace {

std::vector<int32_t> tail(const std::vector<int32_t>& v) {
  return {v.begin() + (v.empty() ? 0 : 1), v.end()};
}

int64_t lookup(const std::map<std::vector<int32_t>, int64_t>& m,
               const std::vector<int32_t>& key) {
  auto it = m.find(key);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

// ---------------------------------------------------------------- corpus

SegmentedCorpus SegmentedCorpus::read(std::istream& in) {
  SegmentedCorpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    TokenSeq tokens;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) tokens.push_back(tok);
    if (!tokens.empty()) corpus.sentences.push_back(std::move(tokens));
  }
  return corpus;
}

SegmentedCorpus SegmentedCorpus::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LmError("cannot open corpus: " + path);
  return read(in);
}

void SegmentedCorpus::write(std::ostream& out) const {
  for (const auto& sent : sentences) {
    for (size_t i = 0; i < sent.size(); ++i) {
      if (i) out << ' ';
      out << sent[i];
    }
    out << '\n';
  }
}

// ------------------------------------------------------------- smoothing

SmoothingSpec SmoothingSpec::parse(const std::string& text) {
  if (text == "witten_bell") return {Smoothing::WittenBell, 0.0};
  if (text == "kneser_ney") return {Smoothing::KneserNey, 0.0};
  if (text == "add_k") return {Smoothing::AddK, 1.0};
  if (text.rfind("add_k=", 0) == 0) {
    char* end = nullptr;
    double k = std::strtod(text.c_str() + 6, &end);
    if (!end || *end != '\0' || k < 0.0)
      throw LmError("bad add_k value in smoothing spec: " + text);
    return {Smoothing::AddK, k};
  }
  throw LmError("unknown smoothing scheme: " + text);
}

std::string SmoothingSpec::str() const {
  switch (kind) {
    case Smoothing::WittenBell:
      return "witten_bell";
    case Smoothing::KneserNey:
      return "kneser_ney";
    case Smoothing::AddK: {
      std::ostringstream os;
      os << "add_k=" << k;
      return os.str();
    }
  }
  return "?";
}

// --------------------------------------------------------------- scorer

double LmScorer::sequence_log_prob(std::span<const std::string> tokens,
                                   bool eos) const {
  double total = 0.0;
  for (size_t i = 0; i < tokens.size(); ++i)
    total += token_log_prob(tokens.subspan(0, i), tokens[i]);
  if (eos) total += end_log_prob(tokens);
  return total;
}

// --------------------------------------------------------------- counts

NgramCounts::NgramCounts(int order_) : order(order_) {
  if (order < 1) throw LmError("n-gram order must be >= 1");
  grams.resize(order);
}

void NgramCounts::add_sentence(const TokenSeq& tokens) {
  std::vector<int32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (tok == kUnkToken) {
      ids.push_back(kUnkId);
      continue;
    }
    auto [it, inserted] =
        this->ids.emplace(tok, static_cast<int32_t>(vocab.size()) + 3);
    if (inserted) vocab.push_back(tok);
    ids.push_back(it->second);
  }
  for (int k = 1; k <= order; ++k) {
    std::vector<int32_t> padded(static_cast<size_t>(k) - 1, kBosId);
    padded.insert(padded.end(), ids.begin(), ids.end());
    padded.push_back(kEosId);
    if (padded.size() < static_cast<size_t>(k)) continue;
    for (size_t i = 0; i + k <= padded.size(); ++i)
      ++grams[k - 1][{padded.begin() + i, padded.begin() + i + k}];
  }
}

void NgramCounts::add(const SegmentedCorpus& corpus) {
  for (const auto& sent : corpus.sentences) add_sentence(sent);
}

void NgramCounts::merge(const NgramCounts& other) {
  if (other.order != order) throw LmError("cannot merge counts of different order");
  std::vector<int32_t> remap(other.vocab.size() + 3);
  remap[kUnkId] = kUnkId;
  remap[kBosId] = kBosId;
  remap[kEosId] = kEosId;
  for (size_t i = 0; i < other.vocab.size(); ++i) {
    auto [it, inserted] =
        ids.emplace(other.vocab[i], static_cast<int32_t>(vocab.size()) + 3);
    if (inserted) vocab.push_back(other.vocab[i]);
    remap[i + 3] = it->second;
  }
  for (int k = 0; k < order; ++k) {
    for (const auto& [gram, count] : other.grams[k]) {
      std::vector<int32_t> key(gram.size());
      for (size_t i = 0; i < gram.size(); ++i) key[i] = remap[gram[i]];
      grams[k][key] += count;
    }
  }
}

// ---------------------------------------------------------------- model

NgramModel NgramModel::train(const SegmentedCorpus& corpus, int order,
                             SmoothingSpec smoothing) {
  if (corpus.sentences.empty()) throw LmError("training corpus is empty");
  NgramCounts counts(order);
  counts.add(corpus);
  return from_counts(std::move(counts), smoothing);
}

NgramModel NgramModel::from_counts(NgramCounts counts, SmoothingSpec smoothing) {
  NgramModel model;
  model.order_ = counts.order;
  model.smoothing_ = smoothing;
  model.counts_ = std::move(counts);
  model.finalize();
  return model;
}

void NgramModel::finalize() {
  hist_total_.assign(order_, {});
  hist_types_.assign(order_, {});
  cont_.assign(order_, {});
  cont_total_.assign(order_, {});
  cont_types_.assign(order_, {});
  discount_.assign(order_, 0.5);

  for (int k = 1; k <= order_; ++k) {
    for (const auto& [gram, count] : counts_.grams[k - 1]) {
      std::vector<int32_t> hist(gram.begin(), gram.end() - 1);
      hist_total_[k - 1][hist] += count;
      ++hist_types_[k - 1][hist];
    }
  }
  // continuation counts for orders below the top: distinct left contexts
  for (int k = 1; k < order_; ++k) {
    for (const auto& [gram, count] : counts_.grams[k]) {
      (void)count;
      std::vector<int32_t> suffix(gram.begin() + 1, gram.end());
      ++cont_[k - 1][suffix];
    }
    for (const auto& [gram, cc] : cont_[k - 1]) {
      std::vector<int32_t> hist(gram.begin(), gram.end() - 1);
      cont_total_[k - 1][hist] += cc;
      ++cont_types_[k - 1][hist];
    }
  }
  // Good-Turing discount estimate per level
  for (int k = 1; k <= order_; ++k) {
    const auto& table = (k == order_) ? counts_.grams[k - 1] : cont_[k - 1];
    int64_t n1 = 0, n2 = 0;
    for (const auto& [gram, count] : table) {
      if (count == 1) ++n1;
      if (count == 2) ++n2;
    }
    double d = 0.5;
    if (n1 > 0) d = static_cast<double>(n1) / (n1 + 2.0 * n2);
    discount_[k - 1] = std::clamp(d, 1e-4, 1.0 - 1e-4);
  }
}

int32_t NgramModel::token_id(const std::string& token) const {
  auto it = counts_.ids.find(token);
  return it == counts_.ids.end() ? kUnkId : it->second;
}

std::vector<int32_t> NgramModel::id_history(
    std::span<const std::string> history) const {
  size_t ctx = context_size();
  std::vector<int32_t> ids(ctx, kBosId);
  size_t take = std::min(history.size(), ctx);
  for (size_t i = 0; i < take; ++i)
    ids[ctx - take + i] = token_id(history[history.size() - take + i]);
  return ids;
}

double NgramModel::prob_rec(int level, const std::vector<int32_t>& context,
                            int32_t event) const {
  if (level == 0) return 1.0 / static_cast<double>(event_space_size());

  std::vector<int32_t> gram = context;
  gram.push_back(event);

  if (smoothing_.kind == Smoothing::WittenBell) {
    int64_t c = lookup(counts_.grams[level - 1], gram);
    int64_t total = lookup(hist_total_[level - 1], context);
    if (total == 0) return prob_rec(level - 1, tail(context), event);
    int64_t types = lookup(hist_types_[level - 1], context);
    double lower = prob_rec(level - 1, tail(context), event);
    return (c + types * lower) / static_cast<double>(total + types);
  }

  // Kneser-Ney: raw counts at the top level, continuation counts below
  const bool top = (level == order_);
  const auto& num_table = top ? counts_.grams[level - 1] : cont_[level - 1];
  const auto& total_table = top ? hist_total_[level - 1] : cont_total_[level - 1];
  const auto& types_table = top ? hist_types_[level - 1] : cont_types_[level - 1];
  int64_t total = lookup(total_table, context);
  if (total == 0) return prob_rec(level - 1, tail(context), event);
  int64_t c = lookup(num_table, gram);
  int64_t types = lookup(types_table, context);
  double d = discount_[level - 1];
  double lower = prob_rec(level - 1, tail(context), event);
  return std::max(c - d, 0.0) / total + d * types / total * lower;
}

double NgramModel::event_prob(const std::vector<int32_t>& history,
                              int32_t event) const {
  if (history.size() != context_size())
    throw LmError("history length does not match model order");
  if (smoothing_.kind == Smoothing::AddK) {
    std::vector<int32_t> gram = history;
    gram.push_back(event);
    int64_t c = lookup(counts_.grams[order_ - 1], gram);
    int64_t total = lookup(hist_total_[order_ - 1], history);
    double k = smoothing_.k;
    double denom = total + k * event_space_size();
    if (denom == 0.0) return 1.0 / static_cast<double>(event_space_size());
    return (c + k) / denom;
  }
  return prob_rec(order_, history, event);
}

double NgramModel::token_log_prob(std::span<const std::string> history,
                                  const std::string& token) const {
  double p = event_prob(id_history(history), token_id(token));
  return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

double NgramModel::end_log_prob(std::span<const std::string> history) const {
  double p = event_prob(id_history(history), kEosId);
  return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

double perplexity(const LmScorer& lm, const SegmentedCorpus& corpus) {
  if (corpus.sentences.empty()) throw LmError("perplexity of empty corpus");
  double total = 0.0;
  size_t events = 0;
  for (const auto& sent : corpus.sentences) {
    total += lm.sequence_log_prob(sent, true);
    events += sent.size() + 1;  // tokens plus one EOS event
  }
  return std::exp(-total / static_cast<double>(events));
}

// ------------------------------------------------------------ model file

void NgramModel::save(std::ostream& out) const {
  out << "ZHLM 1\n";
  out << "order " << order_ << "\n";
  char kbuf[64];
  std::snprintf(kbuf, sizeof(kbuf), "%a", smoothing_.k);
  const char* name = smoothing_.kind == Smoothing::WittenBell ? "witten_bell"
                     : smoothing_.kind == Smoothing::KneserNey ? "kneser_ney"
                                                               : "add_k";
  out << "smoothing " << name << " " << kbuf << "\n";
  out << "vocab " << counts_.vocab.size() << "\n";
  for (const auto& tok : counts_.vocab) out << tok << "\n";
  for (int k = 1; k <= order_; ++k) {
    out << "ngrams " << k << " " << counts_.grams[k - 1].size() << "\n";
    for (const auto& [gram, count] : counts_.grams[k - 1]) {
      for (int32_t id : gram) out << id << " ";
      out << count << "\n";
    }
  }
  out << "end\n";
  if (!out) throw LmError("model write failed");
}

void NgramModel::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LmError("cannot open model file for writing: " + path);
  save(out);
}

NgramModel NgramModel::load(std::istream& in) {
  std::string word;
  auto need = [&](const std::string& expected) {
    if (!(in >> word) || word != expected)
      throw LmError("bad model file: expected '" + expected + "'");
  };
  need("ZHLM");
  need("1");
  need("order");
  int order = 0;
  if (!(in >> order) || order < 1) throw LmError("bad model file: order");
  need("smoothing");
  std::string name, kstr;
  if (!(in >> name >> kstr)) throw LmError("bad model file: smoothing");
  SmoothingSpec spec;
  if (name == "witten_bell")
    spec.kind = Smoothing::WittenBell;
  else if (name == "kneser_ney")
    spec.kind = Smoothing::KneserNey;
  else if (name == "add_k")
    spec.kind = Smoothing::AddK;
  else
    throw LmError("bad model file: unknown smoothing " + name);
  spec.k = std::strtod(kstr.c_str(), nullptr);
  need("vocab");
  size_t vocab_size = 0;
  if (!(in >> vocab_size)) throw LmError("bad model file: vocab size");
  NgramCounts counts(order);
  std::string line;
  std::getline(in, line);  // consume rest of header line
  for (size_t i = 0; i < vocab_size; ++i) {
    if (!std::getline(in, line) || line.empty())
      throw LmError("bad model file: truncated vocab");
    counts.vocab.push_back(line);
    counts.ids.emplace(line, static_cast<int32_t>(i) + 3);
  }
  for (int k = 1; k <= order; ++k) {
    need("ngrams");
    int kk = 0;
    size_t n = 0;
    if (!(in >> kk >> n) || kk != k) throw LmError("bad model file: ngram header");
    int32_t max_id = static_cast<int32_t>(vocab_size) + 2;
    for (size_t i = 0; i < n; ++i) {
      std::vector<int32_t> gram(k);
      int64_t count = 0;
      for (int j = 0; j < k; ++j) {
        if (!(in >> gram[j]) || gram[j] < 0 || gram[j] > max_id)
          throw LmError("bad model file: gram id");
      }
      if (!(in >> count)) throw LmError("bad model file: gram count");
      counts.grams[k - 1].emplace(std::move(gram), count);
    }
  }
  need("end");
  return from_counts(std::move(counts), spec);
}

NgramModel NgramModel::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LmError("cannot open model file: " + path);
  return load(in);
}

}  // namespace zhconv
