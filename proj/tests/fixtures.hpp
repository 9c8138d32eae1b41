#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zhconv/convert.hpp"
#include "zhconv/lm.hpp"
#include "zhconv/mapping.hpp"
#include "zhconv/segment.hpp"
#include "zhconv/utf8.hpp"

namespace fixtures {

inline const std::string kDataDir = ZHCONV_DATA_DIR;

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

inline zhconv::SegmentedCorpus presegment(const std::string& corpus_path,
                                          const zhconv::Dictionary& dict) {
  zhconv::SegmentedCorpus corpus;
  for (const auto& line : read_lines(corpus_path))
    corpus.sentences.push_back(
        zhconv::max_match(zhconv::decode_utf8(line), dict).tokens);
  return corpus;
}

// Desk-scale models trained once from the bundled data.
struct Desk {
  zhconv::MappingTable table;
  zhconv::Dictionary dict_sc;
  zhconv::Dictionary dict_tc;
  zhconv::SegmentedCorpus corpus_sc;
  zhconv::SegmentedCorpus corpus_tc;
  zhconv::NgramModel sc_lm;
  zhconv::NgramModel tc_lm;

  Desk()
      : table(zhconv::MappingTable::load_file(kDataDir + "/mapping_desk.tsv")),
        dict_sc(zhconv::Dictionary::read_file(kDataDir + "/dict_sc.txt")),
        dict_tc(zhconv::Dictionary::read_file(kDataDir + "/dict_tc.txt")),
        corpus_sc(presegment(kDataDir + "/corpus_sc.txt", dict_sc)),
        corpus_tc(presegment(kDataDir + "/corpus_tc.txt", dict_tc)),
        sc_lm(zhconv::NgramModel::train(corpus_sc, 3,
                                        {zhconv::Smoothing::KneserNey, 0.0})),
        tc_lm(zhconv::NgramModel::train(corpus_tc, 3,
                                        {zhconv::Smoothing::KneserNey, 0.0})) {}

  static const Desk& get() {
    static Desk desk;
    return desk;
  }
};

// Small synthetic world over ASCII letters, for oracle checks.
struct Synthetic {
  std::vector<std::u32string> dict_words;
  zhconv::Dictionary dict;
  zhconv::NgramModel lm;

  // Builds a `words`-word dictionary over the a..h alphabet and trains an
  // LM on random sentences drawn from those words and single characters.
  Synthetic(unsigned seed, size_t words = 50, int order = 3,
            zhconv::SmoothingSpec spec = {zhconv::Smoothing::KneserNey, 0.0})
      : lm(build(seed, words, order, spec, dict_words, dict)) {}

  static zhconv::NgramModel build(unsigned seed, size_t words, int order,
                                  zhconv::SmoothingSpec spec,
                                  std::vector<std::u32string>& dict_words,
                                  zhconv::Dictionary& dict) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> letter(0, 7);
    std::uniform_int_distribution<int> word_len(2, 4);
    while (dict_words.size() < words) {
      std::u32string w;
      int len = word_len(rng);
      for (int i = 0; i < len; ++i) w += U'a' + letter(rng);
      if (std::find(dict_words.begin(), dict_words.end(), w) ==
          dict_words.end())
        dict_words.push_back(w);
    }
    dict = zhconv::Dictionary::from_words(dict_words);
    zhconv::SegmentedCorpus corpus;
    std::uniform_int_distribution<int> sent_len(2, 8);
    std::uniform_int_distribution<size_t> pick(0, dict_words.size() - 1);
    std::uniform_int_distribution<int> coin(0, 4);
    for (int s = 0; s < 300; ++s) {
      zhconv::TokenSeq sent;
      int len = sent_len(rng);
      for (int i = 0; i < len; ++i) {
        if (coin(rng) == 0) {
          std::u32string c(1, U'a' + letter(rng));
          sent.push_back(zhconv::encode_utf8(c));
        } else {
          sent.push_back(zhconv::encode_utf8(dict_words[pick(rng)]));
        }
      }
      corpus.sentences.push_back(std::move(sent));
    }
    return zhconv::NgramModel::train(corpus, order, spec);
  }

  std::u32string random_sentence(std::mt19937_64& rng, size_t max_chars) const {
    std::uniform_int_distribution<int> letter(0, 7);
    std::uniform_int_distribution<size_t> len(1, max_chars);
    size_t n = len(rng);
    std::u32string s;
    for (size_t i = 0; i < n; ++i) s += U'a' + letter(rng);
    return s;
  }
};

}  // namespace fixtures
