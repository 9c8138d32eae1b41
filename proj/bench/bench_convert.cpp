// Compares the serial reference batch converter against the
// OpenMP-parallel one on the bundled desk corpus.
#include <benchmark/benchmark.h>

#include <fstream>
#include <string>
#include <vector>

#include "zhconv/convert.hpp"
#include "zhconv/lm.hpp"
#include "zhconv/mapping.hpp"
#include "zhconv/segment.hpp"
#include "zhconv/utf8.hpp"

using namespace zhconv;

namespace {

const std::string kDataDir = ZHCONV_DATA_DIR;

std::vector<std::string> read_lines(const std::string& path) {
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

struct Fixture {
  MappingTable table;
  NgramModel sc_lm;
  NgramModel tc_lm;
  std::vector<std::string> sentences;

  Fixture()
      : table(MappingTable::load_file(kDataDir + "/mapping_desk.tsv")),
        sc_lm(train_lm(kDataDir + "/corpus_sc.txt", kDataDir + "/dict_sc.txt")),
        tc_lm(train_lm(kDataDir + "/corpus_tc.txt", kDataDir + "/dict_tc.txt")),
        sentences(read_lines(kDataDir + "/corpus_sc.txt")) {}

  static NgramModel train_lm(const std::string& corpus_path,
                             const std::string& dict_path) {
    Dictionary dict = Dictionary::read_file(dict_path);
    SegmentedCorpus corpus;
    for (const auto& line : read_lines(corpus_path))
      corpus.sentences.push_back(max_match(decode_utf8(line), dict).tokens);
    return NgramModel::train(corpus, 3, {Smoothing::KneserNey, 0.0});
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_convert_serial(benchmark::State& state) {
  Fixture& f = fixture();
  Converter converter(f.table, f.sc_lm, f.tc_lm);
  for (auto _ : state) {
    auto out = converter.convert_batch_serial(f.sentences);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(f.sentences.size()));
}
BENCHMARK(BM_convert_serial)->Unit(benchmark::kMillisecond);

void BM_convert_openmp(benchmark::State& state) {
  Fixture& f = fixture();
  Converter converter(f.table, f.sc_lm, f.tc_lm);
  int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto out = converter.convert_batch(f.sentences, jobs);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(f.sentences.size()));
}
BENCHMARK(BM_convert_openmp)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
