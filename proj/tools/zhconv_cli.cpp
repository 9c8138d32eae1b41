#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "zhconv/convert.hpp"
#include "zhconv/eval.hpp"
#include "zhconv/lm.hpp"
#include "zhconv/mapping.hpp"
#include "zhconv/sampling.hpp"
#include "zhconv/segment.hpp"
#include "zhconv/utf8.hpp"

using namespace zhconv;

namespace {

// "-" means stdin/stdout
std::unique_ptr<std::istream> open_input(const std::string& path) {
  if (path == "-") return std::make_unique<std::istream>(std::cin.rdbuf());
  auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*in) throw std::runtime_error("cannot open input: " + path);
  return in;
}

std::unique_ptr<std::ostream> open_output(const std::string& path) {
  if (path == "-") return std::make_unique<std::ostream>(std::cout.rdbuf());
  auto out = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*out) throw std::runtime_error("cannot open output: " + path);
  return out;
}

bool get_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::vector<std::string> read_lines(const std::string& path) {
  auto in = open_input(path);
  std::vector<std::string> lines;
  std::string line;
  while (get_line(*in, line)) lines.push_back(line);
  return lines;
}

int cmd_train(const std::string& corpus_path, int order,
              const std::string& smoothing, size_t augment_epochs,
              size_t nbest, const std::string& dict_path,
              const std::string& out_path, uint64_t seed) {
  SmoothingSpec spec = SmoothingSpec::parse(smoothing);
  SegmentedCorpus corpus;
  Dictionary dict;
  bool have_dict = !dict_path.empty();
  if (have_dict) {
    // raw text input, pre-segmented by maximal matching
    dict = Dictionary::read_file(dict_path);
    auto in = open_input(corpus_path);
    std::string line;
    while (get_line(*in, line)) {
      if (line.empty()) continue;
      corpus.sentences.push_back(max_match(decode_utf8(line), dict).tokens);
    }
  } else {
    auto in = open_input(corpus_path);
    corpus = SegmentedCorpus::read(*in);
  }
  NgramModel model = NgramModel::train(corpus, order, spec);
  if (augment_epochs > 0) {
    if (!have_dict)
      throw std::runtime_error("--augment-epochs requires --dict");
    Rng rng(seed);
    SegmentedCorpus augmented =
        augment_corpus(corpus, model, dict, augment_epochs, nbest, rng);
    model = NgramModel::train(augmented, order, spec);
  }
  model.save_file(out_path);
  return 0;
}

int cmd_convert(const std::string& table_path, const std::string& sc_lm_path,
                const std::string& tc_lm_path, const ConvertConfig& config,
                const std::string& method, const std::string& in_path,
                const std::string& out_path, int jobs) {
  MappingTable table = MappingTable::load_file(table_path);
  NgramModel sc_lm = NgramModel::load_file(sc_lm_path);
  NgramModel tc_lm = NgramModel::load_file(tc_lm_path);
  Converter converter(table, sc_lm, tc_lm, config);
  auto in = open_input(in_path);
  auto out = open_output(out_path);
  std::string line;
  if (jobs <= 1) {
    while (get_line(*in, line)) {
      *out << (method == "greedy" ? converter.convert_greedy(line)
                                  : converter.convert(line))
           << "\n";
    }
  } else {
    const size_t chunk = 1024;
    std::vector<std::string> lines;
    auto flush = [&] {
      std::vector<std::string> converted;
      if (method == "greedy") {
        converted.reserve(lines.size());
        for (const auto& l : lines)
          converted.push_back(converter.convert_greedy(l));
      } else {
        converted = converter.convert_batch(lines, jobs);
      }
      for (const auto& l : converted) *out << l << "\n";
      lines.clear();
    };
    while (get_line(*in, line)) {
      lines.push_back(line);
      if (lines.size() >= chunk) flush();
    }
    flush();
  }
  return 0;
}

int cmd_tokenize(const std::string& mode, const std::string& lm_path,
                 const std::string& dict_path, size_t n, uint64_t seed,
                 size_t beam, const std::string& in_path,
                 const std::string& out_path) {
  Dictionary dict = Dictionary::read_file(dict_path);
  std::unique_ptr<NgramModel> lm;
  if (!lm_path.empty())
    lm = std::make_unique<NgramModel>(NgramModel::load_file(lm_path));
  if ((mode == "viterbi" || mode == "sample") && !lm)
    throw std::runtime_error("--mode " + mode + " requires --lm");
  Rng rng(seed);
  auto in = open_input(in_path);
  auto out = open_output(out_path);
  std::string line;
  while (get_line(*in, line)) {
    std::u32string text = decode_utf8(line);
    Segmentation seg;
    if (mode == "max-match")
      seg = max_match(text, dict);
    else if (mode == "viterbi")
      seg = viterbi_segment(text, *lm, dict, beam);
    else
      seg = sample_segmentation(text, *lm, dict, n, rng, beam);
    for (size_t i = 0; i < seg.tokens.size(); ++i) {
      if (i) *out << ' ';
      *out << seg.tokens[i];
    }
    *out << "\n";
  }
  return 0;
}

int cmd_eval(const std::string& src_path, const std::string& pred_path,
             const std::string& ref_path, const std::string& table_path) {
  auto sources = read_lines(src_path);
  auto predictions = read_lines(pred_path);
  auto references = read_lines(ref_path);
  if (sources.size() != predictions.size() ||
      sources.size() != references.size()) {
    std::ostringstream msg;
    msg << "line count mismatch: " << src_path << " has " << sources.size()
        << ", " << pred_path << " has " << predictions.size() << ", "
        << ref_path << " has " << references.size();
    throw std::runtime_error(msg.str());
  }
  MappingTable table = MappingTable::load_file(table_path);
  evaluate(predictions, references, sources, table).write(std::cout);
  return 0;
}

int cmd_zipf(const std::string& corpus_path, size_t top_k) {
  auto in = open_input(corpus_path);
  std::map<std::string, int64_t> counts;
  std::string line;
  while (get_line(*in, line)) {
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) ++counts[tok];
  }
  zipf_slope(counts, top_k).write(std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplified-to-Traditional Chinese conversion toolkit"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "Train an n-gram language model");
  std::string corpus_path, smoothing = "kneser_ney", dict_path, model_out;
  int order = 3;
  size_t augment_epochs = 0, nbest = 5;
  uint64_t seed = 0;
  train->add_option("--corpus", corpus_path, "Training text, one sentence per line")
      ->required();
  train->add_option("--order", order, "n-gram order")->check(CLI::PositiveNumber);
  train->add_option("--smoothing", smoothing,
                    "witten_bell | kneser_ney | add_k=K");
  train->add_option("--augment-epochs", augment_epochs,
                    "sampled corpus copies for subsequence/segmentation augmentation");
  train->add_option("--nbest", nbest, "n-best size for segmentation sampling")
      ->check(CLI::PositiveNumber);
  train->add_option("--dict", dict_path,
                    "word list; input is raw text pre-segmented by maximal matching");
  train->add_option("--out", model_out, "model output file")->required();
  train->add_option("--seed", seed, "random seed");

  // convert
  auto* convert = app.add_subcommand("convert", "Convert SC text to TC");
  std::string table_path, sc_lm_path, tc_lm_path, in_path = "-", out_path = "-";
  std::string method = "joint", aggregation = "logsumexp";
  ConvertConfig config;
  int jobs = 1;
  convert->add_option("--table", table_path, "SC->TC mapping table")->required();
  convert->add_option("--sc-lm", sc_lm_path, "SC language model")->required();
  convert->add_option("--tc-lm", tc_lm_path, "TC language model")->required();
  convert->add_option("--beam", config.beam_width, "beam width")
      ->check(CLI::PositiveNumber);
  convert->add_option("--aggregation", aggregation, "logsumexp | max");
  convert->add_option("--alpha", config.alpha, "SC term weight");
  convert->add_option("--beta", config.beta, "TC term weight");
  convert->add_option("--method", method, "joint | greedy");
  convert->add_option("--jobs", jobs, "worker threads for batch conversion");
  convert->add_option("--in", in_path, "input file or -");
  convert->add_option("--out", out_path, "output file or -");

  // tokenize
  auto* tokenize = app.add_subcommand("tokenize", "Segment text into subwords");
  std::string mode, tok_lm_path, tok_dict_path, tok_in = "-", tok_out = "-";
  size_t tok_n = 5, tok_beam = kDefaultTrellisBeam;
  uint64_t tok_seed = 0;
  tokenize->add_option("--mode", mode, "max-match | viterbi | sample")
      ->required()
      ->check(CLI::IsMember({"max-match", "viterbi", "sample"}));
  tokenize->add_option("--lm", tok_lm_path, "language model (viterbi/sample)");
  tokenize->add_option("--dict", tok_dict_path, "word list")->required();
  tokenize->add_option("--n", tok_n, "n-best size for sample mode")
      ->check(CLI::PositiveNumber);
  tokenize->add_option("--beam", tok_beam, "trellis beam width")
      ->check(CLI::PositiveNumber);
  tokenize->add_option("--seed", tok_seed, "random seed");
  tokenize->add_option("--in", tok_in, "input file or -");
  tokenize->add_option("--out", tok_out, "output file or -");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against references");
  std::string src_path, pred_path, ref_path, eval_table;
  eval_cmd->add_option("--src", src_path, "SC source sentences")->required();
  eval_cmd->add_option("--pred", pred_path, "predicted TC sentences")->required();
  eval_cmd->add_option("--ref", ref_path, "reference TC sentences")->required();
  eval_cmd->add_option("--table", eval_table, "mapping table for ambiguity counts")
      ->required();

  // zipf
  auto* zipf = app.add_subcommand("zipf", "Token frequency-rank slope");
  std::string zipf_corpus;
  size_t top_k = 10000;
  zipf->add_option("--corpus", zipf_corpus, "tokenized corpus")->required();
  zipf->add_option("--top-k", top_k, "ranks used in the fit")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed())
      return cmd_train(corpus_path, order, smoothing, augment_epochs, nbest,
                       dict_path, model_out, seed);
    if (convert->parsed()) {
      if (aggregation == "max")
        config.tc_aggregation = TcAggregation::Max;
      else if (aggregation != "logsumexp")
        throw std::runtime_error("unknown aggregation: " + aggregation);
      if (method != "joint" && method != "greedy")
        throw std::runtime_error("unknown method: " + method);
      return cmd_convert(table_path, sc_lm_path, tc_lm_path, config, method,
                         in_path, out_path, jobs);
    }
    if (tokenize->parsed())
      return cmd_tokenize(mode, tok_lm_path, tok_dict_path, tok_n, tok_seed,
                          tok_beam, tok_in, tok_out);
    if (eval_cmd->parsed())
      return cmd_eval(src_path, pred_path, ref_path, eval_table);
    if (zipf->parsed()) return cmd_zipf(zipf_corpus, top_k);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
