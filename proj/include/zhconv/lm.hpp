#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace zhconv {

class LmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using TokenSeq = std::vector<std::string>;

// Pre-segmented training text: one token sequence per sentence.
struct SegmentedCorpus {
  std::vector<TokenSeq> sentences;

  // One sentence per line, tokens separated by spaces. Blank lines skipped.
  static SegmentedCorpus read(std::istream& in);
  static SegmentedCorpus read_file(const std::string& path);
  void write(std::ostream& out) const;
};

enum class Smoothing { WittenBell, KneserNey, AddK };

struct SmoothingSpec {
  Smoothing kind = Smoothing::KneserNey;
  double k = 0.0;  // only for AddK

  static SmoothingSpec parse(const std::string& text);
  std::string str() const;
};

// Log-probability scorer over subword token sequences. Sentences are
// scored as BOS-padded token transitions plus one EOS event; that same
// event space is the perplexity denominator.
class LmScorer {
 public:
  virtual ~LmScorer() = default;

  // Number of trailing history tokens that can affect a prediction.
  virtual size_t context_size() const = 0;

  // log P(token | history). history is the full preceding token list;
  // implementations truncate to context_size(). OOV tokens map to UNK.
  virtual double token_log_prob(std::span<const std::string> history,
                                const std::string& token) const = 0;

  // log P(EOS | history).
  virtual double end_log_prob(std::span<const std::string> history) const = 0;

  // Sum of per-step conditional log-probs; 0 for an empty sequence
  // with eos=false.
  double sequence_log_prob(std::span<const std::string> tokens,
                           bool eos = true) const;
};

// Mergeable raw n-gram counts, for sharded corpus training.
struct NgramCounts {
  int order = 0;
  std::vector<std::string> vocab;                 // real tokens, first-seen
  std::unordered_map<std::string, int32_t> ids;   // token -> id (>= 3)
  // counts[k-1]: order-k grams (BOS-padded histories, EOS events)
  std::vector<std::map<std::vector<int32_t>, int64_t>> grams;

  explicit NgramCounts(int order);
  void add(const SegmentedCorpus& corpus);
  void add_sentence(const TokenSeq& tokens);
  void merge(const NgramCounts& other);
};

class NgramModel : public LmScorer {
 public:
  static NgramModel train(const SegmentedCorpus& corpus, int order,
                          SmoothingSpec smoothing);
  static NgramModel from_counts(NgramCounts counts, SmoothingSpec smoothing);

  size_t context_size() const override {
    return static_cast<size_t>(order_ - 1);
  }
  double token_log_prob(std::span<const std::string> history,
                        const std::string& token) const override;
  double end_log_prob(std::span<const std::string> history) const override;

  int order() const { return order_; }
  SmoothingSpec smoothing() const { return smoothing_; }
  const std::vector<std::string>& vocab() const { return counts_.vocab; }
  // Size of the prediction event space: vocab plus UNK and EOS.
  size_t event_space_size() const { return counts_.vocab.size() + 2; }

  // Conditional probability of an event id given a BOS-padded id history.
  // Event ids: 0=UNK, 2=EOS, real tokens from 3. Exposed for the
  // normalization property tests.
  double event_prob(const std::vector<int32_t>& history, int32_t event) const;
  int32_t token_id(const std::string& token) const;  // UNK when absent

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static NgramModel load(std::istream& in);
  static NgramModel load_file(const std::string& path);

 private:
  NgramModel() = default;
  void finalize();
  std::vector<int32_t> id_history(std::span<const std::string> history) const;
  double prob_rec(int level, const std::vector<int32_t>& context,
                  int32_t event) const;

  int order_ = 0;
  SmoothingSpec smoothing_;
  NgramCounts counts_{1};

  // derived, rebuilt by finalize()
  std::vector<std::map<std::vector<int32_t>, int64_t>> hist_total_;
  std::vector<std::map<std::vector<int32_t>, int64_t>> hist_types_;
  std::vector<std::map<std::vector<int32_t>, int64_t>> cont_;        // k < order
  std::vector<std::map<std::vector<int32_t>, int64_t>> cont_total_;  // per history
  std::vector<std::map<std::vector<int32_t>, int64_t>> cont_types_;
  std::vector<double> discount_;
};

double perplexity(const LmScorer& lm, const SegmentedCorpus& corpus);

inline constexpr int32_t kUnkId = 0;
inline constexpr int32_t kBosId = 1;
inline constexpr int32_t kEosId = 2;
inline constexpr const char* kUnkToken = "<unk>";

}  // namespace zhconv
