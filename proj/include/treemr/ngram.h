/*!
 * \file treemr/ngram.h
 * \brief Interpolated absolute-discounting n-gram scorer over linearized
 *  annotated responses, with optional per-MR-signature sub-models.
 */
#ifndef TREEMR_NGRAM_H_
#define TREEMR_NGRAM_H_

#include <treemr/scorer.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace treemr {

struct NGramExample {
  MrTree mr;
  /*! \brief Linearized annotated response, without the trailing Eos. */
  std::vector<Token> tokens;
};

struct NGramOptions {
  int order = 4;
  double discount = 0.75;
  /*! \brief Signatures with at least this many examples get their own sub-model. */
  int min_signature_examples = 5;
};

/*!
 * \brief P_k(w|h) = max(c(h,w) - D, 0) / c(h) + D * N1+(h) / c(h) * P_{k-1}(w|h'),
 *  with P_0 uniform. Contexts never seen fall through to the next lower order.
 *  A signature sub-model uses the global model's distribution as its P_0.
 */
class NGramModel : public Scorer {
 public:
  /*! \throws EmptyCorpus */
  static NGramModel Train(std::span<const NGramExample> corpus, Vocabulary vocab,
                          NGramOptions options = {});

  const Vocabulary& vocabulary() const override { return vocab_; }
  std::vector<double> LogProbs(std::span<const int> prefix,
                               const ScoringContext& context) const override;

  /*! \brief Next-token probabilities; an empty signature means the global model. */
  std::vector<double> Probabilities(std::span<const int> prefix,
                                    const std::string& signature = {}) const;
  /*! \brief Natural-log likelihood of `ids` followed by Eos. */
  double LogLikelihood(std::span<const int> ids, const std::string& signature = {}) const;

  /*! \brief The same model without its counts of order above `order`. */
  NGramModel Truncated(int order) const;

  bool HasSubModel(const std::string& signature) const {
    return sub_models_.count(signature) != 0;
  }
  size_t sub_model_count() const { return sub_models_.size(); }
  const NGramOptions& options() const { return options_; }

  nlohmann::json ToJson() const;
  static NGramModel FromJson(const nlohmann::json& j);
  void Save(const std::string& path) const;
  static NGramModel Load(const std::string& path);

  static constexpr int kFormatVersion = 1;

 private:
  struct ContextStats {
    int64_t total = 0;
    std::map<int, int64_t> next;
  };
  // tables[k] maps a context of k tokens (padding = -1) to its continuation counts.
  using CountTables = std::vector<std::map<std::vector<int>, ContextStats>>;

  static void Count(const std::vector<int>& ids, int order, CountTables* tables);
  void Interpolate(const CountTables& tables, std::span<const int> prefix,
                   std::vector<double>* probs) const;

  Vocabulary vocab_;
  NGramOptions options_;
  CountTables global_;
  std::map<std::string, CountTables> sub_models_;
};

/*! \brief Maps tokens through `vocab` and appends the Eos id. */
std::vector<int> ToIds(const Vocabulary& vocab, std::span<const Token> tokens);

}  // namespace treemr

#endif  // TREEMR_NGRAM_H_
