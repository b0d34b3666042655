/*!
 * \file treemr/metrics.h
 * \brief Tree accuracy, BLEU-4 and lexical diversity.
 */
#ifndef TREEMR_METRICS_H_
#define TREEMR_METRICS_H_

#include <treemr/mr_tree.h>

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace treemr {

using Sentence = std::vector<std::string>;

struct TreeAccuracyResult {
  double accuracy = 0.0;
  std::vector<bool> valid;
};

/*! \throws EmptyCorpus */
TreeAccuracyResult TreeAccuracy(std::span<const MrTree> mrs,
                                std::span<const std::vector<Token>> predictions);

/*!
 * \brief Corpus BLEU-4: clipped n-gram counts summed over the corpus, geometric
 *  mean of the four precisions, brevity penalty against the closest reference
 *  length (shorter on ties). No smoothing: any zero precision gives 0.
 * \throws EmptyCorpus
 */
double Bleu4(std::span<const Sentence> hypotheses,
             std::span<const std::vector<Sentence>> references);

/*! \brief Sentence BLEU-4 with add-one smoothing on the 2- to 4-gram precisions. */
double SentenceBleu(const Sentence& hypothesis, std::span<const Sentence> references);

/*!
 * \brief For each group of hypotheses sharing a flat MR, the index of the one
 *  with the highest SentenceBleu against that group's references (first on ties).
 */
std::vector<size_t> SelectBestPerFlatMr(std::span<const std::vector<Sentence>> groups,
                                        std::span<const std::vector<Sentence>> references);

struct Diversity {
  int64_t unique_tokens = 0;
  int64_t unique_trigrams = 0;
  double shannon_entropy_bits = 0.0;
  /*! \brief H(w2 | w1) over within-sentence bigrams. */
  double conditional_bigram_entropy_bits = 0.0;
};

Diversity ComputeDiversity(std::span<const Sentence> corpus);

struct ExampleRecord {
  size_t index = 0;
  bool tree_valid = false;
  bool failed = false;
  std::string prediction;
};

struct EvalReport {
  static constexpr int kSchemaVersion = 1;
  double tree_accuracy = 0.0;
  double bleu4 = 0.0;
  Diversity diversity;
  int64_t examples = 0;
  int64_t failures = 0;
  std::vector<ExampleRecord> records;

  nlohmann::json ToJson() const;
};

}  // namespace treemr

#endif  // TREEMR_METRICS_H_
