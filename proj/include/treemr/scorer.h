/*!
 * \file treemr/scorer.h
 * \brief Token vocabulary and the next-token distribution interface used by the
 *  beam search.
 */
#ifndef TREEMR_SCORER_H_
#define TREEMR_SCORER_H_

#include <treemr/mr_tree.h>

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace treemr {

/*!
 * \brief Dense bidirectional token-string <-> id map. Ids 0, 1, 2 are reserved
 *  for `<unk>`, `]` and `</s>`.
 */
class Vocabulary {
 public:
  static constexpr int kUnk = 0;
  static constexpr int kClose = 1;
  static constexpr int kEos = 2;

  Vocabulary();

  /*! \brief Id of `token`, adding it when new. */
  int Add(std::string_view token);
  int Add(const Token& token) { return Add(token.ToString()); }
  std::optional<int> Find(std::string_view token) const;
  /*! \brief Id of `token`, kUnk when absent. */
  int Id(std::string_view token) const;
  int Id(const Token& token) const { return Id(token.ToString()); }
  const std::string& String(int id) const { return strings_.at(id); }
  Token ToToken(int id) const { return Token::FromString(String(id)); }
  int size() const { return static_cast<int>(strings_.size()); }
  const std::vector<std::string>& strings() const { return strings_; }

  nlohmann::json ToJson() const;
  static Vocabulary FromJson(const nlohmann::json& j);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.strings_ == b.strings_;
  }

 private:
  std::vector<std::string> strings_;
  std::unordered_map<std::string, int> ids_;
};

/*! \brief Per-MR information a scorer conditions on; computed once per decode. */
struct ScoringContext {
  const MrTree* mr = nullptr;
  /*! \brief Value-free canonical skeleton of the MR. */
  std::string signature;
  /*! \brief Linearized MR mapped through the vocabulary. */
  std::vector<int> mr_token_ids;
};

/*! \brief Source of next-token log-probabilities over a fixed vocabulary. */
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual const Vocabulary& vocabulary() const = 0;
  virtual ScoringContext MakeContext(const MrTree& mr) const;
  /*!
   * \brief Full-vocabulary log-probability vector for the token following `prefix`.
   * \throws UnknownToken when the prefix holds an id outside the vocabulary.
   */
  virtual std::vector<double> LogProbs(std::span<const int> prefix,
                                       const ScoringContext& context) const = 0;

 protected:
  void CheckPrefix(std::span<const int> prefix) const;
};

/*! \brief Every token gets log(1/V). */
class UniformScorer : public Scorer {
 public:
  explicit UniformScorer(Vocabulary vocab) : vocab_(std::move(vocab)) {}

  const Vocabulary& vocabulary() const override { return vocab_; }
  std::vector<double> LogProbs(std::span<const int> prefix,
                               const ScoringContext& context) const override;

 private:
  Vocabulary vocab_;
};

/*! \brief Vocabulary over every ontology label plus the words of `sequences`. */
Vocabulary BuildVocabulary(const Ontology& ontology,
                           std::span<const std::vector<Token>> sequences);

}  // namespace treemr

#endif  // TREEMR_SCORER_H_
