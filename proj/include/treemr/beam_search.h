/*!
 * \file treemr/beam_search.h
 * \brief Beam search over a Scorer, optionally masked by the tree constraints.
 */
#ifndef TREEMR_BEAM_SEARCH_H_
#define TREEMR_BEAM_SEARCH_H_

#include <treemr/constraint.h>
#include <treemr/scorer.h>

#include <optional>
#include <string>
#include <vector>

namespace treemr {

enum class DecodeMode {
  /*! \brief Every expansion is masked by the constraint automaton. */
  kConstrained,
  kUnconstrained,
  /*! \brief Unconstrained beam, then tree-valid candidates are moved first. */
  kRerankByTreeAccuracy,
};

std::string_view DecodeModeName(DecodeMode mode);
/*! \brief Accepts "constrained", "unconstrained" and "rerank". */
DecodeMode ParseDecodeMode(std::string_view name);

struct DecodeConfig {
  int beam_size = 10;
  /*! \brief 0 means 2 * (MR linearization length) + 64. */
  int max_length = 0;
  DecodeMode mode = DecodeMode::kConstrained;
  /*! \brief Final scores are divided by length^length_penalty. */
  double length_penalty = 0.0;
};

int DefaultMaxLength(const MrTree& mr);

struct Candidate {
  /*! \brief Token ids, ending with Eos for finished candidates. */
  std::vector<int> ids;
  /*! \brief Sum of per-step log-probabilities. */
  double log_prob = 0.0;
  /*! \brief log_prob after length normalization; candidates are ranked by it. */
  double score = 0.0;
  bool tree_valid = false;
};

struct DecodeResult {
  /*! \brief Best first. */
  std::vector<Candidate> candidates;
  /*! \brief Set when no hypothesis reached an accepted Eos within max_length. */
  std::optional<std::string> failure;
  /*! \brief Best unfinished hypothesis on failure, for diagnostics. */
  std::optional<Candidate> partial;

  bool ok() const { return !failure.has_value(); }
};

/*! \throws Error on an invalid config. */
DecodeResult Decode(const MrTree& mr, const Scorer& scorer, const DecodeConfig& config);

/*! \brief Stable partition: tree-valid candidates first, original order kept in each class. */
std::vector<Candidate> RerankByTreeAccuracy(std::vector<Candidate> candidates,
                                            const MrTree& mr, const Vocabulary& vocab);

std::vector<Token> ToTokens(const Vocabulary& vocab, std::span<const int> ids);

}  // namespace treemr

#endif  // TREEMR_BEAM_SEARCH_H_
