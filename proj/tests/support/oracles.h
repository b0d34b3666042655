/*!
 * \file oracles.h
 * \brief Independent reference implementations used by the tests.
 */
#ifndef TREEMR_TESTS_ORACLES_H_
#define TREEMR_TESTS_ORACLES_H_

#include <treemr/mr_tree.h>

#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace treemr {

// Readable gtest failure messages.
inline void PrintTo(const MrTree& t, std::ostream* os) { *os << ToString(t); }
inline void PrintTo(const AnnotatedNode& t, std::ostream* os) { *os << ToString(t); }
inline void PrintTo(const Token& t, std::ostream* os) { *os << t.ToString(); }

}  // namespace treemr

namespace treemr::testing {

struct RandomMrOptions {
  int max_nodes = 7;
  /*! \brief Dialog acts may have no arguments, which lets small budgets nest relations. */
  bool allow_empty_acts = true;
  /*! \brief Leaf values are drawn from this many strings; small pools give same-value groups. */
  int value_pool = 2;
};

/*! \brief Random weather-ontology MR with at most `max_nodes` nodes. */
MrTree RandomMr(std::mt19937_64& rng, const RandomMrOptions& options = {});

/*! \brief Random annotated tree: RandomMr with words sprinkled into every span. */
AnnotatedNode RandomAnnotated(std::mt19937_64& rng, const RandomMrOptions& options = {});

/*!
 * \brief Every skeleton (Open/Close tokens, no Eos) compatible with the MR,
 *  enumerated from the declarative rules: pick a downward-closed set of elided
 *  nodes where each elided node keeps a realized twin, then emit the realized
 *  children of every node in MR order (JOIN) or in any order (everything else).
 */
std::set<std::vector<Token>> BruteForceSkeletons(const MrTree& mr);

/*! \brief Skeletons the automaton accepts, found by exhaustive search over structural tokens. */
std::set<std::vector<Token>> AutomatonSkeletons(const MrTree& mr);

/*!
 * \brief Structural tokens (Open labels of the MR, Close, Eos) that keep `prefix`
 *  on the way to some skeleton in `valid`.
 */
std::set<Token> ValidContinuations(const std::set<std::vector<Token>>& valid,
                                   const std::vector<Token>& prefix);

/*! \brief Distinct Open labels of the MR plus Close and Eos. */
std::vector<Token> StructuralAlphabet(const MrTree& mr);

std::string SkeletonString(const std::vector<Token>& tokens);

}  // namespace treemr::testing

#endif  // TREEMR_TESTS_ORACLES_H_
