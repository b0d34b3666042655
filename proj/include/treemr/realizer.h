/*!
 * \file treemr/realizer.h
 * \brief Template realizer producing annotated responses for weather MRs.
 */
#ifndef TREEMR_REALIZER_H_
#define TREEMR_REALIZER_H_

#include <treemr/mr_tree.h>

#include <cstdint>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace treemr {

struct ActStyle {
  std::vector<std::string> prefix;
  /*! \brief Arguments realized up front, followed by a comma. */
  std::vector<std::string> lead;
  /*! \brief Join the remaining arguments as a list ("a , b and c"). */
  bool list = true;
};

/*!
 * \brief Phrase patterns. An argument pattern contains `{}` where the bracketed
 *  argument goes; a relation pattern contains `{0}`, `{1}` for its children.
 *  Argument keys are tried in the order `ACT.arg=value`, `ACT.arg`, `arg=value`,
 *  `arg/first_subfield`, `arg`.
 */
struct TemplateSet {
  std::map<std::string, std::vector<std::string>> arguments;
  std::map<std::string, ActStyle> acts;
  ActStyle default_act;
  /*! \brief Two-child patterns per relation. */
  std::map<std::string, std::vector<std::string>> relations;
  /*! \brief Separators for relations with any number of children. */
  std::map<std::string, std::vector<std::string>> separators;
  /*! \brief Realization order of arguments inside an act; unlisted ones go last. */
  std::vector<std::string> order;
  /*! \brief Arguments glued to the previous one without a list connective. */
  std::vector<std::string> attach;

  static TemplateSet Default();
  static TemplateSet FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

struct RealizeOptions {
  /*! \brief Probability of eliding one member of each repeated-argument group. */
  double ellipsis_prob = 0.5;
};

/*!
 * \brief Annotated response for `mr`; the result always passes CheckTree.
 * \throws NoTemplate
 */
AnnotatedNode Realize(const MrTree& mr, uint64_t seed, const TemplateSet& templates,
                      const RealizeOptions& options = {});

/*! \brief Space-joined words of an annotated tree. */
std::string SurfaceText(const AnnotatedNode& tree);

}  // namespace treemr

#endif  // TREEMR_REALIZER_H_
