/*!
 * \file treemr/ontology.h
 * \brief Legal dialog acts, discourse relations and arguments of a domain.
 */
#ifndef TREEMR_ONTOLOGY_H_
#define TREEMR_ONTOLOGY_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace treemr {

enum class NodeKind { kRelation, kAct, kArgument };

std::string_view NodeKindName(NodeKind kind);

struct ArgumentSpec {
  std::string name;
  /*! \brief The argument has a `<name>_not` variant. */
  bool has_not = false;
  /*! \brief The argument has a `<name>_summary` variant. */
  bool has_summary = false;
  std::vector<std::string> subfields;
};

struct LabelInfo {
  NodeKind kind;
  std::string canonical;
};

/*!
 * \brief The label inventory a tree is validated against.
 *
 * Acts and relations are matched case-insensitively and rendered upper-case.
 * Arguments are matched case-insensitively and rendered with the spelling
 * given in their ArgumentSpec. A trailing `_<digits>` (the `INFORM_1` display
 * convention) is stripped when the full label is unknown.
 */
class Ontology {
 public:
  Ontology(std::vector<std::string> dialog_acts, std::vector<std::string> discourse_relations,
           std::vector<ArgumentSpec> arguments, std::vector<std::string> delexicalized_args);

  /*! \brief Weather-domain acts, relations and arguments with their nested subfields. */
  static Ontology Weather();
  /*! \brief E2E restaurant-domain inventory. */
  static Ontology E2E();

  /*! \brief Copy of this ontology with one more argument. */
  Ontology WithArgument(ArgumentSpec spec, bool delexicalized = false) const;

  std::optional<LabelInfo> Resolve(std::string_view raw) const;

  /*! \brief Whether `label` may appear as a direct child of a dialog act. */
  bool IsActArgument(std::string_view label) const;
  /*! \brief Whether `child` is a declared subfield of the argument `parent`. */
  bool IsSubfield(std::string_view parent, std::string_view child) const;
  bool IsDelexicalized(std::string_view label) const;
  bool IsJoin(std::string_view label) const { return label == "JOIN"; }

  const std::set<std::string>& dialog_acts() const { return dialog_acts_; }
  const std::set<std::string>& discourse_relations() const { return discourse_relations_; }
  const std::vector<ArgumentSpec>& arguments() const { return arguments_; }
  const std::set<std::string>& delexicalized_args() const { return delexicalized_; }

  /*! \brief Every canonical label (acts, relations, arguments, variants, subfields). */
  std::vector<std::string> AllLabels() const;

 private:
  void Index();

  std::set<std::string> dialog_acts_;
  std::set<std::string> discourse_relations_;
  std::vector<ArgumentSpec> arguments_;
  std::set<std::string> delexicalized_;

  // lower-cased label -> info
  std::map<std::string, LabelInfo, std::less<>> lookup_;
  // canonical labels allowed directly under an act
  std::set<std::string, std::less<>> act_arguments_;
  // canonical parent -> canonical subfields
  std::map<std::string, std::set<std::string, std::less<>>, std::less<>> subfields_;
};

}  // namespace treemr

#endif  // TREEMR_ONTOLOGY_H_
