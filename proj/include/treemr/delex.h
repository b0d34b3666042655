/*!
 * \file treemr/delex.h
 * \brief Placeholder substitution for sparse argument values.
 *
 * A placeholder is a single word `__<LABEL>_<k>__`, LABEL being the upper-cased
 * argument label and k a 1-based counter per label within one example.
 */
#ifndef TREEMR_DELEX_H_
#define TREEMR_DELEX_H_

#include <treemr/mr_tree.h>
#include <treemr/ontology.h>

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

namespace treemr {

struct DelexEntry {
  std::string placeholder;
  std::string label;
  std::string value;
  friend bool operator==(const DelexEntry&, const DelexEntry&) = default;
};

class DelexTable {
 public:
  const std::vector<DelexEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  const DelexEntry* Find(std::string_view placeholder) const;

  /*! \brief Placeholder for (label, value): the existing one when `share`, else a new one. */
  const std::string& Assign(const std::string& label, const std::string& value, bool share);

  nlohmann::json ToJson() const;
  static DelexTable FromJson(const nlohmann::json& j);

  friend bool operator==(const DelexTable&, const DelexTable&) = default;

 private:
  std::vector<DelexEntry> entries_;
};

struct DelexOptions {
  /*! \brief Give every occurrence its own placeholder instead of sharing on equal values. */
  bool number_each_occurrence = false;
};

std::string MakePlaceholder(std::string_view label, int k);
bool IsPlaceholder(std::string_view word);

struct DelexMr {
  MrTree mr;
  DelexTable table;
};
struct DelexAnnotated {
  AnnotatedNode tree;
  DelexTable table;
};
struct DelexPair {
  MrTree mr;
  AnnotatedNode annotated;
  DelexTable table;
};

DelexMr Delexicalize(const MrTree& mr, const Ontology& ontology, DelexOptions options = {});
/*! \brief The full word span of each delexicalized leaf becomes one placeholder. */
DelexAnnotated Delexicalize(const AnnotatedNode& tree, const Ontology& ontology,
                            DelexOptions options = {});
/*!
 * \brief Builds the table from the MR and reuses it for the response, where the
 *  value is searched inside each leaf's span. Values the MR lacks are added.
 */
DelexPair Delexicalize(const MrTree& mr, const AnnotatedNode& annotated,
                       const Ontology& ontology, DelexOptions options = {});

/*!
 * \brief Replaces every placeholder word by the words of its value.
 * \throws UnknownPlaceholder
 */
std::vector<Token> Relexicalize(std::span<const Token> tokens, const DelexTable& table);
std::string RelexicalizeText(std::string_view text, const DelexTable& table);

}  // namespace treemr

#endif  // TREEMR_DELEX_H_
