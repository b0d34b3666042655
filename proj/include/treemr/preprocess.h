/*!
 * \file treemr/preprocess.h
 * \brief Training-data transforms: argument ordering, reference filtering and
 *  flat key-value MRs for baselines.
 */
#ifndef TREEMR_PREPROCESS_H_
#define TREEMR_PREPROCESS_H_

#include <treemr/mr_tree.h>

#include <string>
#include <vector>

namespace treemr {

/*!
 * \brief Sorts the arguments of every dialog act by label (ties: serialized
 *  subtree). Relation children and subfields keep their order.
 */
MrTree Canonicalize(const MrTree& tree);

/*!
 * \brief Removes MR content the reference does not express. Nodes elided in the
 *  reference because a structurally identical node is realized elsewhere are kept.
 * \throws NoValidAlignment when the reference contains structure absent from the MR.
 */
MrTree FilterToReference(const MrTree& mr, const AnnotatedNode& reference);

struct FlatSlot {
  std::string key;
  /*! \brief 1-based index of the dialog act the argument belongs to. */
  int act_index = 0;
  /*! \brief Leaf value, or the space-joined leaf values of a nested argument. */
  std::string value;

  friend bool operator==(const FlatSlot&, const FlatSlot&) = default;
};

struct FlatMr {
  std::vector<FlatSlot> slots;
  /*! \brief `key<k>[value]` items separated by spaces. */
  std::string ToString() const;
};

/*! \brief Drops discourse structure; acts in global order, arguments alphabetical. */
FlatMr Flatten(const MrTree& tree);

/*! \brief Delexicalized, canonicalized skeleton with every value removed. */
std::string Signature(const MrTree& tree);

}  // namespace treemr

#endif  // TREEMR_PREPROCESS_H_
