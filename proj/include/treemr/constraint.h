/*!
 * \file treemr/constraint.h
 * \brief Incremental acceptance of linearized output trees against an input MR.
 *
 * The MR is numbered in depth-first order (root = 0). While an output is decoded,
 * a set of alignment states is kept: each state records which MR node the
 * currently open output bracket corresponds to, which nodes have been realized
 * (coverage) and which have been given up through ellipsis. Nodes with
 * structurally identical subtrees form a same-value group; any member of a group
 * may be elided as long as another member stays un-elided. Children of JOIN must
 * be realized in order; all other children may come in any order.
 */
#ifndef TREEMR_CONSTRAINT_H_
#define TREEMR_CONSTRAINT_H_

#include <treemr/mr_tree.h>

#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace treemr {

inline constexpr int kRootSentinel = -1;

/*! \brief Per-MR lookup tables; immutable and shareable across decodes. */
class ConstraintTracker {
 public:
  explicit ConstraintTracker(const MrTree& mr);

  int node_count() const { return static_cast<int>(labels_.size()); }
  /*! \brief Parent id, kRootSentinel for node 0. */
  int Parent(int id) const { return parent_[id]; }
  /*! \brief Ordered child ids; Children(kRootSentinel) is {0}. */
  const std::vector<int>& Children(int id) const;
  const std::string& Label(int id) const { return labels_[id]; }
  /*! \brief Node ids carrying `label`, ascending. Empty for foreign labels. */
  const std::vector<int>& NodesWithLabel(std::string_view label) const;
  /*! \brief Members of id's same-value group, ascending; always contains id. */
  const std::vector<int>& EllipsisOptions(int id) const { return ellipsis_options_[id]; }
  /*! \brief id and all of its descendants. */
  const std::vector<int>& Subtree(int id) const { return subtree_[id]; }
  bool IsJoin(int id) const { return id != kRootSentinel && join_[id]; }
  /*! \brief Position of id among its parent's children. */
  int SiblingIndex(int id) const { return sibling_index_[id]; }

  const std::map<std::string, std::vector<int>, std::less<>>& label_index() const {
    return label_index_;
  }
  const std::vector<std::vector<int>>& ellipsis_options() const { return ellipsis_options_; }

 private:
  std::vector<std::string> labels_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> sibling_index_;
  std::vector<std::vector<int>> subtree_;
  std::vector<char> join_;
  std::map<std::string, std::vector<int>, std::less<>> label_index_;
  std::vector<std::vector<int>> ellipsis_options_;
  std::vector<int> root_children_{0};
};

/*!
 * \brief Same-value groups of an MR: map from DFS id to the ids whose subtrees are
 *  structurally identical (same labels, children and values).
 */
std::vector<std::vector<int>> ComputeEllipsisOptions(const MrTree& mr);

/*! \brief One alignment hypothesis between the output prefix and the MR. */
struct AlignmentState {
  int parent = kRootSentinel;
  std::vector<bool> coverage;
  std::vector<bool> elided;
  /*! \brief End-of-sequence has been accepted. */
  bool finished = false;

  friend bool operator==(const AlignmentState&, const AlignmentState&) = default;
  friend bool operator<(const AlignmentState& a, const AlignmentState& b) {
    if (a.parent != b.parent) return a.parent < b.parent;
    if (a.finished != b.finished) return a.finished < b.finished;
    if (a.coverage != b.coverage) return a.coverage < b.coverage;
    return a.elided < b.elided;
  }
};

/*! \brief Sorted, duplicate-free set of alignment states. */
using AlignmentSet = std::vector<AlignmentState>;

enum class AcceptMode {
  /*! \brief Full coverage, ellipsis and JOIN-order checks. */
  kStrict,
  /*! \brief Closing brackets never check coverage and JOIN children may be skipped.
   *  Used to align references that express only part of an MR. */
  kRelaxed,
};

AlignmentSet InitialStates(const ConstraintTracker& tracker);

/*!
 * \brief Advances every state by one token. Words leave the states unchanged.
 * \return The successor states, or nullopt when no state accepts the token.
 */
std::optional<AlignmentSet> AcceptToken(const AlignmentSet& states, const Token& token,
                                        const ConstraintTracker& tracker,
                                        AcceptMode mode = AcceptMode::kStrict);

/*! \brief Log-probability given to rejected candidates. */
inline constexpr double kMaskedScore = -std::numeric_limits<double>::infinity();

/*!
 * \brief Trial-accepts each candidate against `states` and replaces the score of
 *  every rejected one by kMaskedScore. `states` is not modified.
 */
std::vector<double> MaskScores(const AlignmentSet& states, const ConstraintTracker& tracker,
                               std::span<const Token> candidates, std::span<const double> scores);

struct CheckResult {
  bool accepted = false;
  /*! \brief Index of the first rejected token, when rejected. */
  std::optional<size_t> rejected_at;
  /*! \brief Surviving states after the whole sequence (empty when rejected). */
  AlignmentSet final_states;
};

/*!
 * \brief Runs the automaton over a full output. An Eos is appended when the
 *  sequence does not end with one.
 */
CheckResult CheckTreeDetailed(const ConstraintTracker& tracker, std::span<const Token> output,
                              AcceptMode mode = AcceptMode::kStrict);
bool CheckTree(const MrTree& mr, std::span<const Token> output);
bool CheckTree(const ConstraintTracker& tracker, std::span<const Token> output);

/*! \brief Stateful convenience wrapper around AcceptToken for one decode. */
class TreeMatcher {
 public:
  explicit TreeMatcher(const MrTree& mr);

  bool AcceptToken(const Token& token);
  /*! \brief Would `token` be accepted now? Leaves the matcher untouched. */
  bool CanAccept(const Token& token) const;
  bool IsFinished() const;
  const AlignmentSet& states() const { return states_; }
  const ConstraintTracker& tracker() const { return tracker_; }

 private:
  ConstraintTracker tracker_;
  AlignmentSet states_;
};

}  // namespace treemr

#endif  // TREEMR_CONSTRAINT_H_
