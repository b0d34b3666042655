/*!
 * \file constraint.cc
 * \brief Alignment-state automaton behind constrained decoding and tree accuracy.
 */
#include <treemr/constraint.h>

#include <algorithm>
#include <functional>

namespace treemr {

namespace {

const std::vector<int> kNoNodes;

// Serialized subtree: equal strings iff structurally identical subtrees.
std::string SubtreeKey(const MrNode& node) {
  std::string key = "[" + node.label;
  if (node.IsLeaf()) key += " " + node.value;
  for (const auto& c : node.children) key += " " + SubtreeKey(c);
  key += " ]";
  return key;
}

void Normalize(AlignmentSet* states) {
  std::sort(states->begin(), states->end());
  states->erase(std::unique(states->begin(), states->end()), states->end());
}

// Marks `roots` and their subtrees as elided. Fails when some newly elided node
// would leave its same-value group without an un-elided member.
bool ElideSubtrees(const ConstraintTracker& tracker, const std::vector<int>& roots,
                   std::vector<bool>* elided) {
  std::vector<int> added;
  for (int r : roots) {
    for (int x : tracker.Subtree(r)) {
      if (!(*elided)[x]) {
        (*elided)[x] = true;
        added.push_back(x);
      }
    }
  }
  for (int x : added) {
    const auto& options = tracker.EllipsisOptions(x);
    bool usable = std::any_of(options.begin(), options.end(),
                              [&](int y) { return !(*elided)[y]; });
    if (!usable) return false;
  }
  return true;
}

void AcceptOpen(const AlignmentState& state, const std::string& label,
                const ConstraintTracker& tracker, AcceptMode mode, AlignmentSet* out) {
  for (int candidate : tracker.NodesWithLabel(label)) {
    if (tracker.Parent(candidate) != state.parent) continue;
    if (state.coverage[candidate] || state.elided[candidate]) continue;

    AlignmentState next = state;
    if (tracker.IsJoin(state.parent)) {
      const auto& siblings = tracker.Children(state.parent);
      int index = tracker.SiblingIndex(candidate);
      bool later_covered = false;
      for (size_t i = index + 1; i < siblings.size(); ++i) {
        if (state.coverage[siblings[i]]) later_covered = true;
      }
      if (later_covered) continue;
      if (mode == AcceptMode::kStrict) {
        // Earlier siblings that are still open can only be realized through ellipsis now.
        std::vector<int> skipped;
        for (int i = 0; i < index; ++i) {
          int s = siblings[i];
          if (!state.coverage[s] && !state.elided[s]) skipped.push_back(s);
        }
        if (!ElideSubtrees(tracker, skipped, &next.elided)) continue;
      }
    }
    next.parent = candidate;
    next.coverage[candidate] = true;
    out->push_back(std::move(next));
  }
}

void AcceptClose(const AlignmentState& state, const ConstraintTracker& tracker,
                 AcceptMode mode, AlignmentSet* out) {
  if (state.parent == kRootSentinel) return;
  AlignmentState next = state;
  if (mode == AcceptMode::kStrict) {
    std::vector<int> missing;
    for (int child : tracker.Children(state.parent)) {
      if (!state.coverage[child] && !state.elided[child]) missing.push_back(child);
    }
    if (!ElideSubtrees(tracker, missing, &next.elided)) return;
  }
  next.parent = tracker.Parent(state.parent);
  out->push_back(std::move(next));
}

}  // namespace

std::vector<std::vector<int>> ComputeEllipsisOptions(const MrTree& mr) {
  std::vector<std::string> keys;
  std::function<void(const MrNode&)> visit = [&](const MrNode& node) {
    keys.push_back(SubtreeKey(node));
    for (const auto& c : node.children) visit(c);
  };
  visit(mr.root());

  std::map<std::string, std::vector<int>> groups;
  for (int id = 0; id < static_cast<int>(keys.size()); ++id) groups[keys[id]].push_back(id);
  std::vector<std::vector<int>> options(keys.size());
  for (int id = 0; id < static_cast<int>(keys.size()); ++id) options[id] = groups[keys[id]];
  return options;
}

ConstraintTracker::ConstraintTracker(const MrTree& mr) {
  std::function<int(const MrNode&, int, int)> visit = [&](const MrNode& node, int parent,
                                                          int index) {
    int id = static_cast<int>(labels_.size());
    labels_.push_back(node.label);
    parent_.push_back(parent);
    sibling_index_.push_back(index);
    children_.emplace_back();
    join_.push_back(node.kind == NodeKind::kRelation && node.label == "JOIN");
    label_index_[node.label].push_back(id);
    for (size_t i = 0; i < node.children.size(); ++i) {
      int child = visit(node.children[i], id, static_cast<int>(i));
      children_[id].push_back(child);
    }
    return id;
  };
  visit(mr.root(), kRootSentinel, 0);

  int n = node_count();
  subtree_.resize(n);
  for (int id = n - 1; id >= 0; --id) {
    subtree_[id].push_back(id);
    for (int c : children_[id]) {
      subtree_[id].insert(subtree_[id].end(), subtree_[c].begin(), subtree_[c].end());
    }
  }
  ellipsis_options_ = ComputeEllipsisOptions(mr);
}

const std::vector<int>& ConstraintTracker::Children(int id) const {
  return id == kRootSentinel ? root_children_ : children_[id];
}

const std::vector<int>& ConstraintTracker::NodesWithLabel(std::string_view label) const {
  auto it = label_index_.find(label);
  return it == label_index_.end() ? kNoNodes : it->second;
}

AlignmentSet InitialStates(const ConstraintTracker& tracker) {
  AlignmentState init;
  init.parent = kRootSentinel;
  init.coverage.assign(tracker.node_count(), false);
  init.elided.assign(tracker.node_count(), false);
  return {init};
}

std::optional<AlignmentSet> AcceptToken(const AlignmentSet& states, const Token& token,
                                        const ConstraintTracker& tracker, AcceptMode mode) {
  AlignmentSet next;
  for (const auto& state : states) {
    if (state.finished) continue;
    switch (token.type) {
      case Token::Type::kWord:
        next.push_back(state);
        break;
      case Token::Type::kOpen:
        AcceptOpen(state, token.text, tracker, mode, &next);
        break;
      case Token::Type::kClose:
        AcceptClose(state, tracker, mode, &next);
        break;
      case Token::Type::kEos:
        if (state.parent == kRootSentinel && state.coverage[0]) {
          AlignmentState done = state;
          done.finished = true;
          next.push_back(std::move(done));
        }
        break;
    }
  }
  if (next.empty()) return std::nullopt;
  Normalize(&next);
  return next;
}

std::vector<double> MaskScores(const AlignmentSet& states, const ConstraintTracker& tracker,
                               std::span<const Token> candidates,
                               std::span<const double> scores) {
  std::vector<double> out(scores.begin(), scores.end());
  for (size_t i = 0; i < candidates.size() && i < out.size(); ++i) {
    if (out[i] == kMaskedScore) continue;
    if (!AcceptToken(states, candidates[i], tracker)) out[i] = kMaskedScore;
  }
  return out;
}

CheckResult CheckTreeDetailed(const ConstraintTracker& tracker, std::span<const Token> output,
                              AcceptMode mode) {
  CheckResult result;
  AlignmentSet states = InitialStates(tracker);
  auto step = [&](const Token& tok, size_t position) {
    auto next = AcceptToken(states, tok, tracker, mode);
    if (!next) {
      result.rejected_at = position;
      return false;
    }
    states = std::move(*next);
    return true;
  };
  for (size_t i = 0; i < output.size(); ++i) {
    if (!step(output[i], i)) return result;
  }
  if (output.empty() || !output.back().IsEos()) {
    if (!step(Token::Eos(), output.size())) return result;
  }
  result.accepted = true;
  result.final_states = std::move(states);
  return result;
}

bool CheckTree(const ConstraintTracker& tracker, std::span<const Token> output) {
  return CheckTreeDetailed(tracker, output).accepted;
}

bool CheckTree(const MrTree& mr, std::span<const Token> output) {
  return CheckTree(ConstraintTracker(mr), output);
}

TreeMatcher::TreeMatcher(const MrTree& mr) : tracker_(mr), states_(InitialStates(tracker_)) {}

bool TreeMatcher::AcceptToken(const Token& token) {
  auto next = treemr::AcceptToken(states_, token, tracker_);
  if (!next) return false;
  states_ = std::move(*next);
  return true;
}

bool TreeMatcher::CanAccept(const Token& token) const {
  return treemr::AcceptToken(states_, token, tracker_).has_value();
}

bool TreeMatcher::IsFinished() const {
  return std::any_of(states_.begin(), states_.end(),
                     [](const AlignmentState& s) { return s.finished; });
}

}  // namespace treemr
