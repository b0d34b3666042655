/*!
 * \file preprocess.cc
 */
#include <treemr/constraint.h>
#include <treemr/error.h>
#include <treemr/preprocess.h>

#include <algorithm>
#include <functional>
#include <set>

namespace treemr {

namespace {

MrNode CanonicalNode(const MrNode& node) {
  MrNode out = node;
  for (auto& c : out.children) c = CanonicalNode(c);
  if (node.kind == NodeKind::kAct) {
    std::vector<std::pair<std::string, MrNode>> keyed;
    for (auto& c : out.children) keyed.emplace_back(ToString(MrTree(c)), std::move(c));
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
      if (a.second.label != b.second.label) return a.second.label < b.second.label;
      return a.first < b.first;
    });
    out.children.clear();
    for (auto& [_, c] : keyed) out.children.push_back(std::move(c));
  }
  return out;
}

void LeafValues(const MrNode& node, std::vector<std::string>* out) {
  if (node.IsLeaf()) {
    if (!node.value.empty()) out->push_back(node.value);
    return;
  }
  for (const auto& c : node.children) LeafValues(c, out);
}

void StripValues(MrNode* node) {
  node->value.clear();
  for (auto& c : node->children) StripValues(&c);
}

}  // namespace

MrTree Canonicalize(const MrTree& tree) { return MrTree(CanonicalNode(tree.root())); }

MrTree FilterToReference(const MrTree& mr, const AnnotatedNode& reference) {
  ConstraintTracker tracker(mr);
  auto reference_tokens = Linearize(reference);
  auto relaxed = CheckTreeDetailed(tracker, reference_tokens, AcceptMode::kRelaxed);
  if (!relaxed.accepted) {
    throw NoValidAlignment("reference structure is not part of the MR (token " +
                           std::to_string(*relaxed.rejected_at) + ")");
  }
  // Flat list of nodes by DFS id.
  std::vector<const MrNode*> nodes;
  std::function<void(const MrNode&)> collect = [&](const MrNode& n) {
    nodes.push_back(&n);
    for (const auto& c : n.children) collect(c);
  };
  collect(mr.root());

  // Labels alone can leave several alignments; prefer the one whose realized
  // leaves carry the reference's values, then the one realizing the most nodes,
  // then the smallest ids.
  std::multiset<std::pair<std::string, std::string>> spoken;
  std::function<void(const AnnotatedNode&)> leaves = [&](const AnnotatedNode& n) {
    if (n.kind == NodeKind::kArgument && n.children.empty()) {
      std::string value;
      for (const auto& w : n.Words()) value += (value.empty() ? "" : " ") + w;
      spoken.emplace(n.label, value);
    }
    for (const auto& c : n.children) leaves(c);
  };
  leaves(reference);
  auto rank = [&](const AlignmentState& st) {
    int64_t matched = 0;
    for (size_t id = 0; id < nodes.size(); ++id) {
      if (st.coverage[id] && nodes[id]->IsLeaf() && nodes[id]->kind == NodeKind::kArgument) {
        matched += spoken.count({nodes[id]->label, nodes[id]->value}) > 0;
      }
    }
    return std::make_pair(matched, std::count(st.coverage.begin(), st.coverage.end(), true));
  };
  const AlignmentState* best = nullptr;
  std::pair<int64_t, int64_t> best_rank;
  for (const auto& s : relaxed.final_states) {
    auto r = rank(s);
    if (best == nullptr || r > best_rank || (r == best_rank && s.coverage > best->coverage)) {
      best = &s;
      best_rank = r;
    }
  }
  const auto& covered = best->coverage;

  // A realized node keeps its realized children plus children elided in favour of a
  // realized twin; an elided twin mirrors the filtered form of the twin it defers to.
  std::function<std::optional<MrNode>(int)> filter = [&](int id) -> std::optional<MrNode> {
    if (!covered[id]) {
      for (int twin : tracker.EllipsisOptions(id)) {
        if (twin != id && covered[twin]) return filter(twin);
      }
      return std::nullopt;
    }
    MrNode out = *nodes[id];
    out.children.clear();
    for (int c : tracker.Children(id)) {
      if (auto kept = filter(c)) out.children.push_back(std::move(*kept));
    }
    if (!nodes[id]->IsLeaf() && out.children.empty() && nodes[id]->kind == NodeKind::kArgument) {
      return std::nullopt;
    }
    return out;
  };
  auto root = filter(0);
  if (!root) throw NoValidAlignment("reference realizes nothing of the MR");
  MrTree filtered(std::move(*root));
  if (!CheckTree(filtered, reference_tokens)) {
    throw NoValidAlignment("filtered MR still does not match the reference");
  }
  return filtered;
}

std::string FlatMr::ToString() const {
  std::string out;
  for (const auto& s : slots) {
    if (!out.empty()) out += ' ';
    out += s.key + std::to_string(s.act_index) + "[" + s.value + "]";
  }
  return out;
}

FlatMr Flatten(const MrTree& tree) {
  FlatMr flat;
  int act_index = 0;
  std::function<void(const MrNode&)> visit = [&](const MrNode& node) {
    if (node.kind == NodeKind::kAct) {
      ++act_index;
      std::vector<const MrNode*> args;
      for (const auto& c : node.children) args.push_back(&c);
      std::stable_sort(args.begin(), args.end(),
                       [](const MrNode* a, const MrNode* b) { return a->label < b->label; });
      for (const MrNode* a : args) {
        std::vector<std::string> values;
        LeafValues(*a, &values);
        std::string joined;
        for (const auto& v : values) joined += (joined.empty() ? "" : " ") + v;
        flat.slots.push_back({a->label, act_index, joined});
      }
      return;
    }
    for (const auto& c : node.children) visit(c);
  };
  visit(tree.root());
  return flat;
}

std::string Signature(const MrTree& tree) {
  MrNode root = Canonicalize(tree).root();
  StripValues(&root);
  return ToString(MrTree(root));
}

}  // namespace treemr
