#include "oracles.h"

#include <treemr/constraint.h>

#include <algorithm>
#include <functional>
#include <map>

namespace treemr::testing {

namespace {

const std::vector<std::string> kRelations = {"JOIN", "CONTRAST", "JUSTIFY"};
const std::vector<std::string> kActs = {"INFORM", "RECOMMEND", "YES", "NO"};
const std::vector<std::string> kLeafArgs = {"condition", "temp", "precip_type"};
const std::vector<std::string> kValues = {"sunny", "rain", "cold", "warm", "fog", "snow"};
const std::vector<std::string> kWords = {"it", "will", "be", "and", "with", "today", ","};

template <typename T>
const T& Pick(std::mt19937_64& rng, const std::vector<T>& items, size_t limit = SIZE_MAX) {
  size_t n = std::min(items.size(), limit);
  return items[std::uniform_int_distribution<size_t>(0, n - 1)(rng)];
}

bool Coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

class Generator {
 public:
  Generator(std::mt19937_64& rng, const RandomMrOptions& o) : rng_(rng), o_(o) {}

  MrNode Root() {
    int budget = std::uniform_int_distribution<int>(1, o_.max_nodes)(rng_);
    if (budget >= MinRelation() && Coin(rng_, 0.7)) return Relation(budget, 0);
    return Act(budget);
  }

 private:
  int MinAct() const { return o_.allow_empty_acts ? 1 : 2; }
  int MinRelation() const { return 1 + 2 * MinAct(); }

  MrNode Relation(int& budget, int depth) {
    std::string label = Pick(rng_, kRelations);
    --budget;
    int arity = label == "JOIN" ? std::uniform_int_distribution<int>(2, 3)(rng_) : 2;
    arity = std::max(2, std::min(arity, budget / MinAct()));
    std::vector<MrNode> children;
    for (int i = 0; i < arity; ++i) {
      int reserve = (arity - i - 1) * MinAct();
      int available = budget - reserve;
      if (depth < 2 && available >= MinRelation() && Coin(rng_, 0.3)) {
        int sub = std::uniform_int_distribution<int>(MinRelation(), available)(rng_);
        budget -= sub;
        children.push_back(Relation(sub, depth + 1));
        budget += sub;
      } else {
        int sub = i + 1 == arity ? available
                                 : std::uniform_int_distribution<int>(MinAct(), available)(rng_);
        budget -= sub;
        children.push_back(Act(sub));
        budget += sub;
      }
    }
    return MakeRelation(label, std::move(children));
  }

  // Consumes from `budget` and leaves the rest in it.
  MrNode Act(int& budget) {
    --budget;
    std::vector<MrNode> args;
    int wanted = std::uniform_int_distribution<int>(o_.allow_empty_acts ? 0 : 1, 3)(rng_);
    while (static_cast<int>(args.size()) < wanted && budget > 0) {
      if (budget >= 2 && Coin(rng_, 0.3)) {
        std::string sub = Coin(rng_, 0.5) ? "weekday" : "day";
        args.push_back(MakeArgument("date_time", {MakeArgument(sub, Value())}));
        budget -= 2;
      } else {
        args.push_back(MakeArgument(Pick(rng_, kLeafArgs), Value()));
        budget -= 1;
      }
    }
    return MakeAct(Pick(rng_, kActs), std::move(args));
  }

  std::string Value() { return Pick(rng_, kValues, static_cast<size_t>(o_.value_pool)); }

  std::mt19937_64& rng_;
  const RandomMrOptions& o_;
};

void Sprinkle(std::mt19937_64& rng, AnnotatedNode* node) {
  for (auto& span : node->spans) {
    if (node->kind == NodeKind::kArgument) break;
    int n = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int i = 0; i < n; ++i) span.push_back(Pick(rng, kWords));
  }
  for (auto& c : node->children) Sprinkle(rng, &c);
}

// Flat copy of the MR in DFS order, built without the library's tracker.
struct Flat {
  std::vector<std::string> label;
  std::vector<std::string> shape;  // full serialization of the subtree
  std::vector<int> parent;
  std::vector<std::vector<int>> children;
};

std::string Shape(const MrNode& n) {
  std::string s = "(" + n.label + "=" + n.value;
  for (const auto& c : n.children) s += Shape(c);
  return s + ")";
}

int FlattenInto(const MrNode& n, int parent, Flat* f) {
  int id = static_cast<int>(f->label.size());
  f->label.push_back(n.label);
  f->shape.push_back(Shape(n));
  f->parent.push_back(parent);
  f->children.emplace_back();
  for (const auto& c : n.children) {
    int child = FlattenInto(c, id, f);
    f->children[id].push_back(child);
  }
  return id;
}

std::vector<std::vector<Token>> Product(const std::vector<std::vector<std::vector<Token>>>& parts) {
  std::vector<std::vector<Token>> out{{}};
  for (const auto& options : parts) {
    std::vector<std::vector<Token>> next;
    for (const auto& prefix : out) {
      for (const auto& o : options) {
        auto s = prefix;
        s.insert(s.end(), o.begin(), o.end());
        next.push_back(std::move(s));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

MrTree RandomMr(std::mt19937_64& rng, const RandomMrOptions& options) {
  Generator g(rng, options);
  return MrTree(g.Root());
}

AnnotatedNode RandomAnnotated(std::mt19937_64& rng, const RandomMrOptions& options) {
  AnnotatedNode tree = ToAnnotated(RandomMr(rng, options));
  Sprinkle(rng, &tree);
  return tree;
}

std::set<std::vector<Token>> BruteForceSkeletons(const MrTree& mr) {
  Flat f;
  FlattenInto(mr.root(), -1, &f);
  const int n = static_cast<int>(f.label.size());
  std::set<std::vector<Token>> out;
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    auto elided = [&](int id) { return ((mask >> id) & 1) != 0; };
    if (elided(0)) continue;
    bool ok = true;
    for (int x = 1; x < n && ok; ++x) {
      if (!elided(x)) {
        ok = !elided(f.parent[x]);
        continue;
      }
      bool twin = false;
      for (int y = 0; y < n; ++y) twin |= y != x && !elided(y) && f.shape[y] == f.shape[x];
      ok = twin;
    }
    if (!ok) continue;

    std::function<std::vector<std::vector<Token>>(int)> realize = [&](int x) {
      std::vector<int> kids;
      for (int c : f.children[x]) {
        if (!elided(c)) kids.push_back(c);
      }
      std::vector<std::vector<int>> orders;
      if (f.label[x] == "JOIN") {
        orders.push_back(kids);
      } else {
        std::sort(kids.begin(), kids.end());
        do orders.push_back(kids);
        while (std::next_permutation(kids.begin(), kids.end()));
      }
      std::vector<std::vector<Token>> result;
      for (const auto& order : orders) {
        std::vector<std::vector<std::vector<Token>>> parts;
        for (int c : order) parts.push_back(realize(c));
        for (auto& body : Product(parts)) {
          std::vector<Token> s{Token::Open(f.label[x])};
          s.insert(s.end(), body.begin(), body.end());
          s.push_back(Token::Close());
          result.push_back(std::move(s));
        }
      }
      return result;
    };
    for (auto& s : realize(0)) out.insert(std::move(s));
  }
  return out;
}

std::vector<Token> StructuralAlphabet(const MrTree& mr) {
  std::set<std::string> labels;
  std::function<void(const MrNode&)> walk = [&](const MrNode& n) {
    labels.insert(n.label);
    for (const auto& c : n.children) walk(c);
  };
  walk(mr.root());
  std::vector<Token> out;
  for (const auto& l : labels) out.push_back(Token::Open(l));
  out.push_back(Token::Close());
  out.push_back(Token::Eos());
  return out;
}

std::set<std::vector<Token>> AutomatonSkeletons(const MrTree& mr) {
  ConstraintTracker tracker(mr);
  std::vector<Token> alphabet = StructuralAlphabet(mr);
  const size_t limit = 2 * static_cast<size_t>(tracker.node_count());
  std::set<std::vector<Token>> out;
  std::vector<Token> prefix;
  std::function<void(const AlignmentSet&)> search = [&](const AlignmentSet& states) {
    for (const auto& t : alphabet) {
      auto next = AcceptToken(states, t, tracker);
      if (!next) continue;
      if (t.IsEos()) {
        out.insert(prefix);
        continue;
      }
      if (prefix.size() >= limit) continue;
      prefix.push_back(t);
      search(*next);
      prefix.pop_back();
    }
  };
  search(InitialStates(tracker));
  return out;
}

std::set<Token> ValidContinuations(const std::set<std::vector<Token>>& valid,
                                   const std::vector<Token>& prefix) {
  std::set<Token> out;
  for (const auto& s : valid) {
    if (s.size() < prefix.size() || !std::equal(prefix.begin(), prefix.end(), s.begin())) {
      continue;
    }
    out.insert(s.size() == prefix.size() ? Token::Eos() : s[prefix.size()]);
  }
  return out;
}

std::string SkeletonString(const std::vector<Token>& tokens) { return JoinTokens(tokens); }

}  // namespace treemr::testing
