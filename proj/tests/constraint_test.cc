#include <treemr/constraint.h>
#include <treemr/preprocess.h>

#include <gtest/gtest.h>

#include <functional>

#include "fixtures.h"
#include "oracles.h"

namespace treemr {
namespace {

using testing::AutomatonSkeletons;
using testing::BruteForceSkeletons;
using testing::RandomMr;
using testing::RandomMrOptions;
using testing::SkeletonString;

// Output tokens with labels spelled as the ontology spells them.
std::vector<Token> Canon(const char* text, const Ontology& o) {
  return Linearize(ParseAnnotated(text, o));
}

MrTree NumberingMr() { return ParseMr(testing::kNumberingMr, testing::LetterOntology()); }

TEST(ConstraintTracker, DepthFirstNumbering) {
  ConstraintTracker t(NumberingMr());
  ASSERT_EQ(t.node_count(), 7);
  std::vector<std::string> labels;
  for (int i = 0; i < 7; ++i) labels.push_back(t.Label(i));
  EXPECT_EQ(labels, (std::vector<std::string>{"JOIN", "INFORM", "A", "B", "INFORM", "B", "D"}));
  EXPECT_EQ(t.NodesWithLabel("INFORM"), (std::vector<int>{1, 4}));
  EXPECT_EQ(t.NodesWithLabel("B"), (std::vector<int>{3, 5}));
  EXPECT_EQ(t.Parent(0), kRootSentinel);
  EXPECT_EQ(t.Parent(5), 4);
  EXPECT_EQ(t.Children(0), (std::vector<int>{1, 4}));
  EXPECT_EQ(t.Children(kRootSentinel), (std::vector<int>{0}));
  EXPECT_TRUE(t.IsJoin(0));
  EXPECT_FALSE(t.IsJoin(1));
}

TEST(ConstraintTracker, WorkedEllipsisMap) {
  auto options = ComputeEllipsisOptions(NumberingMr());
  ASSERT_EQ(options.size(), 7u);
  for (int i = 0; i < 7; ++i) {
    if (i == 3 || i == 5) {
      EXPECT_EQ(options[i], (std::vector<int>{3, 5}));
    } else {
      EXPECT_EQ(options[i], std::vector<int>{i});
    }
  }
}

TEST(ConstraintTracker, SingleNode) {
  ConstraintTracker t(MrTree(MakeAct("INFORM", {})));
  EXPECT_EQ(t.node_count(), 1);
  EXPECT_TRUE(t.Children(0).empty());
}

TEST(ConstraintTracker, MatchesIndependentTraversal) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    MrTree mr = RandomMr(rng, {12, true, 2});
    ConstraintTracker t(mr);
    std::vector<const MrNode*> nodes;
    std::vector<int> parents;
    std::function<void(const MrNode&, int)> dfs = [&](const MrNode& n, int parent) {
      int id = static_cast<int>(nodes.size());
      nodes.push_back(&n);
      parents.push_back(parent);
      for (const auto& c : n.children) dfs(c, id);
    };
    dfs(mr.root(), kRootSentinel);
    ASSERT_EQ(t.node_count(), static_cast<int>(nodes.size()));
    for (int id = 0; id < t.node_count(); ++id) {
      EXPECT_EQ(t.Label(id), nodes[id]->label);
      EXPECT_EQ(t.Parent(id), parents[id]);
      for (int c : t.Children(id)) EXPECT_EQ(t.Parent(c), id);
      EXPECT_EQ(t.Children(id).size(), nodes[id]->children.size());
    }
  }
}

std::string Shape(const MrNode& n) {
  std::string s = n.label + "<" + n.value + ">(";
  for (const auto& c : n.children) s += Shape(c) + ",";
  return s + ")";
}

TEST(ComputeEllipsisOptions, SubtreeShapeOracle) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) {
    MrTree mr = RandomMr(rng, {12, true, 2});
    std::vector<std::string> shapes;
    std::function<void(const MrNode&)> dfs = [&](const MrNode& n) {
      shapes.push_back(Shape(n));
      for (const auto& c : n.children) dfs(c);
    };
    dfs(mr.root());
    auto options = ComputeEllipsisOptions(mr);
    for (size_t x = 0; x < shapes.size(); ++x) {
      std::vector<int> expected;
      for (size_t y = 0; y < shapes.size(); ++y) {
        if (shapes[y] == shapes[x]) expected.push_back(static_cast<int>(y));
      }
      EXPECT_EQ(options[x], expected);
    }
  }
}

TEST(ComputeEllipsisOptions, DistinctSubtreesAreSingletons) {
  MrTree mr = ParseMr("[JOIN [INFORM [A x ] ] [INFORM [B y ] ] ]", testing::LetterOntology());
  auto options = ComputeEllipsisOptions(mr);
  for (size_t i = 0; i < options.size(); ++i) EXPECT_EQ(options[i].size(), 1u);
}

TEST(ComputeEllipsisOptions, SnowQuestionGroups) {
  MrTree mr = ParseMr(testing::kParkerMr, testing::WeatherWithCloudCoverage());
  ConstraintTracker t(mr);
  auto date_times = t.NodesWithLabel("date_time");
  auto locations = t.NodesWithLabel("location");
  ASSERT_EQ(date_times.size(), 2u);
  ASSERT_EQ(locations.size(), 2u);
  EXPECT_EQ(t.EllipsisOptions(date_times[0]), date_times);
  EXPECT_EQ(t.EllipsisOptions(date_times[1]), date_times);
  EXPECT_EQ(t.EllipsisOptions(locations[0]), locations);
  EXPECT_EQ(t.EllipsisOptions(t.NodesWithLabel("condition")[0]).size(), 1u);
}

TEST(AcceptToken, RestaurantOutputs) {
  Ontology o = Ontology::E2E();
  MrTree mr = ParseMr(testing::kRestaurantMr, o);
  ConstraintTracker t(mr);
  EXPECT_TRUE(CheckTree(t, Canon(testing::kRestaurantOutput1, o)));
  EXPECT_TRUE(CheckTree(t, Canon(testing::kRestaurantOutput2, o)));
  auto tokens = Canon(testing::kRestaurantOutput3, o);
  CheckResult r = CheckTreeDetailed(t, tokens);
  EXPECT_FALSE(r.accepted);
  ASSERT_TRUE(r.rejected_at.has_value());
  EXPECT_EQ(*r.rejected_at, testing::kRestaurantOutput3Reject);
  EXPECT_EQ(tokens[*r.rejected_at], Token::Open("customerRating"));
}

TEST(AcceptToken, SnowQuestionEllipsis) {
  Ontology o = testing::WeatherWithCloudCoverage();
  MrTree mr = ParseMr(testing::kParkerMr, o);
  ConstraintTracker t(mr);
  CheckResult r = CheckTreeDetailed(t, Linearize(ParseAnnotated(testing::kParkerResponse, o)));
  ASSERT_TRUE(r.accepted);
  int first_date = t.NodesWithLabel("date_time")[0];
  int second_location = t.NodesWithLabel("location")[1];
  ASSERT_EQ(t.Parent(first_date), 1);
  for (const auto& s : r.final_states) {
    EXPECT_TRUE(s.elided[first_date]);
    EXPECT_TRUE(s.elided[second_location]);
    EXPECT_FALSE(s.elided[t.NodesWithLabel("date_time")[1]]);
  }
}

TEST(AcceptToken, LinearizedMrIsAccepted) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    MrTree mr = RandomMr(rng, {14, true, 3});
    ConstraintTracker t(mr);
    AlignmentSet states = InitialStates(t);
    for (const auto& tok : Linearize(mr)) {
      auto next = AcceptToken(states, tok, t);
      ASSERT_TRUE(next.has_value()) << ToString(mr);
      states = *next;
    }
    EXPECT_TRUE(AcceptToken(states, Token::Eos(), t).has_value());
  }
}

TEST(AcceptToken, JoinOrderRejectsSecondChildFirst) {
  MrTree mr = ParseMr("[JOIN [INFORM [A ] ] [INFORM [B ] ] ]", testing::LetterOntology());
  ConstraintTracker t(mr);
  AlignmentSet s = InitialStates(t);
  s = *AcceptToken(s, Token::Open("JOIN"), t);
  s = *AcceptToken(s, Token::Open("INFORM"), t);
  EXPECT_FALSE(AcceptToken(s, Token::Open("B"), t).has_value());
  EXPECT_TRUE(AcceptToken(s, Token::Open("A"), t).has_value());
  std::vector<Token> prefix = {Token::Open("JOIN"), Token::Open("INFORM")};
  auto valid = BruteForceSkeletons(mr);
  auto next = testing::ValidContinuations(valid, prefix);
  EXPECT_EQ(next.count(Token::Open("B")), 0u);
  prefix.push_back(Token::Open("B"));
  EXPECT_TRUE(testing::ValidContinuations(valid, prefix).empty());
}

TEST(AcceptToken, WordsAlwaysPass) {
  MrTree mr = NumberingMr();
  ConstraintTracker t(mr);
  AlignmentSet s = InitialStates(t);
  auto same = AcceptToken(s, Token::Word("hello"), t);
  ASSERT_TRUE(same.has_value());
  EXPECT_EQ(*same, s);
  s = *AcceptToken(s, Token::Open("JOIN"), t);
  EXPECT_EQ(*AcceptToken(s, Token::Word("x"), t), s);
}

TEST(AcceptToken, EosNeedsFullCoverage) {
  MrTree mr = NumberingMr();
  ConstraintTracker t(mr);
  AlignmentSet s = InitialStates(t);
  EXPECT_FALSE(AcceptToken(s, Token::Eos(), t).has_value());
  EXPECT_FALSE(CheckTree(t, Tokenize("[JOIN [INFORM [A ] [B ] ] ] </s>")));
  // The second INFORM may drop its B because the first one realizes the same node.
  EXPECT_TRUE(CheckTree(t, Tokenize("[JOIN [INFORM [A ] [B ] ] [INFORM [D ] ] ]")));
  EXPECT_TRUE(CheckTree(t, Tokenize("[JOIN [INFORM [A ] ] [INFORM [B ] [D ] ] ]")));
  // Both copies cannot be dropped.
  EXPECT_FALSE(CheckTree(t, Tokenize("[JOIN [INFORM [A ] ] [INFORM [D ] ] ]")));
  // Nothing may follow the end.
  CheckResult r = CheckTreeDetailed(t, Tokenize("[JOIN [INFORM [A ] [B ] ] [INFORM [D ] ] ] </s> ]"));
  EXPECT_FALSE(r.accepted);
}

TEST(AcceptToken, StateInvariantsAlongRandomWalks) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 300; ++i) {
    MrTree mr = RandomMr(rng, {10, true, 2});
    ConstraintTracker t(mr);
    auto alphabet = testing::StructuralAlphabet(mr);
    AlignmentSet states = InitialStates(t);
    for (int step = 0; step < 20; ++step) {
      std::vector<AlignmentSet> options;
      for (const auto& tok : alphabet) {
        if (auto next = AcceptToken(states, tok, t)) options.push_back(*next);
      }
      if (options.empty()) break;
      states = options[std::uniform_int_distribution<size_t>(0, options.size() - 1)(rng)];
      for (const auto& s : states) {
        for (int id = 0; id < t.node_count(); ++id) EXPECT_FALSE(s.coverage[id] && s.elided[id]);
        EXPECT_TRUE(s.parent == kRootSentinel || s.coverage[s.parent]);
      }
    }
  }
}

// The accepted skeleton set equals the declaratively enumerated one.
TEST(CheckTree, BruteForceEquivalenceSmallTrees) {
  std::mt19937_64 rng(15);
  int with_groups = 0;
  for (int i = 0; i < 500; ++i) {
    MrTree mr = RandomMr(rng, {7, true, 1 + i % 2});
    auto expected = BruteForceSkeletons(mr);
    auto actual = AutomatonSkeletons(mr);
    ASSERT_EQ(actual, expected) << ToString(mr);
    for (const auto& s : expected) EXPECT_TRUE(CheckTree(mr, s)) << SkeletonString(s);
    auto options = ComputeEllipsisOptions(mr);
    with_groups += std::any_of(options.begin(), options.end(),
                               [](const auto& o) { return o.size() > 1; });
  }
  EXPECT_GT(with_groups, 50);
}

TEST(MaskScores, AllValidUnchanged) {
  MrTree mr = NumberingMr();
  ConstraintTracker t(mr);
  AlignmentSet s = InitialStates(t);
  std::vector<Token> cands = {Token::Open("JOIN"), Token::Word("a"), Token::Word("b")};
  std::vector<double> scores = {-1.0, -2.0, -3.0};
  EXPECT_EQ(MaskScores(s, t, cands, scores), scores);
}

TEST(MaskScores, IllegalOpenIsMasked) {
  MrTree mr = ParseMr(testing::kRestaurantMr, Ontology::E2E());
  ConstraintTracker t(mr);
  auto tokens = Canon(testing::kRestaurantOutput3, Ontology::E2E());
  AlignmentSet s = InitialStates(t);
  for (size_t i = 0; i < testing::kRestaurantOutput3Reject; ++i) s = *AcceptToken(s, tokens[i], t);
  AlignmentSet before = s;
  std::vector<Token> cands = {Token::Open("customerRating"), Token::Close(), Token::Word("x")};
  std::vector<double> scores = {-0.5, -1.0, -2.0};
  auto masked = MaskScores(s, t, cands, scores);
  EXPECT_EQ(masked[0], kMaskedScore);
  EXPECT_EQ(masked[1], -1.0);
  EXPECT_EQ(masked[2], -2.0);
  EXPECT_EQ(s, before);
}

TEST(MaskScores, MatchesContinuationOracle) {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 300; ++i) {
    MrTree mr = RandomMr(rng, {7, true, 2});
    ConstraintTracker t(mr);
    auto valid = BruteForceSkeletons(mr);
    auto alphabet = testing::StructuralAlphabet(mr);
    alphabet.push_back(Token::Word("w"));
    // Walk a random valid skeleton, stopping at a random depth, with words mixed in.
    auto it = valid.begin();
    std::advance(it, std::uniform_int_distribution<size_t>(0, valid.size() - 1)(rng));
    size_t cut = std::uniform_int_distribution<size_t>(0, it->size())(rng);
    std::vector<Token> prefix(it->begin(), it->begin() + static_cast<std::ptrdiff_t>(cut));
    AlignmentSet s = InitialStates(t);
    for (const auto& tok : prefix) {
      s = *AcceptToken(s, tok, t);
      s = *AcceptToken(s, Token::Word("w"), t);
    }
    std::vector<double> scores(alphabet.size(), -1.0);
    auto masked = MaskScores(s, t, alphabet, scores);
    auto expected = testing::ValidContinuations(valid, prefix);
    for (size_t k = 0; k < alphabet.size(); ++k) {
      bool allowed = alphabet[k].IsWord() || expected.count(alphabet[k]) > 0;
      EXPECT_EQ(masked[k] != kMaskedScore, allowed)
          << ToString(mr) << " after " << SkeletonString(prefix) << " token "
          << alphabet[k].ToString();
    }
  }
}

TEST(TreeMatcher, TracksOneDecode) {
  TreeMatcher m(NumberingMr());
  EXPECT_FALSE(m.CanAccept(Token::Open("INFORM")));
  for (const auto& tok : Tokenize("[JOIN [INFORM [A ] [B ] ] [INFORM [D ] ] ]")) {
    ASSERT_TRUE(m.AcceptToken(tok));
  }
  EXPECT_FALSE(m.IsFinished());
  EXPECT_TRUE(m.AcceptToken(Token::Eos()));
  EXPECT_TRUE(m.IsFinished());
}

TEST(AcceptToken, RelaxedModeSkipsCoverage) {
  MrTree mr = NumberingMr();
  ConstraintTracker t(mr);
  auto partial = Tokenize("[JOIN [INFORM [A ] ] ]");
  EXPECT_FALSE(CheckTreeDetailed(t, partial).accepted);
  EXPECT_TRUE(CheckTreeDetailed(t, partial, AcceptMode::kRelaxed).accepted);
}

}  // namespace
}  // namespace treemr
