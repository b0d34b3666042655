#include <treemr/constraint.h>
#include <treemr/corpus.h>
#include <treemr/error.h>
#include <treemr/preprocess.h>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "oracles.h"

namespace treemr {
namespace {

const Ontology& Weather() {
  static const Ontology o = Ontology::Weather();
  return o;
}

TEST(FilterToReference, DropsUnexpressedArgument) {
  MrTree mr = ParseMr("[INFORM [condition sunny ] [temp 70 ] ]", Weather());
  AnnotatedNode ref = ParseAnnotated("[INFORM it will be [condition sunny ] ]", Weather());
  EXPECT_EQ(ToString(FilterToReference(mr, ref)), "[INFORM [condition sunny ] ]");
}

TEST(FilterToReference, DropsUnexpressedAct) {
  MrTree mr = ParseMr("[JOIN [INFORM [condition sunny ] ] [INFORM [temp 70 ] ] ]", Weather());
  AnnotatedNode ref = ParseAnnotated("[JOIN [INFORM it will be [condition sunny ] ] ]", Weather());
  EXPECT_EQ(ToString(FilterToReference(mr, ref)), "[JOIN [INFORM [condition sunny ] ] ]");
}

TEST(FilterToReference, KeepsElidedRepeats) {
  Ontology o = testing::WeatherWithCloudCoverage();
  MrTree mr = ParseMr(testing::kParkerMr, o);
  MrTree filtered = FilterToReference(mr, ParseAnnotated(testing::kParkerResponse, o));
  EXPECT_EQ(filtered, mr);
  int date_times = 0;
  for (const auto& act : filtered.root().children) {
    for (const auto& arg : act.children) date_times += arg.label == "date_time";
  }
  EXPECT_EQ(date_times, 2);
}

TEST(FilterToReference, IncompatibleReference) {
  MrTree mr = ParseMr("[INFORM [condition sunny ] ]", Weather());
  EXPECT_THROW(FilterToReference(mr, ParseAnnotated("[INFORM [temp 70 ] ]", Weather())),
               NoValidAlignment);
  EXPECT_THROW(FilterToReference(mr, ParseAnnotated("[RECOMMEND [condition sunny ] ]", Weather())),
               NoValidAlignment);
}

// Deleting one argument whose subtree occurs once in the MR from the reference
// must delete exactly that argument from the filtered MR.
TEST(FilterToReference, DeletionOracle) {
  std::mt19937_64 rng(5);
  testing::RandomMrOptions options{12, false, 6};
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    MrTree mr = testing::RandomMr(rng, options);
    // Candidate (act path, argument index) pairs.
    std::vector<std::pair<std::vector<size_t>, size_t>> candidates;
    std::map<std::string, int> shape_count;
    std::function<void(const MrNode&)> count = [&](const MrNode& n) {
      shape_count[ToString(MrTree(n))]++;
      for (const auto& c : n.children) count(c);
    };
    count(mr.root());
    std::function<void(const MrNode&, std::vector<size_t>&)> walk = [&](const MrNode& n,
                                                                        std::vector<size_t>& path) {
      if (n.kind == NodeKind::kAct) {
        if (n.children.size() < 2) return;
        for (size_t k = 0; k < n.children.size(); ++k) {
          if (shape_count[ToString(MrTree(n.children[k]))] == 1) candidates.push_back({path, k});
        }
        return;
      }
      for (size_t k = 0; k < n.children.size(); ++k) {
        path.push_back(k);
        walk(n.children[k], path);
        path.pop_back();
      }
    };
    std::vector<size_t> path;
    walk(mr.root(), path);
    if (candidates.empty()) continue;
    const auto& [act_path, arg] =
        candidates[std::uniform_int_distribution<size_t>(0, candidates.size() - 1)(rng)];

    MrNode expected = mr.root();
    MrNode* act = &expected;
    for (size_t k : act_path) act = &act->children[k];
    act->children.erase(act->children.begin() + static_cast<std::ptrdiff_t>(arg));
    AnnotatedNode ref = ToAnnotated(MrTree(expected));

    MrTree filtered = FilterToReference(mr, ref);
    EXPECT_EQ(filtered, MrTree(expected)) << ToString(mr);
    EXPECT_TRUE(CheckTree(filtered, Linearize(ref)));
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(FilterToReference, ResultAlwaysAcceptsReference) {
  SynthOptions options;
  for (int i = 0; i < 200; ++i) {
    CorpusExample e = SynthesizeExample(3, i, options);
    MrTree filtered = FilterToReference(e.mr, e.annotated);
    EXPECT_TRUE(CheckTree(filtered, Linearize(e.annotated))) << ToString(e.annotated);
  }
}

TEST(Flatten, SingleArgument) {
  MrTree mr = ParseMr("[INFORM [temp 70 ] ]", Weather());
  EXPECT_EQ(Flatten(mr).ToString(), "temp1[70]");
}

TEST(Flatten, GroupedForecastExample) {
  MrTree mr = ParseMr(
      "[INFORM [condition sunny ] [date_time_range [colloquial this weekend ] ] ] "
      "[CONTRAST [INFORM [temp_high 60s ] [date_time [colloquial this weekend ] ] ] "
      "[INFORM [temp_low 43 ] [date_time [weekday Sunday ] [colloquial evening ] ] ] ] "
      "[INFORM [precip_chance likely ] [wind_speed strong ] "
      "[date_time [weekday Saturday ] [colloquial morning ] ] ]",
      Weather());
  EXPECT_EQ(Flatten(mr).ToString(),
            "condition1[sunny] date_time_range1[this weekend] date_time2[this weekend] "
            "temp_high2[60s] date_time3[Sunday evening] temp_low3[43] "
            "date_time4[Saturday morning] precip_chance4[likely] wind_speed4[strong]");
}

TEST(Flatten, ActIndexMatchesTraversal) {
  auto examples = SynthesizeCorpus(100, 9, 1.0).train;
  for (const auto& e : examples) {
    std::vector<int> expected;
    int act = 0;
    std::function<void(const MrNode&)> walk = [&](const MrNode& n) {
      if (n.kind == NodeKind::kAct) {
        ++act;
        for (size_t k = 0; k < n.children.size(); ++k) expected.push_back(act);
        return;
      }
      for (const auto& c : n.children) walk(c);
    };
    walk(e.mr.root());
    FlatMr flat = Flatten(e.mr);
    ASSERT_EQ(flat.slots.size(), expected.size());
    for (size_t k = 0; k < expected.size(); ++k) EXPECT_EQ(flat.slots[k].act_index, expected[k]);
    for (size_t k = 1; k < flat.slots.size(); ++k) {
      EXPECT_LE(flat.slots[k - 1].act_index, flat.slots[k].act_index);
    }
  }
}

TEST(Signature, IgnoresValuesAndArgumentOrder) {
  MrTree a = ParseMr("[INFORM [temp 70 ] [condition sunny ] ]", Weather());
  MrTree b = ParseMr("[INFORM [condition rain ] [temp 12 ] ]", Weather());
  MrTree c = ParseMr("[INFORM [condition rain ] ]", Weather());
  EXPECT_EQ(Signature(a), Signature(b));
  EXPECT_NE(Signature(a), Signature(c));
}

}  // namespace
}  // namespace treemr
