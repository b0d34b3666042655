#include <treemr/corpus.h>
#include <treemr/delex.h>
#include <treemr/error.h>

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "oracles.h"

namespace treemr {
namespace {

const Ontology& Weather() {
  static const Ontology o = Ontology::Weather();
  return o;
}

std::vector<std::string> WordsOf(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (t.IsWord()) out.push_back(t.text);
  }
  return out;
}

TEST(Placeholder, Format) {
  EXPECT_EQ(MakePlaceholder("city", 1), "__CITY_1__");
  EXPECT_EQ(MakePlaceholder("start_day", 12), "__START_DAY_12__");
  EXPECT_TRUE(IsPlaceholder("__CITY_1__"));
  EXPECT_TRUE(IsPlaceholder("__START_DAY_3__"));
  EXPECT_FALSE(IsPlaceholder("__city_1__"));
  EXPECT_FALSE(IsPlaceholder("__CITY__"));
  EXPECT_FALSE(IsPlaceholder("__CITY_x__"));
  EXPECT_FALSE(IsPlaceholder("CITY_1"));
  EXPECT_FALSE(IsPlaceholder("__NAME__"));
}

TEST(Delexicalize, EqualValuesShareAPlaceholder) {
  MrTree mr = ParseMr(
      "[JOIN [INFORM [location [city Denver ] ] [temp 40 ] ] "
      "[INFORM [location [city Denver ] ] [temp 45 ] [condition sunny ] ] ]",
      Weather());
  DelexMr d = Delexicalize(mr, Weather());
  EXPECT_EQ(ToString(d.mr),
            "[JOIN [INFORM [location [city __CITY_1__ ] ] [temp __TEMP_1__ ] ] "
            "[INFORM [location [city __CITY_1__ ] ] [temp __TEMP_2__ ] [condition sunny ] ] ]");
  ASSERT_EQ(d.table.size(), 3u);
  EXPECT_EQ(d.table.Find("__TEMP_2__")->value, "45");

  DelexMr each = Delexicalize(mr, Weather(), {.number_each_occurrence = true});
  EXPECT_NE(ToString(each.mr).find("__CITY_2__"), std::string::npos);
  EXPECT_EQ(each.table.size(), 4u);
}

TEST(Delexicalize, ResponseReusesMrTable) {
  MrTree mr = ParseMr("[INFORM [location [city San Jose ] ] [temp 71 ] ]", Weather());
  AnnotatedNode resp = ParseAnnotated(
      "[INFORM in [LOCATION [CITY downtown San Jose ] ] it's [TEMP 71 ] degrees ]", Weather());
  DelexPair d = Delexicalize(mr, resp, Weather());
  EXPECT_EQ(SurfaceText(d.annotated), "in downtown __CITY_1__ it's __TEMP_1__ degrees");
  EXPECT_EQ(d.table.size(), 2u);
  EXPECT_EQ(d.table.Find("__CITY_1__")->value, "San Jose");
}

TEST(Delexicalize, ValueMissingFromMrIsAdded) {
  MrTree mr = ParseMr("[INFORM [temp 71 ] ]", Weather());
  AnnotatedNode resp = ParseAnnotated("[INFORM about [TEMP 70 ] degrees ]", Weather());
  DelexPair d = Delexicalize(mr, resp, Weather());
  EXPECT_EQ(SurfaceText(d.annotated), "about __TEMP_2__ degrees");
  EXPECT_EQ(d.table.Find("__TEMP_2__")->value, "70");
}

TEST(Relexicalize, RoundTripOnSynthesizedCorpus) {
  auto corpus = SynthesizeCorpus(1000, 8, 1.0).train;
  int with_placeholders = 0;
  for (const auto& e : corpus) {
    for (bool each : {false, true}) {
      DelexPair d = Delexicalize(e.mr, e.annotated, Weather(), {.number_each_occurrence = each});
      auto words = WordsOf(Linearize(d.annotated));
      bool any = std::any_of(words.begin(), words.end(), [](const auto& w) { return IsPlaceholder(w); });
      with_placeholders += any;
      EXPECT_EQ(Relexicalize(Linearize(d.annotated), d.table), Linearize(e.annotated));
      EXPECT_EQ(Relexicalize(Linearize(d.mr), d.table), Linearize(e.mr));
      EXPECT_EQ(RelexicalizeText(SurfaceText(d.annotated), d.table), SurfaceText(e.annotated));
      EXPECT_EQ(DelexTable::FromJson(d.table.ToJson()), d.table);
    }
  }
  EXPECT_GT(with_placeholders, 1000);
}

TEST(Relexicalize, UnknownPlaceholder) {
  DelexTable table;
  table.Assign("city", "Paris", true);
  std::vector<Token> tokens{Token::Word("in"), Token::Word("__CITY_2__")};
  EXPECT_THROW(Relexicalize(tokens, table), UnknownPlaceholder);
  EXPECT_THROW(RelexicalizeText("in __CITY_2__", table), UnknownPlaceholder);
  EXPECT_EQ(RelexicalizeText("in __CITY_1__ today", table), "in Paris today");
}

TEST(DelexTable, JsonErrors) {
  using nlohmann::json;
  EXPECT_THROW(DelexTable::FromJson(json::object()), Error);
  json bad = json::array({{{"placeholder", "CITY"}, {"label", "city"}, {"value", "x"}}});
  EXPECT_THROW(DelexTable::FromJson(bad), Error);
  json dup = json::array({{{"placeholder", "__CITY_1__"}, {"label", "city"}, {"value", "x"}},
                          {{"placeholder", "__CITY_1__"}, {"label", "city"}, {"value", "y"}}});
  EXPECT_THROW(DelexTable::FromJson(dup), Error);
}

TEST(Delexicalize, E2ENamesAndNear) {
  Ontology e2e = Ontology::E2E();
  MrTree mr = ParseMr("[INFORM [name The Eagle ] [near Burger King ] [food Italian ] ]", e2e);
  DelexMr d = Delexicalize(mr, e2e);
  EXPECT_EQ(ToString(d.mr), "[INFORM [name __NAME_1__ ] [near __NEAR_1__ ] [food Italian ] ]");
}

}  // namespace
}  // namespace treemr
