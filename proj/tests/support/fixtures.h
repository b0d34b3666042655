/*!
 * \file fixtures.h
 * \brief Hand-written MRs and responses shared by the unit tests and the acceptance run.
 */
#ifndef TREEMR_TESTS_FIXTURES_H_
#define TREEMR_TESTS_FIXTURES_H_

#include <treemr/ontology.h>

namespace treemr::testing {

// Seven-node MR with one same-value pair; the node numbering is
// JOIN 0, INFORM 1, A 2, B 3, INFORM 4, B 5, D 6.
inline constexpr const char* kNumberingMr = "[JOIN [INFORM [A ] [B ] ] [INFORM [B ] [D ] ] ]";

// Restaurant MR with a contrast, and three candidate outputs: two legal
// realizations and one that folds every argument into the first INFORM.
inline constexpr const char* kRestaurantMr =
    "[JOIN [INFORM [eatType pub ] [name __NAME__ ] ] "
    "[CONTRAST [INFORM [customerrating high ] ] [INFORM [pricerange expensive ] ] ] ]";
inline constexpr const char* kRestaurantOutput1 =
    "[JOIN [INFORM [name __NAME__ ] is a [eatType pub ] ] . [CONTRAST [INFORM it has a "
    "[customerrating high ] customer rating ] , but [INFORM it is [pricerange expensive ] ] ] . ]";
inline constexpr const char* kRestaurantOutput2 =
    "[JOIN [INFORM [eatType pub ] [name __NAME__ ] ] [CONTRAST [INFORM it is "
    "[pricerange expensive ] ] although [INFORM rated [customerrating high ] ] ] ]";
inline constexpr const char* kRestaurantOutput3 =
    "[JOIN [INFORM [name __NAME__ ] is a [eatType pub ] with a [customerrating high ] "
    "rating and [pricerange expensive ] prices ] ]";
// Token index of `[customerrating` in output 3.
inline constexpr size_t kRestaurantOutput3Reject = 12;

// Snow question answered with a contrast; the first INFORM leaves its date
// unsaid and the second leaves its location unsaid.
inline constexpr const char* kParkerMr =
    "[CONTRAST [INFORM [location [city Parker ] ] [condition_not snow ] "
    "[date_time [colloquial today ] ] ] [INFORM [date_time [colloquial today ] ] "
    "[location [city Parker ] ] [condition heavy rain showers ] "
    "[precip_chance_summary very likely chance ] [cloud_coverage partly cloudy ] ] ]";
inline constexpr const char* kParkerResponse =
    "[CONTRAST [INFORM_1 [LOCATION [CITY Parker ] ] is not expecting any [CONDITION_NOT snow ] ] "
    ", but [INFORM_2 [DATE_TIME [COLLOQUIAL today ] ] there's a [PRECIP_CHANCE_SUMMARY very "
    "likely chance ] of [CONDITION heavy rain showers ] and it'll be [CLOUD_COVERAGE partly "
    "cloudy ] ] ]";

// Restaurant MR with a top-level contrast followed by a second act.
inline constexpr const char* kJjsPubMr =
    "[CONTRAST [INFORM [name JJ's Pub ] [familyFriendly no ] ] [INFORM [rating 5 out of 5 ] ] ] "
    "[INFORM [eatType restaurant ] [near Crowne Plaza Hotel ] ]";

/*! \brief Weather inventory plus the cloud_coverage argument used by kParkerMr. */
inline Ontology WeatherWithCloudCoverage() {
  return Ontology::Weather().WithArgument({"cloud_coverage", false, false, {}});
}

/*! \brief Open-label inventory for abstract MRs such as kNumberingMr. */
inline Ontology LetterOntology() {
  return Ontology({"INFORM"}, {"JOIN", "CONTRAST", "JUSTIFY"},
                  {{"A", false, false, {}}, {"B", false, false, {}}, {"D", false, false, {}}},
                  {});
}

}  // namespace treemr::testing

#endif  // TREEMR_TESTS_FIXTURES_H_
