/*!
 * \file treemr/weather.h
 * \brief Synthetic weather queries, forecasts and tree-structured MRs.
 */
#ifndef TREEMR_WEATHER_H_
#define TREEMR_WEATHER_H_

#include <treemr/mr_tree.h>

#include <chrono>
#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace treemr {

struct Place {
  std::string city;
  std::string region;
  std::string country;
  friend bool operator==(const Place&, const Place&) = default;
};

enum class RangeKind { kToday, kTonight, kTomorrow, kWeekend, kDayRange, kWeekday, kFarFuture };
enum class QuestionKind { kGeneral, kBoolean, kWhenCondition, kAttire, kActivity };

struct QueryScenario {
  std::string query;
  std::chrono::sys_days reference_date;
  int reference_hour = 9;
  /*! \brief The user's default location from the context. */
  Place user_location;
  /*! \brief Location named in the query, if any. */
  std::optional<Place> mentioned_location;
  bool unknown_location = false;
  RangeKind range = RangeKind::kToday;
  /*! \brief Requested window as hour offsets from the reference time, [start, end). */
  int start_offset_hours = 0;
  int end_offset_hours = 0;
  bool out_of_range = false;
  QuestionKind question = QuestionKind::kGeneral;
  /*! \brief Condition category, attire item or activity the question is about. */
  std::string subject;

  bool Hourly() const { return start_offset_hours < 24; }
};

/*! \brief Sampling parameters; temperatures in Fahrenheit, percentages 0-100. */
struct ForecastParams {
  double temp_mean = 60.0;
  double temp_sd = 15.0;
  double temp_min = 0.0;
  double temp_max = 110.0;
  /*! \brief Spread of individual points around the scenario's base temperature. */
  double temp_point_sd = 5.0;
  double cloud_mean = 50.0;
  double cloud_sd = 30.0;
  double cloud_point_sd = 15.0;
  double wind_mean = 10.0;
  double wind_sd = 7.0;
  double wind_max = 50.0;
  double fog_prob = 0.15;
};

struct ForecastPoint {
  std::chrono::sys_days date;
  /*! \brief Hour of day for hourly points, -1 for daily ones. */
  int hour = -1;
  double temp = 0.0;
  double temp_high = 0.0;
  double temp_low = 0.0;
  double cloud_cover = 0.0;
  double precip_chance = 0.0;
  /*! \brief "rain", "snow" or "thunderstorms". */
  std::string precip_type;
  double wind_speed = 0.0;
  bool fog = false;
  std::string sunrise;
  std::string sunset;
};

struct Forecast {
  bool hourly = false;
  std::vector<ForecastPoint> points;
  Place location;
};

/*! \brief Draws from N(mean, sd) clamped to [lo, hi]. */
double SampleClamped(std::mt19937_64& rng, double mean, double sd, double lo, double hi);

/*! \brief Symmetric relation over weather feature names. */
class OppositionTable {
 public:
  OppositionTable() = default;
  explicit OppositionTable(std::vector<std::pair<std::string, std::string>> pairs);
  static OppositionTable Default();
  /*! \brief Accepts {"pairs": [[a, b], ...]}. */
  static OppositionTable FromJson(const nlohmann::json& j);

  bool Opposes(const std::string& a, const std::string& b) const;
  bool Opposes(const std::set<std::string>& a, const std::set<std::string>& b) const;
  const std::set<std::pair<std::string, std::string>>& pairs() const { return pairs_; }

 private:
  std::set<std::pair<std::string, std::string>> pairs_;
};

struct SynthConfig {
  ForecastParams forecast;
  OppositionTable opposition = OppositionTable::Default();
  /*! \brief Requests further out than this many days get an ERROR act. */
  int far_future_days = 7;
  double unknown_location_prob = 0.07;
  double far_future_prob = 0.06;
  double mention_location_prob = 0.4;
  double boolean_prob = 0.2;
  double when_condition_prob = 0.12;
  double attire_prob = 0.12;
  double activity_prob = 0.1;
};

/*! \brief Maps a condition value ("heavy rain") to its category ("rain"). */
std::string ConditionCategory(const std::string& condition);
/*! \brief Condition value describing a point; `night` selects "clear" over "sunny". */
std::string ConditionFor(const ForecastPoint& point, bool night);
/*!
 * \brief Features an act exposes to the opposition table: condition categories,
 *  "not X" for condition_not, "warm"/"cold" from temperatures and "dry" when an
 *  INFORM mentions no precipitation.
 */
std::set<std::string> ActFeatures(const MrNode& act);

QueryScenario SampleScenario(std::mt19937_64& rng, const SynthConfig& config);
Forecast GenerateForecast(const QueryScenario& scenario, uint64_t seed,
                          const ForecastParams& params = {});
/*! \brief Canonicalized MR for a scenario and its forecast. */
MrTree BuildMr(const QueryScenario& scenario, const Forecast& forecast,
               const SynthConfig& config = {});

/*! \brief "Saturday", "October", "2018-09-29T08:00". */
std::string WeekdayName(std::chrono::sys_days date);
std::string MonthName(std::chrono::sys_days date);
std::string IsoDateTime(std::chrono::sys_days date, int hour);

}  // namespace treemr

#endif  // TREEMR_WEATHER_H_
