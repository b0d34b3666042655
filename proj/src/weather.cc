/*!
 * \file weather.cc
 */
#include <treemr/error.h>
#include <treemr/preprocess.h>
#include <treemr/weather.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <nlohmann/json.hpp>

namespace treemr {

using std::chrono::days;
using std::chrono::sys_days;

namespace {

const std::vector<Place>& KnownPlaces() {
  static const std::vector<Place> places = {
      {"Parker", "Colorado", "USA"},       {"Seattle", "Washington", "USA"},
      {"Austin", "Texas", "USA"},          {"Boston", "Massachusetts", "USA"},
      {"Denver", "Colorado", "USA"},       {"Portland", "Oregon", "USA"},
      {"Chicago", "Illinois", "USA"},      {"Miami", "Florida", "USA"},
      {"Toronto", "Ontario", "Canada"},    {"Vancouver", "British Columbia", "Canada"},
      {"Phoenix", "Arizona", "USA"},       {"Atlanta", "Georgia", "USA"},
      {"Minneapolis", "Minnesota", "USA"}, {"Nashville", "Tennessee", "USA"},
      {"San Diego", "California", "USA"},  {"Salt Lake City", "Utah", "USA"},
      {"Buffalo", "New York", "USA"},      {"Calgary", "Alberta", "Canada"},
  };
  return places;
}

const std::vector<std::string>& UnknownCities() {
  static const std::vector<std::string> names = {"Quellton", "Marrowdale", "Vintershire",
                                                 "Oskarvik", "Brenmoor",   "Tallowick"};
  return names;
}

template <typename T>
const T& Pick(std::mt19937_64& rng, const std::vector<T>& items) {
  std::uniform_int_distribution<size_t> dist(0, items.size() - 1);
  return items[dist(rng)];
}

bool Chance(std::mt19937_64& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  if (hi <= lo) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int WeekdayIndex(sys_days date) {
  return static_cast<int>(std::chrono::weekday(date).c_encoding());
}

std::string Round(double x, int step = 1) {
  long v = std::lround(x / step) * step;
  return std::to_string(v);
}

// Hourly windows are reported per period of the day.
struct Period {
  int start;       // hour of day
  int end;         // exclusive, may exceed 24 for the night period
  const char* name;
};

constexpr std::array<Period, 4> kDayPeriods = {{
    {6, 12, "morning"},
    {12, 17, "afternoon"},
    {17, 21, "evening"},
    {21, 30, "night"},
}};

std::string PeriodPhrase(int day_offset, const std::string& name) {
  if (day_offset == 0) return name == "night" ? "tonight" : "this " + name;
  return "tomorrow " + name;
}

struct Item {
  MrNode act;
  std::string key;
};

std::string PrecipBucket(double chance) {
  if (chance < 20) return "unlikely";
  if (chance < 50) return "chance";
  if (chance < 80) return "likely";
  return "very likely";
}

MrNode DateTimeColloquial(const std::string& phrase) {
  return MakeArgument("date_time", std::vector<MrNode>{MakeArgument("colloquial", phrase)});
}

MrNode DateTimeWeekday(sys_days date) {
  return MakeArgument("date_time", std::vector<MrNode>{MakeArgument("weekday", WeekdayName(date))});
}

MrNode LocationNode(const Place& place) {
  return MakeArgument("location", std::vector<MrNode>{MakeArgument("city", place.city)});
}

// One summarized forecast point turned into an INFORM act.
Item MakeItem(const ForecastPoint& p, bool hourly, MrNode date_time,
              const std::optional<Place>& location, bool night) {
  std::vector<MrNode> args;
  args.push_back(std::move(date_time));
  if (location) args.push_back(LocationNode(*location));
  std::string condition = ConditionFor(p, night);
  args.push_back(MakeArgument("condition", condition));
  double temp_key;
  if (hourly) {
    args.push_back(MakeArgument("temp", Round(p.temp)));
    temp_key = p.temp;
  } else {
    args.push_back(MakeArgument("temp_high", Round(p.temp_high)));
    args.push_back(MakeArgument("temp_low", Round(p.temp_low)));
    temp_key = p.temp_high;
  }
  std::string category = ConditionCategory(condition);
  if (category != "rain" && category != "snow" && p.precip_chance >= 20) {
    args.push_back(MakeArgument("precip_chance", Round(p.precip_chance, 10)));
    args.push_back(MakeArgument("precip_type", p.precip_type));
  }
  if (p.wind_speed >= 25) args.push_back(MakeArgument("wind_speed", Round(p.wind_speed, 5)));
  Item item{MakeAct("INFORM", std::move(args)), ""};
  item.key = std::to_string(static_cast<int>(std::floor(temp_key / 10.0))) + "|" +
             PrecipBucket(p.precip_chance) + "|" + condition;
  return item;
}

ForecastPoint Summarize(const std::vector<const ForecastPoint*>& hours) {
  ForecastPoint out = *hours.front();
  double temp = 0.0;
  double cloud = 0.0;
  for (const auto* h : hours) {
    temp += h->temp;
    cloud += h->cloud_cover;
    out.precip_chance = std::max(out.precip_chance, h->precip_chance);
    out.wind_speed = std::max(out.wind_speed, h->wind_speed);
    out.fog = out.fog || h->fog;
    if (h->precip_type == "thunderstorms" ||
        (h->precip_type == "snow" && out.precip_type == "rain")) {
      out.precip_type = h->precip_type;
    }
  }
  out.temp = temp / static_cast<double>(hours.size());
  out.cloud_cover = cloud / static_cast<double>(hours.size());
  out.temp_high = out.temp;
  out.temp_low = out.temp;
  return out;
}

std::vector<Item> ForecastItems(const QueryScenario& s, const Forecast& f,
                                const std::optional<Place>& location) {
  std::vector<Item> items;
  if (!f.hourly) {
    for (const auto& p : f.points) {
      MrNode dt = s.range == RangeKind::kTomorrow ? DateTimeColloquial("tomorrow")
                                                  : DateTimeWeekday(p.date);
      items.push_back(MakeItem(p, false, std::move(dt), location, false));
    }
    return items;
  }
  // Group hourly points by the period of the day they fall in.
  for (int day = 0; day <= 1; ++day) {
    for (const auto& period : kDayPeriods) {
      int lo = day * 24 + period.start - s.reference_hour;
      int hi = day * 24 + period.end - s.reference_hour;
      std::vector<const ForecastPoint*> hours;
      for (const auto& p : f.points) {
        int offset = static_cast<int>((p.date - s.reference_date).count()) * 24 + p.hour -
                     s.reference_hour;
        if (offset >= lo && offset < hi) hours.push_back(&p);
      }
      if (hours.empty()) continue;
      ForecastPoint summary = Summarize(hours);
      bool night = std::string(period.name) == "night";
      items.push_back(MakeItem(summary, true,
                               DateTimeColloquial(PeriodPhrase(day, period.name)), location,
                               night));
    }
  }
  return items;
}

// Consecutive items with the same similarity key become a JOIN group.
std::vector<MrNode> Aggregate(std::vector<Item> items) {
  std::vector<MrNode> units;
  size_t i = 0;
  while (i < items.size()) {
    size_t j = i + 1;
    while (j < items.size() && items[j].key == items[i].key) ++j;
    if (j - i == 1) {
      units.push_back(std::move(items[i].act));
    } else {
      std::vector<MrNode> group;
      for (size_t k = i; k < j; ++k) group.push_back(std::move(items[k].act));
      units.push_back(MakeRelation("JOIN", std::move(group)));
    }
    i = j;
  }
  return units;
}

void CollectFeatures(const MrNode& node, std::set<std::string>* out) {
  if (node.kind == NodeKind::kAct) {
    auto f = ActFeatures(node);
    out->insert(f.begin(), f.end());
    return;
  }
  for (const auto& c : node.children) CollectFeatures(c, out);
}

std::vector<MrNode> ApplyContrast(std::vector<MrNode> units, const OppositionTable& table) {
  std::vector<MrNode> out;
  size_t i = 0;
  while (i < units.size()) {
    if (i + 1 < units.size()) {
      std::set<std::string> a;
      std::set<std::string> b;
      CollectFeatures(units[i], &a);
      CollectFeatures(units[i + 1], &b);
      if (table.Opposes(a, b)) {
        out.push_back(MakeRelation("CONTRAST", {std::move(units[i]), std::move(units[i + 1])}));
        i += 2;
        continue;
      }
    }
    out.push_back(std::move(units[i]));
    ++i;
  }
  return out;
}

std::set<std::string> ForecastCategories(const QueryScenario& s, const Forecast& f) {
  std::set<std::string> cats;
  for (const auto& item : ForecastItems(s, f, std::nullopt)) {
    for (const auto& arg : item.act.children) {
      if (arg.label == "condition") cats.insert(ConditionCategory(arg.value));
    }
  }
  return cats;
}

bool NeedsItem(const std::string& item, const std::set<std::string>& cats, double min_temp) {
  if (item == "umbrella" || item == "raincoat") return cats.count("rain") != 0;
  if (item == "boots") return cats.count("snow") != 0;
  if (item == "jacket" || item == "coat") return min_temp < 50;
  return cats.count("sunny") != 0;  // sunscreen, sunglasses
}

bool GoodForActivity(const std::string& activity, const std::set<std::string>& cats,
                     double min_temp, double max_temp) {
  bool wet = cats.count("rain") != 0 || cats.count("snow") != 0;
  if (activity == "go skiing") return cats.count("snow") != 0;
  if (activity == "go swimming") return max_temp >= 80 && !wet;
  if (activity == "have a picnic") return !wet && min_temp >= 60 && cats.count("fog") == 0;
  return !wet && min_temp >= 40 && max_temp <= 90;  // go hiking
}

std::string RangePhrase(const QueryScenario& s) {
  switch (s.range) {
    case RangeKind::kToday:
      return "today";
    case RangeKind::kTonight:
      return "tonight";
    case RangeKind::kTomorrow:
      return "tomorrow";
    case RangeKind::kWeekend:
      return "this weekend";
    case RangeKind::kDayRange: {
      sys_days a = s.reference_date + days((s.start_offset_hours + s.reference_hour) / 24);
      sys_days b = s.reference_date + days((s.end_offset_hours + s.reference_hour - 1) / 24);
      return "from " + WeekdayName(a) + " to " + WeekdayName(b);
    }
    case RangeKind::kWeekday:
      return "on " + WeekdayName(s.reference_date + days((s.start_offset_hours + s.reference_hour) / 24));
    case RangeKind::kFarFuture: {
      sys_days d = s.reference_date + days((s.start_offset_hours + s.reference_hour) / 24);
      std::chrono::year_month_day ymd{d};
      return "on " + MonthName(d) + " " + std::to_string(static_cast<unsigned>(ymd.day()));
    }
  }
  return "today";
}

std::string ComposeQuery(std::mt19937_64& rng, const QueryScenario& s) {
  std::string range = RangePhrase(s);
  std::string where = s.mentioned_location ? " in " + s.mentioned_location->city : "";
  switch (s.question) {
    case QuestionKind::kBoolean: {
      static const std::map<std::string, std::vector<std::string>> forms = {
          {"rain", {"Will it rain", "Is it going to rain"}},
          {"snow", {"Will it snow", "Is it going to snow"}},
          {"sunny", {"Will it be sunny", "Is it going to be sunny"}},
          {"cloudy", {"Will it be cloudy", "Is it going to be cloudy"}},
      };
      return Pick(rng, forms.at(s.subject)) + where + " " + range + "?";
    }
    case QuestionKind::kWhenCondition: {
      std::string verb = s.subject == "sunny" ? "be sunny" : s.subject;
      return "When will it " + verb + " next" + where + "?";
    }
    case QuestionKind::kAttire:
      return Pick(rng, std::vector<std::string>{"Should I bring my ", "Do I need my "}) +
             s.subject + where + " " + range + "?";
    case QuestionKind::kActivity:
      return Pick(rng, std::vector<std::string>{"Is it a good time to ", "Can I "}) + s.subject +
             where + " " + range + "?";
    case QuestionKind::kGeneral:
      break;
  }
  return Pick(rng, std::vector<std::string>{"What's the weather like", "What's the forecast",
                                            "How does the weather look"}) +
         where + " " + range + "?";
}

}  // namespace

double SampleClamped(std::mt19937_64& rng, double mean, double sd, double lo, double hi) {
  double x = sd > 0 ? std::normal_distribution<double>(mean, sd)(rng) : mean;
  return std::clamp(x, lo, hi);
}

OppositionTable::OppositionTable(std::vector<std::pair<std::string, std::string>> pairs) {
  for (auto& [a, b] : pairs) {
    if (a == b) throw Error("a feature cannot oppose itself: " + a);
    pairs_.emplace(a, b);
    pairs_.emplace(b, a);
  }
}

OppositionTable OppositionTable::Default() {
  return OppositionTable({{"sunny", "cloudy"},
                          {"sunny", "rain"},
                          {"clear", "fog"},
                          {"warm", "cold"},
                          {"dry", "rain"},
                          {"dry", "snow"},
                          {"not snow", "rain"},
                          {"not rain", "snow"}});
}

OppositionTable OppositionTable::FromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("pairs") || !j["pairs"].is_array()) {
    throw Error("opposition table needs a \"pairs\" array");
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& p : j["pairs"]) {
    if (!p.is_array() || p.size() != 2) throw Error("each opposition pair has two entries");
    pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }
  return OppositionTable(std::move(pairs));
}

bool OppositionTable::Opposes(const std::string& a, const std::string& b) const {
  return pairs_.count({a, b}) != 0;
}

bool OppositionTable::Opposes(const std::set<std::string>& a,
                              const std::set<std::string>& b) const {
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (Opposes(x, y)) return true;
    }
  }
  return false;
}

std::string ConditionCategory(const std::string& condition) {
  if (condition.find("rain") != std::string::npos || condition == "thunderstorms") return "rain";
  if (condition.find("snow") != std::string::npos) return "snow";
  if (condition.find("cloudy") != std::string::npos) return "cloudy";
  return condition;
}

std::string ConditionFor(const ForecastPoint& p, bool night) {
  if (p.precip_chance >= 60) {
    if (p.precip_type == "thunderstorms") return "thunderstorms";
    std::string base = p.precip_type == "snow" ? "snow" : "rain";
    if (p.precip_chance >= 85) return "heavy " + base;
    if (p.precip_chance >= 70) return base;
    return "light " + base;
  }
  if (p.fog) return "fog";
  if (p.cloud_cover < 25) return night ? "clear" : "sunny";
  if (p.cloud_cover < 65) return "partly cloudy";
  return "cloudy";
}

std::set<std::string> ActFeatures(const MrNode& act) {
  std::set<std::string> out;
  bool wet = false;
  for (const auto& arg : act.children) {
    if (arg.label == "condition") {
      std::string cat = ConditionCategory(arg.value);
      out.insert(cat);
      wet = wet || cat == "rain" || cat == "snow";
    } else if (arg.label == "condition_not") {
      out.insert("not " + arg.value);
    } else if (arg.label == "precip_chance") {
      wet = true;
    } else if (arg.label == "temp" || arg.label == "temp_high" || arg.label == "temp_low") {
      double t = std::atof(arg.value.c_str());
      if (arg.label != "temp_low" && t >= 80) out.insert("warm");
      if (arg.label != "temp_high" && t <= 35) out.insert("cold");
    }
  }
  if (!wet && out.count("fog") == 0 && act.label == "INFORM" &&
      std::any_of(act.children.begin(), act.children.end(),
                  [](const MrNode& a) { return a.label == "condition"; })) {
    out.insert("dry");
  }
  return out;
}

std::string WeekdayName(sys_days date) {
  static const std::array<const char*, 7> names = {"Sunday",   "Monday", "Tuesday", "Wednesday",
                                                   "Thursday", "Friday", "Saturday"};
  return names[WeekdayIndex(date)];
}

std::string MonthName(sys_days date) {
  static const std::array<const char*, 12> names = {
      "January", "February", "March",     "April",   "May",      "June",
      "July",    "August",   "September", "October", "November", "December"};
  std::chrono::year_month_day ymd{date};
  return names[static_cast<unsigned>(ymd.month()) - 1];
}

std::string IsoDateTime(sys_days date, int hour) {
  std::chrono::year_month_day ymd{date};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:00", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hour);
  return buf;
}

QueryScenario SampleScenario(std::mt19937_64& rng, const SynthConfig& config) {
  QueryScenario s;
  s.reference_date = sys_days{std::chrono::year{2018} / 1 / 1} +
                     days(std::uniform_int_distribution<int>(0, 729)(rng));
  s.reference_hour = std::uniform_int_distribution<int>(6, 21)(rng);
  s.user_location = Pick(rng, KnownPlaces());

  if (Chance(rng, config.unknown_location_prob)) {
    s.unknown_location = true;
    s.mentioned_location = Place{Pick(rng, UnknownCities()), "", ""};
  } else if (Chance(rng, config.mention_location_prob)) {
    s.mentioned_location = Pick(rng, KnownPlaces());
  }

  const int h = s.reference_hour;
  const int weekday = WeekdayIndex(s.reference_date);
  if (!s.unknown_location && Chance(rng, config.far_future_prob)) {
    s.range = RangeKind::kFarFuture;
    int ahead = std::uniform_int_distribution<int>(config.far_future_days + 1,
                                                   config.far_future_days + 14)(rng);
    s.start_offset_hours = ahead * 24 - h;
    s.end_offset_hours = s.start_offset_hours + 24;
    s.out_of_range = true;
  } else {
    std::vector<RangeKind> kinds = {RangeKind::kToday,    RangeKind::kToday,
                                    RangeKind::kTonight,  RangeKind::kTomorrow,
                                    RangeKind::kTomorrow, RangeKind::kDayRange,
                                    RangeKind::kWeekday};
    // Friday through Sunday the coming weekend is already (almost) here.
    if (weekday >= 1 && weekday <= 4) kinds.push_back(RangeKind::kWeekend);
    s.range = Pick(rng, kinds);
    if (s.range == RangeKind::kToday && h >= 17) s.range = RangeKind::kTonight;
    switch (s.range) {
      case RangeKind::kToday:
        s.start_offset_hours = 0;
        s.end_offset_hours = 21 - h;
        break;
      case RangeKind::kTonight:
        s.start_offset_hours = std::max(0, 17 - h);
        s.end_offset_hours = 30 - h;
        break;
      case RangeKind::kTomorrow:
        s.start_offset_hours = 30 - h;
        s.end_offset_hours = 45 - h;
        break;
      case RangeKind::kWeekend: {
        int to_saturday = 6 - weekday;
        s.start_offset_hours = to_saturday * 24 - h;
        s.end_offset_hours = s.start_offset_hours + 48;
        break;
      }
      case RangeKind::kDayRange: {
        int first = std::uniform_int_distribution<int>(2, 4)(rng);
        int count = std::uniform_int_distribution<int>(2, 3)(rng);
        s.start_offset_hours = first * 24 - h;
        s.end_offset_hours = s.start_offset_hours + count * 24;
        break;
      }
      case RangeKind::kWeekday: {
        int ahead = std::uniform_int_distribution<int>(2, config.far_future_days - 1)(rng);
        s.start_offset_hours = ahead * 24 - h;
        s.end_offset_hours = s.start_offset_hours + 24;
        break;
      }
      case RangeKind::kFarFuture:
        break;
    }
  }

  double u = Uniform(rng, 0.0, 1.0);
  double acc = config.boolean_prob;
  if (u < acc) {
    s.question = QuestionKind::kBoolean;
    s.subject = Pick(rng, std::vector<std::string>{"rain", "snow", "sunny", "cloudy"});
  } else if (u < (acc += config.when_condition_prob)) {
    s.question = QuestionKind::kWhenCondition;
    s.subject = Pick(rng, std::vector<std::string>{"rain", "snow", "sunny"});
  } else if (u < (acc += config.attire_prob)) {
    s.question = QuestionKind::kAttire;
    s.subject = Pick(rng, std::vector<std::string>{"umbrella", "raincoat", "boots", "jacket",
                                                   "coat", "sunscreen", "sunglasses"});
  } else if (u < (acc += config.activity_prob)) {
    s.question = QuestionKind::kActivity;
    s.subject = Pick(rng, std::vector<std::string>{"go hiking", "have a picnic", "go skiing",
                                                   "go swimming"});
  }
  s.query = ComposeQuery(rng, s);
  return s;
}

Forecast GenerateForecast(const QueryScenario& s, uint64_t seed, const ForecastParams& params) {
  if (s.end_offset_hours <= s.start_offset_hours) throw Error("empty forecast range");
  std::mt19937_64 rng(seed);
  Forecast f;
  f.hourly = s.Hourly();
  f.location = s.unknown_location || !s.mentioned_location ? s.user_location
                                                           : *s.mentioned_location;
  const double base_temp =
      SampleClamped(rng, params.temp_mean, params.temp_sd, params.temp_min, params.temp_max);
  const double base_cloud = SampleClamped(rng, params.cloud_mean, params.cloud_sd, 0.0, 100.0);

  auto fill_sky = [&](ForecastPoint* p, double temp) {
    p->cloud_cover = SampleClamped(rng, base_cloud, params.cloud_point_sd, 0.0, 100.0);
    p->precip_chance = p->cloud_cover >= 60
                           ? std::clamp(Uniform(rng, p->cloud_cover - 50, p->cloud_cover), 0.0, 100.0)
                           : Uniform(rng, 0.0, 25.0) * p->cloud_cover / 60.0;
    if (temp < 32) {
      p->precip_type = "snow";
    } else if (temp >= 75 && p->precip_chance >= 70) {
      p->precip_type = "thunderstorms";
    } else {
      p->precip_type = "rain";
    }
    p->wind_speed = SampleClamped(rng, params.wind_mean, params.wind_sd, 0.0, params.wind_max);
    p->fog = p->cloud_cover >= 70 && temp >= 35 && temp <= 65 && p->precip_chance < 40 &&
             Chance(rng, params.fog_prob);
  };

  if (f.hourly) {
    for (int off = s.start_offset_hours; off < s.end_offset_hours; ++off) {
      int abs_hour = s.reference_hour + off;
      ForecastPoint p;
      p.date = s.reference_date + days(abs_hour / 24);
      p.hour = abs_hour % 24;
      double diurnal = 8.0 * std::cos(2.0 * std::numbers::pi * (p.hour - 15) / 24.0);
      p.temp = SampleClamped(rng, base_temp + diurnal, params.temp_point_sd / 2, params.temp_min,
                             params.temp_max);
      p.temp_high = p.temp_low = p.temp;
      fill_sky(&p, p.temp);
      f.points.push_back(std::move(p));
    }
  } else {
    int first_day = (s.start_offset_hours + s.reference_hour) / 24;
    int last_day = (s.end_offset_hours + s.reference_hour - 1) / 24;
    for (int d = first_day; d <= last_day; ++d) {
      ForecastPoint p;
      p.date = s.reference_date + days(d);
      p.temp = SampleClamped(rng, base_temp, params.temp_point_sd, params.temp_min,
                             params.temp_max);
      p.temp_high = std::clamp(p.temp + Uniform(rng, 4.0, 12.0), params.temp_min, params.temp_max);
      p.temp_low = std::clamp(p.temp - Uniform(rng, 4.0, 12.0), params.temp_min, params.temp_max);
      fill_sky(&p, p.temp);
      p.sunrise = "6:" + std::to_string(std::uniform_int_distribution<int>(10, 59)(rng)) + " am";
      p.sunset = "7:" + std::to_string(std::uniform_int_distribution<int>(10, 59)(rng)) + " pm";
      f.points.push_back(std::move(p));
    }
  }
  return f;
}

MrTree BuildMr(const QueryScenario& s, const Forecast& f, const SynthConfig& config) {
  std::vector<MrNode> top;
  if (s.out_of_range) {
    sys_days d = s.reference_date + days((s.start_offset_hours + s.reference_hour) / 24);
    std::chrono::year_month_day ymd{d};
    MrNode dt = MakeArgument(
        "date_time", std::vector<MrNode>{MakeArgument("day", std::to_string(static_cast<unsigned>(ymd.day()))),
                                         MakeArgument("month", MonthName(d))});
    top.push_back(MakeAct("ERROR", {std::move(dt), MakeArgument("error_reason", "too far in the future")}));
    return Canonicalize(MrTree::FromTopLevel(std::move(top)));
  }

  std::optional<Place> location;
  if (s.unknown_location) {
    top.push_back(MakeAct("ERROR", {LocationNode(*s.mentioned_location),
                                    MakeArgument("error_reason", "unknown location")}));
    location = s.user_location;
  } else if (s.mentioned_location) {
    location = s.mentioned_location;
  }

  std::vector<Item> items = ForecastItems(s, f, location);
  std::set<std::string> cats = ForecastCategories(s, f);
  double min_temp = 1e9;
  double max_temp = -1e9;
  for (const auto& p : f.points) {
    min_temp = std::min(min_temp, f.hourly ? p.temp : p.temp_low);
    max_temp = std::max(max_temp, f.hourly ? p.temp : p.temp_high);
  }

  if (s.question == QuestionKind::kBoolean) {
    bool yes = cats.count(s.subject) != 0;
    top.push_back(MakeAct(yes ? "YES" : "NO", {MakeArgument("condition", s.subject)}));
  }

  std::vector<MrNode> units = Aggregate(std::move(items));
  if (s.question == QuestionKind::kWhenCondition && cats.count(s.subject) == 0) {
    // Shares date and location with the first forecast act so a response may elide them.
    std::vector<MrNode> args;
    const MrNode* first = &units.front();
    while (first->kind == NodeKind::kRelation) first = &first->children.front();
    for (const auto& arg : first->children) {
      if (arg.label == "date_time" || arg.label == "location") args.push_back(arg);
    }
    args.push_back(MakeArgument("condition_not", s.subject));
    units.insert(units.begin(), MakeAct("INFORM", std::move(args)));
  }
  units = ApplyContrast(std::move(units), config.opposition);

  if (s.question == QuestionKind::kAttire || s.question == QuestionKind::kActivity) {
    bool positive = s.question == QuestionKind::kAttire
                        ? NeedsItem(s.subject, cats, min_temp)
                        : GoodForActivity(s.subject, cats, min_temp, max_temp);
    std::string arg = s.question == QuestionKind::kAttire ? "attire" : "activity";
    if (!positive) arg += "_not";
    MrNode rec = MakeAct("RECOMMEND", {MakeArgument(arg, s.subject)});
    MrNode justified = MakeRelation("JUSTIFY", {std::move(rec), std::move(units.front())});
    units.front() = std::move(justified);
  }
  for (auto& u : units) top.push_back(std::move(u));
  return Canonicalize(MrTree::FromTopLevel(std::move(top)));
}

}  // namespace treemr
