/*!
 * \file ontology.cc
 */
#include <treemr/error.h>
#include <treemr/ontology.h>

#include <algorithm>
#include <cctype>

namespace treemr {

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string Upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

// Strips a trailing "_<digits>" suffix; returns nullopt when there is none.
std::optional<std::string_view> StripNumericSuffix(std::string_view s) {
  auto pos = s.rfind('_');
  if (pos == std::string_view::npos || pos + 1 == s.size()) return std::nullopt;
  for (size_t i = pos + 1; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
  }
  return s.substr(0, pos);
}

}  // namespace

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kRelation:
      return "relation";
    case NodeKind::kAct:
      return "act";
    case NodeKind::kArgument:
      return "argument";
  }
  return "?";
}

Ontology::Ontology(std::vector<std::string> dialog_acts,
                   std::vector<std::string> discourse_relations,
                   std::vector<ArgumentSpec> arguments,
                   std::vector<std::string> delexicalized_args)
    : arguments_(std::move(arguments)) {
  for (auto& a : dialog_acts) dialog_acts_.insert(Upper(a));
  for (auto& r : discourse_relations) discourse_relations_.insert(Upper(r));
  for (auto& d : delexicalized_args) delexicalized_.insert(d);
  Index();
}

void Ontology::Index() {
  lookup_.clear();
  act_arguments_.clear();
  subfields_.clear();
  auto add = [this](const std::string& canonical, NodeKind kind) {
    auto key = Lower(canonical);
    auto it = lookup_.find(key);
    if (it != lookup_.end()) {
      // A subfield name may recur under several parents, and a subfield may share
      // a name with a plain argument; both are arguments. Anything else collides.
      if (it->second.kind == NodeKind::kArgument && kind == NodeKind::kArgument) return;
      throw OntologyError("label '" + canonical + "' declared as both " +
                          std::string(NodeKindName(it->second.kind)) + " and " +
                          std::string(NodeKindName(kind)));
    }
    lookup_.emplace(key, LabelInfo{kind, canonical});
  };
  for (const auto& a : dialog_acts_) add(a, NodeKind::kAct);
  for (const auto& r : discourse_relations_) add(r, NodeKind::kRelation);
  std::set<std::string> seen_args;
  for (const auto& spec : arguments_) {
    if (!seen_args.insert(Lower(spec.name)).second) {
      throw OntologyError("argument '" + spec.name + "' declared twice");
    }
    std::vector<std::string> forms{spec.name};
    if (spec.has_not) forms.push_back(spec.name + "_not");
    if (spec.has_summary) forms.push_back(spec.name + "_summary");
    for (const auto& f : forms) {
      add(f, NodeKind::kArgument);
      act_arguments_.insert(f);
    }
    std::set<std::string, std::less<>> subs;
    for (const auto& sub : spec.subfields) {
      if (!subs.insert(sub).second) {
        throw OntologyError("subfield '" + sub + "' repeated under '" + spec.name + "'");
      }
      add(sub, NodeKind::kArgument);
    }
    if (!subs.empty()) subfields_.emplace(spec.name, std::move(subs));
  }
}

Ontology Ontology::WithArgument(ArgumentSpec spec, bool delexicalized) const {
  Ontology copy = *this;
  if (delexicalized) copy.delexicalized_.insert(spec.name);
  copy.arguments_.push_back(std::move(spec));
  copy.Index();
  return copy;
}

std::optional<LabelInfo> Ontology::Resolve(std::string_view raw) const {
  auto it = lookup_.find(Lower(raw));
  if (it != lookup_.end()) return it->second;
  if (auto stripped = StripNumericSuffix(raw)) {
    it = lookup_.find(Lower(*stripped));
    if (it != lookup_.end()) return it->second;
  }
  return std::nullopt;
}

bool Ontology::IsActArgument(std::string_view label) const {
  return act_arguments_.find(label) != act_arguments_.end();
}

bool Ontology::IsSubfield(std::string_view parent, std::string_view child) const {
  auto it = subfields_.find(parent);
  return it != subfields_.end() && it->second.find(child) != it->second.end();
}

bool Ontology::IsDelexicalized(std::string_view label) const {
  return delexicalized_.find(std::string(label)) != delexicalized_.end();
}

std::vector<std::string> Ontology::AllLabels() const {
  std::vector<std::string> out;
  out.reserve(lookup_.size());
  for (const auto& [_, info] : lookup_) out.push_back(info.canonical);
  std::sort(out.begin(), out.end());
  return out;
}

Ontology Ontology::Weather() {
  std::vector<ArgumentSpec> args = {
      {"date_time", false, false, {"year", "month", "day", "weekday", "colloquial"}},
      {"date_time_range",
       false,
       false,
       {"start_year", "start_month", "start_day", "start_weekday", "end_year", "end_month",
        "end_day", "end_weekday", "colloquial"}},
      {"location", false, false, {"city", "region", "country", "colloquial"}},
      {"attire", true, false, {}},
      {"activity", true, false, {}},
      {"condition", true, false, {}},
      {"humidity", true, false, {}},
      {"precip_amount", false, false, {}},
      {"precip_amount_unit", false, false, {}},
      {"precip_chance", false, false, {}},
      {"precip_chance_summary", false, false, {}},
      {"precip_type", false, false, {}},
      {"sunrise_time", false, false, {}},
      {"temp", false, false, {}},
      {"temp_high", false, true, {}},
      {"temp_low", false, true, {}},
      {"temp_unit", false, false, {}},
      {"wind_speed", true, false, {}},
      {"wind_speed_unit", false, false, {}},
      {"sunset_time", false, false, {}},
      {"task", false, false, {}},
      {"bad_arg", false, false, {}},
      {"bad_value", false, false, {}},
      {"error_reason", false, false, {}},
  };
  std::vector<std::string> delex = {
      "temp",       "temp_high",   "temp_low",      "precip_chance", "day",
      "month",      "year",        "start_day",     "start_month",   "start_year",
      "end_day",    "end_month",   "end_year",      "city",          "region",
      "country",    "weekday",     "start_weekday", "end_weekday",
  };
  return Ontology({"INFORM", "RECOMMEND", "YES", "NO", "ERROR"}, {"JOIN", "CONTRAST", "JUSTIFY"},
                  std::move(args), std::move(delex));
}

Ontology Ontology::E2E() {
  std::vector<ArgumentSpec> args = {
      {"name", false, false, {}},          {"eatType", false, false, {}},
      {"food", false, false, {}},          {"priceRange", false, false, {}},
      {"customerRating", false, false, {}}, {"rating", false, false, {}},
      {"area", false, false, {}},          {"familyFriendly", false, false, {}},
      {"near", false, false, {}},
  };
  return Ontology({"INFORM"}, {"JOIN", "CONTRAST", "JUSTIFY"}, std::move(args), {"name", "near"});
}

}  // namespace treemr
