/*!
 * \file realizer.cc
 */
#include <treemr/constraint.h>
#include <treemr/error.h>
#include <treemr/realizer.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <sstream>

namespace treemr {

namespace {

constexpr const char* kDefaultTemplates = R"json({
  "arguments": {
    "condition": ["it will be {}", "expect {}", "look for {}"],
    "condition_not": ["there won't be any {}", "no {} is expected"],
    "YES.condition": ["expect {}", "there will be {}"],
    "NO.condition": ["don't expect {}", "there won't be {}"],
    "temp": ["temperatures around {} degrees", "around {} degrees"],
    "temp_high": ["a high of {}", "highs near {}"],
    "temp_low": ["a low of {}", "lows around {}"],
    "precip_chance": ["a {} percent chance of", "about a {} percent chance of"],
    "precip_type": ["{}"],
    "wind_speed": ["winds up to {} mph", "gusts near {} mph"],
    "location": ["in {}", "for {}"],
    "ERROR.location": ["{}"],
    "date_time/colloquial": ["{}"],
    "date_time/weekday": ["on {}", "{}"],
    "date_time/day": ["{}"],
    "date_time/month": ["{}"],
    "error_reason=unknown location": ["is an {} to me", "is an {} I can't find"],
    "error_reason=too far in the future": ["is {} to forecast", "is {} for me"],
    "attire": ["bring your {}", "you'll want your {}"],
    "attire_not": ["you won't need your {}", "leave your {} at home"],
    "activity": ["it's a good time to {}", "you can {}"],
    "activity_not": ["it's not a good time to {}", "you may not want to {}"]
  },
  "acts": {
    "INFORM": {"lead": ["location", "date_time"]},
    "YES": {"prefix": ["yes ,", "yeah ,"]},
    "NO": {"prefix": ["no ,", "nope ,"]},
    "ERROR": {"prefix": ["sorry ,", "I'm sorry ,"], "list": false},
    "RECOMMEND": {}
  },
  "relations": {
    "CONTRAST": ["{0} , but {1}", "{0} . however , {1}", "{0} , while {1}"],
    "JUSTIFY": ["{0} because {1}", "{1} , so {0}", "{0} since {1}"]
  },
  "separators": {
    "JOIN": [".", ". also ,"]
  },
  "order": ["location", "date_time", "condition", "condition_not", "temp", "temp_high",
            "temp_low", "precip_chance", "precip_type", "wind_speed", "attire", "attire_not",
            "activity", "activity_not", "error_reason"],
  "attach": ["precip_type"]
})json";

std::vector<std::string> Split(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Builds an AnnotatedNode piece by piece: words go to the current span, a child
// closes it and opens the next.
struct Builder {
  AnnotatedNode node;

  explicit Builder(const MrNode& mr) {
    node.kind = mr.kind;
    node.label = mr.label;
  }
  void Words(const std::vector<std::string>& words) {
    auto& span = node.spans.back();
    span.insert(span.end(), words.begin(), words.end());
  }
  void Words(const std::string& text) { Words(Split(text)); }
  void Child(AnnotatedNode child) {
    node.children.push_back(std::move(child));
    node.spans.emplace_back();
  }
};

template <typename T>
const T& Pick(std::mt19937_64& rng, const std::vector<T>& items) {
  return items[std::uniform_int_distribution<size_t>(0, items.size() - 1)(rng)];
}

class Realizer {
 public:
  Realizer(const MrTree& mr, const TemplateSet& t, uint64_t seed, double ellipsis_prob)
      : t_(t), rng_(seed) {
    Index(mr.root(), -1);
    ChooseEllipsis(mr, ellipsis_prob);
  }

  AnnotatedNode Run(const MrNode& root) {
    int id = 0;
    AnnotatedNode out = Node(root, &id);
    out.spans.back().push_back(".");
    return out;
  }

 private:
  void Index(const MrNode& node, int parent) {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(&node);
    parents_.push_back(parent);
    for (const auto& c : node.children) Index(c, id);
  }

  // At most one member of each same-value group of act arguments is dropped, and
  // never the last realized argument of an act.
  void ChooseEllipsis(const MrTree& mr, double p) {
    elided_.assign(nodes_.size(), false);
    auto groups = ComputeEllipsisOptions(mr);
    std::set<int> seen;
    for (size_t id = 0; id < groups.size(); ++id) {
      const auto& group = groups[id];
      if (group.size() < 2 || seen.count(group.front())) continue;
      seen.insert(group.front());
      std::vector<int> members;
      for (int m : group) {
        int parent = parents_[m];
        if (nodes_[m]->kind == NodeKind::kArgument && parent >= 0 &&
            nodes_[parent]->kind == NodeKind::kAct) {
          members.push_back(m);
        }
      }
      if (members.size() < 2) continue;
      if (std::uniform_real_distribution<double>(0.0, 1.0)(rng_) >= p) continue;
      std::vector<int> candidates;
      for (int m : members) {
        int parent = parents_[m];
        int realized = 0;
        for (size_t k = 0; k < nodes_.size(); ++k) {
          if (parents_[k] == parent && !elided_[k]) ++realized;
        }
        if (realized >= 2) candidates.push_back(m);
      }
      if (candidates.empty()) continue;
      elided_[Pick(rng_, candidates)] = true;
    }
  }

  const std::vector<std::string>* Lookup(const std::string& act, const MrNode& arg) const {
    std::vector<std::string> keys = {act + "." + arg.label + "=" + arg.value, act + "." + arg.label,
                                     arg.label + "=" + arg.value};
    if (!arg.children.empty()) keys.push_back(arg.label + "/" + arg.children.front().label);
    keys.push_back(arg.label);
    for (const auto& k : keys) {
      auto it = t_.arguments.find(k);
      if (it != t_.arguments.end() && !it->second.empty()) return &it->second;
    }
    return nullptr;
  }

  AnnotatedNode Argument(const MrNode& node, int* id) {
    Builder b(node);
    ++*id;
    if (node.children.empty()) {
      b.Words(node.value);
    } else {
      for (const auto& c : node.children) b.Child(Argument(c, id));
    }
    return b.node;
  }

  void SkipSubtree(const MrNode& node, int* id) {
    ++*id;
    for (const auto& c : node.children) SkipSubtree(c, id);
  }

  // Places a realized argument into `b` following a pattern "words {} words".
  void Phrase(Builder* b, const std::string& pattern, AnnotatedNode arg) {
    auto pos = pattern.find("{}");
    if (pos == std::string::npos) throw NoTemplate("pattern lacks {}: " + pattern);
    b->Words(pattern.substr(0, pos));
    b->Child(std::move(arg));
    b->Words(pattern.substr(pos + 2));
  }

  int Rank(const std::string& label) const {
    auto it = std::find(t_.order.begin(), t_.order.end(), label);
    return static_cast<int>(it - t_.order.begin());
  }

  AnnotatedNode Act(const MrNode& node, int* id) {
    Builder b(node);
    ++*id;
    struct Arg {
      const MrNode* node;
      AnnotatedNode realized;
    };
    std::vector<Arg> args;
    for (const auto& c : node.children) {
      if (elided_[*id]) {
        SkipSubtree(c, id);
        continue;
      }
      args.push_back({&c, Argument(c, id)});
    }
    std::stable_sort(args.begin(), args.end(), [&](const Arg& x, const Arg& y) {
      return Rank(x.node->label) < Rank(y.node->label);
    });
    auto sit = t_.acts.find(node.label);
    const ActStyle& style = sit != t_.acts.end() ? sit->second : t_.default_act;
    if (!style.prefix.empty()) b.Words(Pick(rng_, style.prefix));

    auto is = [](const std::vector<std::string>& v, const std::string& x) {
      return std::find(v.begin(), v.end(), x) != v.end();
    };
    std::vector<Arg*> lead;
    std::vector<Arg*> main;
    for (auto& a : args) (is(style.lead, a.node->label) ? lead : main).push_back(&a);
    auto emit = [&](Arg* a) {
      const auto* patterns = Lookup(node.label, *a->node);
      if (patterns == nullptr) {
        throw NoTemplate("no template for argument " + a->node->label + " of " + node.label);
      }
      Phrase(&b, Pick(rng_, *patterns), std::move(a->realized));
    };
    for (auto* a : lead) emit(a);
    if (!lead.empty() && !main.empty()) b.Words(",");
    // Count list items, treating attached arguments as part of the previous one.
    std::vector<size_t> starts;
    for (size_t i = 0; i < main.size(); ++i) {
      if (i == 0 || !is(t_.attach, main[i]->node->label)) starts.push_back(i);
    }
    for (size_t i = 0, item = 0; i < main.size(); ++i) {
      if (i > 0 && item < starts.size() && starts[item] == i) {
        if (style.list) b.Words(item + 1 == starts.size() ? "and" : ",");
      }
      if (item < starts.size() && starts[item] == i) ++item;
      emit(main[i]);
    }
    return b.node;
  }

  AnnotatedNode Relation(const MrNode& node, int* id) {
    Builder b(node);
    ++*id;
    std::vector<AnnotatedNode> kids;
    for (const auto& c : node.children) kids.push_back(Node(c, id));
    auto rit = t_.relations.find(node.label);
    if (kids.size() == 2 && rit != t_.relations.end() && !rit->second.empty()) {
      for (const auto& w : Split(Pick(rng_, rit->second))) {
        if (w == "{0}") {
          b.Child(std::move(kids[0]));
        } else if (w == "{1}") {
          b.Child(std::move(kids[1]));
        } else {
          b.Words(std::vector<std::string>{w});
        }
      }
      if (b.node.children.size() != 2) throw NoTemplate("relation pattern must use {0} and {1}");
      return b.node;
    }
    auto sit = t_.separators.find(node.label);
    if (sit == t_.separators.end() || sit->second.empty()) {
      throw NoTemplate("no template for relation " + node.label + " with " +
                       std::to_string(kids.size()) + " children");
    }
    for (size_t i = 0; i < kids.size(); ++i) {
      if (i > 0) b.Words(Pick(rng_, sit->second));
      b.Child(std::move(kids[i]));
    }
    return b.node;
  }

  AnnotatedNode Node(const MrNode& node, int* id) {
    switch (node.kind) {
      case NodeKind::kRelation:
        return Relation(node, id);
      case NodeKind::kAct:
        return Act(node, id);
      case NodeKind::kArgument:
        break;
    }
    throw NoTemplate("an argument cannot be realized outside a dialog act");
  }

  const TemplateSet& t_;
  std::mt19937_64 rng_;
  std::vector<const MrNode*> nodes_;
  std::vector<int> parents_;
  std::vector<bool> elided_;
};

ActStyle StyleFromJson(const nlohmann::json& j) {
  ActStyle s;
  if (j.contains("prefix")) s.prefix = j["prefix"].get<std::vector<std::string>>();
  if (j.contains("lead")) s.lead = j["lead"].get<std::vector<std::string>>();
  if (j.contains("list")) s.list = j["list"].get<bool>();
  return s;
}

}  // namespace

TemplateSet TemplateSet::Default() { return FromJson(nlohmann::json::parse(kDefaultTemplates)); }

TemplateSet TemplateSet::FromJson(const nlohmann::json& j) {
  TemplateSet t;
  try {
    if (j.contains("arguments")) {
      t.arguments = j["arguments"].get<std::map<std::string, std::vector<std::string>>>();
    }
    if (j.contains("acts")) {
      for (const auto& [name, style] : j["acts"].items()) t.acts[name] = StyleFromJson(style);
    }
    if (j.contains("default_act")) t.default_act = StyleFromJson(j["default_act"]);
    if (j.contains("relations")) {
      t.relations = j["relations"].get<std::map<std::string, std::vector<std::string>>>();
    }
    if (j.contains("separators")) {
      t.separators = j["separators"].get<std::map<std::string, std::vector<std::string>>>();
    }
    if (j.contains("order")) t.order = j["order"].get<std::vector<std::string>>();
    if (j.contains("attach")) t.attach = j["attach"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed template file: ") + e.what());
  }
  return t;
}

nlohmann::json TemplateSet::ToJson() const {
  auto style = [](const ActStyle& s) {
    return nlohmann::json{{"prefix", s.prefix}, {"lead", s.lead}, {"list", s.list}};
  };
  nlohmann::json j;
  j["arguments"] = arguments;
  j["acts"] = nlohmann::json::object();
  for (const auto& [name, s] : acts) j["acts"][name] = style(s);
  j["default_act"] = style(default_act);
  j["relations"] = relations;
  j["separators"] = separators;
  j["order"] = order;
  j["attach"] = attach;
  return j;
}

AnnotatedNode Realize(const MrTree& mr, uint64_t seed, const TemplateSet& templates,
                      const RealizeOptions& options) {
  Realizer r(mr, templates, seed, options.ellipsis_prob);
  return r.Run(mr.root());
}

std::string SurfaceText(const AnnotatedNode& tree) {
  std::string out;
  for (const auto& w : tree.Words()) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace treemr
