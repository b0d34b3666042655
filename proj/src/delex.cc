/*!
 * \file delex.cc
 */
#include <treemr/delex.h>
#include <treemr/error.h>

#include <algorithm>
#include <cctype>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

namespace treemr {

namespace {

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string JoinWords(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

bool IsDelexLeaf(std::string_view label, bool leaf, NodeKind kind, const Ontology& ontology) {
  return kind == NodeKind::kArgument && leaf && ontology.IsDelexicalized(label);
}

MrNode DelexNode(const MrNode& node, const Ontology& ontology, bool share, DelexTable* table) {
  MrNode out = node;
  if (IsDelexLeaf(node.label, node.IsLeaf(), node.kind, ontology)) {
    std::string value = JoinWords(SplitWords(node.value));
    if (!value.empty()) out.value = table->Assign(node.label, value, share);
    return out;
  }
  for (size_t i = 0; i < node.children.size(); ++i) {
    out.children[i] = DelexNode(node.children[i], ontology, share, table);
  }
  return out;
}

AnnotatedNode DelexAnnotatedNode(const AnnotatedNode& node, const Ontology& ontology, bool share,
                                 DelexTable* table) {
  AnnotatedNode out = node;
  if (IsDelexLeaf(node.label, node.children.empty(), node.kind, ontology)) {
    auto words = node.Words();
    if (!words.empty()) out.spans = {{table->Assign(node.label, JoinWords(words), share)}};
    return out;
  }
  for (size_t i = 0; i < node.children.size(); ++i) {
    out.children[i] = DelexAnnotatedNode(node.children[i], ontology, share, table);
  }
  return out;
}

struct SpanMatcher {
  const Ontology& ontology;
  bool share;
  DelexTable* table;
  std::set<std::string> used;

  AnnotatedNode Apply(const AnnotatedNode& node) {
    AnnotatedNode out = node;
    if (!IsDelexLeaf(node.label, node.children.empty(), node.kind, ontology)) {
      for (size_t i = 0; i < node.children.size(); ++i) out.children[i] = Apply(node.children[i]);
      return out;
    }
    std::vector<std::string> words = node.Words();
    if (words.empty()) return out;

    // Longest value of this label occurring inside the span; with per-occurrence
    // numbering prefer a placeholder not yet consumed.
    const DelexEntry* best = nullptr;
    size_t best_pos = 0;
    size_t best_len = 0;
    bool best_unused = false;
    for (const auto& entry : table->entries()) {
      if (entry.label != node.label) continue;
      auto value = SplitWords(entry.value);
      if (value.empty() || value.size() > words.size()) continue;
      auto it = std::search(words.begin(), words.end(), value.begin(), value.end());
      if (it == words.end()) continue;
      bool unused = used.count(entry.placeholder) == 0;
      bool better = value.size() > best_len ||
                    (value.size() == best_len && !share && unused && !best_unused);
      if (better) {
        best = &entry;
        best_pos = static_cast<size_t>(it - words.begin());
        best_len = value.size();
        best_unused = unused;
      }
    }
    std::string placeholder;
    if (best == nullptr) {
      best_pos = 0;
      best_len = words.size();
      placeholder = table->Assign(node.label, JoinWords(words), share);
    } else {
      placeholder = best->placeholder;
    }
    used.insert(placeholder);
    std::vector<std::string> replaced(words.begin(), words.begin() + best_pos);
    replaced.push_back(placeholder);
    replaced.insert(replaced.end(), words.begin() + best_pos + best_len, words.end());
    out.spans = {std::move(replaced)};
    return out;
  }
};

}  // namespace

std::string MakePlaceholder(std::string_view label, int k) {
  std::string out = "__";
  for (char c : label) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out + "_" + std::to_string(k) + "__";
}

bool IsPlaceholder(std::string_view word) {
  if (word.size() < 7 || word.substr(0, 2) != "__" || word.substr(word.size() - 2) != "__") {
    return false;
  }
  std::string_view inner = word.substr(2, word.size() - 4);
  auto us = inner.rfind('_');
  if (us == std::string_view::npos || us == 0 || us + 1 == inner.size()) return false;
  for (char c : inner.substr(us + 1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  for (char c : inner.substr(0, us)) {
    if (!(std::isupper(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_')) {
      return false;
    }
  }
  return true;
}

const DelexEntry* DelexTable::Find(std::string_view placeholder) const {
  for (const auto& e : entries_) {
    if (e.placeholder == placeholder) return &e;
  }
  return nullptr;
}

const std::string& DelexTable::Assign(const std::string& label, const std::string& value,
                                      bool share) {
  int count = 0;
  for (const auto& e : entries_) {
    if (e.label != label) continue;
    if (share && e.value == value) return e.placeholder;
    ++count;
  }
  entries_.push_back({MakePlaceholder(label, count + 1), label, value});
  return entries_.back().placeholder;
}

nlohmann::json DelexTable::ToJson() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : entries_) {
    j.push_back({{"placeholder", e.placeholder}, {"label", e.label}, {"value", e.value}});
  }
  return j;
}

DelexTable DelexTable::FromJson(const nlohmann::json& j) {
  if (!j.is_array()) throw Error("delex table must be a JSON array");
  DelexTable table;
  for (const auto& item : j) {
    DelexEntry e{item.at("placeholder").get<std::string>(), item.at("label").get<std::string>(),
                 item.at("value").get<std::string>()};
    if (!IsPlaceholder(e.placeholder)) throw Error("malformed placeholder " + e.placeholder);
    if (table.Find(e.placeholder) != nullptr) throw Error("duplicate placeholder " + e.placeholder);
    table.entries_.push_back(std::move(e));
  }
  return table;
}

DelexMr Delexicalize(const MrTree& mr, const Ontology& ontology, DelexOptions options) {
  DelexMr out{mr, {}};
  out.mr = MrTree(DelexNode(mr.root(), ontology, !options.number_each_occurrence, &out.table));
  return out;
}

DelexAnnotated Delexicalize(const AnnotatedNode& tree, const Ontology& ontology,
                            DelexOptions options) {
  DelexAnnotated out;
  out.tree = DelexAnnotatedNode(tree, ontology, !options.number_each_occurrence, &out.table);
  return out;
}

DelexPair Delexicalize(const MrTree& mr, const AnnotatedNode& annotated,
                       const Ontology& ontology, DelexOptions options) {
  auto dm = Delexicalize(mr, ontology, options);
  DelexPair out{std::move(dm.mr), {}, std::move(dm.table)};
  SpanMatcher matcher{ontology, !options.number_each_occurrence, &out.table, {}};
  out.annotated = matcher.Apply(annotated);
  return out;
}

std::vector<Token> Relexicalize(std::span<const Token> tokens, const DelexTable& table) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!t.IsWord() || !IsPlaceholder(t.text)) {
      out.push_back(t);
      continue;
    }
    const DelexEntry* e = table.Find(t.text);
    if (e == nullptr) throw UnknownPlaceholder("placeholder " + t.text + " is not in the table");
    for (auto& w : SplitWords(e->value)) out.push_back(Token::Word(std::move(w)));
  }
  return out;
}

std::string RelexicalizeText(std::string_view text, const DelexTable& table) {
  std::vector<std::string> out;
  for (auto& w : SplitWords(text)) {
    if (!IsPlaceholder(w)) {
      out.push_back(std::move(w));
      continue;
    }
    const DelexEntry* e = table.Find(w);
    if (e == nullptr) throw UnknownPlaceholder("placeholder " + w + " is not in the table");
    out.push_back(e->value);
  }
  return JoinWords(out);
}

}  // namespace treemr
