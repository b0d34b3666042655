/*!
 * \file scorer.cc
 */
#include <treemr/error.h>
#include <treemr/preprocess.h>
#include <treemr/scorer.h>

#include <cmath>
#include <nlohmann/json.hpp>

namespace treemr {

Vocabulary::Vocabulary() {
  Add("<unk>");
  Add(kCloseString);
  Add(kEosString);
}

int Vocabulary::Add(std::string_view token) {
  auto it = ids_.find(std::string(token));
  if (it != ids_.end()) return it->second;
  int id = size();
  strings_.emplace_back(token);
  ids_.emplace(strings_.back(), id);
  return id;
}

std::optional<int> Vocabulary::Find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

int Vocabulary::Id(std::string_view token) const { return Find(token).value_or(kUnk); }

nlohmann::json Vocabulary::ToJson() const { return strings_; }

Vocabulary Vocabulary::FromJson(const nlohmann::json& j) {
  auto strings = j.get<std::vector<std::string>>();
  if (strings.size() < 3 || strings[kUnk] != "<unk>" || strings[kClose] != kCloseString ||
      strings[kEos] != kEosString) {
    throw ModelFormatError("vocabulary does not start with the reserved tokens");
  }
  Vocabulary v;
  for (size_t i = 3; i < strings.size(); ++i) {
    if (v.Add(strings[i]) != static_cast<int>(i)) {
      throw ModelFormatError("duplicate vocabulary entry '" + strings[i] + "'");
    }
  }
  return v;
}

ScoringContext Scorer::MakeContext(const MrTree& mr) const {
  ScoringContext ctx;
  ctx.mr = &mr;
  ctx.signature = Signature(mr);
  for (const auto& tok : Linearize(mr)) ctx.mr_token_ids.push_back(vocabulary().Id(tok));
  return ctx;
}

void Scorer::CheckPrefix(std::span<const int> prefix) const {
  int v = vocabulary().size();
  for (int id : prefix) {
    if (id < 0 || id >= v) {
      throw UnknownToken("token id " + std::to_string(id) + " outside vocabulary of size " +
                         std::to_string(v));
    }
  }
}

std::vector<double> UniformScorer::LogProbs(std::span<const int> prefix,
                                            const ScoringContext&) const {
  CheckPrefix(prefix);
  return std::vector<double>(vocab_.size(), -std::log(static_cast<double>(vocab_.size())));
}

Vocabulary BuildVocabulary(const Ontology& ontology,
                           std::span<const std::vector<Token>> sequences) {
  Vocabulary v;
  for (const auto& label : ontology.AllLabels()) v.Add(Token::Open(label));
  for (const auto& seq : sequences) {
    for (const auto& tok : seq) v.Add(tok);
  }
  return v;
}

}  // namespace treemr
