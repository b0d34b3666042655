/*!
 * \file ngram.cc
 */
#include <treemr/error.h>
#include <treemr/ngram.h>
#include <treemr/preprocess.h>

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

namespace treemr {

std::vector<int> ToIds(const Vocabulary& vocab, std::span<const Token> tokens) {
  std::vector<int> ids;
  ids.reserve(tokens.size() + 1);
  for (const auto& t : tokens) {
    if (!t.IsEos()) ids.push_back(vocab.Id(t));
  }
  ids.push_back(Vocabulary::kEos);
  return ids;
}

void NGramModel::Count(const std::vector<int>& ids, int order, CountTables* tables) {
  tables->resize(order);
  for (size_t i = 0; i < ids.size(); ++i) {
    for (int k = 0; k < order; ++k) {
      std::vector<int> context(k, -1);
      for (int j = 0; j < k; ++j) {
        int pos = static_cast<int>(i) - k + j;
        if (pos >= 0) context[j] = ids[pos];
      }
      auto& stats = (*tables)[k][context];
      stats.total += 1;
      stats.next[ids[i]] += 1;
    }
  }
}

NGramModel NGramModel::Train(std::span<const NGramExample> corpus, Vocabulary vocab,
                             NGramOptions options) {
  if (corpus.empty()) throw EmptyCorpus("cannot train an n-gram model on an empty corpus");
  if (options.order < 1) throw Error("n-gram order must be at least 1");
  if (!(options.discount > 0.0 && options.discount < 1.0)) {
    throw Error("absolute discount must lie in (0, 1)");
  }
  NGramModel model;
  model.vocab_ = std::move(vocab);
  model.options_ = options;

  std::map<std::string, std::vector<const std::vector<int>*>> by_signature;
  std::vector<std::vector<int>> encoded;
  encoded.reserve(corpus.size());
  for (const auto& ex : corpus) encoded.push_back(ToIds(model.vocab_, ex.tokens));
  for (size_t i = 0; i < corpus.size(); ++i) {
    Count(encoded[i], options.order, &model.global_);
    by_signature[Signature(corpus[i].mr)].push_back(&encoded[i]);
  }
  for (const auto& [signature, seqs] : by_signature) {
    if (static_cast<int>(seqs.size()) < options.min_signature_examples) continue;
    auto& tables = model.sub_models_[signature];
    for (const auto* ids : seqs) Count(*ids, options.order, &tables);
  }
  return model;
}

void NGramModel::Interpolate(const CountTables& tables, std::span<const int> prefix,
                             std::vector<double>* probs) const {
  const double d = options_.discount;
  std::vector<int> context;
  for (size_t k = 0; k < tables.size(); ++k) {
    context.assign(k, -1);
    for (size_t j = 0; j < k; ++j) {
      auto pos = static_cast<std::ptrdiff_t>(prefix.size()) - static_cast<std::ptrdiff_t>(k) +
                 static_cast<std::ptrdiff_t>(j);
      if (pos >= 0) context[j] = prefix[pos];
    }
    auto it = tables[k].find(context);
    if (it == tables[k].end()) continue;
    const auto& stats = it->second;
    double total = static_cast<double>(stats.total);
    double backoff = d * static_cast<double>(stats.next.size()) / total;
    for (auto& p : *probs) p *= backoff;
    for (const auto& [w, c] : stats.next) (*probs)[w] += (static_cast<double>(c) - d) / total;
  }
}

std::vector<double> NGramModel::Probabilities(std::span<const int> prefix,
                                              const std::string& signature) const {
  CheckPrefix(prefix);
  std::vector<double> probs(vocab_.size(), 1.0 / vocab_.size());
  Interpolate(global_, prefix, &probs);
  if (!signature.empty()) {
    auto it = sub_models_.find(signature);
    if (it != sub_models_.end()) Interpolate(it->second, prefix, &probs);
  }
  return probs;
}

std::vector<double> NGramModel::LogProbs(std::span<const int> prefix,
                                         const ScoringContext& context) const {
  auto probs = Probabilities(prefix, context.signature);
  for (auto& p : probs) p = std::log(p);
  return probs;
}

double NGramModel::LogLikelihood(std::span<const int> ids, const std::string& signature) const {
  std::vector<int> seq(ids.begin(), ids.end());
  if (seq.empty() || seq.back() != Vocabulary::kEos) seq.push_back(Vocabulary::kEos);
  double total = 0.0;
  for (size_t i = 0; i < seq.size(); ++i) {
    auto probs = Probabilities(std::span<const int>(seq.data(), i), signature);
    total += std::log(probs[seq[i]]);
  }
  return total;
}

NGramModel NGramModel::Truncated(int order) const {
  NGramModel copy = *this;
  if (order < 1 || order > options_.order) throw Error("invalid truncation order");
  copy.options_.order = order;
  copy.global_.resize(order);
  for (auto& [_, tables] : copy.sub_models_) tables.resize(order);
  return copy;
}

// Each context is stored flat as [context ids..., next, count, next, count, ...].
nlohmann::json NGramModel::ToJson() const {
  auto tables_json = [](const CountTables& tables) {
    nlohmann::json orders = nlohmann::json::array();
    for (const auto& table : tables) {
      nlohmann::json entries = nlohmann::json::array();
      for (const auto& [ctx, stats] : table) {
        std::vector<int64_t> flat(ctx.begin(), ctx.end());
        for (const auto& [w, c] : stats.next) {
          flat.push_back(w);
          flat.push_back(c);
        }
        entries.push_back(std::move(flat));
      }
      orders.push_back(std::move(entries));
    }
    return orders;
  };
  nlohmann::json j;
  j["format"] = "treemr-ngram";
  j["version"] = kFormatVersion;
  j["order"] = options_.order;
  j["discount"] = options_.discount;
  j["min_signature_examples"] = options_.min_signature_examples;
  j["vocabulary"] = vocab_.ToJson();
  j["global"] = tables_json(global_);
  nlohmann::json subs = nlohmann::json::object();
  for (const auto& [sig, tables] : sub_models_) subs[sig] = tables_json(tables);
  j["signatures"] = std::move(subs);
  return j;
}

NGramModel NGramModel::FromJson(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != "treemr-ngram") {
    throw ModelFormatError("not a treemr n-gram model");
  }
  if (!j.contains("version") || j["version"].get<int>() != kFormatVersion) {
    throw ModelFormatError("unsupported model version");
  }
  NGramModel model;
  model.options_.order = j.at("order").get<int>();
  model.options_.discount = j.at("discount").get<double>();
  model.options_.min_signature_examples = j.at("min_signature_examples").get<int>();
  model.vocab_ = Vocabulary::FromJson(j.at("vocabulary"));
  auto parse_tables = [&](const nlohmann::json& orders) {
    CountTables tables(orders.size());
    for (size_t k = 0; k < orders.size(); ++k) {
      for (const auto& entry : orders[k]) {
        auto flat = entry.get<std::vector<int64_t>>();
        if (flat.size() < k || (flat.size() - k) % 2 != 0) {
          throw ModelFormatError("malformed count entry");
        }
        std::vector<int> ctx(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(k));
        ContextStats stats;
        for (size_t i = k; i < flat.size(); i += 2) {
          if (flat[i] < 0 || flat[i] >= model.vocab_.size() || flat[i + 1] <= 0) {
            throw ModelFormatError("count entry out of range");
          }
          stats.next[static_cast<int>(flat[i])] = flat[i + 1];
          stats.total += flat[i + 1];
        }
        tables[k].emplace(std::move(ctx), std::move(stats));
      }
    }
    return tables;
  };
  model.global_ = parse_tables(j.at("global"));
  if (static_cast<int>(model.global_.size()) != model.options_.order) {
    throw ModelFormatError("count tables do not match the model order");
  }
  for (const auto& [sig, orders] : j.at("signatures").items()) {
    model.sub_models_[sig] = parse_tables(orders);
  }
  return model;
}

void NGramModel::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model to " + path);
  out << ToJson().dump() << '\n';
}

NGramModel NGramModel::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read model from " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  return FromJson(j);
}

}  // namespace treemr
