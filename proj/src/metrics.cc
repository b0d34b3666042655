/*!
 * \file metrics.cc
 */
#include <treemr/constraint.h>
#include <treemr/error.h>
#include <treemr/metrics.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

namespace treemr {

TreeAccuracyResult TreeAccuracy(std::span<const MrTree> mrs,
                                std::span<const std::vector<Token>> predictions) {
  if (mrs.empty()) throw EmptyCorpus("no examples to evaluate");
  if (mrs.size() != predictions.size()) throw Error("MR and prediction counts differ");
  TreeAccuracyResult result;
  size_t good = 0;
  for (size_t i = 0; i < mrs.size(); ++i) {
    bool ok = CheckTree(mrs[i], predictions[i]);
    result.valid.push_back(ok);
    good += ok;
  }
  result.accuracy = static_cast<double>(good) / static_cast<double>(mrs.size());
  return result;
}

namespace {

constexpr int kMaxOrder = 4;

using NGramCounts = std::map<std::vector<std::string>, int64_t>;

NGramCounts CountNGrams(const Sentence& s, int n) {
  NGramCounts counts;
  for (size_t i = 0; i + n <= s.size(); ++i) {
    counts[std::vector<std::string>(s.begin() + i, s.begin() + i + n)] += 1;
  }
  return counts;
}

struct Stats {
  int64_t matches[kMaxOrder] = {};
  int64_t totals[kMaxOrder] = {};
  int64_t hyp_len = 0;
  int64_t ref_len = 0;
};

void Accumulate(const Sentence& hyp, std::span<const Sentence> refs, Stats* stats) {
  stats->hyp_len += static_cast<int64_t>(hyp.size());
  int64_t best = -1;
  for (const auto& r : refs) {
    auto len = static_cast<int64_t>(r.size());
    auto hl = static_cast<int64_t>(hyp.size());
    if (best < 0 || std::abs(len - hl) < std::abs(best - hl) ||
        (std::abs(len - hl) == std::abs(best - hl) && len < best)) {
      best = len;
    }
  }
  stats->ref_len += std::max<int64_t>(best, 0);
  for (int n = 1; n <= kMaxOrder; ++n) {
    NGramCounts hyp_counts = CountNGrams(hyp, n);
    NGramCounts max_ref;
    for (const auto& r : refs) {
      for (const auto& [g, c] : CountNGrams(r, n)) max_ref[g] = std::max(max_ref[g], c);
    }
    for (const auto& [g, c] : hyp_counts) {
      auto it = max_ref.find(g);
      if (it != max_ref.end()) stats->matches[n - 1] += std::min(c, it->second);
      stats->totals[n - 1] += c;
    }
  }
}

double BrevityPenalty(int64_t hyp_len, int64_t ref_len) {
  if (hyp_len == 0) return 0.0;
  if (hyp_len >= ref_len) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
}

}  // namespace

double Bleu4(std::span<const Sentence> hypotheses,
             std::span<const std::vector<Sentence>> references) {
  if (hypotheses.empty()) throw EmptyCorpus("BLEU needs at least one hypothesis");
  if (hypotheses.size() != references.size()) {
    throw Error("hypothesis and reference counts differ");
  }
  Stats stats;
  for (size_t i = 0; i < hypotheses.size(); ++i) Accumulate(hypotheses[i], references[i], &stats);
  double log_sum = 0.0;
  for (int n = 0; n < kMaxOrder; ++n) {
    if (stats.matches[n] == 0 || stats.totals[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(stats.matches[n]) /
                        static_cast<double>(stats.totals[n]));
  }
  return BrevityPenalty(stats.hyp_len, stats.ref_len) * std::exp(log_sum / kMaxOrder);
}

double SentenceBleu(const Sentence& hypothesis, std::span<const Sentence> references) {
  Stats stats;
  Accumulate(hypothesis, references, &stats);
  double log_sum = 0.0;
  for (int n = 0; n < kMaxOrder; ++n) {
    double m = static_cast<double>(stats.matches[n]);
    double t = static_cast<double>(stats.totals[n]);
    if (n > 0) {
      m += 1.0;
      t += 1.0;
    }
    if (m == 0.0 || t == 0.0) return 0.0;
    log_sum += std::log(m / t);
  }
  return BrevityPenalty(stats.hyp_len, stats.ref_len) * std::exp(log_sum / kMaxOrder);
}

std::vector<size_t> SelectBestPerFlatMr(std::span<const std::vector<Sentence>> groups,
                                        std::span<const std::vector<Sentence>> references) {
  if (groups.size() != references.size()) throw Error("group and reference counts differ");
  std::vector<size_t> chosen;
  chosen.reserve(groups.size());
  for (size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw Error("empty hypothesis group");
    size_t best = 0;
    double best_score = -1.0;
    for (size_t i = 0; i < groups[g].size(); ++i) {
      double s = SentenceBleu(groups[g][i], references[g]);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

Diversity ComputeDiversity(std::span<const Sentence> corpus) {
  Diversity d;
  std::map<std::string, int64_t> unigrams;
  std::map<std::string, int64_t> first;
  std::map<std::pair<std::string, std::string>, int64_t> bigrams;
  std::set<std::vector<std::string>> trigrams;
  int64_t tokens = 0;
  int64_t bigram_total = 0;
  for (const auto& s : corpus) {
    for (size_t i = 0; i < s.size(); ++i) {
      unigrams[s[i]] += 1;
      ++tokens;
      if (i + 1 < s.size()) {
        bigrams[{s[i], s[i + 1]}] += 1;
        first[s[i]] += 1;
        ++bigram_total;
      }
      if (i + 2 < s.size()) trigrams.insert({s[i], s[i + 1], s[i + 2]});
    }
  }
  d.unique_tokens = static_cast<int64_t>(unigrams.size());
  d.unique_trigrams = static_cast<int64_t>(trigrams.size());
  for (const auto& [_, c] : unigrams) {
    double p = static_cast<double>(c) / static_cast<double>(tokens);
    d.shannon_entropy_bits -= p * std::log2(p);
  }
  for (const auto& [bg, c] : bigrams) {
    double joint = static_cast<double>(c) / static_cast<double>(bigram_total);
    double cond = static_cast<double>(c) / static_cast<double>(first[bg.first]);
    d.conditional_bigram_entropy_bits -= joint * std::log2(cond);
  }
  // -0.0 from a single-token corpus reads badly in reports.
  d.shannon_entropy_bits = std::max(0.0, d.shannon_entropy_bits);
  d.conditional_bigram_entropy_bits = std::max(0.0, d.conditional_bigram_entropy_bits);
  return d;
}

nlohmann::json EvalReport::ToJson() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["examples"] = examples;
  j["failures"] = failures;
  j["tree_accuracy"] = tree_accuracy;
  j["bleu4"] = bleu4;
  j["diversity"] = {
      {"unique_tokens", diversity.unique_tokens},
      {"unique_trigrams", diversity.unique_trigrams},
      {"shannon_entropy_bits", diversity.shannon_entropy_bits},
      {"conditional_bigram_entropy_bits", diversity.conditional_bigram_entropy_bits},
  };
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) {
    recs.push_back({{"index", r.index},
                    {"tree_valid", r.tree_valid},
                    {"failed", r.failed},
                    {"prediction", r.prediction}});
  }
  j["records"] = std::move(recs);
  return j;
}

}  // namespace treemr
