/*!
 * \file beam_search.cc
 */
#include <treemr/beam_search.h>
#include <treemr/error.h>

#include <algorithm>
#include <cmath>

namespace treemr {

std::string_view DecodeModeName(DecodeMode mode) {
  switch (mode) {
    case DecodeMode::kConstrained:
      return "constrained";
    case DecodeMode::kUnconstrained:
      return "unconstrained";
    case DecodeMode::kRerankByTreeAccuracy:
      return "rerank";
  }
  return "constrained";
}

DecodeMode ParseDecodeMode(std::string_view name) {
  if (name == "constrained") return DecodeMode::kConstrained;
  if (name == "unconstrained") return DecodeMode::kUnconstrained;
  if (name == "rerank") return DecodeMode::kRerankByTreeAccuracy;
  throw Error("unknown decode mode '" + std::string(name) + "'");
}

int DefaultMaxLength(const MrTree& mr) {
  return 2 * static_cast<int>(Linearize(mr).size()) + 64;
}

std::vector<Token> ToTokens(const Vocabulary& vocab, std::span<const int> ids) {
  std::vector<Token> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(vocab.ToToken(id));
  return out;
}

namespace {

struct Hypothesis {
  std::vector<int> ids;
  double log_prob = 0.0;
  double score = 0.0;
  AlignmentSet states;
  bool finished = false;
};

bool Better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.ids < b.ids;
}

double Normalize(double log_prob, size_t length, double penalty) {
  if (penalty == 0.0 || length == 0) return log_prob;
  return log_prob / std::pow(static_cast<double>(length), penalty);
}

// Vocabulary ids split by what the constraint automaton does with them.
struct TokenClasses {
  std::vector<char> is_word;
  // Open tokens whose label occurs in the MR; all other Open tokens are never accepted.
  std::vector<std::pair<int, Token>> structural;
};

TokenClasses Classify(const Vocabulary& vocab, const ConstraintTracker& tracker) {
  TokenClasses classes;
  classes.is_word.assign(vocab.size(), 0);
  for (int id = 0; id < vocab.size(); ++id) {
    Token tok = vocab.ToToken(id);
    if (tok.IsWord()) {
      classes.is_word[id] = 1;
    } else if (!tok.IsOpen() || !tracker.NodesWithLabel(tok.text).empty()) {
      classes.structural.emplace_back(id, std::move(tok));
    }
  }
  return classes;
}

void CheckConfig(const DecodeConfig& config) {
  if (config.beam_size < 1) throw Error("beam_size must be at least 1");
  if (config.max_length != 0 && config.max_length < 2) {
    throw Error("max_length must be at least 2");
  }
  if (!std::isfinite(config.length_penalty)) throw Error("length_penalty must be finite");
}

DecodeResult Search(const MrTree& mr, const Scorer& scorer, const DecodeConfig& config,
                    bool constrained) {
  const Vocabulary& vocab = scorer.vocabulary();
  const ConstraintTracker tracker(mr);
  const ScoringContext context = scorer.MakeContext(mr);
  const TokenClasses classes = Classify(vocab, tracker);
  const int max_length = config.max_length > 0 ? config.max_length : DefaultMaxLength(mr);
  const auto beam = static_cast<size_t>(config.beam_size);

  std::vector<Hypothesis> hyps(1);
  hyps[0].states = InitialStates(tracker);
  // A hypothesis whose Eos ranks among its top expansions ends here instead of
  // taking a beam slot; the live beam keeps searching until enough have ended.
  std::vector<Hypothesis> finished;

  for (int step = 0; step < max_length && !hyps.empty(); ++step) {
    std::vector<Hypothesis> pool;
    for (const auto& h : hyps) {
      std::vector<double> lp = scorer.LogProbs(h.ids, context);

      // Successor states for every structural token that survives the mask;
      // any word keeps the states as they are.
      std::vector<std::optional<AlignmentSet>> next(vocab.size());
      std::vector<char> allowed(vocab.size(), constrained ? 0 : 1);
      if (constrained) {
        for (int id = 0; id < vocab.size(); ++id) allowed[id] = classes.is_word[id];
        for (const auto& [id, tok] : classes.structural) {
          next[id] = AcceptToken(h.states, tok, tracker);
          allowed[id] = next[id].has_value();
        }
      }
      allowed[Vocabulary::kUnk] = 0;

      auto extend = [&](int id) {
        Hypothesis child;
        child.ids = h.ids;
        child.ids.push_back(id);
        child.log_prob = h.log_prob + lp[id];
        child.score = Normalize(child.log_prob, child.ids.size(), config.length_penalty);
        child.finished = id == Vocabulary::kEos;
        if (constrained) child.states = classes.is_word[id] ? h.states : std::move(*next[id]);
        return child;
      };
      auto usable = [&](int id) {
        return allowed[id] && lp[id] != kMaskedScore && !std::isnan(lp[id]);
      };

      std::vector<int> ids;
      for (int id = 0; id < vocab.size(); ++id) {
        if (usable(id)) ids.push_back(id);
      }
      auto by_score = [&](int a, int b) { return lp[a] != lp[b] ? lp[a] > lp[b] : a < b; };
      size_t keep = std::min(beam, ids.size());
      std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(keep), ids.end(),
                        by_score);
      ids.resize(keep);
      for (int id : ids) {
        (id == Vocabulary::kEos ? finished : pool).push_back(extend(id));
      }
    }
    size_t keep = std::min(beam, pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                      Better);
    pool.resize(keep);
    hyps = std::move(pool);

    if (finished.size() >= beam) {
      std::sort(finished.begin(), finished.end(), Better);
      finished.resize(beam);
      // Without a length penalty scores never rise, so a live hypothesis that
      // is already behind the worst kept one cannot enter the result.
      if (config.length_penalty != 0.0 || hyps.empty() ||
          hyps.front().score <= finished.back().score) {
        break;
      }
    }
  }
  std::sort(finished.begin(), finished.end(), Better);
  if (finished.size() > beam) finished.resize(beam);

  DecodeResult result;
  for (const auto& h : finished) {
    Candidate c;
    c.ids = h.ids;
    c.log_prob = h.log_prob;
    c.score = h.score;
    c.tree_valid = constrained || CheckTree(tracker, ToTokens(vocab, c.ids));
    result.candidates.push_back(std::move(c));
  }
  if (result.candidates.empty()) {
    result.failure = "no hypothesis reached an accepted end of sequence within " +
                     std::to_string(max_length) + " tokens";
    if (!hyps.empty()) {
      const Hypothesis& best = hyps.front();
      Candidate partial;
      partial.ids = best.ids;
      partial.log_prob = best.log_prob;
      partial.score = best.score;
      partial.tree_valid = false;
      result.partial = std::move(partial);
    }
  }
  return result;
}

}  // namespace

DecodeResult Decode(const MrTree& mr, const Scorer& scorer, const DecodeConfig& config) {
  CheckConfig(config);
  switch (config.mode) {
    case DecodeMode::kConstrained:
      return Search(mr, scorer, config, true);
    case DecodeMode::kUnconstrained:
      return Search(mr, scorer, config, false);
    case DecodeMode::kRerankByTreeAccuracy: {
      DecodeResult result = Search(mr, scorer, config, false);
      result.candidates =
          RerankByTreeAccuracy(std::move(result.candidates), mr, scorer.vocabulary());
      return result;
    }
  }
  throw Error("unknown decode mode");
}

std::vector<Candidate> RerankByTreeAccuracy(std::vector<Candidate> candidates, const MrTree& mr,
                                            const Vocabulary& vocab) {
  const ConstraintTracker tracker(mr);
  for (auto& c : candidates) c.tree_valid = CheckTree(tracker, ToTokens(vocab, c.ids));
  std::stable_partition(candidates.begin(), candidates.end(),
                        [](const Candidate& c) { return c.tree_valid; });
  return candidates;
}

}  // namespace treemr
