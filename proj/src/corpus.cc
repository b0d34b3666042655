/*!
 * \file corpus.cc
 */
#include <treemr/corpus.h>
#include <treemr/error.h>
#include <treemr/preprocess.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

namespace treemr {

nlohmann::json ToJson(const CorpusExample& e) {
  nlohmann::json j;
  j["id"] = e.id;
  j["query"] = e.query;
  j["context"] = e.context;
  j["mr"] = ToString(e.mr);
  j["response"] = e.response;
  j["annotated_response"] = ToString(e.annotated);
  return j;
}

CorpusExample ExampleFromJson(const nlohmann::json& j, const Ontology& ontology) {
  if (!j.is_object()) throw Error("record is not a JSON object");
  for (const char* field : {"mr", "annotated_response"}) {
    if (!j.contains(field) || !j[field].is_string()) {
      throw Error(std::string("missing string field \"") + field + "\"");
    }
  }
  CorpusExample e;
  e.id = j.value("id", int64_t{0});
  e.query = j.value("query", "");
  if (j.contains("context")) e.context = j["context"];
  e.mr = ParseMr(j["mr"].get<std::string>(), ontology);
  e.annotated = ParseAnnotated(j["annotated_response"].get<std::string>(), ontology);
  e.response = j.contains("response") ? j["response"].get<std::string>() : SurfaceText(e.annotated);
  return e;
}

std::vector<std::pair<size_t, std::string>> ReadLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::pair<size_t, std::string>> out;
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.emplace_back(n, std::move(line));
  }
  return out;
}

std::vector<CorpusExample> ReadCorpus(const std::string& path, const Ontology& ontology) {
  std::vector<CorpusExample> out;
  for (const auto& [n, line] : ReadLines(path)) {
    try {
      out.push_back(ExampleFromJson(nlohmann::json::parse(line), ontology));
    } catch (const nlohmann::json::exception& e) {
      throw MalformedLine(n, e.what());
    } catch (const Error& e) {
      throw MalformedLine(n, e.what());
    }
  }
  return out;
}

void WriteCorpus(const std::string& path, const std::vector<CorpusExample>& examples) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (const auto& e : examples) out << ToJson(e).dump() << '\n';
}

CorpusExample SynthesizeExample(uint64_t seed, int64_t index, const SynthOptions& options) {
  auto idx = static_cast<uint64_t>(index);
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(idx), static_cast<uint32_t>(idx >> 32)};
  std::mt19937_64 rng(seq);
  QueryScenario scenario = SampleScenario(rng, options.config);
  Forecast forecast = GenerateForecast(scenario, rng(), options.config.forecast);

  CorpusExample e;
  e.id = index;
  e.query = scenario.query;
  e.context = {
      {"reference", IsoDateTime(scenario.reference_date, scenario.reference_hour)},
      {"location",
       {{"city", scenario.user_location.city},
        {"region", scenario.user_location.region},
        {"country", scenario.user_location.country}}},
  };
  e.mr = BuildMr(scenario, forecast, options.config);
  e.annotated = Realize(e.mr, rng(), options.templates, options.realize);
  e.response = SurfaceText(e.annotated);
  return e;
}

double UnseenSignatureFraction(const std::vector<CorpusExample>& train,
                               const std::vector<CorpusExample>& test) {
  if (test.empty()) return 0.0;
  std::set<std::string> seen;
  for (const auto& e : train) seen.insert(Signature(e.mr));
  size_t unseen = 0;
  for (const auto& e : test) unseen += seen.count(Signature(e.mr)) == 0;
  return static_cast<double>(unseen) / static_cast<double>(test.size());
}

SynthesizedCorpus SynthesizeCorpus(int64_t n, uint64_t seed, double train_ratio,
                                   const SynthOptions& options, int jobs) {
  if (n < 1) throw Error("corpus size must be at least 1");
  if (!(train_ratio >= 0.0 && train_ratio <= 1.0)) throw Error("train ratio must be in [0, 1]");
  std::vector<CorpusExample> all(static_cast<size_t>(n));
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (jobs == 1) {
    for (int64_t i = 0; i < n; ++i) all[i] = SynthesizeExample(seed, i, options);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (int64_t i = w; i < n; i += jobs) all[i] = SynthesizeExample(seed, i, options);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<size_t> order(all.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto train_n = static_cast<size_t>(std::llround(static_cast<double>(n) * train_ratio));

  SynthesizedCorpus out;
  for (size_t k = 0; k < order.size(); ++k) {
    (k < train_n ? out.train : out.test).push_back(std::move(all[order[k]]));
  }
  out.unseen_signature_fraction = UnseenSignatureFraction(out.train, out.test);
  return out;
}

}  // namespace treemr
