/*!
 * \file treemr/corpus.h
 * \brief Corpus records, JSONL I/O and seeded synthesis.
 *
 * One JSON object per line:
 *   {"id": int, "query": str, "context": {"reference": "YYYY-MM-DDTHH:00",
 *    "location": {"city", "region", "country"}}, "mr": str, "response": str,
 *    "annotated_response": str}
 * `mr` and `annotated_response` are bracketed linearizations.
 */
#ifndef TREEMR_CORPUS_H_
#define TREEMR_CORPUS_H_

#include <treemr/mr_tree.h>
#include <treemr/ontology.h>
#include <treemr/realizer.h>
#include <treemr/weather.h>

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace treemr {

struct CorpusExample {
  int64_t id = 0;
  std::string query;
  nlohmann::json context = nlohmann::json::object();
  MrTree mr{MrNode{}};
  std::string response;
  AnnotatedNode annotated;
};

nlohmann::json ToJson(const CorpusExample& example);
/*! \throws Error when a field is missing or does not parse */
CorpusExample ExampleFromJson(const nlohmann::json& j, const Ontology& ontology);

/*! \throws MalformedLine carrying the 1-based line number */
std::vector<CorpusExample> ReadCorpus(const std::string& path, const Ontology& ontology);
void WriteCorpus(const std::string& path, const std::vector<CorpusExample>& examples);
/*! \brief Raw non-empty lines with their 1-based numbers. */
std::vector<std::pair<size_t, std::string>> ReadLines(const std::string& path);

struct SynthOptions {
  SynthConfig config;
  TemplateSet templates = TemplateSet::Default();
  RealizeOptions realize;
};

/*! \brief Example `index` of the corpus for `seed`; independent of every other index. */
CorpusExample SynthesizeExample(uint64_t seed, int64_t index, const SynthOptions& options = {});

struct SynthesizedCorpus {
  std::vector<CorpusExample> train;
  std::vector<CorpusExample> test;
  /*! \brief Fraction of test examples whose MR signature never occurs in train. */
  double unseen_signature_fraction = 0.0;
};

/*!
 * \brief n examples, shuffled with the seed and split so that the training part
 *  holds round(n * train_ratio) of them.
 */
SynthesizedCorpus SynthesizeCorpus(int64_t n, uint64_t seed, double train_ratio,
                                   const SynthOptions& options = {}, int jobs = 1);

double UnseenSignatureFraction(const std::vector<CorpusExample>& train,
                               const std::vector<CorpusExample>& test);

}  // namespace treemr

#endif  // TREEMR_CORPUS_H_
