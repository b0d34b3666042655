#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <treemr/beam_search.h>
#include <treemr/constraint.h>
#include <treemr/corpus.h>
#include <treemr/delex.h>
#include <treemr/error.h>
#include <treemr/metrics.h>
#include <treemr/ngram.h>
#include <treemr/preprocess.h>

namespace py = pybind11;
using namespace treemr;

namespace {

Ontology OntologyNamed(const std::string& name) {
  if (name == "weather") return Ontology::Weather();
  if (name == "e2e") return Ontology::E2E();
  throw Error("unknown ontology '" + name + "'");
}

// Tokens of a possibly ill-formed output, with known labels in canonical spelling.
std::vector<Token> Tokens(const std::string& text, const Ontology& ontology) {
  std::vector<Token> out = Tokenize(text);
  for (auto& t : out) {
    if (!t.IsOpen()) continue;
    if (auto info = ontology.Resolve(t.text)) t.text = info->canonical;
  }
  return out;
}

NGramModel TrainModel(const std::vector<std::pair<std::string, std::string>>& pairs,
                      const NGramOptions& options, bool delex, const Ontology& ontology) {
  std::vector<NGramExample> examples;
  std::vector<std::vector<Token>> sequences;
  for (const auto& [mr_text, annotated_text] : pairs) {
    MrTree mr = Canonicalize(ParseMr(mr_text, ontology));
    AnnotatedNode annotated = ParseAnnotated(annotated_text, ontology);
    if (delex) {
      DelexPair d = Delexicalize(mr, annotated, ontology);
      mr = std::move(d.mr);
      annotated = std::move(d.annotated);
    }
    try {
      mr = FilterToReference(mr, annotated);
    } catch (const NoValidAlignment&) {
      continue;
    }
    examples.push_back({std::move(mr), Linearize(annotated)});
    sequences.push_back(examples.back().tokens);
  }
  return NGramModel::Train(examples, BuildVocabulary(ontology, sequences), options);
}

py::dict ExampleDict(const CorpusExample& e) {
  return py::module_::import("json").attr("loads")(ToJson(e).dump());
}

}  // namespace

PYBIND11_MODULE(_treemr, m) {
  m.doc() = "Tree-structured meaning representations and constrained decoding";

  static py::exception<Error> error(m, "TreeMrError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    }
  });

  m.def(
      "canonicalize",
      [](const std::string& mr, const std::string& ontology) {
        return ToString(Canonicalize(ParseMr(mr, OntologyNamed(ontology))));
      },
      py::arg("mr"), py::arg("ontology") = "weather");

  m.def(
      "check_tree",
      [](const std::string& mr, const std::string& output, const std::string& ontology) {
        Ontology o = OntologyNamed(ontology);
        return CheckTree(ParseMr(mr, o), Tokens(output, o));
      },
      py::arg("mr"), py::arg("output"), py::arg("ontology") = "weather",
      "True when the bracketed output is compatible with the MR.");

  m.def(
      "ellipsis_options",
      [](const std::string& mr, const std::string& ontology) {
        return ComputeEllipsisOptions(ParseMr(mr, OntologyNamed(ontology)));
      },
      py::arg("mr"), py::arg("ontology") = "weather");

  m.def(
      "synthesize",
      [](int64_t n, uint64_t seed, double train_ratio) {
        SynthesizedCorpus c = SynthesizeCorpus(n, seed, train_ratio);
        py::list train, test;
        for (const auto& e : c.train) train.append(ExampleDict(e));
        for (const auto& e : c.test) test.append(ExampleDict(e));
        return py::make_tuple(train, test);
      },
      py::arg("n"), py::arg("seed") = 0, py::arg("train_ratio") = 0.8,
      "Returns (train, test) lists of corpus records.");

  m.def("bleu4", [](const std::vector<std::vector<std::string>>& hyps,
                    const std::vector<std::vector<std::vector<std::string>>>& refs) {
    return Bleu4(hyps, refs);
  });

  m.def("diversity", [](const std::vector<std::vector<std::string>>& corpus) {
    Diversity d = ComputeDiversity(corpus);
    py::dict out;
    out["unique_tokens"] = d.unique_tokens;
    out["unique_trigrams"] = d.unique_trigrams;
    out["shannon_entropy_bits"] = d.shannon_entropy_bits;
    out["conditional_bigram_entropy_bits"] = d.conditional_bigram_entropy_bits;
    return out;
  });

  m.def(
      "delexicalize",
      [](const std::string& mr, const std::string& ontology) {
        DelexMr d = Delexicalize(ParseMr(mr, OntologyNamed(ontology)), OntologyNamed(ontology));
        return py::make_tuple(ToString(d.mr), d.table.ToJson().dump());
      },
      py::arg("mr"), py::arg("ontology") = "weather",
      "Returns the delexicalized MR and its table as a JSON string.");

  m.def(
      "relexicalize",
      [](const std::string& text, const std::string& table_json) {
        return RelexicalizeText(text, DelexTable::FromJson(nlohmann::json::parse(table_json)));
      },
      py::arg("text"), py::arg("table"));

  py::class_<NGramModel>(m, "NGramModel")
      .def_static(
          "train",
          [](const std::vector<std::pair<std::string, std::string>>& pairs, int order,
             double discount, bool delex, const std::string& ontology) {
            NGramOptions options;
            options.order = order;
            options.discount = discount;
            return TrainModel(pairs, options, delex, OntologyNamed(ontology));
          },
          py::arg("pairs"), py::arg("order") = 4, py::arg("discount") = 0.75,
          py::arg("delex") = true, py::arg("ontology") = "weather",
          "Trains on (mr, annotated_response) string pairs.")
      .def_static("load", &NGramModel::Load)
      .def("save", &NGramModel::Save)
      .def_property_readonly("order", [](const NGramModel& m) { return m.options().order; })
      .def(
          "decode",
          [](const NGramModel& model, const std::string& mr_text, const std::string& mode,
             int beam, bool delex, const std::string& ontology_name) {
            Ontology ontology = OntologyNamed(ontology_name);
            MrTree mr = Canonicalize(ParseMr(mr_text, ontology));
            DelexTable table;
            if (delex) {
              DelexMr d = Delexicalize(mr, ontology);
              mr = std::move(d.mr);
              table = std::move(d.table);
            }
            DecodeConfig config;
            config.mode = ParseDecodeMode(mode);
            config.beam_size = beam;
            DecodeResult r = Decode(mr, model, config);
            py::list out;
            for (const auto& c : r.candidates) {
              std::vector<Token> tokens = ToTokens(model.vocabulary(), c.ids);
              if (!tokens.empty() && tokens.back().IsEos()) tokens.pop_back();
              std::vector<Token> shown;
              for (const auto& t : tokens) {
                if (t.IsWord() && table.Find(t.text) != nullptr) {
                  auto back = Relexicalize(std::vector<Token>{t}, table);
                  shown.insert(shown.end(), back.begin(), back.end());
                } else {
                  shown.push_back(t);
                }
              }
              out.append(py::make_tuple(JoinTokens(shown), c.log_prob, c.tree_valid));
            }
            return out;
          },
          py::arg("mr"), py::arg("mode") = "constrained", py::arg("beam") = 10,
          py::arg("delex") = true, py::arg("ontology") = "weather",
          "Ranked (tokens, log_prob, tree_valid) candidates without the end token; "
          "empty when no hypothesis finished.");
}
