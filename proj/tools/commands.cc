/*!
 * \file commands.cc
 */
#include "commands.h"

#include <treemr/constraint.h>
#include <treemr/corpus.h>
#include <treemr/delex.h>
#include <treemr/error.h>
#include <treemr/external_scorer.h>
#include <treemr/metrics.h>
#include <treemr/ngram.h>
#include <treemr/preprocess.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

namespace treemr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void WriteManifest(const std::string& output, const std::string& command,
                   const CommonOptions& common, json details, const Stopwatch& clock) {
  json m;
  m["command"] = command;
  m["tool_version"] = kToolVersion;
  m["config"] = common.config_snapshot;
  m["jobs"] = common.jobs;
  m["ontology"] = common.ontology;
  for (auto& [k, v] : details.items()) m[k] = v;
  m["timings"] = {{"wall_seconds", clock.Seconds()}};
  std::ofstream out(ManifestPath(output));
  if (!out) throw Error("cannot write manifest for " + output);
  out << m.dump(2) << '\n';
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

std::vector<std::string> SplitWords(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Runs fn(i) for i in [0, n) on `jobs` threads; the first exception is rethrown.
template <typename Fn>
void ParallelFor(size_t n, int jobs, Fn fn) {
  size_t workers = std::max<size_t>(1, std::min<size_t>(static_cast<size_t>(jobs), n));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

Ontology OntologyByName(const std::string& name) {
  if (name == "weather") return Ontology::Weather();
  if (name == "e2e") return Ontology::E2E();
  throw Error("unknown ontology '" + name + "' (expected weather or e2e)");
}

std::string ManifestPath(const std::string& output) {
  if (fs::is_directory(output)) return (fs::path(output) / "manifest.json").string();
  return output + ".manifest.json";
}

int RunValidate(const ValidateOptions& o, const CommonOptions& common, std::ostream& out) {
  Stopwatch clock;
  Ontology ontology = OntologyByName(common.ontology);
  auto lines = ReadLines(o.corpus);
  json failures = json::array();
  for (const auto& [n, line] : lines) {
    std::string reason;
    try {
      CorpusExample e = ExampleFromJson(json::parse(line), ontology);
      Validate(e.mr, ontology);
      Validate(e.annotated, ontology);
      CheckResult r = CheckTreeDetailed(ConstraintTracker(e.mr), Linearize(e.annotated));
      if (!r.accepted) {
        reason = "annotated response does not match the MR (rejected at token " +
                 std::to_string(*r.rejected_at) + ")";
      }
    } catch (const json::exception& e) {
      reason = std::string("malformed JSON: ") + e.what();
    } catch (const Error& e) {
      reason = e.what();
    }
    if (!reason.empty()) {
      out << o.corpus << ":" << n << ": " << reason << '\n';
      failures.push_back({{"line", n}, {"error", reason}});
    }
  }
  out << lines.size() << " examples, " << failures.size() << " failures\n";
  if (!o.report.empty()) {
    json report = {{"corpus", o.corpus}, {"examples", lines.size()}, {"failures", failures}};
    std::ofstream f(o.report);
    if (!f) throw Error("cannot write " + o.report);
    f << report.dump(2) << '\n';
    WriteManifest(o.report, "validate", common,
                  {{"inputs", {o.corpus}}, {"outputs", {o.report}}}, clock);
  }
  return failures.empty() ? kExitOk : kExitFailures;
}

int RunSynthesize(const SynthesizeOptions& o, const CommonOptions& common, std::ostream& out) {
  Stopwatch clock;
  if (o.n < 1) throw Error("--n must be at least 1");
  SynthOptions options;
  options.realize.ellipsis_prob = o.ellipsis_prob;
  if (!o.templates.empty()) options.templates = TemplateSet::FromJson(ReadJsonFile(o.templates));
  if (!o.opposition.empty()) {
    options.config.opposition = OppositionTable::FromJson(ReadJsonFile(o.opposition));
  }
  SynthesizedCorpus corpus = SynthesizeCorpus(o.n, o.seed, o.train_ratio, options, common.jobs);
  fs::create_directories(o.out_dir);
  std::string train = (fs::path(o.out_dir) / "train.jsonl").string();
  std::string test = (fs::path(o.out_dir) / "test.jsonl").string();
  WriteCorpus(train, corpus.train);
  WriteCorpus(test, corpus.test);
  out << "wrote " << corpus.train.size() << " training and " << corpus.test.size()
      << " test examples to " << o.out_dir << "\n"
      << "test examples with an MR structure unseen in training: "
      << corpus.unseen_signature_fraction << "\n";
  WriteManifest(o.out_dir, "synthesize", common,
                {{"seeds", {{"seed", o.seed}}},
                 {"n", o.n},
                 {"train_ratio", o.train_ratio},
                 {"outputs", {train, test}},
                 {"train_examples", corpus.train.size()},
                 {"test_examples", corpus.test.size()},
                 {"unseen_signature_fraction", corpus.unseen_signature_fraction}},
                clock);
  return kExitOk;
}

int RunTrainScorer(const TrainOptions& o, const CommonOptions& common, std::ostream& out) {
  Stopwatch clock;
  Ontology ontology = OntologyByName(common.ontology);
  std::vector<CorpusExample> corpus = ReadCorpus(o.corpus, ontology);
  std::vector<NGramExample> examples;
  size_t skipped = 0;
  for (const auto& e : corpus) {
    MrTree mr = Canonicalize(e.mr);
    AnnotatedNode annotated = e.annotated;
    if (o.delex) {
      DelexPair d = Delexicalize(mr, annotated, ontology);
      mr = std::move(d.mr);
      annotated = std::move(d.annotated);
    }
    try {
      mr = FilterToReference(mr, annotated);
    } catch (const NoValidAlignment&) {
      ++skipped;
      continue;
    }
    examples.push_back({std::move(mr), Linearize(annotated)});
  }
  std::vector<std::vector<Token>> sequences;
  sequences.reserve(examples.size());
  for (const auto& ex : examples) sequences.push_back(ex.tokens);
  Vocabulary vocab = BuildVocabulary(ontology, sequences);
  NGramOptions options{o.order, o.discount, o.min_signature_examples};
  NGramModel model = NGramModel::Train(examples, vocab, options);
  model.Save(o.out);
  out << "trained order-" << o.order << " model on " << examples.size() << " examples ("
      << skipped << " skipped), vocabulary " << vocab.size() << ", "
      << model.sub_model_count() << " signature sub-models\n";
  WriteManifest(o.out, "train-scorer", common,
                {{"inputs", {o.corpus}},
                 {"outputs", {o.out}},
                 {"examples", examples.size()},
                 {"skipped", skipped},
                 {"vocabulary_size", vocab.size()},
                 {"order", o.order},
                 {"discount", o.discount},
                 {"delex", o.delex}},
                clock);
  return kExitOk;
}

int RunDecode(const DecodeOptions& o, const CommonOptions& common, std::ostream& out) {
  Stopwatch clock;
  Ontology ontology = OntologyByName(common.ontology);
  DecodeConfig config;
  config.beam_size = o.beam;
  config.max_length = o.max_length;
  config.mode = ParseDecodeMode(o.mode);
  config.length_penalty = o.length_penalty;

  std::unique_ptr<Scorer> scorer;
  if (!o.external.empty()) {
    Vocabulary vocab;
    if (!o.vocab.empty()) {
      vocab = Vocabulary::FromJson(ReadJsonFile(o.vocab));
    } else if (!o.model.empty()) {
      vocab = NGramModel::Load(o.model).vocabulary();
    } else {
      throw Error("an external scorer needs --vocab or --model for its vocabulary");
    }
    scorer = std::make_unique<ExternalScorer>(SplitWords(o.external), std::move(vocab));
  } else {
    if (o.model.empty()) throw Error("decode needs --model or --external");
    scorer = std::make_unique<NGramModel>(NGramModel::Load(o.model));
  }

  std::vector<CorpusExample> corpus = ReadCorpus(o.corpus, ontology);
  if (o.limit >= 0 && static_cast<size_t>(o.limit) < corpus.size()) corpus.resize(o.limit);
  std::vector<std::string> lines(corpus.size());
  std::vector<char> failed(corpus.size(), 0);
  const Vocabulary& vocab = scorer->vocabulary();

  ParallelFor(corpus.size(), common.jobs, [&](size_t i) {
    const CorpusExample& e = corpus[i];
    MrTree mr = Canonicalize(e.mr);
    DelexTable table;
    if (o.delex) {
      DelexMr d = Delexicalize(mr, ontology);
      mr = std::move(d.mr);
      table = std::move(d.table);
    }
    DecodeResult result = Decode(mr, *scorer, config);
    json rec;
    rec["id"] = e.id;
    const Candidate* best = result.ok() ? &result.candidates.front()
                                        : (result.partial ? &*result.partial : nullptr);
    std::vector<Token> tokens;
    if (best != nullptr) {
      tokens = ToTokens(vocab, best->ids);
      if (!tokens.empty() && tokens.back().IsEos()) tokens.pop_back();
    }
    json unknown = json::array();
    std::vector<Token> relexed;
    for (const auto& t : tokens) {
      if (t.IsWord() && IsPlaceholder(t.text)) {
        if (const DelexEntry* entry = table.Find(t.text)) {
          for (const auto& w : SplitWords(entry->value)) relexed.push_back(Token::Word(w));
          continue;
        }
        if (o.delex) unknown.push_back(t.text);
      }
      relexed.push_back(t);
    }
    rec["tokens"] = JoinTokens(relexed);
    std::string text;
    for (const auto& t : relexed) {
      if (!t.IsWord()) continue;
      if (!text.empty()) text += ' ';
      text += t.text;
    }
    rec["text"] = text;
    rec["score"] = best != nullptr ? best->score : 0.0;
    rec["log_prob"] = best != nullptr ? best->log_prob : 0.0;
    rec["tree_valid"] = result.ok() && best->tree_valid;
    rec["failure"] = result.failure ? json(*result.failure) : json(nullptr);
    if (!unknown.empty()) rec["unknown_placeholders"] = unknown;
    lines[i] = rec.dump();
    failed[i] = !result.ok();
  });

  std::ofstream f(o.out);
  if (!f) throw Error("cannot write " + o.out);
  for (const auto& line : lines) f << line << '\n';
  size_t failures = std::count(failed.begin(), failed.end(), 1);
  out << "decoded " << corpus.size() << " examples in " << o.mode << " mode, " << failures
      << " failures\n";
  WriteManifest(o.out, "decode", common,
                {{"inputs", {o.corpus, o.model.empty() ? o.external : o.model}},
                 {"outputs", {o.out}},
                 {"mode", o.mode},
                 {"beam", o.beam},
                 {"max_length", o.max_length},
                 {"length_penalty", o.length_penalty},
                 {"examples", corpus.size()},
                 {"failures", failures}},
                clock);
  return failures == 0 ? kExitOk : kExitFailures;
}

int RunEvaluate(const EvaluateOptions& o, const CommonOptions& common, std::ostream& out) {
  Stopwatch clock;
  Ontology ontology = OntologyByName(common.ontology);
  std::vector<CorpusExample> corpus = ReadCorpus(o.corpus, ontology);
  std::map<int64_t, size_t> by_id;
  std::map<std::string, std::vector<Sentence>> refs_by_flat;
  std::vector<std::string> flat(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    by_id[corpus[i].id] = i;
    flat[i] = Flatten(corpus[i].mr).ToString();
    refs_by_flat[flat[i]].push_back(SplitWords(corpus[i].response));
  }

  EvalReport report;
  std::vector<Sentence> hyps;
  std::vector<std::vector<Sentence>> refs;
  std::map<std::string, std::vector<size_t>> groups;
  size_t valid = 0;
  for (const auto& [n, line] : ReadLines(o.predictions)) {
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw MalformedLine(n, e.what());
    }
    if (!rec.contains("id") || !rec.contains("tokens")) {
      throw MalformedLine(n, "prediction needs id and tokens");
    }
    auto it = by_id.find(rec["id"].get<int64_t>());
    if (it == by_id.end()) throw MalformedLine(n, "id not found in the corpus");
    const CorpusExample& e = corpus[it->second];
    ExampleRecord r;
    r.index = it->second;
    r.failed = rec.contains("failure") && !rec["failure"].is_null();
    r.prediction = rec["tokens"].get<std::string>();
    std::vector<Token> tokens = Tokenize(r.prediction);
    r.tree_valid = !r.failed && CheckTree(e.mr, tokens);
    valid += r.tree_valid;
    report.failures += r.failed;
    Sentence words;
    for (const auto& t : tokens) {
      if (t.IsWord()) words.push_back(t.text);
    }
    groups[flat[it->second]].push_back(hyps.size());
    hyps.push_back(std::move(words));
    refs.push_back(refs_by_flat[flat[it->second]]);
    report.records.push_back(std::move(r));
  }
  if (hyps.empty()) throw EmptyCorpus("no predictions to evaluate");
  report.examples = static_cast<int64_t>(hyps.size());
  report.tree_accuracy = static_cast<double>(valid) / static_cast<double>(hyps.size());
  if (o.best_per_flat_mr) {
    std::vector<std::vector<Sentence>> group_hyps;
    std::vector<std::vector<Sentence>> group_refs;
    for (const auto& [key, members] : groups) {
      std::vector<Sentence> g;
      for (size_t m : members) g.push_back(hyps[m]);
      group_hyps.push_back(std::move(g));
      group_refs.push_back(refs_by_flat[key]);
    }
    auto chosen = SelectBestPerFlatMr(group_hyps, group_refs);
    std::vector<Sentence> best;
    for (size_t g = 0; g < chosen.size(); ++g) best.push_back(group_hyps[g][chosen[g]]);
    report.bleu4 = Bleu4(best, group_refs);
  } else {
    report.bleu4 = Bleu4(hyps, refs);
  }
  report.diversity = ComputeDiversity(hyps);

  std::ofstream f(o.out);
  if (!f) throw Error("cannot write " + o.out);
  f << report.ToJson().dump(2) << '\n';
  out << "tree accuracy " << report.tree_accuracy << ", BLEU-4 " << report.bleu4 << " over "
      << report.examples << " predictions (" << report.failures << " decode failures)\n";
  WriteManifest(o.out, "evaluate", common,
                {{"inputs", {o.predictions, o.corpus}},
                 {"outputs", {o.out}},
                 {"best_per_flat_mr", o.best_per_flat_mr}},
                clock);
  return kExitOk;
}

int RunDelex(const DelexOptionsCli& o, const CommonOptions& common, std::ostream& out) {
  Stopwatch clock;
  Ontology ontology = OntologyByName(common.ontology);
  std::ofstream f(o.out);
  if (!f) throw Error("cannot write " + o.out);
  DelexOptions options{o.number_each_occurrence};
  size_t count = 0;
  for (const auto& [n, line] : ReadLines(o.in)) {
    json rec;
    CorpusExample e;
    try {
      rec = json::parse(line);
      e = ExampleFromJson(rec, ontology);
    } catch (const json::exception& ex) {
      throw MalformedLine(n, ex.what());
    } catch (const Error& ex) {
      throw MalformedLine(n, ex.what());
    }
    DelexPair d = Delexicalize(e.mr, e.annotated, ontology, options);
    rec["mr"] = ToString(d.mr);
    rec["annotated_response"] = ToString(d.annotated);
    if (rec.contains("response")) rec["response"] = SurfaceText(d.annotated);
    rec["delex_table"] = d.table.ToJson();
    f << rec.dump() << '\n';
    ++count;
  }
  out << "delexicalized " << count << " examples\n";
  WriteManifest(o.out, "delex", common,
                {{"inputs", {o.in}},
                 {"outputs", {o.out}},
                 {"number_each_occurrence", o.number_each_occurrence}},
                clock);
  return kExitOk;
}

int RunRelex(const RelexOptions& o, const CommonOptions& common, std::ostream& out) {
  Stopwatch clock;
  std::ofstream f(o.out);
  if (!f) throw Error("cannot write " + o.out);
  size_t count = 0;
  for (const auto& [n, line] : ReadLines(o.in)) {
    json rec;
    DelexTable table;
    try {
      rec = json::parse(line);
      if (!rec.contains("delex_table")) throw Error("record has no delex_table");
      table = DelexTable::FromJson(rec["delex_table"]);
    } catch (const json::exception& ex) {
      throw MalformedLine(n, ex.what());
    } catch (const Error& ex) {
      throw MalformedLine(n, ex.what());
    }
    for (const char* field : {"mr", "annotated_response", "response", "tokens", "text"}) {
      if (rec.contains(field) && rec[field].is_string()) {
        try {
          rec[field] = RelexicalizeText(rec[field].get<std::string>(), table);
        } catch (const UnknownPlaceholder& ex) {
          throw MalformedLine(n, ex.what());
        }
      }
    }
    rec.erase("delex_table");
    f << rec.dump() << '\n';
    ++count;
  }
  out << "relexicalized " << count << " records\n";
  WriteManifest(o.out, "relex", common, {{"inputs", {o.in}}, {"outputs", {o.out}}}, clock);
  return kExitOk;
}

}  // namespace treemr::cli
