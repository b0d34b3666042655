#include "commands.h"

#include <treemr/error.h>

#include <CLI11.hpp>
#include <iostream>

using namespace treemr::cli;

int main(int argc, char** argv) {
  CLI::App app{"treemr: tree-structured meaning representations for constrained generation"};
  app.set_config("--config", "", "INI or TOML file with option values");
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--ontology", common.ontology, "Label set: weather or e2e")
      ->check(CLI::IsMember({"weather", "e2e"}))
      ->capture_default_str();
  app.add_option("-j,--jobs", common.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  ValidateOptions validate;
  auto* v = app.add_subcommand("validate", "Check every MR/annotated response pair of a corpus");
  v->add_option("corpus", validate.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  v->add_option("--report", validate.report, "Write failures as JSON here");

  SynthesizeOptions synth;
  auto* s = app.add_subcommand("synthesize", "Generate a weather corpus");
  s->add_option("--n", synth.n, "Number of examples")->capture_default_str();
  s->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  s->add_option("--out", synth.out_dir, "Output directory")->required();
  s->add_option("--train-ratio", synth.train_ratio)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  s->add_option("--ellipsis-prob", synth.ellipsis_prob)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  s->add_option("--templates", synth.templates, "Template JSON")->check(CLI::ExistingFile);
  s->add_option("--opposition", synth.opposition, "Opposition table JSON")->check(CLI::ExistingFile);

  TrainOptions train;
  auto* t = app.add_subcommand("train-scorer", "Train the n-gram scorer");
  t->add_option("corpus", train.corpus)->required()->check(CLI::ExistingFile);
  t->add_option("--out", train.out, "Model JSON")->required();
  t->add_option("--order", train.order)->check(CLI::Range(1, 10))->capture_default_str();
  t->add_option("--discount", train.discount)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  t->add_option("--min-signature-examples", train.min_signature_examples)->capture_default_str();
  t->add_flag("--delex,!--no-delex", train.delex, "Delexicalize before training");

  DecodeOptions decode;
  auto* d = app.add_subcommand("decode", "Generate annotated responses for a corpus");
  d->add_option("corpus", decode.corpus)->required()->check(CLI::ExistingFile);
  d->add_option("--model", decode.model, "N-gram model JSON")->check(CLI::ExistingFile);
  d->add_option("--external", decode.external, "Command line of an external scorer");
  d->add_option("--vocab", decode.vocab, "Vocabulary JSON for --external")->check(CLI::ExistingFile);
  d->add_option("--out", decode.out, "Predictions JSONL")->required();
  d->add_option("--mode", decode.mode)
      ->check(CLI::IsMember({"constrained", "unconstrained", "rerank"}))
      ->capture_default_str();
  d->add_option("--beam", decode.beam)->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--max-length", decode.max_length, "0 picks a length from the MR")
      ->check(CLI::NonNegativeNumber);
  d->add_option("--length-penalty", decode.length_penalty)->capture_default_str();
  d->add_option("--limit", decode.limit, "Decode only the first N examples");
  d->add_flag("--delex,!--no-delex", decode.delex, "Delexicalize MRs and relexicalize output");

  EvaluateOptions eval;
  auto* e = app.add_subcommand("evaluate", "Score predictions against a corpus");
  e->add_option("predictions", eval.predictions)->required()->check(CLI::ExistingFile);
  e->add_option("corpus", eval.corpus)->required()->check(CLI::ExistingFile);
  e->add_option("--out", eval.out, "Report JSON")->required();
  e->add_flag("--best-per-flat-mr", eval.best_per_flat_mr,
              "Keep only the best prediction among MRs that flatten alike");

  DelexOptionsCli delex;
  auto* dx = app.add_subcommand("delex", "Replace argument values by placeholders");
  dx->add_option("in", delex.in)->required()->check(CLI::ExistingFile);
  dx->add_option("--out", delex.out)->required();
  dx->add_flag("--number-each-occurrence", delex.number_each_occurrence);

  RelexOptions relex;
  auto* rx = app.add_subcommand("relex", "Restore values from each record's delex_table");
  rx->add_option("in", relex.in)->required()->check(CLI::ExistingFile);
  rx->add_option("--out", relex.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  common.config_snapshot = app.config_to_str(true, false);

  try {
    if (v->parsed()) return RunValidate(validate, common, std::cout);
    if (s->parsed()) return RunSynthesize(synth, common, std::cout);
    if (t->parsed()) return RunTrainScorer(train, common, std::cout);
    if (d->parsed()) return RunDecode(decode, common, std::cout);
    if (e->parsed()) return RunEvaluate(eval, common, std::cout);
    if (dx->parsed()) return RunDelex(delex, common, std::cout);
    if (rx->parsed()) return RunRelex(relex, common, std::cout);
  } catch (const treemr::Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
