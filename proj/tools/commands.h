/*!
 * \file commands.h
 * \brief Subcommands of the treemr tool, callable without the argument parser.
 */
#ifndef TREEMR_TOOLS_COMMANDS_H_
#define TREEMR_TOOLS_COMMANDS_H_

#include <treemr/beam_search.h>
#include <treemr/ontology.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace treemr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailures = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kToolVersion = "0.1.0";

/*! \brief "weather" or "e2e". */
Ontology OntologyByName(const std::string& name);

/*! \brief Shared by every command; `config_snapshot` is stored in the manifest. */
struct CommonOptions {
  std::string ontology = "weather";
  int jobs = 1;
  std::string config_snapshot;
};

struct ValidateOptions {
  std::string corpus;
  std::string report;
};
int RunValidate(const ValidateOptions& o, const CommonOptions& common, std::ostream& out);

struct SynthesizeOptions {
  int64_t n = 1000;
  uint64_t seed = 0;
  std::string out_dir;
  double train_ratio = 0.8;
  double ellipsis_prob = 0.5;
  std::string templates;
  std::string opposition;
};
int RunSynthesize(const SynthesizeOptions& o, const CommonOptions& common, std::ostream& out);

struct TrainOptions {
  std::string corpus;
  std::string out;
  int order = 4;
  double discount = 0.75;
  int min_signature_examples = 5;
  bool delex = true;
};
int RunTrainScorer(const TrainOptions& o, const CommonOptions& common, std::ostream& out);

struct DecodeOptions {
  std::string corpus;
  std::string model;
  /*! \brief Command line of an external scorer process; replaces the model. */
  std::string external;
  /*! \brief Vocabulary JSON for the external scorer; defaults to the model's. */
  std::string vocab;
  std::string out;
  std::string mode = "constrained";
  int beam = 10;
  int max_length = 0;
  double length_penalty = 0.0;
  bool delex = true;
  int64_t limit = -1;
};
int RunDecode(const DecodeOptions& o, const CommonOptions& common, std::ostream& out);

struct EvaluateOptions {
  std::string predictions;
  std::string corpus;
  std::string out;
  bool best_per_flat_mr = false;
};
int RunEvaluate(const EvaluateOptions& o, const CommonOptions& common, std::ostream& out);

struct DelexOptionsCli {
  std::string in;
  std::string out;
  bool number_each_occurrence = false;
};
int RunDelex(const DelexOptionsCli& o, const CommonOptions& common, std::ostream& out);

struct RelexOptions {
  std::string in;
  std::string out;
};
int RunRelex(const RelexOptions& o, const CommonOptions& common, std::ostream& out);

/*! \brief Path of the manifest written next to `output`. */
std::string ManifestPath(const std::string& output);

}  // namespace treemr::cli

#endif  // TREEMR_TOOLS_COMMANDS_H_
