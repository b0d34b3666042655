/*!
 * \file treemr/external_scorer.h
 * \brief Scorer backed by a child process speaking newline-delimited JSON.
 *
 * Protocol, one JSON object per line on the child's standard streams:
 *   child  -> parent (once):  {"vocab_size": V}
 *   parent -> child:          {"id": n, "prefix": [ids], "context": [ids]}
 *   child  -> parent:         {"id": n, "logprobs": [V floats]}
 * The returned distribution must sum to 1 within 1e-6 in probability space.
 */
#ifndef TREEMR_EXTERNAL_SCORER_H_
#define TREEMR_EXTERNAL_SCORER_H_

#include <treemr/scorer.h>

#include <mutex>
#include <string>
#include <sys/types.h>
#include <vector>

namespace treemr {

class ExternalScorer : public Scorer {
 public:
  static constexpr double kSumTolerance = 1e-6;

  /*!
   * \brief Spawns `command` (argv form) and performs the handshake.
   * \throws ScorerUnavailable when the process cannot be started or does not answer;
   *  ProtocolViolation when the handshake is malformed or the vocabulary size differs.
   */
  ExternalScorer(std::vector<std::string> command, Vocabulary vocab, int timeout_ms = 30000);
  ~ExternalScorer() override;

  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  const Vocabulary& vocabulary() const override { return vocab_; }
  std::vector<double> LogProbs(std::span<const int> prefix,
                               const ScoringContext& context) const override;

 private:
  std::string ReadLine() const;
  void WriteLine(const std::string& line) const;
  void Shutdown();

  Vocabulary vocab_;
  int timeout_ms_;
  int fd_ = -1;
  pid_t child_ = -1;
  mutable std::string buffer_;
  mutable int64_t next_id_ = 0;
  mutable std::mutex mu_;
};

}  // namespace treemr

#endif  // TREEMR_EXTERNAL_SCORER_H_
