/*!
 * \file external_scorer.cc
 */
#include <treemr/error.h>
#include <treemr/external_scorer.h>

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <limits>
#include <nlohmann/json.hpp>
#include <poll.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

namespace treemr {

ExternalScorer::ExternalScorer(std::vector<std::string> command, Vocabulary vocab,
                               int timeout_ms)
    : vocab_(std::move(vocab)), timeout_ms_(timeout_ms) {
  if (command.empty()) throw ScorerUnavailable("empty scorer command");
  int sv[2];
  if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    throw ScorerUnavailable(std::string("socketpair: ") + std::strerror(errno));
  }
  std::vector<char*> argv;
  for (auto& arg : command) argv.push_back(arg.data());
  argv.push_back(nullptr);

  child_ = fork();
  if (child_ < 0) {
    close(sv[0]);
    close(sv[1]);
    throw ScorerUnavailable(std::string("fork: ") + std::strerror(errno));
  }
  if (child_ == 0) {
    dup2(sv[1], STDIN_FILENO);
    dup2(sv[1], STDOUT_FILENO);
    execvp(argv[0], argv.data());
    _exit(127);
  }
  close(sv[1]);
  fd_ = sv[0];

  nlohmann::json hello;
  try {
    hello = nlohmann::json::parse(ReadLine());
  } catch (const nlohmann::json::exception& e) {
    Shutdown();
    throw ProtocolViolation(std::string("malformed handshake: ") + e.what());
  } catch (...) {
    Shutdown();
    throw;
  }
  if (!hello.is_object() || !hello.contains("vocab_size") ||
      !hello["vocab_size"].is_number_integer()) {
    Shutdown();
    throw ProtocolViolation("handshake lacks an integer vocab_size");
  }
  if (hello["vocab_size"].get<int>() != vocab_.size()) {
    Shutdown();
    throw ProtocolViolation("scorer vocab_size " + hello["vocab_size"].dump() +
                            " differs from local vocabulary size " +
                            std::to_string(vocab_.size()));
  }
}

ExternalScorer::~ExternalScorer() { Shutdown(); }

void ExternalScorer::Shutdown() {
  if (fd_ >= 0) {
    close(fd_);
    fd_ = -1;
  }
  if (child_ > 0) {
    int status = 0;
    // Closing the socket normally ends the server; do not wait forever on one that ignores EOF.
    for (int i = 0; i < 50; ++i) {
      if (waitpid(child_, &status, WNOHANG) == child_) {
        child_ = -1;
        return;
      }
      usleep(10000);
    }
    kill(child_, SIGKILL);
    waitpid(child_, &status, 0);
    child_ = -1;
  }
}

std::string ExternalScorer::ReadLine() const {
  while (true) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    pollfd pfd{fd_, POLLIN, 0};
    int ready = poll(&pfd, 1, timeout_ms_);
    if (ready == 0) throw ScorerUnavailable("scorer did not answer in time");
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw ScorerUnavailable(std::string("poll: ") + std::strerror(errno));
    }
    char chunk[65536];
    ssize_t n = read(fd_, chunk, sizeof(chunk));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw ScorerUnavailable("scorer process closed its output");
    buffer_.append(chunk, static_cast<size_t>(n));
  }
}

void ExternalScorer::WriteLine(const std::string& line) const {
  std::string data = line + "\n";
  size_t off = 0;
  while (off < data.size()) {
    ssize_t n = send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw ScorerUnavailable(std::string("write to scorer: ") + std::strerror(errno));
    off += static_cast<size_t>(n);
  }
}

std::vector<double> ExternalScorer::LogProbs(std::span<const int> prefix,
                                             const ScoringContext& context) const {
  CheckPrefix(prefix);
  std::lock_guard<std::mutex> lock(mu_);
  if (fd_ < 0) throw ScorerUnavailable("scorer connection is closed");
  int64_t id = next_id_++;
  nlohmann::json request;
  request["id"] = id;
  request["prefix"] = std::vector<int>(prefix.begin(), prefix.end());
  request["context"] = context.mr_token_ids;
  WriteLine(request.dump());

  nlohmann::json response;
  try {
    response = nlohmann::json::parse(ReadLine());
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolViolation(std::string("malformed response: ") + e.what());
  }
  if (!response.is_object() || !response.contains("id") || !response.contains("logprobs") ||
      !response["logprobs"].is_array()) {
    throw ProtocolViolation("response must carry id and logprobs");
  }
  if (!response["id"].is_number_integer() || response["id"].get<int64_t>() != id) {
    throw ProtocolViolation("response id " + response["id"].dump() + " does not match request " +
                            std::to_string(id));
  }
  const auto& lp = response["logprobs"];
  if (static_cast<int>(lp.size()) != vocab_.size()) {
    throw ProtocolViolation("expected " + std::to_string(vocab_.size()) + " logprobs, got " +
                            std::to_string(lp.size()));
  }
  std::vector<double> out;
  out.reserve(lp.size());
  double mass = 0.0;
  for (const auto& v : lp) {
    // JSON has no -Infinity; null stands for a zero-probability token.
    if (v.is_null()) {
      out.push_back(-std::numeric_limits<double>::infinity());
      continue;
    }
    if (!v.is_number()) throw ProtocolViolation("non-numeric log-probability");
    double x = v.get<double>();
    if (std::isnan(x) || x > 0.0) throw ProtocolViolation("log-probability out of range");
    out.push_back(x);
    mass += std::exp(x);
  }
  if (std::abs(mass - 1.0) > kSumTolerance) {
    throw ProtocolViolation("distribution sums to " + std::to_string(mass) + " instead of 1");
  }
  return out;
}

}  // namespace treemr
