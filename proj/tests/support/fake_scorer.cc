// Test double for the external scorer protocol.
//   fake_scorer <mode> <vocab_size> [arg]
// modes: uniform, short, sum15, die, garbage, wrong-id, onehot <id>, bad-handshake
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>

using nlohmann::json;

int main(int argc, char** argv) {
  if (argc < 3) return 2;
  std::string mode = argv[1];
  int v = std::atoi(argv[2]);
  if (mode == "bad-handshake") {
    std::cout << "{\"vocabulary\": " << v << "}" << std::endl;
    return 0;
  }
  std::cout << json{{"vocab_size", v}}.dump() << std::endl;
  if (mode == "die") return 0;

  std::string line;
  while (std::getline(std::cin, line)) {
    json req = json::parse(line);
    json lp = json::array();
    if (mode == "onehot") {
      int hot = argc > 3 ? std::atoi(argv[3]) : 0;
      for (int i = 0; i < v; ++i) lp.push_back(i == hot ? json(0.0) : json(nullptr));
    } else {
      int n = mode == "short" ? v - 1 : v;
      double p = mode == "sum15" ? 1.5 / v : 1.0 / v;
      for (int i = 0; i < n; ++i) lp.push_back(std::log(p));
    }
    if (mode == "garbage") {
      std::cout << "not json" << std::endl;
      continue;
    }
    json id = mode == "wrong-id" ? json(req["id"].get<int64_t>() + 7) : req["id"];
    std::cout << json{{"id", id}, {"logprobs", lp}}.dump() << std::endl;
  }
  return 0;
}
