// Reference objective process for the line protocol: answers every request
// with the sum of the numeric values in its assignment.
//
//   echo_objective [--crash-after N] [--sleep-ms MS] [--error-on NAME] [dataset]
//
// --crash-after N  exit without answering the (N+1)-th request
// --sleep-ms MS    delay every answer
// --error-on NAME  answer with an error when NAME is bound to a value > 0

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <json.hpp>

int main(int argc, char** argv) {
  long crash_after = -1;
  long sleep_ms = 0;
  std::string error_on;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--crash-after" && i + 1 < argc) {
      crash_after = std::atol(argv[++i]);
    } else if (arg == "--sleep-ms" && i + 1 < argc) {
      sleep_ms = std::atol(argv[++i]);
    } else if (arg == "--error-on" && i + 1 < argc) {
      error_on = argv[++i];
    }
  }

  long served = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    if (crash_after >= 0 && served >= crash_after) std::abort();
    const auto request = nlohmann::json::parse(line);
    nlohmann::json response = {{"id", request.at("id")}};
    double sum = 0.0;
    bool fail = false;
    for (const auto& [name, value] : request.at("assignment").items()) {
      if (!value.is_number()) continue;
      sum += value.get<double>();
      if (name == error_on && value.get<double>() > 0) fail = true;
    }
    if (fail) {
      response["error"] = "refused " + error_on;
    } else {
      response["value"] = sum;
    }
    if (sleep_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
    std::cout << response.dump() << std::endl;
    ++served;
  }
  return 0;
}
