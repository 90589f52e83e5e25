#include <cstdlib>
#include <iostream>
#include <string>

#include "dirwalk/acceptance.hpp"

int main(int argc, char** argv) {
  dirwalk::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--threads" && i + 1 < argc) {
      opts.threads = std::atoi(argv[++i]);
    } else if (arg == "--cache-dir" && i + 1 < argc) {
      opts.cache_dir = argv[++i];
    } else {
      std::cerr << "usage: dirwalk_acceptance [--threads N] [--cache-dir PATH]\n";
      return 2;
    }
  }
  const auto results = dirwalk::run_desk_acceptance(opts, std::cout);
  const int failures = dirwalk::count_failures(results);
  if (failures == 0) {
    std::cout << "all " << results.size() << " criteria passed\n";
  } else {
    std::cout << failures << " of " << results.size() << " criteria failed\n";
  }
  return failures == 0 ? 0 : 1;
}
