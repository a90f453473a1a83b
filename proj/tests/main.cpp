#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <string>
#include <vector>

#include "test_support.hpp"

int main(int argc, char** argv) {
  std::vector<char*> rest;
  for (int i = 0; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--seed=", 0) == 0) {
      try {
        emden::testing::seed_override() = std::stoull(arg.substr(7));
      } catch (const std::exception&) {
        std::fprintf(stderr, "bad %s\n", arg.c_str());
        return 2;
      }
    } else {
      rest.push_back(argv[i]);
    }
  }
  std::printf("random seed: %llu\n", static_cast<unsigned long long>(emden::testing::seed()));
  doctest::Context context(static_cast<int>(rest.size()), rest.data());
  return context.run();
}
