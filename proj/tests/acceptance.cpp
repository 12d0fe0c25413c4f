// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Seed can be overridden with JETCALC_SEED.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include "jetcalc/properties.hpp"

int main() {
  std::uint64_t seed = 20240611;
  if (const char* env = std::getenv("JETCALC_SEED")) seed = std::stoull(env);

  int failed = 0;
  auto criteria = jetcalc::properties::acceptance_criteria();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    jetcalc::Sampler rng(seed * 1000003ULL + i);
    auto result = criteria[i].run(rng);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (result.passed ? "PASS " : "FAIL ") << std::left << std::setw(4) << result.id << " "
              << result.description << " [" << result.detail << "] (" << std::fixed << std::setprecision(2) << secs
              << "s)\n";
    if (!result.passed) ++failed;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
