// Acceptance gate: runs every criterion and prints one PASS/FAIL line each.
// Usage: acceptance [--suite quick|full]   (default: full)

#include <cstring>
#include <iostream>

#include "heavytail/verify.hpp"

int main(int argc, char** argv) {
  using heavytail::verify::Suite;
  Suite suite = Suite::Full;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--suite") == 0 && i + 1 < argc) {
      const char* name = argv[++i];
      if (std::strcmp(name, "quick") == 0) {
        suite = Suite::Quick;
      } else if (std::strcmp(name, "full") != 0) {
        std::cerr << "unknown suite " << name << '\n';
        return 2;
      }
    }
  }

  int failed = 0;
  const auto results = heavytail::verify::run_acceptance(
      suite, [&](const heavytail::verify::CriterionResult& r) {
        std::cout << heavytail::verify::format_line(r) << std::endl;
        if (!r.passed) ++failed;
      });
  std::cout << results.size() - failed << "/" << results.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
