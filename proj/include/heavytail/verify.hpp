#pragma once

#include <functional>
#include <string>
#include <vector>

namespace heavytail::verify {

// Quick runs every criterion except the 10^7-draw histogram comparison.
enum class Suite { Quick, Full };

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

using Reporter = std::function<void(const CriterionResult&)>;

// Runs the acceptance criteria in order. Each criterion also fails when it
// exceeds its runtime budget.
std::vector<CriterionResult> run_acceptance(Suite suite, const Reporter& report = {});

std::string format_line(const CriterionResult& r);

}  // namespace heavytail::verify
