#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fracheat::acceptance {

inline constexpr int kCriteria = 17;

struct CriterionResult {
  int id = 0;
  std::string title;
  bool applicable = true;  // false: documented as not reproducible
  bool passed = false;
  std::string detail;      // failures first, then recorded values
  std::vector<std::pair<std::string, double>> values;
  double seconds = 0.0;
};

const char* title(int id);

CriterionResult run_criterion(int id, std::uint64_t seed = 20240601);

// "criterion 7 [smoothing exponents]: PASS (...)"
std::string format_line(const CriterionResult& r);

}  // namespace fracheat::acceptance
