#pragma once

// Oracle suites behind `kh_sheet gradcheck` and `kh_sheet optest`.

#include "khsheet/dynamics.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kh_tool {

struct CheckLine {
  std::string name;
  double observed = 0.0;
  double expected = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass() const { return error < tolerance; }
};

struct OptestOptions {
  int n = 256;
  double tolerance = 1e-9;
  // Flips the sign of H in the checks; used to make sure a wrong operator fails.
  bool inject_sign_error = false;
};

std::vector<CheckLine> operator_suite(const OptestOptions& opts);

struct GradcheckOptions {
  int states = 5;
  int directions = 8;
  double h = 1e-5;
  double tolerance = 1e-6;
  double amplitude = 0.1;
  std::uint64_t seed = 7;
};

std::vector<CheckLine> gradient_suite(const khsheet::SimConfig& config, const GradcheckOptions& opts);

/// Prints one line per check; returns the number of failures.
int report(std::ostream& os, const std::vector<CheckLine>& lines, bool quiet);

}  // namespace kh_tool
