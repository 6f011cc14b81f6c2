#pragma once

#include <functional>
#include <string>
#include <vector>

namespace acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;  ///< measured values and the bound they were held to
};

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> run;
};

/// Ring structure, uniqueness, decoder equivalence and error correction.
std::vector<Criterion> code_criteria();
/// End-to-end detection on synthetic renders.
std::vector<Criterion> detection_criteria();

/// Coefficient of determination of the least-squares line through (x, y).
double r_squared(const std::vector<double>& x, const std::vector<double>& y);
std::string fixed(double v, int digits = 3);

}  // namespace acceptance
