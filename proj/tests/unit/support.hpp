#pragma once

#include "khsheet/spectral.hpp"
#include "khsheet/state.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace testing {

using namespace khsheet;

inline double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Random real field with coefficients in 1 <= k <= band, scaled to sup-norm amp.
inline Field random_field(const FourierGrid& grid, std::mt19937_64& rng, int band, double amp,
                          double decay = 1.0) {
  std::normal_distribution<double> nd;
  std::vector<cplx> spec(static_cast<std::size_t>(grid.half_size()));
  for (int k = 1; k <= band; ++k) {
    spec[static_cast<std::size_t>(k)] = cplx{nd(rng), nd(rng)} / std::pow(k, decay);
  }
  Field f = Field::from_spectrum(grid, std::move(spec));
  return (amp / f.max_abs()) * f;
}

inline Field cos_mode(const FourierGrid& grid, int k, double amp = 1.0) {
  return Field::from_function(grid, [=](double x) { return amp * std::cos(k * x); });
}

inline Field sin_mode(const FourierGrid& grid, int k, double amp = 1.0) {
  return Field::from_function(grid, [=](double x) { return amp * std::sin(k * x); });
}

}  // namespace testing
