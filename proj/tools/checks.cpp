#include "checks.hpp"

#include "khsheet/hamiltonian.hpp"
#include "khsheet/singular_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

namespace kh_tool {

using namespace khsheet;

namespace {

double sup_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Field mode(const FourierGrid& g, int k, bool sine) {
  return Field::from_function(g, [=](double x) { return sine ? std::sin(k * x) : std::cos(k * x); });
}

Field smooth_eta(const FourierGrid& g) {
  // Coefficients decay like 2^-k, so the grid error is visible before round-off.
  return Field::from_function(g, [](double x) { return 0.08 * std::cos(x) / (1.0 - 0.8 * std::cos(x)); });
}

Field smooth_density(const FourierGrid& g) {
  return Field::from_function(g, [](double x) { return std::cos(2 * x) + 0.3; });
}

Field random_band(const FourierGrid& g, std::mt19937_64& rng, int band, double amp) {
  std::normal_distribution<double> nd;
  std::vector<cplx> spec(static_cast<std::size_t>(g.half_size()));
  for (int k = 1; k <= band; ++k) spec[static_cast<std::size_t>(k)] = cplx{nd(rng), nd(rng)} / double(k);
  Field f = Field::from_spectrum(g, std::move(spec));
  return (amp / f.max_abs()) * f;
}

}  // namespace

std::vector<CheckLine> operator_suite(const OptestOptions& opts) {
  const FourierGrid g(opts.n);
  const Field zero(g);
  const double sign = opts.inject_sign_error ? -1.0 : 1.0;
  std::vector<CheckLine> out;

  // Flat sheet: H(0) and H0(0) act as -i sgn(k), D0(0) as the mean.
  double eh = 0, eh0 = 0;
  for (int k = 1; k < g.kmax(); ++k) {
    const auto c = mode(g, k, false), s = mode(g, k, true);
    eh = std::max({eh, sup_diff(sign * apply_H(zero, c), s), sup_diff(sign * apply_H(zero, s), -1.0 * c)});
    eh0 = std::max({eh0, sup_diff(apply_H0(zero, c), s), sup_diff(apply_H0(zero, s), -1.0 * c)});
  }
  out.push_back({"H(0) = -i sgn(k)", eh, 0.0, eh, opts.tolerance});
  out.push_back({"H0(0) = -i sgn(k)", eh0, 0.0, eh0, opts.tolerance});

  std::mt19937_64 rng(11);
  double ed = 0;
  for (int t = 0; t < 4; ++t) {
    const auto f = random_band(g, rng, std::min(g.kmax() - 1, 40), 1.0) + Field::constant(g, 0.25 * (t + 1));
    ed = std::max(ed, sup_diff(apply_D0(zero, f), Field::constant(g, f.mean())) / f.max_abs());
  }
  out.push_back({"D0(0) = mean", ed, 0.0, ed, opts.tolerance});
  const double d1 = apply_D0(zero, Field::constant(g, 1.0))[0];
  out.push_back({"D0(0)[1] = 1", d1, 1.0, std::abs(d1 - 1.0), 1e-12});

  // Curved sheet: distance to the same operator on the doubled grid.
  const FourierGrid f2(2 * opts.n);
  const auto hc = sign * apply_H(smooth_eta(g), smooth_density(g));
  const auto hf = apply_H(smooth_eta(f2), smooth_density(f2));
  double conv = 0;
  for (int i = 0; i < hc.size(); ++i) conv = std::max(conv, std::abs(hc[i] - hf[2 * i]));
  out.push_back({"H(eta) vs doubled grid", conv, 0.0, conv, 1e-8});
  return out;
}

std::vector<CheckLine> gradient_suite(const SimConfig& config, const GradcheckOptions& opts) {
  const FourierGrid g(config.n);
  std::vector<SheetState> states;
  states.push_back(state_from_modes(g, config.initial));
  std::mt19937_64 rng(opts.seed);
  for (int i = 0; i < opts.states; ++i) {
    states.push_back({random_band(g, rng, 8, opts.amplitude), random_band(g, rng, 8, opts.amplitude)});
  }
  std::vector<CheckLine> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto r = gradcheck(states[i], config.params, opts.directions, opts.h, opts.seed + i);
    const std::string name = i == 0 ? "config initial state" : "random state " + std::to_string(i);
    out.push_back({name, r.worst_analytic, r.worst_fd, r.max_mismatch, opts.tolerance});
  }
  return out;
}

int report(std::ostream& os, const std::vector<CheckLine>& lines, bool quiet) {
  int failed = 0;
  char buf[256];
  for (const auto& l : lines) {
    if (!l.pass()) ++failed;
    if (quiet && l.pass()) continue;
    std::snprintf(buf, sizeof buf, "%s  %-26s observed %.6e expected %.6e error %.3e (tol %.1e)\n",
                  l.pass() ? "ok  " : "FAIL", l.name.c_str(), l.observed, l.expected, l.error, l.tolerance);
    os << buf;
  }
  return failed;
}

}  // namespace kh_tool
