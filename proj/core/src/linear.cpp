#include "khsheet/linear.hpp"

#include "khsheet/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace khsheet {

double omega_squared(double xi, const PhysParams& params) {
  const double a = std::abs(xi);
  const double u2 = params.upsilon * params.upsilon;
  return 0.5 * a * (params.gamma * (a * a - 1.0) - u2 * (0.5 * a - 1.0));
}

Frequency omega(double xi, const PhysParams& params) {
  if (xi == 0.0) throw std::invalid_argument("omega is undefined at wavenumber 0");
  Frequency f;
  f.omega_sq = omega_squared(xi, params);
  f.magnitude = std::sqrt(std::abs(f.omega_sq));
  f.stable = f.omega_sq > 0.0;
  return f;
}

double omega_real(double xi, const PhysParams& params) {
  const Frequency f = omega(xi, params);
  if (!f.stable) {
    std::ostringstream msg;
    msg << "omega^2(" << xi << ") = " << f.omega_sq << " is not positive";
    throw DegenerateError(msg.str());
  }
  return f.magnitude;
}

double threshold_function(double xi) { return (xi * xi - 1.0) / (0.5 * xi - 1.0); }

Threshold continuous_threshold() {
  // h blows up at xi -> 2+ and grows linearly at infinity; the minimum is
  // well inside [2.5, 20].
  const auto [xmin, hmin] = boost::math::tools::brent_find_minima(
      [](double xi) { return threshold_function(xi); }, 2.5, 20.0,
      std::numeric_limits<double>::digits);
  return {hmin, xmin};
}

bool SpectrumReport::all_stable() const noexcept {
  for (const auto& m : modes) {
    if (!m.stable) return false;
  }
  return true;
}

SpectrumReport stability_report(const PhysParams& params, int j_max) {
  if (j_max < 1) throw std::invalid_argument("j_max must be >= 1");
  SpectrumReport rep;
  rep.modes.reserve(static_cast<std::size_t>(j_max));
  for (int k = 1; k <= j_max; ++k) {
    const Frequency f = omega(k, params);
    ModeStability m;
    m.k = k;
    m.omega_sq = f.omega_sq;
    // omega_sq == 0 is a Jordan block (secular growth), reported as not stable.
    m.stable = f.stable;
    (f.stable ? m.omega : m.growth_rate) = f.magnitude;
    rep.modes.push_back(m);
  }
  return rep;
}

Matrix2 linear_block(int k, const PhysParams& params) {
  const double a = std::abs(static_cast<double>(k));
  const double g = params.gamma;
  const double u2 = params.upsilon * params.upsilon;
  return {{{0.0, -0.5 * a}, {g * a * a - 0.5 * u2 * a - (g - u2), 0.0}}};
}

Matrix2 linear_propagator(int k, double t, const PhysParams& params) {
  if (k == 0) throw std::invalid_argument("linear propagator is undefined at k = 0");
  const Matrix2 L = linear_block(k, params);
  const double a = L[0][1];
  const double b = L[1][0];
  const double w2 = -a * b;
  if (w2 > 0.0) {
    const double w = std::sqrt(w2);
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    return {{{c, a / w * s}, {b / w * s, c}}};
  }
  if (w2 < 0.0) {
    const double mu = std::sqrt(-w2);
    const double c = std::cosh(mu * t);
    const double s = std::sinh(mu * t);
    return {{{c, a / mu * s}, {b / mu * s, c}}};
  }
  return {{{1.0, a * t}, {b * t, 1.0}}};
}

cplx transport_rate(int k, const PhysParams& params) {
  return {0.0, (params.omega_frame - 0.5 * params.upsilon) * k};
}

double m_symbol(int k, const PhysParams& params) {
  const Frequency f = omega(k, params);
  if (!f.stable || f.magnitude <= kDegenerateFrequency) {
    std::ostringstream msg;
    msg << "complex coordinates are degenerate: omega(" << k << ")^2 = " << f.omega_sq;
    throw DegenerateError(msg.str());
  }
  return std::sqrt(std::abs(k) / (2.0 * f.magnitude));
}

ModeVector to_complex(const SheetState& state, const PhysParams& params) {
  const auto& grid = state.grid();
  ModeVector u(grid);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = grid.kmin(); k <= grid.kmax(); ++k) {
    if (k == 0) continue;
    const double m = m_symbol(k, params);
    u[k] = (state.eta.coefficient(k) / m + cplx{0.0, m} * state.psi.coefficient(k)) * inv_sqrt2;
  }
  return u;
}

SheetState from_complex(const ModeVector& u, const PhysParams& params) {
  // eta_hat(k) = m (u_k + conj(u_{-k})) / sqrt(2),
  // psi_hat(k) = (u_k - conj(u_{-k})) / (i m sqrt(2)).
  const auto& grid = u.grid();
  std::vector<cplx> eta(static_cast<std::size_t>(grid.half_size()));
  std::vector<cplx> psi(eta.size());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = 1; k < grid.kmax(); ++k) {
    const double m = m_symbol(k, params);
    const cplx up = u[k];
    const cplx um = std::conj(u[-k]);
    eta[static_cast<std::size_t>(k)] = m * (up + um) * inv_sqrt2;
    psi[static_cast<std::size_t>(k)] = (up - um) / cplx{0.0, m} * inv_sqrt2;
  }
  return {Field::from_spectrum(grid, std::move(eta)), Field::from_spectrum(grid, std::move(psi))};
}

}  // namespace khsheet
