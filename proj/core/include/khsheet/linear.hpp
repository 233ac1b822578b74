#pragma once

// Closed-form linear theory about the circular equilibrium.

#include "khsheet/spectral.hpp"
#include "khsheet/state.hpp"

#include <array>
#include <vector>

namespace khsheet {

/// omega^2(xi) = (|xi|/2) (gamma (|xi|^2 - 1) - upsilon^2 (|xi|/2 - 1)).
double omega_squared(double xi, const PhysParams& params);

struct Frequency {
  double omega_sq = 0.0;
  /// sqrt(|omega_sq|): the frequency when stable, the growth rate otherwise.
  double magnitude = 0.0;
  bool stable = false;  // omega_sq > 0
};

/// Throws std::invalid_argument for xi == 0.
Frequency omega(double xi, const PhysParams& params);

/// Real frequency; throws DegenerateError if omega_sq(xi) <= 0.
double omega_real(double xi, const PhysParams& params);

struct Threshold {
  double beta_plus = 0.0;  // min over xi > 2 of (xi^2 - 1)/(xi/2 - 1)
  double xi_star = 0.0;    // the minimizer
};

/// Numerical minimization of (xi^2 - 1)/(xi/2 - 1) over xi > 2.
Threshold continuous_threshold();
double threshold_function(double xi);

/// Smallest integer-mode Weber number where some |k| >= 1 goes unstable.
inline constexpr double kIntegerBetaPlus = 15.0;

struct ModeStability {
  int k = 0;
  double omega_sq = 0.0;
  double omega = 0.0;        // populated when stable
  double growth_rate = 0.0;  // populated when unstable
  bool stable = false;       // omega_sq > 0
};

struct SpectrumReport {
  std::vector<ModeStability> modes;  // k = 1..j_max
  bool all_stable() const noexcept;
};

/// Throws std::invalid_argument if j_max < 1.
SpectrumReport stability_report(const PhysParams& params, int j_max);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Real 2x2 block acting on (eta_hat_k, psi_hat_k) with the transport part
/// removed: [[0, -|k|/2], [gamma k^2 - upsilon^2 |k|/2 - (gamma - upsilon^2), 0]].
Matrix2 linear_block(int k, const PhysParams& params);

/// exp(t * linear_block(k)) in closed form. Throws std::invalid_argument for k == 0.
Matrix2 linear_propagator(int k, double t, const PhysParams& params);

/// i (omega_frame - upsilon/2) k: the transport eigenvalue on the diagonal.
cplx transport_rate(int k, const PhysParams& params);

/// Frequencies below this are treated as degenerate in the complex change.
inline constexpr double kDegenerateFrequency = 1e-10;

/// m(k) = sqrt(|k| / (2 omega(k))). Throws DegenerateError if omega(k) <= tolerance.
double m_symbol(int k, const PhysParams& params);

/// u_k = (m(k)^{-1} eta_hat(k) + i m(k) psi_hat(k)) / sqrt(2) for every k != 0.
ModeVector to_complex(const SheetState& state, const PhysParams& params);
/// Inverse of to_complex; u_0 is ignored.
SheetState from_complex(const ModeVector& u, const PhysParams& params);

}  // namespace khsheet
