#pragma once

#include "khsheet/spectral.hpp"
#include "khsheet/state.hpp"

#include <span>
#include <utility>
#include <vector>

namespace khsheet {

struct DiagnosticsOptions {
  double s = 4.0;                // Sobolev exponent of the diagnostic norm
  int n_max = 16;                // super-actions J_1..J_{n_max} (capped at n/2)
  double width_fraction = 0.999;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double H = 0.0;
  double E = 0.0;
  double L = 0.0;
  double M = 0.0;
  double sup_eta = 0.0;
  double norm_s = 0.0;
  int width = 0;
  std::vector<double> super_actions;  // NaN when the complex change is degenerate
};

/// J_n = |u_n|^2 + |u_{-n}|^2 for n = 1..n_max in complex coordinates.
/// Throws DegenerateError if the change of variables is degenerate.
std::vector<double> super_actions(const SheetState& state, const PhysParams& params, int n_max);

/// Sum of J_n over every resolved n >= 1.
double total_super_action(const SheetState& state, const PhysParams& params);

/// ||eta||_{H^{s+1/4}} + ||psi||_{\dot H^{s-1/4}}.
double solution_norm(const SheetState& state, double s);

/// Smallest K such that modes |k| <= K carry `fraction` of the weighted mass
/// sum <k>^{2s} |u_k|^2; 0 for the zero state. When the complex change is
/// degenerate the weight <k>^{2s+1/2}|eta_hat|^2 + <k>^{2s-1/2}|psi_hat|^2 is
/// used instead. Throws std::invalid_argument unless 0 < fraction < 1.
int spectral_width(const SheetState& state, const PhysParams& params, double fraction,
                   double s = 4.0);

DiagnosticsRecord diagnose(const SheetState& state, const PhysParams& params, double t,
                           const DiagnosticsOptions& opts = {});

/// Least-squares slope of log(drift) against log(epsilon).
/// Throws std::invalid_argument for fewer than 3 pairs or nonpositive values.
double drift_fit(std::span<const std::pair<double, double>> pairs);

}  // namespace khsheet
