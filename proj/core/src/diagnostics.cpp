#include "khsheet/diagnostics.hpp"

#include "khsheet/errors.hpp"
#include "khsheet/hamiltonian.hpp"
#include "khsheet/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace khsheet {

std::vector<double> super_actions(const SheetState& state, const PhysParams& params, int n_max) {
  const ModeVector u = to_complex(state, params);
  const int top = std::min(n_max, state.grid().kmax() - 1);
  std::vector<double> j(static_cast<std::size_t>(std::max(n_max, 0)), 0.0);
  for (int n = 1; n <= top; ++n) {
    j[static_cast<std::size_t>(n - 1)] = std::norm(u[n]) + std::norm(u[-n]);
  }
  return j;
}

double total_super_action(const SheetState& state, const PhysParams& params) {
  const ModeVector u = to_complex(state, params);
  double acc = 0.0;
  for (int n = 1; n < state.grid().kmax(); ++n) acc += std::norm(u[n]) + std::norm(u[-n]);
  return acc;
}

double solution_norm(const SheetState& state, double s) {
  return sobolev_norm(state.eta, s + 0.25) + homogeneous_sobolev_norm(state.psi, s - 0.25);
}

int spectral_width(const SheetState& state, const PhysParams& params, double fraction, double s) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("spectral width fraction must lie in (0, 1)");
  }
  const auto& grid = state.grid();
  std::vector<double> mass(static_cast<std::size_t>(grid.kmax() + 1), 0.0);
  try {
    const ModeVector u = to_complex(state, params);
    for (int k = 1; k < grid.kmax(); ++k) {
      mass[static_cast<std::size_t>(k)] =
          std::pow(japanese_bracket(k), 2.0 * s) * (std::norm(u[k]) + std::norm(u[-k]));
    }
  } catch (const DegenerateError&) {
    for (int k = 1; k < grid.kmax(); ++k) {
      mass[static_cast<std::size_t>(k)] =
          2.0 * (std::pow(k, 2.0 * s + 0.5) * std::norm(state.eta.coefficient(k)) +
                 std::pow(k, 2.0 * s - 0.5) * std::norm(state.psi.coefficient(k)));
    }
  }
  double total = 0.0;
  for (double m : mass) total += m;
  if (total == 0.0) return 0;
  double acc = 0.0;
  for (std::size_t k = 0; k < mass.size(); ++k) {
    acc += mass[k];
    if (acc >= fraction * total) return static_cast<int>(k);
  }
  return grid.kmax();
}

DiagnosticsRecord diagnose(const SheetState& state, const PhysParams& params, double t,
                           const DiagnosticsOptions& opts) {
  DiagnosticsRecord rec;
  rec.t = t;
  const HamiltonianParts parts = hamiltonian_parts(state, params);
  rec.H = parts.total;
  rec.E = parts.kinetic;
  rec.L = parts.length;
  rec.M = parts.momentum;
  rec.sup_eta = state.eta.max_abs();
  rec.norm_s = solution_norm(state, opts.s);
  rec.width = spectral_width(state, params, opts.width_fraction, opts.s);
  try {
    rec.super_actions = super_actions(state, params, opts.n_max);
  } catch (const DegenerateError&) {
    rec.super_actions.assign(static_cast<std::size_t>(opts.n_max),
                             std::numeric_limits<double>::quiet_NaN());
  }
  return rec;
}

double drift_fit(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw std::invalid_argument("drift_fit needs at least 3 pairs");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [eps, drift] : pairs) {
    if (!(eps > 0.0) || !(drift > 0.0)) {
      throw std::invalid_argument("drift_fit needs positive epsilon and drift values");
    }
    const double x = std::log(eps);
    const double y = std::log(drift);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pairs.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace khsheet
