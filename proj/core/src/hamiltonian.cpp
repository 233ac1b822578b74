#include "khsheet/hamiltonian.hpp"

#include "khsheet/singular_ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace khsheet {

namespace detail {

double energy_remainder(const SheetState& state, const PhysParams& params, bool swap_order) {
  const Field& eta = state.eta;
  check_radius(eta);
  const int n = eta.size();
  const Field eta_x = derivative(eta);
  const Field psi_x = derivative(state.psi);
  std::vector<double> r(static_cast<std::size_t>(n)), g(r.size()), diag(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double a = 1.0 + 2.0 * eta.phys()[i];
    r[i] = std::sqrt(a);
    g[i] = psi_x.phys()[i] + params.upsilon;
    // Limit of the remainder on the diagonal: log |z_x|^2.
    diag[i] = std::log(eta_x.phys()[i] * eta_x.phys()[i] / a + a);
  }
  const double h = eta.grid().spacing();
  std::vector<double> inv_s2(static_cast<std::size_t>(n), 0.0);
  for (int m = 1; m < n; ++m) {
    const double s = std::sin(0.5 * m * h);
    inv_s2[static_cast<std::size_t>(m)] = 1.0 / (4.0 * s * s);
  }

  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    double row = 0.0;
    for (int b = 0; b < n; ++b) {
      const int i = swap_order ? b : a;
      const int j = swap_order ? a : b;
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      double rem;
      if (i == j) {
        rem = diag[ui];
      } else {
        const double dr = r[ui] - r[uj];
        const auto m = static_cast<std::size_t>(((i - j) % n + n) % n);
        rem = std::log(r[ui] * r[uj] + dr * dr * inv_s2[m]);
      }
      row += g[static_cast<std::size_t>(b)] * rem;
    }
    total += g[static_cast<std::size_t>(a)] * row;
  }
  return -0.25 * total / (static_cast<double>(n) * n);
}

}  // namespace detail

double energy_kinetic(const SheetState& state, const PhysParams& params) {
  // The constant part of the density is annihilated by the mean-zero log kernel.
  const Field psi_x = project_mean_zero(derivative(state.psi));
  double flat = 0.0;
  for (int k = 1; k < psi_x.grid().half_size(); ++k) {
    flat += 2.0 * (-1.0 / k) * std::norm(psi_x.spec()[static_cast<std::size_t>(k)]);
  }
  return -0.25 * flat + detail::energy_remainder(state, params, false);
}

double length(const SheetState& state) {
  check_radius(state.eta);
  const Field eta_x = derivative(state.eta);
  double acc = 0.0;
  for (int i = 0; i < state.eta.size(); ++i) {
    const double a = 1.0 + 2.0 * state.eta[i];
    acc += std::sqrt(eta_x[i] * eta_x[i] / a + a);
  }
  return acc / state.eta.size();
}

double momentum(const SheetState& state) { return inner(derivative(state.psi), state.eta); }

HamiltonianParts hamiltonian_parts(const SheetState& state, const PhysParams& params) {
  HamiltonianParts p;
  p.kinetic = energy_kinetic(state, params);
  p.length = length(state);
  p.momentum = momentum(state);
  p.total = p.kinetic + params.gamma * p.length + params.omega_frame * p.momentum;
  return p;
}

double hamiltonian_total(const SheetState& state, const PhysParams& params) {
  return hamiltonian_parts(state, params).total;
}

Gradient grad_H(const SheetState& state, const PhysParams& params) {
  const auto& grid = state.grid();
  const Field eta_x = derivative(state.eta);
  const Field psi_x = derivative(state.psi);
  const Field g = psi_x + Field::constant(grid, params.upsilon);
  const SingularValues sv = apply_singular(state.eta, g);
  const Field kappa = curvature(state.eta);

  Field d_psi = -params.omega_frame * eta_x + 0.5 * sv.H;
  Field d_eta = params.omega_frame * psi_x - 0.5 * pointwise_product(g, sv.D0) - params.gamma * kappa;
  return {std::move(d_eta), std::move(d_psi)};
}

namespace {

Field random_direction(const FourierGrid& grid, std::mt19937_64& rng, int band) {
  std::normal_distribution<double> normal;
  std::vector<cplx> spec(static_cast<std::size_t>(grid.half_size()));
  for (int k = 1; k <= std::min(band, grid.kmax() - 1); ++k) {
    spec[static_cast<std::size_t>(k)] = cplx{normal(rng), normal(rng)} / static_cast<double>(k);
  }
  return Field::from_spectrum(grid, std::move(spec));
}

}  // namespace

GradcheckReport gradcheck(const SheetState& state, const PhysParams& params, int n_dirs, double h,
                          std::uint64_t seed, int band) {
  std::mt19937_64 rng(seed);
  const Gradient grad = grad_H(state, params);
  GradcheckReport rep;
  rep.directions = n_dirs;
  for (int d = 0; d < n_dirs; ++d) {
    Field de = random_direction(state.grid(), rng, band);
    Field dp = random_direction(state.grid(), rng, band);
    const double norm = std::sqrt(inner(de, de) + inner(dp, dp));
    de *= 1.0 / norm;
    dp *= 1.0 / norm;
    const SheetState plus{state.eta + h * de, state.psi + h * dp};
    const SheetState minus{state.eta - h * de, state.psi - h * dp};
    const double fd =
        (hamiltonian_total(plus, params) - hamiltonian_total(minus, params)) / (2.0 * h);
    const double an = inner(grad.d_eta, de) + inner(grad.d_psi, dp);
    const double mismatch = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1.0});
    if (mismatch >= rep.max_mismatch) {
      rep.max_mismatch = mismatch;
      rep.worst_fd = fd;
      rep.worst_analytic = an;
    }
  }
  return rep;
}

}  // namespace khsheet
