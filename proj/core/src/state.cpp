#include "khsheet/state.hpp"

#include "khsheet/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace khsheet {

PhysParams PhysParams::natural(double gamma, double upsilon) {
  return PhysParams{gamma, upsilon, 0.5 * upsilon};
}

PhysParams PhysParams::from_beta(double gamma, double beta) {
  return natural(gamma, std::sqrt(beta * gamma));
}

double PhysParams::beta() const noexcept {
  if (gamma == 0.0) {
    return upsilon == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return upsilon * upsilon / gamma;
}

void check_radius(const Field& eta, double floor) {
  for (int i = 0; i < eta.size(); ++i) {
    if (!(1.0 + 2.0 * eta[i] > floor)) {
      std::ostringstream msg;
      msg << "1 + 2*eta = " << 1.0 + 2.0 * eta[i] << " at x = " << eta.grid().point(i)
          << " is below the admissible floor " << floor;
      throw DomainError(msg.str());
    }
  }
}

SheetState SheetState::zero(const FourierGrid& grid) { return {Field(grid), Field(grid)}; }

SheetState SheetState::make(Field eta, Field psi) {
  SheetState s{project_mean_zero(eta), project_mean_zero(psi)};
  check_radius(s.eta);
  return s;
}

SheetState state_from_modes(const FourierGrid& grid, const std::vector<ModeSeed>& seeds) {
  std::vector<cplx> eta(static_cast<std::size_t>(grid.half_size()));
  std::vector<cplx> psi(eta.size());
  for (const auto& seed : seeds) {
    const int k = std::abs(seed.wavenumber);
    if (k == 0 || k >= grid.kmax()) {
      throw std::invalid_argument("seed wavenumber " + std::to_string(seed.wavenumber) +
                                  " is zero or not resolved on the grid");
    }
    // a*cos(kx + phi) has coefficient (a/2) e^{i phi} at +k.
    const double phase = seed.wavenumber > 0 ? seed.phase : -seed.phase;
    auto& target = seed.variable == ModeSeed::Variable::eta ? eta : psi;
    target[static_cast<std::size_t>(k)] += std::polar(0.5 * seed.amplitude, phase);
  }
  return SheetState::make(Field::from_spectrum(grid, std::move(eta)), Field::from_spectrum(grid, std::move(psi)));
}

SheetState operator+(const SheetState& a, const SheetState& b) {
  return {a.eta + b.eta, a.psi + b.psi};
}

SheetState operator*(double a, const SheetState& s) { return {a * s.eta, a * s.psi}; }

SheetState reverse(const SheetState& s) { return {reflect(s.eta), -reflect(s.psi)}; }

SheetState grid_shift(const SheetState& s, int steps) {
  return {grid_shift(s.eta, steps), grid_shift(s.psi, steps)};
}

}  // namespace khsheet
