#pragma once

#include "khsheet/spectral.hpp"

#include <tuple>
#include <vector>

namespace khsheet {

/// Lower bound on 1 + 2*eta for every pointwise formula.
inline constexpr double kRadiusFloor = 1e-6;

struct PhysParams {
  double gamma = 1.0;        // surface tension
  double upsilon = 0.0;      // velocity jump
  double omega_frame = 0.0;  // rotation speed of the frame

  /// Frame rotating at upsilon/2, which cancels the linear transport term.
  static PhysParams natural(double gamma, double upsilon);
  /// Parameters from the Weber number beta = upsilon^2/gamma (upsilon >= 0).
  static PhysParams from_beta(double gamma, double beta);

  /// upsilon^2/gamma; infinite when gamma == 0 and upsilon != 0.
  double beta() const noexcept;
};

/// The dynamical pair (eta, psi). Both are kept mean-zero.
struct SheetState {
  Field eta;
  Field psi;

  static SheetState zero(const FourierGrid& grid);
  /// Projects both components to zero mean and checks the radius floor.
  static SheetState make(Field eta, Field psi);

  const FourierGrid& grid() const noexcept { return eta.grid(); }
};

/// One Fourier mode of an initial condition: amplitude * cos(k x + phase).
struct ModeSeed {
  enum class Variable { eta, psi };
  Variable variable = Variable::eta;
  int wavenumber = 1;
  double amplitude = 0.0;
  double phase = 0.0;
};

SheetState state_from_modes(const FourierGrid& grid, const std::vector<ModeSeed>& seeds);

/// Throws DomainError if min(1 + 2*eta) <= floor.
void check_radius(const Field& eta, double floor = kRadiusFloor);

SheetState operator+(const SheetState& a, const SheetState& b);
SheetState operator*(double a, const SheetState& s);

/// x -> -x with psi -> -psi.
SheetState reverse(const SheetState& s);
SheetState grid_shift(const SheetState& s, int steps);

}  // namespace khsheet
