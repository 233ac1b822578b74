#pragma once

#include "khsheet/spectral.hpp"
#include "khsheet/state.hpp"

#include <cstdint>

namespace khsheet {

/// Pseudo kinetic energy
///   E = -1/4 int int (psi_x(x) + ups)(psi_x(y) + ups) log|z(x) - z(y)|^2 dy dx.
/// The log(4 sin^2((x-y)/2)) part is applied spectrally; the smooth
/// remainder log(|z(x)-z(y)|^2 / (4 sin^2((x-y)/2))) by the double trapezoid.
double energy_kinetic(const SheetState& state, const PhysParams& params);

/// Normalized length of the interface; 1 for the unit circle.
double length(const SheetState& state);

/// int psi_x eta dx.
double momentum(const SheetState& state);

struct HamiltonianParts {
  double kinetic = 0.0;
  double length = 0.0;
  double momentum = 0.0;
  double total = 0.0;
};

HamiltonianParts hamiltonian_parts(const SheetState& state, const PhysParams& params);
double hamiltonian_total(const SheetState& state, const PhysParams& params);

/// L^2 gradients (w.r.t. the averaged pairing). The eta component keeps its
/// mean; gauge projection belongs to the dynamics.
struct Gradient {
  Field d_eta;
  Field d_psi;
};

Gradient grad_H(const SheetState& state, const PhysParams& params);

struct GradcheckReport {
  double max_mismatch = 0.0;  // max relative mismatch over directions
  double worst_fd = 0.0;      // finite-difference value at the worst direction
  double worst_analytic = 0.0;
  int directions = 0;
};

/// Compares <grad_H, d> with the central difference of hamiltonian_total
/// along random band-limited mean-zero directions d with ||d||_{L^2} = 1.
/// Mismatch is |fd - an| / max(|fd|, |an|, ||d||).
GradcheckReport gradcheck(const SheetState& state, const PhysParams& params, int n_dirs, double h,
                          std::uint64_t seed = 7, int band = 8);

namespace detail {
/// The smooth-remainder double sum, optionally with x and y loops swapped.
double energy_remainder(const SheetState& state, const PhysParams& params, bool swap_order);
}  // namespace detail

}  // namespace khsheet
