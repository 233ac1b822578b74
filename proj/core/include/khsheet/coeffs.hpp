#pragma once

// Pointwise coefficient functions of the paralinearized system, evaluated on
// the grid. Used as oracles and diagnostics; the evolution never needs them.

#include "khsheet/spectral.hpp"
#include "khsheet/state.hpp"

#include <vector>

namespace khsheet {

/// Grid samples of each coefficient. Samples are kept raw (not resynchronized
/// through the transform) so algebraic relations hold to round-off.
struct CoeffBundle {
  using Samples = std::vector<double>;
  Samples r;    // sqrt(1 + 2 eta)
  Samples f;    // curvature coefficient correction
  Samples W;    // (psi_x + upsilon)(1+2eta)/((1+2eta)^2 + eta_x^2)
  Samples w;    // (W^2 - upsilon^2)/2
  Samples B;    // (psi_x + upsilon) J0 / (1 + 2 eta)
  Samples J0;
  Samples J0p;
  Samples K0;
  Samples K0p;

  /// Band-limited field through the samples of one component.
  static Field as_field(const FourierGrid& grid, const Samples& s);
};

/// Throws DomainError if 1 + 2 eta <= floor anywhere.
CoeffBundle evaluate_coefficients(const SheetState& state, const PhysParams& params,
                                  double floor = kRadiusFloor);

struct IdentityReport {
  double j0_relation = 0.0;   // J0' - [2(1+2eta)^4/((1+2eta)^2+eta_x^2)^2 - J0^2/2]
  double k0_relation = 0.0;   // K0 + (eta_x/r^2) J0
  double k0p_relation = 0.0;  // K0' + (eta_x/r^2) J0' + J0

  // The same J0/J0' relation with J0^2 in place of J0^2/2. Not an identity:
  // this residual equals J0^2/2 pointwise. Kept for the record.
  double j0_relation_as_printed = 0.0;
  // max |j0_relation_as_printed(x) - J0(x)^2/2|
  double j0_printed_defect = 0.0;

  /// Max over the three exact relations.
  double max() const noexcept;
};

/// Max pointwise residuals of the exact rational identities linking the
/// coefficients.
IdentityReport verify_coefficient_identities(const CoeffBundle& bundle, const Field& eta);

}  // namespace khsheet
