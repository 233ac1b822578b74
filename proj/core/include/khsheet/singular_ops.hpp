#pragma once

// Principal-value integral operators of the contour-dynamics system.
//
// All operators are discretized with a punctured trapezoid rule whose source
// nodes never coincide with the target node. In the default alternate-point
// mode targets sit on the primal grid and sources on the half-step shifted
// grid, with source values obtained by spectral interpolation. The kernels are
// evaluated in a cancellation-free form using
//   |z(x) - z(y)|^2 = (r(x) - r(y))^2 + 4 r(x) r(y) sin^2((x - y)/2).

#include "khsheet/spectral.hpp"
#include "khsheet/state.hpp"

#include <vector>

namespace khsheet {

enum class PVMode {
  alternate_point,  // sources on the half-step shifted grid, weights 1/n
  diagonal_skip     // sources on primal nodes at odd offsets, weights 2/n
};

class PVQuadrature {
 public:
  explicit PVQuadrature(const FourierGrid& grid, PVMode mode = PVMode::alternate_point);

  const FourierGrid& grid() const noexcept { return grid_; }
  PVMode mode() const noexcept { return mode_; }

  /// Number of sources seen by each target.
  int source_count() const noexcept { return static_cast<int>(offsets_.size()); }
  /// Signed separations x_target - y_source, one per source, identical for
  /// every target by translation invariance of the grid.
  const std::vector<double>& offsets() const noexcept { return offsets_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Samples of f at the source nodes (indexed by absolute source position).
  std::vector<double> source_values(const Field& f) const;
  /// Absolute source index for target i and local source m.
  int source_index(int target, int m) const noexcept;

 private:
  FourierGrid grid_;
  PVMode mode_;
  std::vector<double> offsets_;
  std::vector<double> weights_;
};

/// H(eta)[g]; throws DomainError when 1 + 2 eta <= floor.
Field apply_H(const Field& eta, const Field& g, PVMode mode = PVMode::alternate_point);
/// D0(eta)[g].
Field apply_D0(const Field& eta, const Field& g, PVMode mode = PVMode::alternate_point);
/// H0(eta)[g], the part of H without the eta_x D0 term.
Field apply_H0(const Field& eta, const Field& g, PVMode mode = PVMode::alternate_point);

struct SingularValues {
  Field H;
  Field D0;
  Field H0;
};

/// All three operators on the same density in one kernel sweep.
SingularValues apply_singular(const Field& eta, const Field& g,
                              PVMode mode = PVMode::alternate_point);

/// Signed curvature of z = sqrt(1 + 2 eta) e^{ix}; equals -1 on the unit circle.
Field curvature(const Field& eta);

/// V = D0(eta)[upsilon + psi_x]/2 - upsilon/2.
Field transport_V(const Field& eta, const Field& psi, const PhysParams& params);

/// Convolution (1/2pi) int log(4 sin^2((x-y)/2)) g(y) dy, i.e. multiplier
/// -1/|k| with 0 at k = 0. Throws std::domain_error if g has nonzero mean.
Field log_kernel_convolution(const Field& g);

}  // namespace khsheet
