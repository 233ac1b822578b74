#include "khsheet/coeffs.hpp"

#include <algorithm>
#include <cmath>

namespace khsheet {

Field CoeffBundle::as_field(const FourierGrid& grid, const Samples& s) {
  return Field::from_physical(grid, s);
}

CoeffBundle evaluate_coefficients(const SheetState& state, const PhysParams& params, double floor) {
  const Field& eta = state.eta;
  check_radius(eta, floor);
  const Field eta_x = derivative(eta);
  const Field psi_x = derivative(state.psi);
  const std::size_t n = static_cast<std::size_t>(eta.size());

  CoeffBundle b;
  for (auto* v : {&b.r, &b.f, &b.W, &b.w, &b.B, &b.J0, &b.J0p, &b.K0, &b.K0p}) v->resize(n);
  const double ups = params.upsilon;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 1.0 + 2.0 * eta.phys()[i];
    const double q = eta_x.phys()[i];
    const double d = a * a + q * q;
    const double v = psi_x.phys()[i] + ups;
    b.r[i] = std::sqrt(a);
    b.f[i] = std::pow(a / d, 1.5) - 1.0;
    b.W[i] = v * a / d;
    b.w[i] = 0.5 * (b.W[i] * b.W[i] - ups * ups);
    b.J0[i] = 2.0 * q * a / d;
    b.B[i] = v * b.J0[i] / a;
    b.J0p[i] = 2.0 * a * a * (a * a - q * q) / (d * d);
    b.K0[i] = -2.0 * q * q / d;
    b.K0p[i] = -4.0 * q * a * a * a / (d * d);
  }
  return b;
}

double IdentityReport::max() const noexcept {
  return std::max({j0_relation, k0_relation, k0p_relation});
}

IdentityReport verify_coefficient_identities(const CoeffBundle& bundle, const Field& eta) {
  const Field eta_x = derivative(eta);
  IdentityReport rep;
  for (std::size_t i = 0; i < bundle.J0.size(); ++i) {
    const double a = 1.0 + 2.0 * eta.phys()[i];
    const double q = eta_x.phys()[i];
    const double d = a * a + q * q;
    const double r2 = bundle.r[i] * bundle.r[i];
    const double j0 = bundle.J0[i];
    const double j0p = bundle.J0p[i];
    const double base = 2.0 * a * a * a * a / (d * d);

    rep.j0_relation = std::max(rep.j0_relation, std::abs(j0p - (base - 0.5 * j0 * j0)));
    const double printed = j0p - (base - j0 * j0);
    rep.j0_relation_as_printed = std::max(rep.j0_relation_as_printed, std::abs(printed));
    rep.j0_printed_defect = std::max(rep.j0_printed_defect, std::abs(printed - 0.5 * j0 * j0));
    rep.k0_relation = std::max(rep.k0_relation, std::abs(bundle.K0[i] + q / r2 * j0));
    rep.k0p_relation = std::max(rep.k0p_relation, std::abs(bundle.K0p[i] + q / r2 * j0p + j0));
  }
  return rep;
}

}  // namespace khsheet
