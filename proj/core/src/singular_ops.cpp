#include "khsheet/singular_ops.hpp"

#include "khsheet/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace khsheet {

PVQuadrature::PVQuadrature(const FourierGrid& grid, PVMode mode) : grid_(grid), mode_(mode) {
  const int n = grid.size();
  const double h = grid.spacing();
  if (mode == PVMode::alternate_point) {
    offsets_.resize(static_cast<std::size_t>(n));
    weights_.assign(static_cast<std::size_t>(n), 1.0 / n);
    // Source j sits at x_j + h/2; the separation depends on m = i - j only.
    for (int m = 0; m < n; ++m) offsets_[static_cast<std::size_t>(m)] = (m - 0.5) * h;
  } else {
    const int count = n / 2;
    offsets_.resize(static_cast<std::size_t>(count));
    weights_.assign(static_cast<std::size_t>(count), 2.0 / n);
    for (int m = 0; m < count; ++m) offsets_[static_cast<std::size_t>(m)] = (2 * m + 1) * h;
  }
}

std::vector<double> PVQuadrature::source_values(const Field& f) const {
  if (mode_ == PVMode::alternate_point) return shifted_samples(f);
  return {f.phys().begin(), f.phys().end()};
}

int PVQuadrature::source_index(int target, int m) const noexcept {
  const int n = grid_.size();
  const int j = mode_ == PVMode::alternate_point ? target - m : target - (2 * m + 1);
  return ((j % n) + n) % n;
}

namespace {

enum Want : unsigned { kWantD0 = 1u, kWantH0 = 2u };

struct RawValues {
  std::vector<double> d0;
  std::vector<double> h0;
};

RawValues sweep(const Field& eta, const Field& g, PVMode mode, unsigned want) {
  check_radius(eta);
  const PVQuadrature quad(eta.grid(), mode);
  const int n = eta.size();
  const int count = quad.source_count();

  std::vector<double> r_t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) r_t[static_cast<std::size_t>(i)] = std::sqrt(1.0 + 2.0 * eta[i]);
  std::vector<double> eta_s = quad.source_values(eta);
  std::vector<double> r_s(eta_s.size());
  for (std::size_t j = 0; j < eta_s.size(); ++j) {
    const double a = 1.0 + 2.0 * eta_s[j];
    if (!(a > kRadiusFloor)) {
      throw DomainError("1 + 2*eta at an interpolated source node is below the admissible floor");
    }
    r_s[j] = std::sqrt(a);
  }
  const std::vector<double> g_s = quad.source_values(g);

  std::vector<double> s2(static_cast<std::size_t>(count)), sn(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) {
    const double d = quad.offsets()[static_cast<std::size_t>(m)];
    const double s = std::sin(0.5 * d);
    s2[static_cast<std::size_t>(m)] = s * s;
    sn[static_cast<std::size_t>(m)] = std::sin(d);
  }
  const auto& w = quad.weights();

  RawValues out;
  out.d0.assign(static_cast<std::size_t>(n), 0.0);
  out.h0.assign(static_cast<std::size_t>(n), 0.0);

  // Each row is summed in a fixed order, so results do not depend on threads.
#pragma omp parallel for schedule(static) if (n >= 256)
  for (int i = 0; i < n; ++i) {
    const double ri = r_t[static_cast<std::size_t>(i)];
    double acc_d = 0.0;
    double acc_h = 0.0;
    for (int m = 0; m < count; ++m) {
      const auto j = static_cast<std::size_t>(quad.source_index(i, m));
      const auto mm = static_cast<std::size_t>(m);
      const double rj = r_s[j];
      const double dr = ri - rj;
      const double den = dr * dr + 4.0 * ri * rj * s2[mm];
      const double inv = w[mm] * g_s[j] / den;
      acc_d += (dr + 2.0 * rj * s2[mm]) * inv;
      acc_h += rj * sn[mm] * inv;
    }
    if (want & kWantD0) out.d0[static_cast<std::size_t>(i)] = 2.0 * acc_d / ri;
    if (want & kWantH0) out.h0[static_cast<std::size_t>(i)] = 2.0 * ri * acc_h;
  }
  return out;
}

}  // namespace

SingularValues apply_singular(const Field& eta, const Field& g, PVMode mode) {
  auto raw = sweep(eta, g, mode, kWantD0 | kWantH0);
  const Field eta_x = derivative(eta);
  std::vector<double> h(raw.d0.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = eta_x.phys()[i] * raw.d0[i] + raw.h0[i];
  const auto& grid = eta.grid();
  return {Field::from_physical(grid, std::move(h)), Field::from_physical(grid, std::move(raw.d0)),
          Field::from_physical(grid, std::move(raw.h0))};
}

Field apply_H(const Field& eta, const Field& g, PVMode mode) {
  return apply_singular(eta, g, mode).H;
}

Field apply_D0(const Field& eta, const Field& g, PVMode mode) {
  auto raw = sweep(eta, g, mode, kWantD0);
  return Field::from_physical(eta.grid(), std::move(raw.d0));
}

Field apply_H0(const Field& eta, const Field& g, PVMode mode) {
  auto raw = sweep(eta, g, mode, kWantH0);
  return Field::from_physical(eta.grid(), std::move(raw.h0));
}

Field curvature(const Field& eta) {
  check_radius(eta);
  const Field eta_x = derivative(eta);
  const Field eta_xx = second_derivative(eta);
  std::vector<double> k(static_cast<std::size_t>(eta.size()));
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double a = 1.0 + 2.0 * eta.phys()[i];
    const double q2 = eta_x.phys()[i] * eta_x.phys()[i];
    k[i] = (eta_xx.phys()[i] - a - 3.0 * q2 / a) / std::pow(a + q2 / a, 1.5);
  }
  return Field::from_physical(eta.grid(), std::move(k));
}

Field transport_V(const Field& eta, const Field& psi, const PhysParams& params) {
  Field g = derivative(psi) + Field::constant(eta.grid(), params.upsilon);
  Field v = 0.5 * apply_D0(eta, g);
  return v - Field::constant(eta.grid(), 0.5 * params.upsilon);
}

Field log_kernel_convolution(const Field& g) {
  if (std::abs(g.mean()) > 1e-12 * std::max(1.0, g.max_abs())) {
    throw std::domain_error("log-kernel convolution requires a mean-zero density");
  }
  return apply_multiplier(g, [](int k) {
    return k == 0 ? cplx{} : cplx{-1.0 / std::abs(k), 0.0};
  });
}

}  // namespace khsheet
