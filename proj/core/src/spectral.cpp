#include "khsheet/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace khsheet {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  struct Plans {
    fftw_plan r2c;
    fftw_plan c2r;
  };

  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  Plans get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<double> r(static_cast<std::size_t>(n));
    std::vector<cplx> c(static_cast<std::size_t>(n / 2 + 1));
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p{fftw_plan_dft_r2c_1d(n, r.data(), cp, flags),
            fftw_plan_dft_c2r_1d(n, cp, r.data(), flags)};
    plans_.emplace(n, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.r2c);
      fftw_destroy_plan(p.c2r);
    }
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<int, Plans> plans_;
};

// exp(i k x_0) with x_0 = -pi.
double origin_phase(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

// ---------------------------------------------------------------- FourierGrid

FourierGrid::FourierGrid(int n) : n_(n) {
  if (n < 16 || n % 2 != 0) {
    throw std::invalid_argument("grid size must be even and >= 16, got " + std::to_string(n));
  }
}

double FourierGrid::spacing() const noexcept { return 2.0 * kPi / n_; }

double FourierGrid::point(int i) const noexcept { return -kPi + spacing() * i; }

std::vector<double> FourierGrid::points() const {
  std::vector<double> x(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) x[static_cast<std::size_t>(i)] = point(i);
  return x;
}

FourierGrid make_grid(int n) { return FourierGrid(n); }

// ---------------------------------------------------------------- transforms

std::vector<cplx> forward_transform(std::span<const double> samples) {
  const int n = static_cast<int>(samples.size());
  auto plans = PlanCache::instance().get(n);
  std::vector<double> in(samples.begin(), samples.end());
  std::vector<cplx> out(static_cast<std::size_t>(n / 2 + 1));
  fftw_execute_dft_r2c(plans.r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  const double inv_n = 1.0 / n;
  for (int k = 0; k <= n / 2; ++k) out[static_cast<std::size_t>(k)] *= inv_n * origin_phase(k);
  return out;
}

std::vector<double> inverse_transform(std::span<const cplx> half_spectrum, int n) {
  if (static_cast<int>(half_spectrum.size()) != n / 2 + 1) {
    throw std::invalid_argument("half spectrum length does not match grid size");
  }
  auto plans = PlanCache::instance().get(n);
  std::vector<cplx> in(half_spectrum.begin(), half_spectrum.end());
  for (int k = 0; k <= n / 2; ++k) in[static_cast<std::size_t>(k)] *= origin_phase(k);
  in[0].imag(0.0);
  in[static_cast<std::size_t>(n / 2)].imag(0.0);
  std::vector<double> out(static_cast<std::size_t>(n));
  fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

// ---------------------------------------------------------------- Field

Field::Field(const FourierGrid& grid)
    : grid_(grid),
      phys_(static_cast<std::size_t>(grid.size()), 0.0),
      spec_(static_cast<std::size_t>(grid.half_size()), cplx{}) {}

Field::Field(const FourierGrid& grid, std::vector<double> phys, std::vector<cplx> spec)
    : grid_(grid), phys_(std::move(phys)), spec_(std::move(spec)) {}

Field Field::from_physical(const FourierGrid& grid, std::vector<double> samples) {
  const int n = grid.size();
  if (static_cast<int>(samples.size()) != n) {
    throw std::invalid_argument("sample count does not match grid size");
  }
  auto spec = forward_transform(samples);
  // Drop the Nyquist mode: its contribution at x_i is c * exp(i n/2 x_i).
  const double nyq = spec[static_cast<std::size_t>(n / 2)].real();
  if (nyq != 0.0) {
    const double sign0 = origin_phase(n / 2);
    for (int i = 0; i < n; ++i) {
      samples[static_cast<std::size_t>(i)] -= nyq * sign0 * ((i % 2 == 0) ? 1.0 : -1.0);
    }
  }
  spec[static_cast<std::size_t>(n / 2)] = cplx{};
  spec[0].imag(0.0);
  return Field(grid, std::move(samples), std::move(spec));
}

Field Field::from_spectrum(const FourierGrid& grid, std::vector<cplx> half_spectrum) {
  if (static_cast<int>(half_spectrum.size()) != grid.half_size()) {
    throw std::invalid_argument("half spectrum length does not match grid size");
  }
  half_spectrum[0].imag(0.0);
  half_spectrum.back() = cplx{};
  auto phys = inverse_transform(half_spectrum, grid.size());
  return Field(grid, std::move(phys), std::move(half_spectrum));
}

Field Field::from_function(const FourierGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> s(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) s[static_cast<std::size_t>(i)] = f(grid.point(i));
  return from_physical(grid, std::move(s));
}

Field Field::constant(const FourierGrid& grid, double value) {
  std::vector<cplx> spec(static_cast<std::size_t>(grid.half_size()), cplx{});
  spec[0] = value;
  return Field(grid, std::vector<double>(static_cast<std::size_t>(grid.size()), value),
               std::move(spec));
}

cplx Field::coefficient(int k) const noexcept {
  if (k < grid_.kmin() || k > grid_.kmax()) return {};
  if (k >= 0) return spec_[static_cast<std::size_t>(k)];
  return std::conj(spec_[static_cast<std::size_t>(-k)]);
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : phys_) m = std::max(m, std::abs(v));
  return m;
}

Field Field::operator-() const {
  Field out = *this;
  out *= -1.0;
  return out;
}

Field& Field::operator+=(const Field& o) {
  for (std::size_t i = 0; i < phys_.size(); ++i) phys_[i] += o.phys_[i];
  for (std::size_t k = 0; k < spec_.size(); ++k) spec_[k] += o.spec_[k];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  for (std::size_t i = 0; i < phys_.size(); ++i) phys_[i] -= o.phys_[i];
  for (std::size_t k = 0; k < spec_.size(); ++k) spec_[k] -= o.spec_[k];
  return *this;
}

Field& Field::operator*=(double a) {
  for (double& v : phys_) v *= a;
  for (cplx& c : spec_) c *= a;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }
Field operator*(Field f, double a) { return f *= a; }

Field pointwise_product(const Field& a, const Field& b) {
  std::vector<double> s(a.phys().begin(), a.phys().end());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= b.phys()[i];
  return Field::from_physical(a.grid(), std::move(s));
}

Field pointwise(const Field& a, const std::function<double(double)>& f) {
  std::vector<double> s(a.phys().begin(), a.phys().end());
  for (double& v : s) v = f(v);
  return Field::from_physical(a.grid(), std::move(s));
}

Field transform(const Field& field, Direction direction) {
  if (direction == Direction::forward) {
    return Field::from_physical(field.grid(), {field.phys().begin(), field.phys().end()});
  }
  return Field::from_spectrum(field.grid(), {field.spec().begin(), field.spec().end()});
}

// ---------------------------------------------------------------- multipliers

Field apply_multiplier(const Field& field, const Multiplier& m) {
  std::vector<cplx> spec(field.spec().begin(), field.spec().end());
  const cplx m0 = m(0);
  if (!std::isfinite(m0.real()) || !std::isfinite(m0.imag())) {
    if (spec[0] != cplx{}) {
      throw std::domain_error("multiplier undefined at k = 0 on a field with nonzero mean");
    }
    spec[0] = cplx{};
  } else {
    spec[0] *= m0;
  }
  for (std::size_t k = 1; k < spec.size(); ++k) spec[k] *= m(static_cast<int>(k));
  return Field::from_spectrum(field.grid(), std::move(spec));
}

namespace multipliers {
Multiplier derivative() {
  return [](int k) { return cplx{0.0, static_cast<double>(k)}; };
}
Multiplier second_derivative() {
  return [](int k) { return cplx{-static_cast<double>(k) * k, 0.0}; };
}
Multiplier abs_d() {
  return [](int k) { return cplx{static_cast<double>(std::abs(k)), 0.0}; };
}
Multiplier hilbert() {
  return [](int k) { return cplx{0.0, k > 0 ? -1.0 : (k < 0 ? 1.0 : 0.0)}; };
}
}  // namespace multipliers

Field derivative(const Field& f) { return apply_multiplier(f, multipliers::derivative()); }
Field second_derivative(const Field& f) {
  return apply_multiplier(f, multipliers::second_derivative());
}

std::vector<double> shifted_samples(const Field& f) {
  const double half = 0.5 * f.grid().spacing();
  std::vector<cplx> spec(f.spec().begin(), f.spec().end());
  for (std::size_t k = 1; k < spec.size(); ++k) {
    spec[k] *= std::polar(1.0, static_cast<double>(k) * half);
  }
  return inverse_transform(spec, f.size());
}

// ---------------------------------------------------------------- ModeVector

ModeVector::ModeVector(const FourierGrid& grid)
    : grid_(grid), data_(static_cast<std::size_t>(grid.size()), cplx{}) {}

std::size_t ModeVector::index(int k) const {
  if (k < grid_.kmin() || k > grid_.kmax()) {
    throw std::out_of_range("wavenumber " + std::to_string(k) + " outside grid");
  }
  return static_cast<std::size_t>(k - grid_.kmin());
}

// ---------------------------------------------------------------- norms etc.

double japanese_bracket(int k) noexcept { return std::max(1.0, std::abs(static_cast<double>(k))); }

double sobolev_norm(const Field& f, double s) {
  double acc = std::norm(f.spec()[0]);
  for (int k = 1; k < f.grid().half_size(); ++k) {
    acc += 2.0 * std::pow(japanese_bracket(k), 2.0 * s) * std::norm(f.spec()[static_cast<std::size_t>(k)]);
  }
  return std::sqrt(acc);
}

double homogeneous_sobolev_norm(const Field& f, double s) {
  return sobolev_norm(project_mean_zero(f), s);
}

double sobolev_norm(const ModeVector& u, double s) {
  double acc = 0.0;
  for (int k = u.grid().kmin(); k <= u.grid().kmax(); ++k) {
    acc += std::pow(japanese_bracket(k), 2.0 * s) * std::norm(u[k]);
  }
  return std::sqrt(acc);
}

Field project_mean_zero(const Field& f) {
  if (f.mean() == 0.0) return f;
  return f - Field::constant(f.grid(), f.mean());
}

Field dealias(const Field& f) {
  const int n = f.size();
  std::vector<cplx> spec(f.spec().begin(), f.spec().end());
  bool touched = false;
  for (int k = 0; k < f.grid().half_size(); ++k) {
    if (3 * k > n && spec[static_cast<std::size_t>(k)] != cplx{}) {
      spec[static_cast<std::size_t>(k)] = cplx{};
      touched = true;
    }
  }
  if (!touched) return f;
  return Field::from_spectrum(f.grid(), std::move(spec));
}

Field grid_shift(const Field& f, int steps) {
  const int n = f.size();
  std::vector<double> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    s[static_cast<std::size_t>(i)] = f[((i + steps) % n + n) % n];
  }
  return Field::from_physical(f.grid(), std::move(s));
}

Field reflect(const Field& f) {
  const int n = f.size();
  std::vector<double> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = f[(n - i) % n];
  return Field::from_physical(f.grid(), std::move(s));
}

double inner(const Field& a, const Field& b) {
  double acc = 0.0;
  for (int i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc / a.size();
}

}  // namespace khsheet
