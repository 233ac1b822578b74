#pragma once

// Periodic Fourier infrastructure on the uniform grid x_i = -pi + 2*pi*i/n.
//
// Coefficients use the averaged-integral normalization
//   f_hat(k) = (1/n) sum_i f(x_i) exp(-i k x_i),
// so that every mean over the circle is a plain average of samples.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace khsheet {

using cplx = std::complex<double>;

class FourierGrid {
 public:
  /// Throws std::invalid_argument unless n is even and n >= 16.
  explicit FourierGrid(int n);

  int size() const noexcept { return n_; }
  double spacing() const noexcept;
  double point(int i) const noexcept;
  std::vector<double> points() const;

  int kmin() const noexcept { return -n_ / 2 + 1; }
  int kmax() const noexcept { return n_ / 2; }
  /// Number of stored half-spectrum coefficients, k = 0..n/2.
  int half_size() const noexcept { return n_ / 2 + 1; }

  friend bool operator==(const FourierGrid&, const FourierGrid&) = default;

 private:
  int n_;
};

FourierGrid make_grid(int n);

enum class Direction { forward, inverse };

/// A real periodic function held as samples and half-spectrum coefficients
/// (k = 0..n/2; negative k implied by conjugate symmetry). The Nyquist
/// coefficient is always zero.
class Field {
 public:
  explicit Field(const FourierGrid& grid);  // zero field

  static Field from_physical(const FourierGrid& grid, std::vector<double> samples);
  static Field from_spectrum(const FourierGrid& grid, std::vector<cplx> half_spectrum);
  static Field from_function(const FourierGrid& grid, const std::function<double(double)>& f);
  static Field constant(const FourierGrid& grid, double value);

  const FourierGrid& grid() const noexcept { return grid_; }
  int size() const noexcept { return grid_.size(); }

  std::span<const double> phys() const noexcept { return phys_; }
  std::span<const cplx> spec() const noexcept { return spec_; }
  double operator[](int i) const noexcept { return phys_[static_cast<std::size_t>(i)]; }

  /// Coefficient for any wavenumber in [kmin, kmax]; zero outside.
  cplx coefficient(int k) const noexcept;

  double mean() const noexcept { return spec_[0].real(); }
  double max_abs() const noexcept;

  Field operator-() const;
  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double a);

 private:
  Field(const FourierGrid& grid, std::vector<double> phys, std::vector<cplx> spec);

  FourierGrid grid_;
  std::vector<double> phys_;
  std::vector<cplx> spec_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);
Field operator*(Field f, double a);

/// Pointwise product, re-synchronized through the transform.
Field pointwise_product(const Field& a, const Field& b);
/// Pointwise map of samples.
Field pointwise(const Field& a, const std::function<double(double)>& f);

// Raw transforms on sample/coefficient buffers (half spectrum, k = 0..n/2).
std::vector<cplx> forward_transform(std::span<const double> samples);
std::vector<double> inverse_transform(std::span<const cplx> half_spectrum, int n);

/// Recomputes one representation from the other.
Field transform(const Field& field, Direction direction);

/// Symbol of a Fourier multiplier. Must satisfy m(-k) = conj(m(k)) so that
/// real fields stay real; only k >= 0 is queried.
using Multiplier = std::function<cplx(int)>;

/// Throws std::domain_error if m(0) is not finite while f_hat(0) != 0.
Field apply_multiplier(const Field& field, const Multiplier& m);

namespace multipliers {
Multiplier derivative();        // i k
Multiplier second_derivative(); // -k^2
Multiplier abs_d();             // |k|
Multiplier hilbert();           // -i sgn(k)
}  // namespace multipliers

Field derivative(const Field& f);
Field second_derivative(const Field& f);

/// Samples of the band-limited interpolant at the half-step shifted nodes
/// x_i + h/2.
std::vector<double> shifted_samples(const Field& f);

/// Full-spectrum complex vector indexed by wavenumber k in [kmin, kmax];
/// used for quantities without conjugate symmetry (complex coordinates).
class ModeVector {
 public:
  explicit ModeVector(const FourierGrid& grid);

  const FourierGrid& grid() const noexcept { return grid_; }
  cplx& operator[](int k) { return data_[index(k)]; }
  const cplx& operator[](int k) const { return data_[index(k)]; }

 private:
  std::size_t index(int k) const;
  FourierGrid grid_;
  std::vector<cplx> data_;
};

/// <k> = max(1, |k|).
double japanese_bracket(int k) noexcept;

/// (sum_k <k>^{2s} |f_hat(k)|^2)^{1/2} over all wavenumbers.
double sobolev_norm(const Field& f, double s);
double sobolev_norm(const ModeVector& u, double s);
/// Homogeneous variant: the k = 0 coefficient is excluded.
double homogeneous_sobolev_norm(const Field& f, double s);

Field project_mean_zero(const Field& f);

/// 2/3 rule: zeroes |k| > n/3.
Field dealias(const Field& f);

/// Cyclic shift of the samples by `steps` grid points: out(x_i) = f(x_{i+steps}).
Field grid_shift(const Field& f, int steps);
/// Reflection x -> -x on the grid.
Field reflect(const Field& f);

/// (1/n) sum_i a_i b_i.
double inner(const Field& a, const Field& b);

}  // namespace khsheet
