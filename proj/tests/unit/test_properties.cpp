// Randomized property checks with a fixed seed per property.
#include "khsheet/coeffs.hpp"
#include "khsheet/diagnostics.hpp"
#include "khsheet/dynamics.hpp"
#include "khsheet/hamiltonian.hpp"
#include "khsheet/linear.hpp"
#include "khsheet/resonance.hpp"
#include "khsheet/singular_ops.hpp"

#include "support.hpp"

#include <doctest.h>

#include <map>
#include <sstream>

using namespace khsheet;
using testing::max_diff;
using testing::random_field;

namespace {

// Runs `prop` on `cases` generated inputs; on failure reports the case number.
template <class Prop>
void forall(const char* name, int cases, std::uint64_t seed, Prop prop) {
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    std::ostringstream where;
    where << name << " case " << c << " (seed " << seed << ")";
    INFO(where.str());
    prop(rng);
  }
}

int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

TEST_CASE("spectral properties") {
  forall("parseval and round trip", 30, 101, [](auto& rng) {
    const FourierGrid g(2 * pick(rng, 8, 128));
    const auto f = random_field(g, rng, g.kmax() - 1, uniform(rng, 0.1, 10.0), 0.0);
    double spec = 0.0;
    for (int k = g.kmin(); k <= g.kmax(); ++k) spec += std::norm(f.coefficient(k));
    CHECK(std::abs(spec - inner(f, f)) < 1e-12 * inner(f, f));
    CHECK(max_diff(transform(transform(f, Direction::inverse), Direction::forward), f) < 1e-12 * f.max_abs());
  });
  forall("projection idempotent", 20, 102, [](auto& rng) {
    const FourierGrid g(64);
    const auto f = random_field(g, rng, 20, 1.0) + Field::constant(g, uniform(rng, -3, 3));
    const auto p = project_mean_zero(f);
    CHECK(max_diff(project_mean_zero(p), p) == 0.0);
    CHECK(p.mean() == 0.0);
  });
}

TEST_CASE("operator properties") {
  forall("hilbert equivariance and decomposition", 8, 201, [](auto& rng) {
    const FourierGrid g(128);
    const auto eta = random_field(g, rng, pick(rng, 2, 12), uniform(rng, 0.01, 0.2));
    const auto dens = random_field(g, rng, 16, 1.0) + Field::constant(g, uniform(rng, -1, 1));
    const int shift = pick(rng, 1, 127);
    const auto v = apply_singular(eta, dens);
    const auto w = apply_singular(grid_shift(eta, shift), grid_shift(dens, shift));
    CHECK(max_diff(grid_shift(v.H, shift), w.H) < 1e-11);
    CHECK(max_diff(grid_shift(v.D0, shift), w.D0) < 1e-11);
    CHECK((v.H - pointwise_product(derivative(eta), v.D0) - v.H0).max_abs() < 1e-6);
    CHECK(std::abs(v.H.mean()) < 1e-9);
  });
  forall("coefficient identities", 20, 202, [](auto& rng) {
    const FourierGrid g(2 * pick(rng, 16, 128));
    const auto eta = random_field(g, rng, pick(rng, 1, 20), uniform(rng, 0.01, 0.2));
    const auto psi = random_field(g, rng, 10, 0.1);
    const auto b = evaluate_coefficients({eta, psi}, PhysParams::from_beta(1.0, uniform(rng, 0.5, 14)));
    CHECK(verify_coefficient_identities(b, eta).max() < 1e-11);
  });
}

TEST_CASE("hamiltonian properties") {
  forall("reversibility and translation", 6, 301, [](auto& rng) {
    const FourierGrid g(64);
    const SheetState s{random_field(g, rng, 8, 0.1), random_field(g, rng, 8, 0.1)};
    const auto p = PhysParams::from_beta(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 14.0));
    const double h = hamiltonian_total(s, p);
    CHECK(std::abs(hamiltonian_total(reverse(s), p) - h) < 1e-12);
    CHECK(std::abs(hamiltonian_total(grid_shift(s, pick(rng, 1, 63)), p) - h) < 1e-12);
  });
  forall("gradient consistency", 4, 302, [](auto& rng) {
    const FourierGrid g(128);
    const SheetState s{random_field(g, rng, 8, uniform(rng, 0.0, 0.15)), random_field(g, rng, 8, 0.1)};
    const auto p = PhysParams::from_beta(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 14.0));
    CHECK(gradcheck(s, p, 3, 1e-5, rng()).max_mismatch < 1e-6);
  });
}

TEST_CASE("linear and diagnostic properties") {
  forall("complex change round trip and shift invariance", 20, 401, [](auto& rng) {
    const FourierGrid g(64);
    const auto p = PhysParams::from_beta(uniform(rng, 0.1, 10.0), uniform(rng, 0.5, 14.0));
    const SheetState s{random_field(g, rng, 30, 0.05), random_field(g, rng, 30, 0.05)};
    const auto back = from_complex(to_complex(s, p), p);
    CHECK(max_diff(back.eta, s.eta) < 1e-13);
    CHECK(max_diff(back.psi, s.psi) < 1e-13);
    const auto a = super_actions(s, p, 20);
    const auto b = super_actions(grid_shift(s, pick(rng, 1, 63)), p, 20);
    for (std::size_t n = 0; n < a.size(); ++n) CHECK(std::abs(a[n] - b[n]) <= 1e-12 * (a[n] + 1e-300));
  });
  forall("linear flow conserves every super-action", 3, 402, [](auto& rng) {
    const FourierGrid g(64);
    const auto p = PhysParams::from_beta(1.0, uniform(rng, 0.5, 14.0));
    const SheetState s{random_field(g, rng, 12, 0.01), random_field(g, rng, 12, 0.01)};
    const auto j0 = super_actions(s, p, 12);
    auto x = s;
    const Stepper st(p, Integrator::ifrk4, RhsOptions{true, true, true}, g, 0.05);
    for (int i = 0; i < 20; ++i) x = st.advance(x);
    const auto j1 = super_actions(x, p, 12);
    for (std::size_t n = 0; n < j0.size(); ++n) CHECK(std::abs(j1[n] - j0[n]) <= 1e-12 * j0[n] + 1e-20);
  });
}

TEST_CASE("resonance properties") {
  // classify_sap agrees with comparing multisets of (|j|, sigma) occurrences.
  forall("sap classification", 2000, 501, [](auto& rng) {
    const int p = pick(rng, 1, 6);
    std::vector<int> js, sg;
    for (int a = 0; a < p; ++a) {
      int j = 0;
      while (j == 0) j = pick(rng, -5, 5);
      js.push_back(j);
      sg.push_back(pick(rng, 0, 1) == 0 ? -1 : 1);
    }
    std::map<int, int> plus, minus;
    for (int a = 0; a < p; ++a) (sg[static_cast<std::size_t>(a)] > 0 ? plus : minus)[std::abs(js[static_cast<std::size_t>(a)])]++;
    CHECK(classify_sap(MultiIndex::make(js, sg)) == (plus == minus));
  });
  forall("divisor is odd under sign flip and even under reflection", 200, 502, [](auto& rng) {
    const auto p = PhysParams::from_beta(uniform(rng, 0.1, 10.0), uniform(rng, 0.5, 14.0));
    const int len = pick(rng, 1, 6);
    std::vector<int> js, sg;
    for (int a = 0; a < len; ++a) {
      int j = 0;
      while (j == 0) j = pick(rng, -30, 30);
      js.push_back(j);
      sg.push_back(pick(rng, 0, 1) == 0 ? -1 : 1);
    }
    const auto m = MultiIndex::make(js, sg);
    auto flip = m, refl = m;
    for (auto& s : flip.sigmas) s = -s;
    for (auto& j : refl.js) j = -j;
    CHECK(divisor(flip, p) == -divisor(m, p));
    CHECK(divisor(refl, p) == divisor(m, p));
    if (classify_sap(m)) CHECK(std::abs(divisor(m, p)) < 1e-12 * (1 + std::abs(omega_real(30, p))));
  });
}
