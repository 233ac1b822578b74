// Acceptance suite: one PASS/FAIL line per criterion. Exit code is the number
// of failed criteria.
#include "khsheet/coeffs.hpp"
#include "khsheet/diagnostics.hpp"
#include "khsheet/dynamics.hpp"
#include "khsheet/hamiltonian.hpp"
#include "khsheet/io.hpp"
#include "khsheet/linear.hpp"
#include "khsheet/resonance.hpp"
#include "khsheet/singular_ops.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace khsheet;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (!failures_.empty()) failures_ += "; ";
      failures_ += what;
    }
  }
  void note(const std::string& s) {
    if (!notes_.empty()) notes_ += ", ";
    notes_ += s;
  }
  Outcome done() const { return {pass_, pass_ ? notes_ : failures_ + " | " + notes_}; }

 private:
  bool pass_ = true;
  std::string failures_;
  std::string notes_;
};

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3e", v);
  return b;
}

Field random_field(const FourierGrid& g, std::mt19937_64& rng, int band, double amp) {
  std::normal_distribution<double> nd;
  std::vector<cplx> spec(static_cast<std::size_t>(g.half_size()));
  for (int k = 1; k <= band; ++k) spec[static_cast<std::size_t>(k)] = cplx{nd(rng), nd(rng)} / double(k);
  Field f = Field::from_spectrum(g, std::move(spec));
  return (amp / f.max_abs()) * f;
}

Field cos_mode(const FourierGrid& g, int k, double a) {
  return Field::from_function(g, [=](double x) { return a * std::cos(k * x); });
}
Field sin_mode(const FourierGrid& g, int k, double a) {
  return Field::from_function(g, [=](double x) { return a * std::sin(k * x); });
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------- criteria

Outcome threshold_reproduction() {
  constexpr double kBetaTol = 1e-9, kXiTol = 1e-6;
  Check c;
  const auto th = continuous_threshold();
  const double beta_err = std::abs(th.beta_plus - 4 * (2 + std::sqrt(3.0)));
  const double xi_err = std::abs(th.xi_star - (2 + std::sqrt(3.0)));
  c.require(beta_err < kBetaTol, "beta_plus error " + sci(beta_err));
  c.require(xi_err < kXiTol, "xi_star error " + sci(xi_err));
  const auto below = stability_report(PhysParams::from_beta(1.0, 14.99), 1000);
  const auto above = stability_report(PhysParams::from_beta(1.0, 15.01), 1000);
  c.require(below.all_stable(), "beta=14.99 not all stable");
  bool only4 = true;
  for (const auto& m : above.modes) only4 = only4 && (m.stable == (m.k != 4));
  c.require(only4, "beta=15.01 does not flag exactly mode 4");
  c.note("beta_plus=" + std::to_string(th.beta_plus) + " err " + sci(beta_err) + ", xi err " + sci(xi_err));
  return c.done();
}

Outcome spectral_identities() {
  constexpr double kRel = 1e-12, kDeriv = 1e-10;
  Check c;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ug(0.1, 10.0), ub(0.5, 14.0);
  double w2 = 0, w53 = 0, dmax = 0;
  for (int i = 0; i < 100; ++i) {
    const double gamma = ug(rng), beta = ub(rng);
    const auto p = PhysParams::from_beta(gamma, beta);
    w2 = std::max(w2, std::abs(omega_squared(2, p) - 3 * gamma) / gamma);
    w53 = std::max(w53, std::abs(omega_squared(5, p) - 5 * omega_squared(3, p)) / gamma);
    const double h = 1e-4;
    const double d = (omega(2, PhysParams::from_beta(gamma, beta + h)).magnitude -
                      omega(2, PhysParams::from_beta(gamma, beta - h)).magnitude) / (2 * h);
    dmax = std::max(dmax, std::abs(d));
  }
  c.require(w2 < kRel, "omega(2)^2 - 3 gamma");
  c.require(w53 < kRel, "omega(5)^2 - 5 omega(3)^2");
  c.require(dmax < kDeriv, "d omega(2)/d beta");
  c.note("max rel " + sci(w2) + " / " + sci(w53) + ", |d_beta omega(2)| " + sci(dmax));
  return c.done();
}

Outcome flat_operator_oracles() {
  constexpr double kRel = 1e-9, kOne = 1e-12;
  Check c;
  const FourierGrid g(256);
  const Field zero(g);
  double eh = 0, eh0 = 0, ed = 0;
  for (int k = 1; k < g.kmax(); ++k) {
    const auto ck = cos_mode(g, k, 1.0), sk = sin_mode(g, k, 1.0);
    eh = std::max({eh, max_diff(apply_H(zero, ck), sk), max_diff(apply_H(zero, sk), -1.0 * ck)});
    eh0 = std::max({eh0, max_diff(apply_H0(zero, ck), sk), max_diff(apply_H0(zero, sk), -1.0 * ck)});
  }
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto f = random_field(g, rng, 120, 1.0) + Field::constant(g, 0.37 * t);
    ed = std::max(ed, max_diff(apply_D0(zero, f), Field::constant(g, f.mean())) / f.max_abs());
  }
  const double one = max_diff(apply_D0(zero, Field::constant(g, 1.0)), Field::constant(g, 1.0));
  c.require(eh < kRel, "H(0) multiplier");
  c.require(eh0 < kRel, "H0(0) multiplier");
  c.require(ed < kRel, "D0(0) mean projection");
  c.require(one < kOne, "D0(0)[1] = 1");
  c.note("H " + sci(eh) + ", H0 " + sci(eh0) + ", D0 " + sci(ed) + ", D0[1] " + sci(one));
  return c.done();
}

Outcome coefficient_identities() {
  constexpr double kTol = 1e-11;
  Check c;
  const FourierGrid g(256);
  std::mt19937_64 rng(44);
  double worst = 0, printed = 0, defect = 0;
  for (int t = 0; t < 20; ++t) {
    const auto eta = random_field(g, rng, 24, 0.2);
    const auto psi = random_field(g, rng, 24, 0.1);
    const auto rep = verify_coefficient_identities(evaluate_coefficients({eta, psi}, PhysParams::from_beta(1.0, 5.0)), eta);
    worst = std::max(worst, rep.max());
    printed = std::max(printed, rep.j0_relation_as_printed);
    defect = std::max(defect, rep.j0_printed_defect);
  }
  c.require(worst < kTol, "max residual " + sci(worst));
  // With (J0)^2 instead of (J0)^2/2 the J0' relation misses by exactly (J0)^2/2.
  c.require(defect < kTol, "printed-form defect is not (J0)^2/2");
  c.note("max residual " + sci(worst) + ", printed-form residual " + sci(printed) + " = (J0)^2/2 to " + sci(defect));
  return c.done();
}

Outcome linearization_fidelity() {
  constexpr double kRel = 1e-6, kEps = 1e-5;
  Check c;
  const FourierGrid g(128);
  double worst = 0;
  for (double beta : {0.5, 5.0, 12.0}) {
    const auto p = PhysParams::from_beta(1.0, beta);
    for (int k = 1; k <= 32; ++k) {
      const auto L = linear_block(k, p);
      const cplx tr = transport_rate(k, p);
      const double scale = std::max({std::abs(L[0][1]), std::abs(L[1][0]), std::abs(tr)});
      for (int col = 0; col < 2; ++col) {
        const auto v = cos_mode(g, k, kEps);
        const SheetState plus = col == 0 ? SheetState{v, Field(g)} : SheetState{Field(g), v};
        const auto a = rhs(plus, p);
        const auto b = rhs((-1.0) * plus, p);
        const cplx de = (a.deta.coefficient(k) - b.deta.coefficient(k)) / kEps;
        const cplx dp = (a.dpsi.coefficient(k) - b.dpsi.coefficient(k)) / kEps;
        const cplx le = L[0][col] + (col == 0 ? tr : 0.0);
        const cplx lp = L[1][col] + (col == 1 ? tr : 0.0);
        worst = std::max({worst, std::abs(de - le) / scale, std::abs(dp - lp) / scale});
      }
    }
  }
  c.require(worst < kRel, "max relative entry error " + sci(worst));
  c.note("max relative entry error " + sci(worst) + " over |k|<=32, beta in {0.5,5,12}");
  return c.done();
}

Outcome hamiltonian_gradient() {
  constexpr double kTol = 1e-6, kH = 1e-5;
  Check c;
  const FourierGrid g(128);
  std::mt19937_64 rng(66);
  double worst = 0;
  for (int t = 0; t < 10; ++t) {
    const SheetState s{random_field(g, rng, 8, 0.1), random_field(g, rng, 8, 0.1)};
    const auto p = PhysParams::from_beta(1.0, 2.0 + t);
    worst = std::max(worst, gradcheck(s, p, 4, kH, 100 + t).max_mismatch);
  }
  c.require(worst < kTol, "max mismatch " + sci(worst));
  c.note("max mismatch " + sci(worst));
  return c.done();
}

Outcome conservation_order() {
  constexpr double kMinRatio = 12.0;
  Check c;
  const FourierGrid g(128);
  const auto p = PhysParams::from_beta(1.0, 5.0);
  const auto s = state_from_modes(g, {{ModeSeed::Variable::eta, 2, 1e-2, 0.0}});
  const double h0 = hamiltonian_total(s, p);
  auto drift = [&](double dt) {
    const Stepper st(p, Integrator::ifrk4, {}, g, dt);
    auto x = s;
    const int n = static_cast<int>(std::lround(1.0 / dt));
    for (int i = 0; i < n; ++i) x = st.advance(x);
    return std::abs(hamiltonian_total(x, p) - h0);
  };
  const double d1 = drift(0.1), d2 = drift(0.05);
  const double ratio = d1 / d2;
  c.require(ratio >= kMinRatio, "ratio " + std::to_string(ratio));
  c.note("ifrk4 |dH| " + sci(d1) + " -> " + sci(d2) + ", ratio " + std::to_string(ratio));
  return c.done();
}

Outcome kh_instability() {
  constexpr double kRel = 0.01;
  Check c;
  const FourierGrid g(64);
  const auto p = PhysParams::natural(0.0, 1.0);
  const int k = 4;
  const double mu = omega(k, p).magnitude;
  const auto L = linear_block(k, p);
  const double eps = 1e-6;
  auto x = state_from_modes(g, {{ModeSeed::Variable::eta, k, eps, 0.0}, {ModeSeed::Variable::psi, k, eps * mu / L[0][1], 0.0}});
  const double dt = 0.01;
  const Stepper st(p, Integrator::ifrk4, {}, g, dt);
  std::vector<double> t, y;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(i * dt);
    y.push_back(std::log(std::abs(x.eta.coefficient(k))));
    if (i < 200) x = st.advance(x);
  }
  const double rate = slope(t, y);
  const double err = std::abs(rate / mu - 1.0);
  c.require(std::abs(mu - std::sqrt(2.0)) < 1e-14, "predicted rate is not sqrt 2");
  c.require(err < kRel, "relative error " + sci(err));
  c.note("measured " + std::to_string(rate) + " vs " + std::to_string(mu) + ", rel err " + sci(err));
  return c.done();
}

Outcome desk_stability() {
  constexpr double kNormBand = 3.0, kDriftH = 1e-8;
  constexpr int kWidthGrowth = 2;
  Check c;
  SimConfig cfg;
  cfg.params = PhysParams::from_beta(1.0, 10.0);
  cfg.n = 128;
  cfg.cfl = 0.9;
  cfg.t_end = 10.0;
  cfg.integrator = Integrator::rk4;
  cfg.initial = {{ModeSeed::Variable::eta, 2, 1e-3, 0.0}};
  cfg.sample_every = 5;
  const auto r = simulate(cfg);
  c.require(r.status == ExitStatus::completed, "run did not complete: " + r.message);
  if (r.series.empty()) return c.done();
  const double n0 = r.series.front().norm_s, h0 = r.series.front().H;
  const int w0 = r.series.front().width;
  double nmax = 0, dh = 0;
  int wmax = 0;
  for (const auto& rec : r.series) {
    nmax = std::max(nmax, rec.norm_s);
    dh = std::max(dh, std::abs(rec.H - h0));
    wmax = std::max(wmax, rec.width);
  }
  c.require(nmax <= kNormBand * n0, "norm ratio " + std::to_string(nmax / n0));
  c.require(dh < kDriftH, "H drift " + sci(dh));
  c.require(wmax - w0 <= kWidthGrowth, "width growth " + std::to_string(wmax - w0));
  c.note("steps " + std::to_string(r.steps) + ", sup norm/initial " + std::to_string(nmax / n0) + ", |dH| " + sci(dh) +
         ", width " + std::to_string(w0) + "->" + std::to_string(wmax));
  return c.done();
}

Outcome super_action_flux() {
  constexpr double kLo = 2.5, kHi = 3.5;
  Check c;
  const FourierGrid g(128);
  const auto p = PhysParams::from_beta(1.0, 5.0);
  const double dt = 0.01;
  const Stepper st(p, Integrator::ifrk4, {}, g, dt);
  std::vector<std::pair<double, double>> pairs;
  std::string drifts;
  for (double eps : {4e-3, 2e-3, 1e-3}) {
    auto x = state_from_modes(g, {{ModeSeed::Variable::eta, 2, eps, 0.0},
                                  {ModeSeed::Variable::eta, 3, eps, 0.0},
                                  {ModeSeed::Variable::eta, 5, eps, 0.0}});
    const double j0 = total_super_action(x, p);
    double d = 0;
    for (int i = 0; i < 200; ++i) {
      x = st.advance(x);
      d = std::max(d, std::abs(total_super_action(x, p) - j0));
    }
    pairs.emplace_back(eps, d);
    drifts += (drifts.empty() ? "" : " ") + sci(d);
  }
  const double s = drift_fit(pairs);
  c.require(s >= kLo && s <= kHi, "slope " + std::to_string(s));
  c.note("drifts " + drifts + ", slope " + std::to_string(s));
  return c.done();
}

Outcome resonance_soundness() {
  Check c;
  // Every tuple of length <= 4 from the 16 (j, sigma) entries with |j| <= 8.
  std::vector<std::pair<int, int>> entries;
  for (int j = -8; j <= 8; ++j) {
    if (j == 0) continue;
    entries.emplace_back(j, 1);
    entries.emplace_back(j, -1);
  }
  long checked = 0, mismatches = 0;
  for (int p = 1; p <= 4; ++p) {
    std::vector<std::size_t> pos(static_cast<std::size_t>(p), 0);
    while (true) {
      std::vector<int> js, sg;
      int mom = 0;
      std::map<int, int> plus, minus;
      for (auto q : pos) {
        const auto [j, s] = entries[q];
        js.push_back(j);
        sg.push_back(s);
        mom += s * j;
        (s > 0 ? plus : minus)[std::abs(j)]++;
      }
      if (mom == 0) {
        ++checked;
        if (classify_sap(MultiIndex::make(js, sg)) != (plus == minus)) ++mismatches;
      }
      std::size_t i = 0;
      while (i < pos.size() && ++pos[i] == entries.size()) pos[i++] = 0;
      if (i == pos.size()) break;
    }
  }
  c.require(mismatches == 0, std::to_string(mismatches) + " classification mismatches");
  const auto couples = arithmetic_couples(200);
  c.require(couples.size() == 1 && couples[0] == std::pair{3, 5}, "arithmetic couples are not exactly {3,5}");
  c.note(std::to_string(checked) + " momentum-preserving tuples, couples found " + std::to_string(couples.size()));
  return c.done();
}

Outcome determinism_and_persistence() {
  constexpr double kCoeffTol = 1e-12;
  Check c;
  SimConfig cfg;
  cfg.params = PhysParams::from_beta(1.0, 6.0);
  cfg.n = 128;
  cfg.dt = 0.01;
  cfg.t_end = 1.0;
  cfg.integrator = Integrator::rk4;
  cfg.initial = {{ModeSeed::Variable::eta, 2, 1e-2, 0.0}, {ModeSeed::Variable::psi, 5, 4e-3, 1.1}};
  cfg.sample_every = 10;
  cfg.checkpoint_every = 40;

  auto render = [&](const RunResult& r) {
    std::ostringstream os;
    write_diagnostics_csv(os, r.series, cfg.diagnostics.n_max);
    for (const auto& cp : r.checkpoints) os << checkpoint_to_json(cp) << '\n';
    return os.str();
  };
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  c.require(render(a) == render(b), "repeated runs differ");

  // Resume from a checkpoint that went through its JSON form.
  const auto cp = checkpoint_from_json(checkpoint_to_json(a.checkpoints.front()));
  const auto rest = resume(cfg, cp);
  double worst = 0;
  for (int k = 0; k <= a.final_state->grid().kmax(); ++k) {
    worst = std::max({worst, std::abs(rest.final_state->eta.coefficient(k) - a.final_state->eta.coefficient(k)),
                      std::abs(rest.final_state->psi.coefficient(k) - a.final_state->psi.coefficient(k))});
  }
  c.require(worst <= kCoeffTol, "resume mismatch " + sci(worst));
  c.note("byte-identical reruns, resume from t=" + std::to_string(cp.t) + " max coeff diff " + sci(worst));
  return c.done();
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {1, "threshold reproduction", 1.0, threshold_reproduction},
      {2, "exact spectral identities", 1.0, spectral_identities},
      {3, "flat-sheet operator oracles", 5.0, flat_operator_oracles},
      {4, "coefficient identities", 1.0, coefficient_identities},
      {5, "linearization fidelity", 30.0, linearization_fidelity},
      {6, "hamiltonian gradient", 30.0, hamiltonian_gradient},
      {7, "conservation order", 60.0, conservation_order},
      {8, "kelvin-helmholtz instability rate", 10.0, kh_instability},
      {9, "desk-scale stability", 300.0, desk_stability},
      {10, "super-action flux scaling", 600.0, super_action_flux},
      {11, "resonance scanner soundness", 30.0, resonance_soundness},
      {12, "determinism and persistence", 60.0, determinism_and_persistence},
  };
  int failed = 0;
  for (const auto& cr : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (sec > cr.budget_s) {
      o.pass = false;
      o.detail += " | over budget " + std::to_string(cr.budget_s) + " s";
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2d %-34s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", cr.id, cr.name, sec, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed;
}
