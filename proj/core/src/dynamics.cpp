#include "khsheet/dynamics.hpp"

#include "khsheet/errors.hpp"
#include "khsheet/singular_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace khsheet {

// ---------------------------------------------------------------- right-hand side

Tangent rhs(const SheetState& state, const PhysParams& params, const RhsOptions& opts) {
  if (opts.linear_only) return linear_rhs(state, params);
  const auto& grid = state.grid();
  const Field eta_x = derivative(state.eta);
  const Field psi_x = derivative(state.psi);
  const Field g = psi_x + Field::constant(grid, params.upsilon);
  const SingularValues sv = apply_singular(state.eta, g);

  Field deta = params.omega_frame * eta_x - 0.5 * sv.H;
  Field dpsi = params.omega_frame * psi_x - 0.5 * pointwise_product(g, sv.D0) -
               params.gamma * curvature(state.eta);
  if (opts.project) {
    deta = project_mean_zero(deta);
    dpsi = project_mean_zero(dpsi);
  }
  if (opts.dealias) {
    deta = dealias(deta);
    dpsi = dealias(dpsi);
  }
  return {std::move(deta), std::move(dpsi)};
}

Tangent linear_rhs(const SheetState& state, const PhysParams& params) {
  const auto& grid = state.grid();
  std::vector<cplx> de(static_cast<std::size_t>(grid.half_size()));
  std::vector<cplx> dp(de.size());
  for (int k = 1; k < grid.kmax(); ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const Matrix2 L = linear_block(k, params);
    const cplx tr = transport_rate(k, params);
    const cplx e = state.eta.spec()[uk];
    const cplx p = state.psi.spec()[uk];
    de[uk] = tr * e + L[0][1] * p;
    dp[uk] = L[1][0] * e + tr * p;
  }
  return {Field::from_spectrum(grid, std::move(de)), Field::from_spectrum(grid, std::move(dp))};
}

std::string to_string(Integrator m) { return m == Integrator::rk4 ? "rk4" : "ifrk4"; }

Integrator integrator_from_string(const std::string& s) {
  if (s == "rk4") return Integrator::rk4;
  if (s == "ifrk4") return Integrator::ifrk4;
  throw std::invalid_argument("unknown integrator '" + s + "' (expected rk4 or ifrk4)");
}

// ---------------------------------------------------------------- stepping

namespace {

SheetState axpy(const SheetState& s, double a, const Tangent& t) {
  return {s.eta + a * t.deta, s.psi + a * t.dpsi};
}

// Zero means and regenerate samples from coefficients, so a state rebuilt
// from a checkpoint is bit-identical to the live one.
SheetState canonical(const SheetState& s) {
  std::vector<cplx> e(s.eta.spec().begin(), s.eta.spec().end());
  std::vector<cplx> p(s.psi.spec().begin(), s.psi.spec().end());
  e[0] = cplx{};
  p[0] = cplx{};
  return {Field::from_spectrum(s.grid(), std::move(e)), Field::from_spectrum(s.grid(), std::move(p))};
}

}  // namespace

Stepper::Stepper(PhysParams params, Integrator method, RhsOptions opts, const FourierGrid& grid,
                 double dt)
    : params_(params), method_(method), opts_(opts), grid_(grid), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (method_ == Integrator::ifrk4) {
    full_ = make_blocks(dt);
    half_ = make_blocks(0.5 * dt);
  }
}

std::vector<Stepper::ModalBlock> Stepper::make_blocks(double t) const {
  std::vector<ModalBlock> blocks(static_cast<std::size_t>(grid_.half_size()));
  blocks[0] = {cplx{1.0, 0.0}, Matrix2{{{1.0, 0.0}, {0.0, 1.0}}}};
  for (int k = 1; k < grid_.half_size(); ++k) {
    blocks[static_cast<std::size_t>(k)] = {std::exp(transport_rate(k, params_) * t),
                                           linear_propagator(k, t, params_)};
  }
  return blocks;
}

SheetState Stepper::propagate(const SheetState& s, const std::vector<ModalBlock>& blocks) const {
  std::vector<cplx> e(s.eta.spec().begin(), s.eta.spec().end());
  std::vector<cplx> p(s.psi.spec().begin(), s.psi.spec().end());
  for (std::size_t k = 0; k < e.size(); ++k) {
    const auto& b = blocks[k];
    const cplx ek = e[k];
    const cplx pk = p[k];
    e[k] = b.phase * (b.p[0][0] * ek + b.p[0][1] * pk);
    p[k] = b.phase * (b.p[1][0] * ek + b.p[1][1] * pk);
  }
  return {Field::from_spectrum(grid_, std::move(e)), Field::from_spectrum(grid_, std::move(p))};
}

SheetState Stepper::nonlinear(const SheetState& s) const {
  const Tangent full = rhs(s, params_, opts_);
  const Tangent lin = linear_rhs(s, params_);
  return {full.deta - lin.deta, full.dpsi - lin.dpsi};
}

SheetState Stepper::step_rk4(const SheetState& s) const {
  const double h = dt_;
  const Tangent k1 = rhs(s, params_, opts_);
  const Tangent k2 = rhs(axpy(s, 0.5 * h, k1), params_, opts_);
  const Tangent k3 = rhs(axpy(s, 0.5 * h, k2), params_, opts_);
  const Tangent k4 = rhs(axpy(s, h, k3), params_, opts_);
  return {s.eta + (h / 6.0) * (k1.deta + 2.0 * k2.deta + 2.0 * k3.deta + k4.deta),
          s.psi + (h / 6.0) * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi)};
}

// Lawson's integrating-factor RK4: classical RK4 on v = exp(-tL) u.
SheetState Stepper::step_ifrk4(const SheetState& s) const {
  const double h = dt_;
  const SheetState n1 = nonlinear(s);
  const SheetState eh_s = propagate(s, half_);
  const SheetState a = propagate(s + (0.5 * h) * n1, half_);
  const SheetState n2 = nonlinear(a);
  const SheetState b = eh_s + (0.5 * h) * n2;
  const SheetState n3 = nonlinear(b);
  const SheetState c = propagate(s, full_) + h * propagate(n3, half_);
  const SheetState n4 = nonlinear(c);
  const SheetState base = propagate(s + (h / 6.0) * n1, full_);
  const SheetState mid = propagate(n2 + n3, half_);
  return base + (h / 3.0) * mid + (h / 6.0) * n4;
}

SheetState Stepper::advance(const SheetState& state) const {
  SheetState next = method_ == Integrator::rk4 ? step_rk4(state) : step_ifrk4(state);
  return canonical(next);
}

SheetState advance(const SheetState& state, double dt, Integrator method, const PhysParams& params,
                   const RhsOptions& opts) {
  return Stepper(params, method, opts, state.grid(), dt).advance(state);
}

double cfl_dt(const PhysParams& params, int n, double safety) {
  if (!(safety > 0.0 && safety <= 1.0)) {
    throw std::invalid_argument("CFL safety factor must lie in (0, 1]");
  }
  double rate = 0.0;
  for (int k = 1; k <= n / 2; ++k) {
    const double lam = omega(k, params).magnitude + std::abs(transport_rate(k, params).imag());
    rate = std::max(rate, lam);
  }
  return safety * 2.8 / rate;
}

// ---------------------------------------------------------------- driver

void SimConfig::validate() const {
  if (n < 16 || n % 2 != 0) throw std::invalid_argument("n must be even and >= 16");
  if (dt.has_value() == cfl.has_value()) {
    throw std::invalid_argument("exactly one of dt and cfl must be given");
  }
  if (dt && !(*dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (cfl && !(*cfl > 0.0 && *cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(params.gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
  if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  if (checkpoint_every < 0) throw std::invalid_argument("checkpoint_every must be >= 0");
}

int SimConfig::total_steps() const {
  const double nominal = dt ? *dt : cfl_dt(params, n, *cfl);
  return std::max(1, static_cast<int>(std::ceil(t_end / nominal - 1e-9)));
}

double SimConfig::step_size() const { return t_end / total_steps(); }

std::string to_string(ExitStatus s) {
  switch (s) {
    case ExitStatus::completed: return "completed";
    case ExitStatus::blow_up: return "blow_up";
    case ExitStatus::domain_error: return "domain_error";
  }
  return "unknown";
}

namespace {

bool finite_state(const SheetState& s) {
  for (double v : s.eta.phys()) if (!std::isfinite(v)) return false;
  for (double v : s.psi.phys()) if (!std::isfinite(v)) return false;
  return true;
}

RunResult run_from(const SimConfig& config, SheetState state, int first_step, const RunHooks& hooks) {
  config.validate();
  const int total = config.total_steps();
  const double dt = config.step_size();
  const FourierGrid grid(config.n);
  const Stepper stepper(config.params, config.integrator,
                        RhsOptions{config.dealias, config.linear_only, true}, grid, dt);

  RunResult res;
  auto time_at = [&](int s) { return s == total ? config.t_end : s * dt; };
  auto sample = [&](const SheetState& st, double t) {
    try {
      auto rec = diagnose(st, config.params, t, config.diagnostics);
      if (hooks.on_sample) hooks.on_sample(rec);
      res.series.push_back(std::move(rec));
    } catch (const DomainError&) {
      // No diagnostics for a state outside the admissible set.
    }
  };
  auto checkpoint = [&](const SheetState& st, double t) {
    Checkpoint cp{t, config.params, st};
    if (hooks.on_checkpoint) hooks.on_checkpoint(cp);
    res.checkpoints.push_back(std::move(cp));
  };

  state = canonical(state);
  int s = first_step;
  for (;; ++s) {
    const double t = time_at(s);
    if (s % config.sample_every == 0 || s == total) sample(state, t);
    if (s == total ||
        (config.checkpoint_every > 0 && s > first_step && s % config.checkpoint_every == 0)) {
      checkpoint(state, t);
    }
    if (s >= total) break;
    try {
      state = stepper.advance(state);
    } catch (const DomainError& e) {
      res.status = ExitStatus::domain_error;
      res.message = e.what();
      res.t_final = t;
      break;
    }
    if (!finite_state(state) || state.eta.max_abs() > kBlowUpEta) {
      res.status = ExitStatus::blow_up;
      std::ostringstream msg;
      msg << "sup|eta| = " << state.eta.max_abs() << " exceeded " << kBlowUpEta << " at t = "
          << time_at(s + 1);
      res.message = msg.str();
      res.t_final = time_at(s + 1);
      if (finite_state(state)) sample(state, res.t_final);
      ++s;
      break;
    }
  }
  if (res.status == ExitStatus::completed) res.t_final = config.t_end;
  res.steps = s - first_step;
  res.final_state = state;
  return res;
}

}  // namespace

RunResult simulate(const SimConfig& config, const RunHooks& hooks) {
  config.validate();
  const FourierGrid grid(config.n);
  return run_from(config, state_from_modes(grid, config.initial), 0, hooks);
}

RunResult resume(const SimConfig& config, const Checkpoint& from, const RunHooks& hooks) {
  config.validate();
  if (from.state.grid().size() != config.n) {
    throw std::invalid_argument("checkpoint grid size does not match the configuration");
  }
  const double dt = config.step_size();
  const int step = static_cast<int>(std::llround(from.t / dt));
  if (std::abs(step * dt - from.t) > 1e-9 * std::max(1.0, from.t)) {
    throw std::invalid_argument("checkpoint time is not on the configured step grid");
  }
  return run_from(config, from.state, step, hooks);
}

}  // namespace khsheet
