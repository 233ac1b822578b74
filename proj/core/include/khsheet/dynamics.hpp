#pragma once

// Time evolution of the contour-dynamics system
//   eta_t = Omega eta_x - H(eta)[psi_x + upsilon]/2
//   psi_t = Omega psi_x - (psi_x + upsilon) D0(eta)[psi_x + upsilon]/2 - gamma K(eta)
// with the spatial constant of psi_t projected out every evaluation.

#include "khsheet/diagnostics.hpp"
#include "khsheet/linear.hpp"
#include "khsheet/spectral.hpp"
#include "khsheet/state.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace khsheet {

struct Tangent {
  Field deta;
  Field dpsi;
};

struct RhsOptions {
  bool dealias = true;
  bool linear_only = false;  // replace the right-hand side by its linearization at 0
  bool project = true;       // remove the means of both components
};

Tangent rhs(const SheetState& state, const PhysParams& params, const RhsOptions& opts = {});

/// The linearization at (0, 0), applied per Fourier mode (transport included).
Tangent linear_rhs(const SheetState& state, const PhysParams& params);

enum class Integrator { rk4, ifrk4 };

std::string to_string(Integrator m);
Integrator integrator_from_string(const std::string& s);

/// Blow-up guard on sup |eta|.
inline constexpr double kBlowUpEta = 0.45;

/// One fixed step. Both variants return a mean-zero state whose samples are
/// regenerated from its coefficients. Throws DomainError.
class Stepper {
 public:
  Stepper(PhysParams params, Integrator method, RhsOptions opts, const FourierGrid& grid, double dt);

  SheetState advance(const SheetState& state) const;
  double dt() const noexcept { return dt_; }

 private:
  struct ModalBlock {
    cplx phase;  // exp(i (Omega - upsilon/2) k t)
    Matrix2 p;   // exp(t L(k)) without transport
  };

  SheetState step_rk4(const SheetState& s) const;
  SheetState step_ifrk4(const SheetState& s) const;
  SheetState propagate(const SheetState& s, const std::vector<ModalBlock>& blocks) const;
  SheetState nonlinear(const SheetState& s) const;
  std::vector<ModalBlock> make_blocks(double t) const;

  PhysParams params_;
  Integrator method_;
  RhsOptions opts_;
  FourierGrid grid_;
  double dt_;
  std::vector<ModalBlock> full_;
  std::vector<ModalBlock> half_;
};

SheetState advance(const SheetState& state, double dt, Integrator method, const PhysParams& params,
                   const RhsOptions& opts = {});

/// safety * 2.8 / max_k |lambda(k)| over k = 1..n/2, where |lambda| is the
/// frequency (or growth rate) plus the transport rate. Throws
/// std::invalid_argument unless safety lies in (0, 1].
double cfl_dt(const PhysParams& params, int n, double safety);

struct SimConfig {
  PhysParams params;
  int n = 128;
  std::optional<double> dt;   // exactly one of dt / cfl is set
  std::optional<double> cfl;
  double t_end = 1.0;
  Integrator integrator = Integrator::rk4;
  std::vector<ModeSeed> initial;
  bool dealias = true;
  bool linear_only = false;
  int sample_every = 10;
  int checkpoint_every = 0;  // 0 disables intermediate checkpoints
  DiagnosticsOptions diagnostics;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
  /// The uniform step actually used: t_end divided into whole steps.
  double step_size() const;
  int total_steps() const;
};

enum class ExitStatus { completed, blow_up, domain_error };
std::string to_string(ExitStatus s);

struct Checkpoint {
  double t = 0.0;
  PhysParams params;
  SheetState state;
};

struct RunResult {
  ExitStatus status = ExitStatus::completed;
  std::string message;
  double t_final = 0.0;
  int steps = 0;
  std::optional<SheetState> final_state;
  std::vector<DiagnosticsRecord> series;
  std::vector<Checkpoint> checkpoints;
};

struct RunHooks {
  std::function<void(const DiagnosticsRecord&)> on_sample;
  std::function<void(const Checkpoint&)> on_checkpoint;
};

RunResult simulate(const SimConfig& config, const RunHooks& hooks = {});

/// Continues a run from a checkpoint; the step grid is the one of `config`,
/// so a resumed run follows the uninterrupted trajectory.
RunResult resume(const SimConfig& config, const Checkpoint& from, const RunHooks& hooks = {});

}  // namespace khsheet
