// kh_sheet: simulate a closed vortex sheet with surface tension, print the
// linear spectrum, scan small divisors and run the oracle suites.
//
// Exit codes: 0 ok, 1 usage or configuration, 2 numerical failure, 3 blow-up.

#include "checks.hpp"

#include "khsheet/errors.hpp"
#include "khsheet/io.hpp"
#include "khsheet/linear.hpp"
#include "khsheet/resonance.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace khsheet;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kNumerical = 2, kBlowUp = 3 };

struct Global {
  std::string out;
  int workers = 0;
  std::uint64_t seed = 7;
  bool quiet = false;
};

std::optional<fs::path> output_dir(const Global& g) {
  if (const char* env = std::getenv("KH_SHEET_OUT"); env && *env) return fs::path(env);
  if (!g.out.empty()) return fs::path(g.out);
  return std::nullopt;
}

int worker_count(const Global& g) {
  if (g.workers > 0) return g.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

// CSV to <out>/<name> when an output directory is set, else to stdout.
template <class Writer>
void emit_csv(const Global& g, const std::string& name, Writer&& write) {
  if (const auto dir = output_dir(g)) {
    fs::create_directories(*dir);
    std::ofstream f(*dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (*dir / name).string());
    write(f);
    if (!g.quiet) std::cerr << "wrote " << (*dir / name).string() << '\n';
  } else {
    write(std::cout);
  }
}

PhysParams params_from(double gamma, std::optional<double> upsilon, std::optional<double> beta) {
  if (upsilon && beta) throw CLI::ValidationError("give either --upsilon or --beta, not both");
  if (beta) return PhysParams::from_beta(gamma, *beta);
  return PhysParams::natural(gamma, upsilon.value_or(0.0));
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Global& g, const std::string& config_path, const std::string& resume_path) {
  const SimConfig cfg = load_config(config_path);
  std::optional<Checkpoint> from;
  if (!resume_path.empty()) from = load_checkpoint(resume_path);

  const fs::path dir = output_dir(g).value_or(fs::path("kh_sheet_out"));
  fs::create_directories(dir);

  RunManifest manifest;
  manifest.config_json = config_to_json(cfg);
  manifest.started = utc_timestamp();
  manifest.version = KHSHEET_VERSION;

  const fs::path csv_path = dir / "diagnostics.csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
  write_diagnostics_header(csv, cfg.diagnostics.n_max);
  manifest.files.push_back(csv_path.string());

  const double dt = cfg.step_size();
  RunHooks hooks;
  hooks.on_sample = [&](const DiagnosticsRecord& r) {
    write_diagnostics_row(csv, r);
    if (!g.quiet) std::fprintf(stderr, "t = %-12.6g H = %-.17g sup|eta| = %.3e\n", r.t, r.H, r.sup_eta);
  };
  hooks.on_checkpoint = [&](const Checkpoint& cp) {
    char name[64];
    std::snprintf(name, sizeof name, "checkpoint_%07lld.json", static_cast<long long>(std::llround(cp.t / dt)));
    save_checkpoint(dir / name, cp);
    manifest.files.push_back((dir / name).string());
  };

  const RunResult r = from ? resume(cfg, *from, hooks) : simulate(cfg, hooks);
  csv.close();

  manifest.finished = utc_timestamp();
  manifest.status = to_string(r.status);
  manifest.message = r.message;
  manifest.t_final = r.t_final;
  manifest.steps = r.steps;
  const fs::path manifest_path = dir / "manifest.json";
  write_text(manifest_path, manifest_to_json(manifest));

  if (!g.quiet) std::cerr << "status " << manifest.status << ", manifest " << manifest_path.string() << '\n';
  if (!r.message.empty()) std::cerr << r.message << '\n';
  switch (r.status) {
    case ExitStatus::completed: return kOk;
    case ExitStatus::blow_up: return kBlowUp;
    case ExitStatus::domain_error: return kNumerical;
  }
  return kNumerical;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const PhysParams& p, int j_max) {
  const auto rep = stability_report(p, j_max);
  std::printf("k,omega_sq,omega_or_rate,stable\n");
  for (const auto& m : rep.modes) {
    std::printf("%d,%.17g,%.17g,%d\n", m.k, m.omega_sq, m.stable ? m.omega : m.growth_rate, m.stable ? 1 : 0);
  }
  const double beta = p.gamma > 0 ? p.upsilon * p.upsilon / p.gamma : INFINITY;
  std::printf("# beta=%.17g\n", beta);
  std::printf("# beta_plus_continuous=%.17g\n", continuous_threshold().beta_plus);
  std::printf("# beta_plus_integer=%g\n", kIntegerBetaPlus);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed vortex sheet with surface tension"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(KHSHEET_VERSION));

  Global g;
  app.add_option("--out", g.out, "Output directory (KH_SHEET_OUT overrides)");
  app.add_option("--workers", g.workers, "Worker threads for scans (default: logical cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "Seed for random test states");
  app.add_flag("--quiet", g.quiet, "Only report failures");

  std::string config_path, resume_path;
  auto* sim = app.add_subcommand("simulate", "Run the time integration described by a JSON config");
  sim->add_option("--config", config_path, "JSON configuration")->required();
  sim->add_option("--resume", resume_path, "Continue from a checkpoint JSON file");

  double gamma = 1.0;
  std::optional<double> upsilon, beta;
  int j_max = 32;
  auto* spec = app.add_subcommand("spectrum", "Linear dispersion relation as CSV on stdout");
  spec->add_option("--gamma", gamma)->capture_default_str();
  spec->add_option("--upsilon", upsilon);
  spec->add_option("--beta", beta, "Weber number; sets upsilon = sqrt(beta gamma)");
  spec->add_option("--j-max", j_max)->capture_default_str()->check(CLI::PositiveNumber);

  BetaScanOptions scan;
  auto* sb = app.add_subcommand("scan-beta", "Smallest non-SAP divisor over a range of Weber numbers");
  sb->add_option("--beta-lo", scan.beta_lo)->capture_default_str();
  sb->add_option("--beta-hi", scan.beta_hi)->capture_default_str();
  sb->add_option("--samples", scan.samples)->capture_default_str()->check(CLI::PositiveNumber);
  sb->add_option("--gamma", scan.gamma)->capture_default_str();
  sb->add_option("--p-max", scan.p_max)->capture_default_str();
  sb->add_option("--j-max", scan.j_max)->capture_default_str();
  sb->add_option("--eps", scan.eps, "Flag threshold on |divisor|")->capture_default_str();

  int res_p = 4, res_j = 20;
  double res_gamma = 1.0;
  std::optional<double> res_upsilon, res_beta;
  auto* rs = app.add_subcommand("resonances", "All non-SAP divisors at one parameter point");
  rs->add_option("--gamma", res_gamma)->capture_default_str();
  rs->add_option("--upsilon", res_upsilon);
  rs->add_option("--beta", res_beta);
  rs->add_option("--p-max", res_p)->capture_default_str();
  rs->add_option("--j-max", res_j)->capture_default_str();

  kh_tool::GradcheckOptions gc;
  std::string gc_config;
  auto* gcs = app.add_subcommand("gradcheck", "Compare grad H with finite differences of H");
  gcs->add_option("--config", gc_config, "JSON configuration (params, n, initial state)")->required();
  gcs->add_option("--states", gc.states, "Random states besides the configured one")->capture_default_str();
  gcs->add_option("--directions", gc.directions)->capture_default_str();
  gcs->add_option("--step", gc.h, "Finite-difference step")->capture_default_str();
  gcs->add_option("--tol", gc.tolerance)->capture_default_str();

  kh_tool::OptestOptions ot;
  auto* ots = app.add_subcommand("optest", "Flat-sheet oracles for the singular operators");
  ots->add_option("--n", ot.n, "Grid size")->capture_default_str()->check(CLI::PositiveNumber);
  ots->add_option("--tol", ot.tolerance)->capture_default_str();
  ots->add_flag("--inject-sign-error", ot.inject_sign_error)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sim) return cmd_simulate(g, config_path, resume_path);
    if (*spec) return cmd_spectrum(params_from(gamma, upsilon, beta), j_max);
    if (*sb) {
      scan.workers = worker_count(g);
      const auto rep = scan_beta(scan);
      emit_csv(g, "beta_scan.csv", [&](std::ostream& os) { write_beta_csv(os, rep); });
      if (!g.quiet) {
        std::fprintf(stderr, "flagged fraction %.6g, identity residual %.3e\n", rep.flagged_fraction,
                     rep.max_identity_residual);
      }
      return kOk;
    }
    if (*rs) {
      const auto result = scan_divisors(params_from(res_gamma, res_upsilon, res_beta), res_p, res_j);
      emit_csv(g, "divisors.csv", [&](std::ostream& os) { write_divisor_csv(os, result); });
      if (!g.quiet) {
        std::fprintf(stderr, "%zu records", result.records.size());
        if (result.tau_hat) std::fprintf(stderr, ", tau_hat %.6g", *result.tau_hat);
        std::fprintf(stderr, "\n");
      }
      return kOk;
    }
    if (*gcs) {
      gc.seed = g.seed;
      const auto cfg = load_config(gc_config);
      return kh_tool::report(std::cout, kh_tool::gradient_suite(cfg, gc), g.quiet) == 0 ? kOk : kNumerical;
    }
    if (*ots) return kh_tool::report(std::cout, kh_tool::operator_suite(ot), g.quiet) == 0 ? kOk : kNumerical;
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    std::cerr << "config error: " << what;
    if (!e.field().empty() && what.find(e.field()) == std::string::npos) std::cerr << " (field '" << e.field() << "')";
    std::cerr << '\n';
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
