#pragma once

// Files: JSON configs, checkpoints and manifests; CSV diagnostic series.

#include "khsheet/diagnostics.hpp"
#include "khsheet/dynamics.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace khsheet {

inline constexpr int kCheckpointSchemaVersion = 1;

/// A configuration or checkpoint that failed to parse or validate. `field`
/// names the offending key (dotted path) when known; `line` is 1-based, 0 if
/// unknown.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& message, std::string field, int line = 0);
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::filesystem::path& path);
/// Canonical JSON echo of a configuration (every field explicit).
std::string config_to_json(const SimConfig& config);

std::string checkpoint_to_json(const Checkpoint& cp);
Checkpoint checkpoint_from_json(const std::string& text);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// "t,H,E,L,M,sup_eta,norm_s,width,J1,...,Jn_max"
void write_diagnostics_header(std::ostream& os, int n_max);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& rec);
void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticsRecord> series, int n_max);

struct RunManifest {
  std::string config_json;
  std::string started;   // ISO 8601 UTC
  std::string finished;
  std::string status;
  std::string message;
  double t_final = 0.0;
  int steps = 0;
  std::vector<std::string> files;
  std::string version;
};

std::string manifest_to_json(const RunManifest& m);
std::string utc_timestamp();

/// Shortest decimal string that reads back as the same double.
std::string format_double(double v);

}  // namespace khsheet
