#include "khsheet/io.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

namespace khsheet {

using nlohmann::json;

ConfigError::ConfigError(const std::string& message, std::string field, int line)
    : std::invalid_argument(message), field_(std::move(field)), line_(line) {}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

// Last object key that starts before `byte`, used to name the field a
// syntax error sits in.
std::string key_before(const std::string& text, std::size_t byte) {
  static const std::regex key_re(R"re("([A-Za-z_][A-Za-z0-9_]*)"\s*:)re");
  const std::string head = text.substr(0, std::min(byte, text.size()));
  std::string last;
  for (auto it = std::sregex_iterator(head.begin(), head.end(), key_re); it != std::sregex_iterator();
       ++it) {
    last = (*it)[1].str();
  }
  return last;
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t pos = e.byte > 0 ? e.byte - 1 : 0;
    const int line = line_of(text, pos);
    const std::string field = key_before(text, pos);
    std::ostringstream msg;
    msg << what << " parse error at line " << line;
    if (!field.empty()) msg << " in field '" << field << "'";
    msg << ": " << e.what();
    throw ConfigError(msg.str(), field, line);
  }
}

// Typed field access with the dotted path in every error.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where("") + " must be a JSON object", path_);
  }

  bool has(const std::string& key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

  double number(const std::string& key) const {
    const json& v = get(key);
    if (!v.is_number()) fail(key, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }
  int integer(const std::string& key) const {
    const json& v = get(key);
    if (!v.is_number_integer()) fail(key, "must be an integer");
    return v.get<int>();
  }
  int integer(const std::string& key, int fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_boolean()) fail(key, "must be true or false");
    return v.get<bool>();
  }
  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_string()) fail(key, "must be a string");
    return v.get<std::string>();
  }
  const json& get(const std::string& key) const {
    if (!obj_.contains(key)) fail(key, "is required");
    return obj_.at(key);
  }
  void reject_unknown(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : obj_.items()) {
      if (!allowed.contains(k)) fail(k, "is not a recognized field");
    }
  }
  std::string where(const std::string& key) const {
    if (path_.empty()) return key.empty() ? "document" : key;
    return key.empty() ? path_ : path_ + "." + key;
  }
  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("field '" + where(key) + "' " + what, where(key));
  }

 private:
  const json& obj_;
  std::string path_;
};

ModeSeed parse_seed(const json& v, const std::string& path) {
  ModeSeed s;
  std::string var;
  if (v.is_array()) {
    if (v.size() < 3 || v.size() > 4 || !v[0].is_string() || !v[1].is_number_integer() ||
        !v[2].is_number() || (v.size() == 4 && !v[3].is_number())) {
      throw ConfigError("field '" + path + "' must be [variable, wavenumber, amplitude, phase]", path);
    }
    var = v[0].get<std::string>();
    s.wavenumber = v[1].get<int>();
    s.amplitude = v[2].get<double>();
    s.phase = v.size() == 4 ? v[3].get<double>() : 0.0;
  } else {
    Reader r(v, path);
    r.reject_unknown({"variable", "wavenumber", "amplitude", "phase"});
    var = r.string("variable", "");
    s.wavenumber = r.integer("wavenumber");
    s.amplitude = r.number("amplitude");
    s.phase = r.number("phase", 0.0);
  }
  if (var == "eta") {
    s.variable = ModeSeed::Variable::eta;
  } else if (var == "psi") {
    s.variable = ModeSeed::Variable::psi;
  } else {
    throw ConfigError("field '" + path + "' variable must be \"eta\" or \"psi\"", path);
  }
  return s;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
  const json doc = parse_json(text, "config");
  const Reader r(doc, "");
  r.reject_unknown({"gamma", "upsilon", "beta", "omega_frame", "n", "dt", "cfl", "t_end",
                    "integrator", "initial", "dealias", "linear_only", "sample_every",
                    "checkpoint_every", "diagnostics"});
  SimConfig c;
  const double gamma = r.number("gamma");
  if (gamma < 0.0) r.fail("gamma", "must be nonnegative");
  if (r.has("upsilon") && r.has("beta")) r.fail("beta", "conflicts with upsilon");
  double upsilon = 0.0;
  if (r.has("beta")) {
    const double beta = r.number("beta");
    if (beta < 0.0) r.fail("beta", "must be nonnegative");
    upsilon = std::sqrt(beta * gamma);
  } else {
    upsilon = r.number("upsilon", 0.0);
  }
  c.params = PhysParams::natural(gamma, upsilon);
  c.params.omega_frame = r.number("omega_frame", c.params.omega_frame);

  c.n = r.integer("n", c.n);
  if (c.n < 16 || c.n % 2 != 0) r.fail("n", "must be even and >= 16");
  if (r.has("dt") == r.has("cfl")) r.fail(r.has("dt") ? "cfl" : "dt", "exactly one of dt and cfl must be given");
  if (r.has("dt")) {
    c.dt = r.number("dt");
    if (!(*c.dt > 0.0)) r.fail("dt", "must be positive");
  } else {
    c.cfl = r.number("cfl");
    if (!(*c.cfl > 0.0 && *c.cfl <= 1.0)) r.fail("cfl", "must lie in (0, 1]");
  }
  c.t_end = r.number("t_end", c.t_end);
  if (!(c.t_end > 0.0)) r.fail("t_end", "must be positive");
  try {
    c.integrator = integrator_from_string(r.string("integrator", to_string(c.integrator)));
  } catch (const std::invalid_argument& e) {
    r.fail("integrator", "must be \"rk4\" or \"ifrk4\"");
  }
  if (r.has("initial")) {
    const json& init = r.get("initial");
    if (!init.is_array()) r.fail("initial", "must be an array of modes");
    const FourierGrid grid(c.n);
    for (std::size_t i = 0; i < init.size(); ++i) {
      const std::string path = "initial[" + std::to_string(i) + "]";
      ModeSeed s = parse_seed(init[i], path);
      if (s.wavenumber == 0 || std::abs(s.wavenumber) >= grid.kmax()) {
        throw ConfigError("field '" + path + "' wavenumber must satisfy 0 < |k| < n/2", path);
      }
      c.initial.push_back(s);
    }
  }
  c.dealias = r.boolean("dealias", c.dealias);
  c.linear_only = r.boolean("linear_only", c.linear_only);
  c.sample_every = r.integer("sample_every", c.sample_every);
  if (c.sample_every < 1) r.fail("sample_every", "must be >= 1");
  c.checkpoint_every = r.integer("checkpoint_every", c.checkpoint_every);
  if (c.checkpoint_every < 0) r.fail("checkpoint_every", "must be >= 0");
  if (r.has("diagnostics")) {
    const Reader d(r.get("diagnostics"), "diagnostics");
    d.reject_unknown({"s", "n_max", "width_fraction"});
    c.diagnostics.s = d.number("s", c.diagnostics.s);
    c.diagnostics.n_max = d.integer("n_max", c.diagnostics.n_max);
    if (c.diagnostics.n_max < 1) d.fail("n_max", "must be >= 1");
    c.diagnostics.width_fraction = d.number("width_fraction", c.diagnostics.width_fraction);
    const double f = c.diagnostics.width_fraction;
    if (!(f > 0.0 && f < 1.0)) d.fail("width_fraction", "must lie in (0, 1)");
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what(), "");
  }
  return c;
}

SimConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string config_to_json(const SimConfig& c) {
  json j;
  j["gamma"] = c.params.gamma;
  j["upsilon"] = c.params.upsilon;
  j["omega_frame"] = c.params.omega_frame;
  j["n"] = c.n;
  if (c.dt) j["dt"] = *c.dt;
  if (c.cfl) j["cfl"] = *c.cfl;
  j["t_end"] = c.t_end;
  j["integrator"] = to_string(c.integrator);
  j["initial"] = json::array();
  for (const auto& s : c.initial) {
    j["initial"].push_back({s.variable == ModeSeed::Variable::eta ? "eta" : "psi", s.wavenumber,
                            s.amplitude, s.phase});
  }
  j["dealias"] = c.dealias;
  j["linear_only"] = c.linear_only;
  j["sample_every"] = c.sample_every;
  j["checkpoint_every"] = c.checkpoint_every;
  j["diagnostics"] = {{"s", c.diagnostics.s},
                      {"n_max", c.diagnostics.n_max},
                      {"width_fraction", c.diagnostics.width_fraction}};
  return j.dump(2);
}

// ---------------------------------------------------------------- checkpoints

namespace {

json spectrum_json(const Field& f) {
  json arr = json::array();
  for (const cplx& c : f.spec()) arr.push_back({c.real(), c.imag()});
  return arr;
}

Field spectrum_from_json(const json& arr, const FourierGrid& grid, const std::string& name) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != grid.half_size()) {
    throw ConfigError("field '" + name + "' must list n/2 + 1 coefficients", name);
  }
  std::vector<cplx> spec;
  spec.reserve(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const json& c = arr[k];
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
      const std::string path = name + "[" + std::to_string(k) + "]";
      throw ConfigError("field '" + path + "' must be [re, im]", path);
    }
    spec.emplace_back(c[0].get<double>(), c[1].get<double>());
  }
  return Field::from_spectrum(grid, std::move(spec));
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& cp) {
  json j;
  j["schema_version"] = kCheckpointSchemaVersion;
  j["t"] = cp.t;
  j["params"] = {{"gamma", cp.params.gamma},
                 {"upsilon", cp.params.upsilon},
                 {"omega_frame", cp.params.omega_frame}};
  j["n"] = cp.state.grid().size();
  j["eta_hat"] = spectrum_json(cp.state.eta);
  j["psi_hat"] = spectrum_json(cp.state.psi);
  return j.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
  const json doc = parse_json(text, "checkpoint");
  const Reader r(doc, "");
  const int version = r.integer("schema_version");
  if (version != kCheckpointSchemaVersion) r.fail("schema_version", "is not supported");
  const Reader p(r.get("params"), "params");
  PhysParams params{p.number("gamma"), p.number("upsilon"), p.number("omega_frame")};
  const int n = r.integer("n");
  if (n < 16 || n % 2 != 0) r.fail("n", "must be even and >= 16");
  const FourierGrid grid(n);
  SheetState state{spectrum_from_json(r.get("eta_hat"), grid, "eta_hat"),
                   spectrum_from_json(r.get("psi_hat"), grid, "psi_hat")};
  return Checkpoint{r.number("t"), params, std::move(state)};
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
  write_file(path, checkpoint_to_json(cp) + "\n");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(read_file(path));
}

// ---------------------------------------------------------------- CSV

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_diagnostics_header(std::ostream& os, int n_max) {
  os << "t,H,E,L,M,sup_eta,norm_s,width";
  for (int k = 1; k <= n_max; ++k) os << ",J" << k;
  os << '\n';
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
  os << g17(r.t) << ',' << g17(r.H) << ',' << g17(r.E) << ',' << g17(r.L) << ',' << g17(r.M) << ','
     << g17(r.sup_eta) << ',' << g17(r.norm_s) << ',' << r.width;
  for (double j : r.super_actions) os << ',' << g17(j);
  os << '\n';
}

void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticsRecord> series, int n_max) {
  write_diagnostics_header(os, n_max);
  for (const auto& r : series) write_diagnostics_row(os, r);
}

// ---------------------------------------------------------------- manifest

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["version"] = m.version;
  j["config"] = m.config_json.empty() ? json::object() : json::parse(m.config_json);
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["status"] = m.status;
  j["message"] = m.message;
  j["t_final"] = m.t_final;
  j["steps"] = m.steps;
  j["files"] = m.files;
  return j.dump(2);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace khsheet
