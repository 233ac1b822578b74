#include "khsheet/resonance.hpp"

#include "khsheet/errors.hpp"
#include "khsheet/linear.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace khsheet {

MultiIndex MultiIndex::make(std::vector<int> js, std::vector<int> sigmas) {
  if (js.size() != sigmas.size()) throw std::invalid_argument("js and sigmas differ in length");
  for (int j : js) {
    if (j == 0) throw std::invalid_argument("multi-index entries must be nonzero");
  }
  for (int s : sigmas) {
    if (s != 1 && s != -1) throw std::invalid_argument("signs must be +1 or -1");
  }
  return {std::move(js), std::move(sigmas)};
}

int MultiIndex::momentum() const noexcept {
  int m = 0;
  for (std::size_t a = 0; a < js.size(); ++a) m += sigmas[a] * js[a];
  return m;
}

int MultiIndex::max_j() const noexcept {
  int m = 0;
  for (int j : js) m = std::max(m, std::abs(j));
  return m;
}

std::map<int, int> MultiIndex::alpha() const {
  std::map<int, int> out;
  for (std::size_t a = 0; a < js.size(); ++a) {
    if (sigmas[a] > 0) ++out[js[a]];
  }
  return out;
}

std::map<int, int> MultiIndex::alpha_prime() const {
  std::map<int, int> out;
  for (std::size_t a = 0; a < js.size(); ++a) {
    if (sigmas[a] < 0) ++out[js[a]];
  }
  return out;
}

std::string MultiIndex::serialize() const {
  std::string out;
  for (std::size_t a = 0; a < js.size(); ++a) {
    if (a > 0) out += ',';
    out += std::to_string(js[a]);
    out += sigmas[a] > 0 ? ":+" : ":-";
  }
  return out;
}

namespace {

// c_n = sum of sigma over entries with |j| = n; the divisor is sum_n c_n omega(n).
std::map<int, int> net_counts(const MultiIndex& index) {
  std::map<int, int> c;
  for (std::size_t a = 0; a < index.js.size(); ++a) c[std::abs(index.js[a])] += index.sigmas[a];
  return c;
}

}  // namespace

bool classify_sap(const MultiIndex& index) {
  for (const auto& [n, c] : net_counts(index)) {
    if (c != 0) return false;
  }
  return true;
}

double divisor(const MultiIndex& index, const PhysParams& params) {
  double d = 0.0;
  for (std::size_t a = 0; a < index.js.size(); ++a) {
    d += index.sigmas[a] * omega_real(std::abs(index.js[a]), params);
  }
  return d;
}

namespace detail {

bool is_canonical(const std::vector<int>& codes, int j_max) {
  std::vector<int> flipped;
  flipped.reserve(codes.size());
  for (int c : codes) {
    const auto e = entry_from_code(c, j_max);
    flipped.push_back(entry_code(e.j, -e.sigma, j_max));
  }
  std::sort(flipped.begin(), flipped.end());
  return !std::lexicographical_compare(flipped.begin(), flipped.end(), codes.begin(), codes.end());
}

}  // namespace detail

namespace {

void check_budget(int p_max, int j_max) {
  if (p_max < 1 || j_max < 1) throw std::invalid_argument("p_max and j_max must be positive");
  if (p_max > kMaxScanLength || j_max > kMaxScanWavenumber) {
    std::ostringstream msg;
    msg << "enumeration budget exceeded: p_max <= " << kMaxScanLength << " and j_max <= "
        << kMaxScanWavenumber << " required";
    throw BudgetError(msg.str());
  }
}

std::vector<double> frequency_table(const PhysParams& params, int j_max) {
  std::vector<double> w(static_cast<std::size_t>(j_max) + 1, 0.0);
  for (int n = 1; n <= j_max; ++n) w[static_cast<std::size_t>(n)] = omega_real(n, params);
  return w;
}

}  // namespace

DivisorScan scan_divisors(const PhysParams& params, int p_max, int j_max) {
  check_budget(p_max, j_max);
  const auto w = frequency_table(params, j_max);
  DivisorScan scan;
  enumerate_indices(p_max, j_max, [&](const MultiIndex& idx) {
    if (classify_sap(idx)) return;
    if (scan.records.size() >= kMaxScanRecords) {
      throw BudgetError("enumeration budget exceeded: too many non-SAP indices");
    }
    double d = 0.0;
    for (std::size_t a = 0; a < idx.js.size(); ++a) {
      d += idx.sigmas[a] * w[static_cast<std::size_t>(std::abs(idx.js[a]))];
    }
    scan.records.push_back({idx, d, idx.max_j(), false});
  });
  std::stable_sort(scan.records.begin(), scan.records.end(),
                   [](const DivisorRecord& a, const DivisorRecord& b) {
                     return std::abs(a.divisor) < std::abs(b.divisor);
                   });

  std::vector<double> shell(static_cast<std::size_t>(j_max) + 1,
                            std::numeric_limits<double>::infinity());
  for (const auto& r : scan.records) {
    auto& s = shell[static_cast<std::size_t>(r.max_j)];
    s = std::min(s, std::abs(r.divisor));
  }
  std::vector<std::pair<double, double>> pts;
  for (int m = 1; m <= j_max; ++m) {
    const double v = shell[static_cast<std::size_t>(m)];
    if (!std::isfinite(v)) continue;
    scan.shells.push_back({m, v});
    if (v > 0.0) pts.emplace_back(std::log(m), std::log(v));
  }
  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double k = static_cast<double>(pts.size());
    const double den = k * sxx - sx * sx;
    if (den > 0.0) scan.tau_hat = -(k * sxy - sx * sy) / den;
  }
  return scan;
}

namespace {

struct DivisorClass {
  std::vector<std::pair<int, int>> coeffs;  // (n, c_n) with c_n != 0
  MultiIndex representative;
};

// Distinct non-SAP coefficient vectors up to overall sign, in enumeration order.
std::vector<DivisorClass> divisor_classes(int p_max, int j_max) {
  std::map<std::vector<std::pair<int, int>>, std::size_t> seen;
  std::vector<DivisorClass> classes;
  enumerate_indices(p_max, j_max, [&](const MultiIndex& idx) {
    std::vector<std::pair<int, int>> c;
    for (const auto& [n, v] : net_counts(idx)) {
      if (v != 0) c.emplace_back(n, v);
    }
    if (c.empty()) return;
    if (c.front().second < 0) {
      for (auto& e : c) e.second = -e.second;
    }
    if (seen.emplace(c, classes.size()).second) classes.push_back({std::move(c), idx});
  });
  return classes;
}

BetaSample sample_beta(double beta, const BetaScanOptions& opts,
                       const std::vector<DivisorClass>& classes) {
  const PhysParams params = PhysParams::from_beta(opts.gamma, beta);
  const auto w = frequency_table(params, std::max(opts.j_max, 5));
  BetaSample s;
  s.beta = beta;
  s.min_abs_divisor = std::numeric_limits<double>::infinity();
  for (const auto& cl : classes) {
    double d = 0.0;
    for (auto [n, c] : cl.coeffs) d += c * w[static_cast<std::size_t>(n)];
    if (std::abs(d) < s.min_abs_divisor) {
      s.min_abs_divisor = std::abs(d);
      s.argmin = cl.representative;
    }
  }
  s.flagged = s.min_abs_divisor < opts.eps;
  s.identity_residual = std::max(std::abs(w[2] - std::sqrt(3.0 * opts.gamma)),
                                 std::abs(w[5] - std::sqrt(5.0) * w[3]));
  return s;
}

}  // namespace

BetaScanReport scan_beta(const BetaScanOptions& opts) {
  const double beta_max = continuous_threshold().beta_plus;
  if (!(opts.beta_lo > 0.0 && opts.beta_lo < opts.beta_hi && opts.beta_hi < beta_max)) {
    throw std::invalid_argument("beta range must satisfy 0 < beta_lo < beta_hi < 4(2+sqrt 3)");
  }
  if (opts.samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (!(opts.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (opts.eps < 0.0) throw std::invalid_argument("eps must be nonnegative");
  check_budget(opts.p_max, opts.j_max);

  const auto classes = divisor_classes(opts.p_max, opts.j_max);
  BetaScanReport report;
  report.samples.resize(static_cast<std::size_t>(opts.samples));
  auto beta_at = [&](int i) {
    if (opts.samples == 1) return opts.beta_lo;
    return opts.beta_lo + (opts.beta_hi - opts.beta_lo) * i / (opts.samples - 1);
  };

  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < opts.samples; i = next++) {
      report.samples[static_cast<std::size_t>(i)] = sample_beta(beta_at(i), opts, classes);
    }
  };
  const int workers = std::clamp(opts.workers, 1, opts.samples);
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  int flagged = 0;
  for (const auto& s : report.samples) {
    flagged += s.flagged ? 1 : 0;
    report.max_identity_residual = std::max(report.max_identity_residual, s.identity_residual);
  }
  report.flagged_fraction = static_cast<double>(flagged) / opts.samples;
  return report;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_beta_csv(std::ostream& os, const BetaScanReport& report) {
  os << "beta,min_abs_divisor,argmin_index,flagged\n";
  for (const auto& s : report.samples) {
    os << fmt(s.beta) << ',' << fmt(s.min_abs_divisor) << ",\""
       << (s.argmin ? s.argmin->serialize() : std::string{}) << "\"," << (s.flagged ? 1 : 0)
       << '\n';
  }
}

void write_divisor_csv(std::ostream& os, const DivisorScan& scan) {
  os << "index,divisor,abs_divisor,max_j\n";
  for (const auto& r : scan.records) {
    os << '"' << r.index.serialize() << "\"," << fmt(r.divisor) << ',' << fmt(std::abs(r.divisor))
       << ',' << r.max_j << '\n';
  }
}

std::vector<std::pair<int, int>> arithmetic_couples(int n_max) {
  std::vector<std::pair<int, int>> out;
  for (std::int64_t a = 3; a <= n_max; ++a) {
    for (std::int64_t b = a + 1; b <= n_max; ++b) {
      if ((2 - a) * (b * b - 1) == (2 - b) * (a * a - 1)) {
        out.emplace_back(static_cast<int>(a), static_cast<int>(b));
      }
    }
  }
  return out;
}

}  // namespace khsheet
