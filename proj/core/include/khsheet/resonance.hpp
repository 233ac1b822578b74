#pragma once

// Super-action preserving (SAP) classification and small divisors
//   sum_a sigma_a omega(|j_a|)
// over momentum-preserving multi-indices, plus Weber-number scans.

#include "khsheet/state.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace khsheet {

struct MultiIndex {
  std::vector<int> js;      // nonzero wavenumbers
  std::vector<int> sigmas;  // +1 or -1

  /// Throws std::invalid_argument for zero entries, signs other than +-1,
  /// or mismatched lengths.
  static MultiIndex make(std::vector<int> js, std::vector<int> sigmas);

  std::size_t length() const noexcept { return js.size(); }
  /// sum_a sigma_a j_a
  int momentum() const noexcept;
  int max_j() const noexcept;
  /// Occurrence counts of (j, +) and (j, -).
  std::map<int, int> alpha() const;
  std::map<int, int> alpha_prime() const;

  /// "j1:s1,j2:s2,..." with s in {+,-}.
  std::string serialize() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// alpha_n + alpha_{-n} == alpha'_n + alpha'_{-n} for every n.
bool classify_sap(const MultiIndex& index);

/// sum_a sigma_a omega(|j_a|). Throws DegenerateError if some frequency is
/// not real and positive.
double divisor(const MultiIndex& index, const PhysParams& params);

struct DivisorRecord {
  MultiIndex index;
  double divisor = 0.0;
  int max_j = 0;
  bool is_sap = false;
};

struct ShellMinimum {
  int max_j = 0;
  double min_abs_divisor = 0.0;
};

struct DivisorScan {
  std::vector<DivisorRecord> records;  // sorted by |divisor|
  std::vector<ShellMinimum> shells;    // shells with at least one record
  std::optional<double> tau_hat;       // minus the log-log slope of the shell minima
};

inline constexpr int kMaxScanLength = 6;
inline constexpr int kMaxScanWavenumber = 60;
inline constexpr std::size_t kMaxScanRecords = 20'000'000;

/// Every momentum-preserving non-SAP index with length <= p_max and
/// |j| <= j_max, one per class under permutation and global sign flip.
/// Throws BudgetError when p_max or j_max exceed their caps or the record
/// count exceeds kMaxScanRecords.
DivisorScan scan_divisors(const PhysParams& params, int p_max, int j_max);

/// Calls `visit` once per canonical momentum-preserving index (SAP or not).
template <class Visit>
void enumerate_indices(int p_max, int j_max, Visit&& visit);

struct BetaSample {
  double beta = 0.0;
  double min_abs_divisor = 0.0;  // +inf when the non-SAP set is empty
  std::optional<MultiIndex> argmin;
  bool flagged = false;
  double identity_residual = 0.0;  // max of |omega(2) - sqrt(3 gamma)|, |omega(5) - sqrt(5) omega(3)|
};

struct BetaScanOptions {
  double beta_lo = 1.0;
  double beta_hi = 14.0;
  int samples = 200;
  double gamma = 1.0;
  int p_max = 4;
  int j_max = 20;
  double eps = 1e-3;
  int workers = 1;
};

struct BetaScanReport {
  std::vector<BetaSample> samples;
  double flagged_fraction = 0.0;
  double max_identity_residual = 0.0;
};

/// Samples beta on an evenly spaced grid including both ends and flags the
/// samples whose minimum non-SAP |divisor| is below eps. Throws
/// std::invalid_argument unless 0 < beta_lo < beta_hi < 4(2 + sqrt 3).
BetaScanReport scan_beta(const BetaScanOptions& opts);

void write_beta_csv(std::ostream& os, const BetaScanReport& report);
void write_divisor_csv(std::ostream& os, const DivisorScan& scan);

/// Pairs 3 <= a < b <= n_max with (2 - a)(b^2 - 1) == (2 - b)(a^2 - 1).
std::vector<std::pair<int, int>> arithmetic_couples(int n_max);

// ---------------------------------------------------------------- implementation

namespace detail {
// Entries are ordered by (j, sigma); codes enumerate that order.
struct Entry {
  int j;
  int sigma;
};
inline int entry_code(int j, int sigma, int j_max) {
  const int jpos = j < 0 ? j + j_max : j + j_max - 1;
  return 2 * jpos + (sigma > 0 ? 1 : 0);
}
inline Entry entry_from_code(int code, int j_max) {
  const int jpos = code / 2;
  const int j = jpos < j_max ? jpos - j_max : jpos - j_max + 1;
  return {j, (code % 2) != 0 ? 1 : -1};
}
bool is_canonical(const std::vector<int>& codes, int j_max);
}  // namespace detail

template <class Visit>
void enumerate_indices(int p_max, int j_max, Visit&& visit) {
  const int n_codes = 4 * j_max;
  std::vector<int> codes;
  // Non-decreasing prefixes of length p - 1; the last entry is solved from momentum.
  auto finish = [&](int partial) {
    const int last = codes.empty() ? 0 : codes.back();
    for (int sigma : {-1, 1}) {
      const int j = -sigma * partial;
      if (j == 0 || j < -j_max || j > j_max) continue;
      const int c = detail::entry_code(j, sigma, j_max);
      if (c < last) continue;
      codes.push_back(c);
      if (detail::is_canonical(codes, j_max)) {
        MultiIndex idx;
        for (int cc : codes) {
          const auto e = detail::entry_from_code(cc, j_max);
          idx.js.push_back(e.j);
          idx.sigmas.push_back(e.sigma);
        }
        visit(idx);
      }
      codes.pop_back();
    }
  };
  auto rec = [&](auto&& self, int remaining, int partial) -> void {
    if (remaining == 0) {
      finish(partial);
      return;
    }
    const int start = codes.empty() ? 0 : codes.back();
    for (int c = start; c < n_codes; ++c) {
      const auto e = detail::entry_from_code(c, j_max);
      codes.push_back(c);
      self(self, remaining - 1, partial + e.sigma * e.j);
      codes.pop_back();
    }
  };
  for (int p = 2; p <= p_max; ++p) rec(rec, p - 1, 0);
}

}  // namespace khsheet
