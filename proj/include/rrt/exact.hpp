#pragma once

// Exact counting for increasing trees and the composition/partition formulas
// built around them. Everything here is integer or rational arithmetic
// (GMP); floating point only appears in rendered outputs.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rrt {

/// A requested exact computation exceeds the engine's size limits.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest n accepted by build_cdf_table, and the cap on k_eff * n_max^3
/// (k_eff = min(k_max, n_max - 1)): k n^2 big-integer products whose operand
/// width grows linearly in n. 1e11 is about two minutes on one core.
inline constexpr std::size_t kCdfTableMaxN = 4000;
inline constexpr double kCdfTableMaxWork = 1.0e11;
/// Largest n accepted by brute_force_height_dist ((n-1)! parent arrays).
inline constexpr std::size_t kBruteForceMaxN = 12;

/// counts[k][n] = A_k(n), the number of increasing trees on n vertices with
/// height at most k, for 0 <= k <= k_max and 1 <= n <= n_max.
class ExactCdfTable {
 public:
  ExactCdfTable(std::size_t n_max, std::size_t k_max,
                std::vector<std::vector<mpz_class>> counts)
      : n_max_(n_max), k_max_(k_max), counts_(std::move(counts)) {}

  std::size_t n_max() const noexcept { return n_max_; }
  std::size_t k_max() const noexcept { return k_max_; }

  /// A_k(n); throws std::invalid_argument outside the table.
  const mpz_class& count(std::size_t n, std::size_t k) const;

 private:
  std::size_t n_max_;
  std::size_t k_max_;
  std::vector<std::vector<mpz_class>> counts_;  // [k][n], slot n = 0 unused
};

struct ExactProbability {
  mpq_class value;
  /// Rendering with 50 significant digits.
  std::string decimal;
  double approx = 0.0;
};

struct OmegaValue {
  std::size_t n = 0;
  double alpha = 0.0;
  std::size_t threshold = 0;
  /// -ln F(n, threshold), computed at 256 bits.
  double neg_ln_f = 0.0;
  std::string neg_ln_f_text;  // 50 significant digits
  double omega = 0.0;
};

struct PartitionScheme {
  std::uint64_t N = 0;
  std::uint64_t s = 0;  // floor(ln N)
  std::uint64_t d = 0;  // floor(N / (s + 1))
  std::uint64_t r = 0;  // N - d (s + 1)
  mpz_class count;
};

/// Inclusive range of admissible values for one part of a composition.
struct PartRange {
  std::int64_t low = 1;
  std::int64_t high = 1;
};

/// A_k(n) for all n <= n_max, k <= k_max through T_k' = exp(T_{k-1}),
/// T_0 = x, on exponential generating functions with integer coefficients.
/// Throws ResourceLimitError above kCdfTableMaxN / kCdfTableMaxWork.
ExactCdfTable build_cdf_table(std::size_t n_max, std::size_t k_max);

/// Exhaustive enumeration of all (n-1)! parent arrays in mixed-radix order.
/// Returns height -> number of increasing trees with exactly that height.
std::map<std::size_t, mpz_class> brute_force_height_dist(std::size_t n);

/// F(n, k) = A_k(n) / (n-1)!.
ExactProbability exact_height_cdf(const ExactCdfTable& table, std::size_t n, std::size_t k);

/// floor(alpha * e * ln n), snapping values within 1e-9 of an integer.
std::size_t lower_tail_threshold(std::size_t n, double alpha);

/// omega_alpha(n) = -ln F(n, floor(alpha e ln n)) / (n^(1-alpha) (ln n)^(-3/(2e))).
OmegaValue omega_alpha(const ExactCdfTable& table, std::size_t n, double alpha);

PartitionScheme partition_scheme(std::uint64_t N);

/// Compositions of n whose j-th part lies in parts[j]. Empty `parts` counts
/// the empty composition of 0.
mpz_class count_compositions(std::int64_t n, std::span<const PartRange> parts);

/// Compositions of n into m parts, every part in [low, high]. Infeasible
/// bounds give 0.
mpz_class count_compositions_bounded(std::int64_t n, std::int64_t m, std::int64_t low,
                                     std::int64_t high);

/// |G_{n,m}|: compositions of n into m parts whose first m-1 parts lie in
/// [n/(2m), 3n/(2m)] and whose last part is at most 2n/m.
mpz_class balanced_composition_count(std::int64_t n, std::int64_t m);

/// Exact pmf over {0, ..., m} of the number of parts smaller than `cap` in a
/// uniformly random composition of n into m parts.
std::vector<mpq_class> small_part_count_dist(std::int64_t n, std::int64_t m, std::int64_t cap);

/// P(first part >= 1 + k) = prod_{j=1}^{m-1} (1 - k/(n-j)); zero when k + m > n.
mpq_class subtree_tail_product(std::int64_t m, std::int64_t n, std::int64_t k);

mpz_class binomial(std::uint64_t n, std::uint64_t k);
mpz_class factorial(std::uint64_t n);

/// Decimal rendering of a rational with `digits` significant digits.
std::string to_decimal(const mpq_class& q, int digits = 50);

/// Exact decision of q >= e^{-m}: q is compared with an upward-rounded
/// high-precision value of e^{-m}, and with a downward-rounded one, so the
/// answer is exact unless q falls inside the (tiny) rounding bracket, in
/// which case std::runtime_error is thrown.
bool at_least_exp_neg(const mpq_class& q, unsigned long m);

}  // namespace rrt
