#pragma once

// Special functions and closed-form bounds: Poisson/Gamma tails, Chernoff
// bounds, relative entropy, iterated logarithms, rate functions and the exact
// law of the root degree X_1(n).

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rrt {

struct SandwichBound {
  double lower = 0.0;
  double upper = 0.0;
};

struct RateValues {
  double J = 0.0;     // e * beta * ln(beta), threshold beta * e * ln n
  double J_sf = 0.0;  // beta * (ln(beta) - 1), threshold beta * ln n
};

struct ChernoffBound {
  double tight = 0.0;  // e^{-lambda} (lambda e)^x / x^x
  double loose = 0.0;  // exp(-x [ln x - ln lambda - 1])
};

struct Remark13 {
  double left = 0.0;   // (e + lambda) ln(1 + lambda/e)
  double right = 0.0;  // lambda / (2e)
  bool holds = false;
};

/// Above this n the root-degree law is computed in floating point (log
/// space) instead of exact rationals.
inline constexpr std::size_t kExactPoissonBinomialMaxN = 2000;

/// Law of X_1(n) = 1 + sum_{j=2}^{n-1} Ber(1/j), indexed by value 0..n-1.
struct RootDegreeLaw {
  std::size_t n = 0;
  /// log P(X_1 = t); -inf off the support.
  std::vector<double> log_pmf;
  /// Exact pmf, filled only when n <= kExactPoissonBinomialMaxN.
  std::vector<mpq_class> exact;

  double pmf(std::size_t t) const;
  /// log P(X_1 >= t).
  double log_tail(std::size_t t) const;
  /// Exact P(X_1 >= t); requires the exact table.
  mpq_class exact_tail(std::size_t t) const;
  double mean() const;
};

/// ln applied k times. Throws std::domain_error when an intermediate
/// argument is not positive.
double iterated_ln(unsigned k, double x);

/// min{k : a_k <= x <= a_{k+1}} for the tower a_1 = 1, a_{k+1} = e^{a_k}.
/// Throws std::domain_error for x < 1.
unsigned tower_index(double x);

/// Throws std::invalid_argument for beta <= 0.
RateValues rate_functions(double beta);

/// D(gamma || p) with 0 ln 0 = 0; +inf when p is 0 or 1 and gamma differs.
/// Throws std::invalid_argument outside [0,1].
double binary_kl(double gamma, double p);

/// Bound exp(-count * D(gamma || p)) on P(sum of `count` negatively
/// associated indicators >= gamma * count), valid for gamma in (p, 1].
double generalized_chernoff(double count, double gamma, double p);

/// P(Poisson(lambda) <= x).
double poisson_cdf(double lambda, std::int64_t x);
/// P(Poisson(lambda) > x), summed directly (no cancellation against 1).
double poisson_sf(double lambda, std::int64_t x);
/// log P(Poisson(lambda) > x).
double log_poisson_sf(double lambda, std::int64_t x);

/// Both displayed forms of the Poisson Chernoff bound on P(Poisson(lambda) > x).
/// Throws std::invalid_argument unless x > lambda > 0.
ChernoffBound poisson_chernoff(double lambda, double x);

/// P(S_k <= z) for S_k ~ Gamma(k, 1), integer k >= 1.
double gamma_cdf(std::uint64_t k, double z);
/// log P(S_k <= z); -inf for z <= 0.
double log_gamma_cdf(std::uint64_t k, double z);

/// Bracket for P(pi^(k)(n) >= n e^{-k/beta}):
/// [P(S_k <= k/beta - ln(1 + (k/n) e^{k/beta})), P(S_k <= k/beta)].
SandwichBound pi_tail_sandwich(std::uint64_t n, std::uint64_t k, double beta);

/// Throws std::invalid_argument for n < 2.
RootDegreeLaw poisson_binomial_x1(std::size_t n);

Remark13 remark13_inequality(double lambda);

}  // namespace rrt
