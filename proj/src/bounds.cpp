#include "rrt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mpfr_util.hpp"

namespace rrt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Kahan summation of a run of positive terms given relative to the first.
class Compensated {
 public:
  void add(double v) {
    const double y = v - c_;
    const double t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

double log_poisson_pmf(double lambda, std::int64_t j) {
  return -lambda + static_cast<double>(j) * std::log(lambda) -
         std::lgamma(static_cast<double>(j) + 1.0);
}

// log P(Poisson(lambda) <= x) for 0 <= x < lambda: sum downward from x, where
// term ratios j / lambda are below one.
double log_lower_sum(double lambda, std::int64_t x) {
  Compensated s;
  double term = 1.0;
  for (std::int64_t j = x; j >= 0; --j) {
    s.add(term);
    term *= static_cast<double>(j) / lambda;
    if (term < 1e-18 * s.value()) break;
  }
  return log_poisson_pmf(lambda, x) + std::log(s.value());
}

// log P(Poisson(lambda) >= x) for x > lambda - 1: sum upward from x, where
// term ratios lambda / (j + 1) are below one.
double log_upper_sum(double lambda, std::int64_t x) {
  Compensated s;
  double term = 1.0;
  for (std::int64_t j = x;; ++j) {
    s.add(term);
    term *= lambda / static_cast<double>(j + 1);
    if (term < 1e-18 * s.value()) break;
  }
  return log_poisson_pmf(lambda, x) + std::log(s.value());
}

void require_positive_lambda(double lambda, const char* who) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument(std::string(who) + ": lambda must be positive and finite");
}

}  // namespace

double iterated_ln(unsigned k, double x) {
  for (unsigned i = 0; i < k; ++i) {
    if (!(x > 0.0))
      throw std::domain_error("iterated_ln: argument " + std::to_string(x) + " at step " +
                              std::to_string(i + 1) + " is not positive");
    x = std::log(x);
  }
  return x;
}

unsigned tower_index(double x) {
  if (!(x >= 1.0)) throw std::domain_error("tower_index: argument must be >= 1");
  double a = 1.0;
  for (unsigned k = 1;; ++k) {
    const double next = std::exp(a);
    if (x <= next) return k;
    a = next;
  }
}

RateValues rate_functions(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("rate_functions: beta must be positive");
  const double lb = std::log(beta);
  return {std::numbers::e * beta * lb, beta * (lb - 1.0)};
}

double binary_kl(double gamma, double p) {
  if (!(gamma >= 0.0 && gamma <= 1.0) || !(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("binary_kl: arguments must lie in [0, 1]");
  double first = 0.0, second = 0.0;
  if (gamma > 0.0) first = p == 0.0 ? kInf : gamma * std::log(gamma / p);
  if (gamma < 1.0) second = p == 1.0 ? kInf : (1.0 - gamma) * std::log((1.0 - gamma) / (1.0 - p));
  return first + second;
}

double generalized_chernoff(double count, double gamma, double p) {
  if (!(gamma > p && gamma <= 1.0))
    throw std::invalid_argument("generalized_chernoff: gamma must lie in (p, 1]");
  return std::exp(-count * binary_kl(gamma, p));
}

double poisson_cdf(double lambda, std::int64_t x) {
  require_positive_lambda(lambda, "poisson_cdf");
  if (x < 0) return 0.0;
  if (static_cast<double>(x) < lambda) return std::exp(log_lower_sum(lambda, x));
  return -std::expm1(log_poisson_sf(lambda, x));
}

double log_poisson_sf(double lambda, std::int64_t x) {
  require_positive_lambda(lambda, "log_poisson_sf");
  if (x < 0) return 0.0;
  if (static_cast<double>(x + 1) > lambda) return log_upper_sum(lambda, x + 1);
  return std::log1p(-std::exp(log_lower_sum(lambda, x)));
}

double poisson_sf(double lambda, std::int64_t x) { return std::exp(log_poisson_sf(lambda, x)); }

ChernoffBound poisson_chernoff(double lambda, double x) {
  require_positive_lambda(lambda, "poisson_chernoff");
  if (!(x > lambda)) throw std::invalid_argument("poisson_chernoff: requires x > lambda");
  const double ll = std::log(lambda), lx = std::log(x);
  return {std::exp(-lambda + x * (ll + 1.0) - x * lx), std::exp(-x * (lx - ll - 1.0))};
}

double log_gamma_cdf(std::uint64_t k, double z) {
  if (k == 0) throw std::invalid_argument("gamma_cdf: shape must be >= 1");
  if (!(z > 0.0)) return kNegInf;
  const double kd = static_cast<double>(k);
  if (z < kd) {
    // P(k, z) = z^k e^{-z} / k! * sum_i z^i / ((k+1)...(k+i))
    Compensated s;
    double term = 1.0;
    for (std::uint64_t i = 1;; ++i) {
      s.add(term);
      term *= z / (kd + static_cast<double>(i));
      if (term < 1e-18 * s.value()) break;
    }
    return kd * std::log(z) - z - std::lgamma(kd + 1.0) + std::log(s.value());
  }
  // Q(k, z) = e^{-z} sum_{j<k} z^j / j!, largest term j = k-1 when z >= k.
  Compensated s;
  double term = 1.0;
  for (std::uint64_t j = k - 1;; --j) {
    s.add(term);
    if (j == 0) break;
    term *= static_cast<double>(j) / z;
    if (term < 1e-18 * s.value()) break;
  }
  const double log_q = (kd - 1.0) * std::log(z) - z - std::lgamma(kd) + std::log(s.value());
  return std::log1p(-std::exp(log_q));
}

double gamma_cdf(std::uint64_t k, double z) { return std::exp(log_gamma_cdf(k, z)); }

SandwichBound pi_tail_sandwich(std::uint64_t n, std::uint64_t k, double beta) {
  if (n < 1 || k < 1) throw std::invalid_argument("pi_tail_sandwich: need n >= 1 and k >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("pi_tail_sandwich: beta must be positive");
  const double z = static_cast<double>(k) / beta;
  // ln(1 + (k/n) e^{k/beta}) evaluated as a softplus to avoid overflow
  const double a = std::log(static_cast<double>(k) / static_cast<double>(n)) + z;
  const double softplus = a > 30.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a));
  const double arg = z - softplus;
  SandwichBound out;
  out.upper = gamma_cdf(k, z);
  out.lower = arg > 0.0 ? gamma_cdf(k, arg) : 0.0;
  return out;
}

double RootDegreeLaw::pmf(std::size_t t) const {
  return t < log_pmf.size() ? std::exp(log_pmf[t]) : 0.0;
}

double RootDegreeLaw::log_tail(std::size_t t) const {
  double acc = kNegInf;
  for (std::size_t u = log_pmf.size(); u-- > t;) acc = log_add(acc, log_pmf[u]);
  return acc;
}

mpq_class RootDegreeLaw::exact_tail(std::size_t t) const {
  if (exact.empty()) throw std::logic_error("RootDegreeLaw: exact pmf not available");
  mpq_class acc = 0;
  for (std::size_t u = t; u < exact.size(); ++u) acc += exact[u];
  return acc;
}

double RootDegreeLaw::mean() const {
  Compensated s;
  for (std::size_t t = 0; t < log_pmf.size(); ++t) s.add(static_cast<double>(t) * pmf(t));
  return s.value();
}

RootDegreeLaw poisson_binomial_x1(std::size_t n) {
  if (n < 2) throw std::invalid_argument("poisson_binomial_x1: n must be >= 2");
  RootDegreeLaw law;
  law.n = n;
  law.log_pmf.assign(n, kNegInf);

  if (n <= kExactPoissonBinomialMaxN) {
    // Weights over the common denominator prod_{j=2}^{n-1} j = (n-1)!:
    // failure of Ber(1/j) has weight j-1, success weight 1. c[s] counts
    // s successes (these are Stirling numbers of the first kind).
    std::vector<mpz_class> c(n - 1);
    c[0] = 1;
    for (std::size_t j = 2; j + 1 <= n; ++j) {
      for (std::size_t s = j - 1; s >= 1; --s) {
        c[s] *= static_cast<unsigned long>(j - 1);
        c[s] += c[s - 1];
      }
      c[0] *= static_cast<unsigned long>(j - 1);
    }
    mpz_class denom;
    mpz_fac_ui(denom.get_mpz_t(), n - 1);
    law.exact.assign(n, mpq_class(0));
    detail::Mpfr lg(128);
    for (std::size_t s = 0; s + 1 < n; ++s) {
      mpq_class q(c[s], denom);
      q.canonicalize();
      law.exact[s + 1] = q;
      if (sgn(q) != 0) {
        detail::log_rational(lg, q);
        law.log_pmf[s + 1] = lg.to_double();
      }
    }
    return law;
  }

  // log-space DP over sum of the Bernoullis
  std::vector<double> lp(n - 1, kNegInf);
  lp[0] = 0.0;
  for (std::size_t j = 2; j + 1 <= n; ++j) {
    const double hit = -std::log(static_cast<double>(j));
    const double miss = std::log1p(-1.0 / static_cast<double>(j));
    for (std::size_t s = j - 1; s >= 1; --s) lp[s] = log_add(lp[s] + miss, lp[s - 1] + hit);
    lp[0] += miss;
  }
  for (std::size_t s = 0; s + 1 < n; ++s) law.log_pmf[s + 1] = lp[s];
  return law;
}

Remark13 remark13_inequality(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("remark13_inequality: lambda must be positive");
  constexpr double e = std::numbers::e;
  Remark13 r;
  r.left = (e + lambda) * std::log1p(lambda / e);
  r.right = lambda / (2.0 * e);
  r.holds = r.left > r.right;
  return r;
}

}  // namespace rrt
