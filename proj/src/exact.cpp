#include "rrt/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mpfr_util.hpp"

namespace rrt {

namespace {

std::string num(std::size_t v) { return std::to_string(v); }

// Counts heights of all increasing trees extending the partial parent array
// of vertices < t. Parents are chosen in increasing order, so the traversal
// is the mixed-radix order with vertex 1's digit most significant.
void enumerate_heights(std::size_t t, std::size_t n, std::size_t height,
                       std::vector<std::size_t>& depth, std::vector<std::uint64_t>& counts) {
  if (t == n) {
    ++counts[height];
    return;
  }
  for (std::size_t p = 0; p < t; ++p) {
    depth[t] = depth[p] + 1;
    enumerate_heights(t + 1, n, std::max(height, depth[t]), depth, counts);
  }
}

}  // namespace

const mpz_class& ExactCdfTable::count(std::size_t n, std::size_t k) const {
  if (n < 1 || n > n_max_ || k > k_max_)
    throw std::invalid_argument("ExactCdfTable: (n=" + num(n) + ", k=" + num(k) +
                                ") outside table n<=" + num(n_max_) + ", k<=" + num(k_max_));
  return counts_[k][n];
}

ExactCdfTable build_cdf_table(std::size_t n_max, std::size_t k_max) {
  if (n_max < 1) throw std::invalid_argument("build_cdf_table: n_max must be >= 1");
  const std::size_t k_eff = std::min(k_max, n_max - 1);
  if (n_max > kCdfTableMaxN ||
      static_cast<double>(k_eff) * std::pow(static_cast<double>(n_max), 3.0) > kCdfTableMaxWork)
    throw ResourceLimitError("build_cdf_table: n_max=" + num(n_max) + ", k_max=" + num(k_max) +
                             " exceeds the exact engine limits (n_max <= " + num(kCdfTableMaxN) +
                             ", min(k_max, n_max - 1) * n_max^3 <= 1e11)");

  std::vector<std::vector<mpz_class>> counts(k_max + 1, std::vector<mpz_class>(n_max + 1));
  counts[0][1] = 1;

  // With t_j = A_{k-1}(j) and E = exp(T_{k-1}) = sum_m e_m x^m / m!, the ODE
  // E' = T_{k-1}' E gives e_{m+1} = sum_j C(m, j) t_{j+1} e_{m-j}, and
  // T_k' = E means A_k(m + 1) = e_m.
  std::vector<mpz_class> e(n_max);
  std::vector<mpz_class> pascal;
  mpz_class term;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const auto& t = counts[k - 1];
    if (k - 1 >= n_max - 1) {
      // A_{k-1}(n) = (n-1)! already holds for every n in the table.
      counts[k] = t;
      continue;
    }
    e[0] = 1;
    pascal.assign(1, mpz_class(1));
    for (std::size_t m = 0; m + 1 < n_max; ++m) {
      mpz_class& acc = e[m + 1];
      acc = 0;
      for (std::size_t j = 0; j <= m; ++j) {
        if (sgn(t[j + 1]) == 0) continue;
        mpz_mul(term.get_mpz_t(), pascal[j].get_mpz_t(), t[j + 1].get_mpz_t());
        mpz_addmul(acc.get_mpz_t(), term.get_mpz_t(), e[m - j].get_mpz_t());
      }
      pascal.emplace_back(1);
      for (std::size_t j = m; j >= 1; --j) pascal[j] += pascal[j - 1];
    }
    for (std::size_t n = 1; n <= n_max; ++n) counts[k][n] = e[n - 1];
  }
  return ExactCdfTable(n_max, k_max, std::move(counts));
}

std::map<std::size_t, mpz_class> brute_force_height_dist(std::size_t n) {
  if (n < 1) throw std::invalid_argument("brute_force_height_dist: n must be >= 1");
  if (n > kBruteForceMaxN)
    throw ResourceLimitError("brute_force_height_dist: n=" + num(n) + " exceeds " +
                             num(kBruteForceMaxN) + " ((n-1)! parent arrays)");
  std::vector<std::size_t> depth(n, 0);
  std::vector<std::uint64_t> counts(n, 0);
  enumerate_heights(1, n, 0, depth, counts);
  std::map<std::size_t, mpz_class> out;
  for (std::size_t h = 0; h < n; ++h)
    if (counts[h] != 0) out[h] = mpz_class(std::to_string(counts[h]));
  return out;
}

mpz_class factorial(std::uint64_t n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

mpz_class binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

std::string to_decimal(const mpq_class& q, int digits) {
  detail::Mpfr v(static_cast<mpfr_prec_t>(digits * 3.33) + 64);
  mpfr_set_q(v.get(), q.get_mpq_t(), MPFR_RNDN);
  return v.to_string(digits);
}

ExactProbability exact_height_cdf(const ExactCdfTable& table, std::size_t n, std::size_t k) {
  ExactProbability p;
  p.value = mpq_class(table.count(n, k), factorial(n - 1));
  p.value.canonicalize();
  p.decimal = to_decimal(p.value, 50);
  detail::Mpfr v(128);
  mpfr_set_q(v.get(), p.value.get_mpq_t(), MPFR_RNDN);
  p.approx = v.to_double();
  return p;
}

std::size_t lower_tail_threshold(std::size_t n, double alpha) {
  const double x = alpha * std::numbers::e * std::log(static_cast<double>(n));
  const double r = std::round(x);
  if (std::abs(x - r) < 1e-9) return static_cast<std::size_t>(std::max(r, 0.0));
  return static_cast<std::size_t>(std::max(std::floor(x), 0.0));
}

OmegaValue omega_alpha(const ExactCdfTable& table, std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("omega_alpha: alpha must lie in (0, 1)");
  if (n < 2) throw std::invalid_argument("omega_alpha: n must be >= 2");
  OmegaValue out;
  out.n = n;
  out.alpha = alpha;
  out.threshold = lower_tail_threshold(n, alpha);
  if (n > table.n_max() || out.threshold > table.k_max())
    throw std::invalid_argument("omega_alpha: (n=" + num(n) + ", threshold=" +
                                num(out.threshold) + ") exceeds the table (n_max=" +
                                num(table.n_max()) + ", k_max=" + num(table.k_max()) + ")");

  const auto f = exact_height_cdf(table, n, out.threshold);
  const double ln_n = std::log(static_cast<double>(n));
  const double scale =
      std::pow(static_cast<double>(n), 1.0 - alpha) * std::pow(ln_n, -3.0 / (2.0 * std::numbers::e));
  if (sgn(f.value) == 0) {
    out.neg_ln_f = INFINITY;
    out.neg_ln_f_text = "inf";
    out.omega = INFINITY;
    return out;
  }
  detail::Mpfr neg_log(256);
  detail::log_rational(neg_log, f.value);
  mpfr_neg(neg_log.get(), neg_log.get(), MPFR_RNDN);
  out.neg_ln_f = neg_log.to_double();
  out.neg_ln_f_text = neg_log.to_string(50);
  mpfr_div_d(neg_log.get(), neg_log.get(), scale, MPFR_RNDN);
  out.omega = neg_log.to_double();
  return out;
}

PartitionScheme partition_scheme(std::uint64_t N) {
  if (N < 3) throw std::invalid_argument("partition_scheme: N must be >= 3");
  PartitionScheme ps;
  ps.N = N;
  const long double ln_n = std::log(static_cast<long double>(N));
  auto s = static_cast<std::uint64_t>(std::floor(ln_n));
  while (std::exp(static_cast<long double>(s + 1)) <= static_cast<long double>(N)) ++s;
  while (s > 0 && std::exp(static_cast<long double>(s)) > static_cast<long double>(N)) --s;
  ps.s = s;
  ps.d = N / (s + 1);
  ps.r = N - ps.d * (s + 1);

  const mpz_class block = factorial(s + 1);
  mpz_class den;
  if (ps.r >= 1) {
    mpz_pow_ui(den.get_mpz_t(), block.get_mpz_t(), ps.d - 1);
    den *= factorial(ps.d - 1) * factorial(1 + s + ps.r);
  } else {
    mpz_pow_ui(den.get_mpz_t(), block.get_mpz_t(), ps.d);
    den *= factorial(ps.d);
  }
  ps.count = factorial(N);
  mpz_divexact(ps.count.get_mpz_t(), ps.count.get_mpz_t(), den.get_mpz_t());
  return ps;
}

mpz_class count_compositions(std::int64_t n, std::span<const PartRange> parts) {
  if (n < 0) return 0;
  const auto size = static_cast<std::size_t>(n) + 1;
  std::vector<mpz_class> ways(size), prefix(size);
  ways[0] = 1;
  for (const auto& part : parts) {
    const std::int64_t lo = std::max<std::int64_t>(part.low, 1);
    const std::int64_t hi = std::min<std::int64_t>(part.high, n);
    if (lo > hi) return 0;
    prefix[0] = ways[0];
    for (std::size_t s = 1; s < size; ++s) prefix[s] = prefix[s - 1] + ways[s];
    // ways'[s] = sum_{v=lo}^{hi} ways[s - v] = prefix[s-lo] - prefix[s-hi-1]
    for (std::int64_t s = 0; s <= n; ++s) {
      mpz_class& w = ways[static_cast<std::size_t>(s)];
      if (s < lo) {
        w = 0;
        continue;
      }
      w = prefix[static_cast<std::size_t>(s - lo)];
      if (s - hi - 1 >= 0) w -= prefix[static_cast<std::size_t>(s - hi - 1)];
    }
  }
  return ways[static_cast<std::size_t>(n)];
}

mpz_class count_compositions_bounded(std::int64_t n, std::int64_t m, std::int64_t low,
                                     std::int64_t high) {
  if (m < 0 || n < 0 || low > high) return 0;
  std::vector<PartRange> parts(static_cast<std::size_t>(m), PartRange{low, high});
  return count_compositions(n, parts);
}

mpz_class balanced_composition_count(std::int64_t n, std::int64_t m) {
  if (m < 1 || n < m) throw std::invalid_argument("balanced_composition_count: need n >= m >= 1");
  const std::int64_t lo = (n + 2 * m - 1) / (2 * m);  // ceil(n / 2m)
  const std::int64_t hi = (3 * n) / (2 * m);          // floor(3n / 2m)
  std::vector<PartRange> parts(static_cast<std::size_t>(m - 1), PartRange{lo, hi});
  parts.push_back({1, (2 * n) / m});
  return count_compositions(n, parts);
}

std::vector<mpq_class> small_part_count_dist(std::int64_t n, std::int64_t m, std::int64_t cap) {
  if (m < 1 || n < m) throw std::invalid_argument("small_part_count_dist: need n >= m >= 1");
  if (cap < 1) throw std::invalid_argument("small_part_count_dist: cap must be >= 1");
  const auto parts = static_cast<std::size_t>(m);
  const auto size = static_cast<std::size_t>(n) + 1;
  // dp[s][sum]: prefixes of the composition with s small parts so far.
  std::vector<std::vector<mpz_class>> dp(parts + 1, std::vector<mpz_class>(size));
  std::vector<std::vector<mpz_class>> next(parts + 1, std::vector<mpz_class>(size));
  std::vector<mpz_class> prefix(size);
  dp[0][0] = 1;

  auto window = [&](std::int64_t sum, std::int64_t lo, std::int64_t hi) {
    // sum_{v=lo}^{hi} row[sum - v] from the current prefix array
    mpz_class out;
    hi = std::min(hi, sum);
    if (lo > hi) return out;
    out = prefix[static_cast<std::size_t>(sum - lo)];
    if (sum - hi - 1 >= 0) out -= prefix[static_cast<std::size_t>(sum - hi - 1)];
    return out;
  };

  for (std::size_t p = 0; p < parts; ++p) {
    for (auto& row : next)
      for (auto& v : row) v = 0;
    for (std::size_t s = 0; s <= p; ++s) {
      prefix[0] = dp[s][0];
      for (std::size_t i = 1; i < size; ++i) prefix[i] = prefix[i - 1] + dp[s][i];
      for (std::int64_t sum = 1; sum <= n; ++sum) {
        const auto idx = static_cast<std::size_t>(sum);
        if (cap > 1) next[s + 1][idx] += window(sum, 1, cap - 1);
        next[s][idx] += window(sum, cap, n);
      }
    }
    std::swap(dp, next);
  }

  const mpz_class total = binomial(static_cast<std::uint64_t>(n - 1), static_cast<std::uint64_t>(m - 1));
  std::vector<mpq_class> pmf(parts + 1);
  for (std::size_t s = 0; s <= parts; ++s) {
    pmf[s] = mpq_class(dp[s][static_cast<std::size_t>(n)], total);
    pmf[s].canonicalize();
  }
  return pmf;
}

mpq_class subtree_tail_product(std::int64_t m, std::int64_t n, std::int64_t k) {
  if (m < 1 || n < m) throw std::invalid_argument("subtree_tail_product: need n >= m >= 1");
  if (k < 0) throw std::invalid_argument("subtree_tail_product: k must be >= 0");
  if (k + m > n) return 0;
  mpz_class numer = 1, denom = 1;
  for (std::int64_t j = 1; j <= m - 1; ++j) {
    numer *= n - j - k;
    denom *= n - j;
  }
  mpq_class q(numer, denom);
  q.canonicalize();
  return q;
}

bool at_least_exp_neg(const mpq_class& q, unsigned long m) {
  detail::Mpfr up(256), down(256);
  mpfr_set_si(up.get(), -static_cast<long>(m), MPFR_RNDN);
  mpfr_set_si(down.get(), -static_cast<long>(m), MPFR_RNDN);
  mpfr_exp(up.get(), up.get(), MPFR_RNDU);
  mpfr_exp(down.get(), down.get(), MPFR_RNDD);
  if (q >= up.to_rational()) return true;
  if (q < down.to_rational()) return false;
  throw std::runtime_error("at_least_exp_neg: value within rounding bracket of e^-m");
}

}  // namespace rrt
