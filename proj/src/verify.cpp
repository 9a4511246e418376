#include "rrt/verify.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "mpfr_util.hpp"
#include "rrt/bounds.hpp"
#include "rrt/exact.hpp"
#include "rrt/rare_event.hpp"
#include "rrt/tree.hpp"

namespace rrt::verify {

namespace {

template <class... Args>
std::string fmt(Args&&... args) {
  std::ostringstream os;
  os << std::setprecision(6);
  (os << ... << args);
  return os.str();
}

Outcome pass(std::string detail) { return {true, std::move(detail)}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

void scheme_partitions(std::uint64_t i, std::uint64_t N, std::vector<std::uint64_t>& blocks,
                       std::uint64_t max_blocks, std::uint64_t max_size,
                       const std::vector<std::uint64_t>& expected, std::uint64_t& count) {
  if (i == N) {
    if (blocks.size() != expected.size()) return;
    auto sorted = blocks;
    std::sort(sorted.begin(), sorted.end());
    if (sorted == expected) ++count;
    return;
  }
  // Remaining elements must be able to fill the missing blocks.
  if (blocks.size() + (N - i) < expected.size()) return;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (blocks[j] == max_size) continue;
    ++blocks[j];
    scheme_partitions(i + 1, N, blocks, max_blocks, max_size, expected, count);
    --blocks[j];
  }
  if (blocks.size() < max_blocks) {
    blocks.push_back(1);
    scheme_partitions(i + 1, N, blocks, max_blocks, max_size, expected, count);
    blocks.pop_back();
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// oracles

std::vector<mpz_class> bell_numbers(std::size_t count) {
  std::vector<mpz_class> bell;
  if (count == 0) return bell;
  std::vector<mpz_class> row{1};
  bell.push_back(1);
  while (bell.size() < count) {
    std::vector<mpz_class> next{row.back()};
    for (const auto& v : row) next.push_back(next.back() + v);
    row = std::move(next);
    bell.push_back(row.front());
  }
  return bell;
}

std::uint64_t enumerate_scheme_partitions(std::uint64_t N) {
  const auto ps = partition_scheme(N);
  std::vector<std::uint64_t> expected(ps.d - 1, ps.s + 1);
  expected.push_back(ps.s + 1 + ps.r);
  std::sort(expected.begin(), expected.end());
  std::vector<std::uint64_t> blocks;
  std::uint64_t count = 0;
  scheme_partitions(0, N, blocks, ps.d, ps.s + 1 + ps.r, expected, count);
  return count;
}

double two_sample_chi_square_p(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                               std::size_t min_bin) {
  std::map<std::int64_t, std::pair<double, double>> counts;
  for (auto v : a) counts[v].first += 1.0;
  for (auto v : b) counts[v].second += 1.0;
  std::vector<std::pair<double, double>> bins;
  std::pair<double, double> cur{0.0, 0.0};
  for (const auto& [value, c] : counts) {
    cur.first += c.first;
    cur.second += c.second;
    if (cur.first + cur.second >= static_cast<double>(min_bin)) {
      bins.push_back(cur);
      cur = {0.0, 0.0};
    }
  }
  if (cur.first + cur.second > 0.0) {
    if (bins.empty())
      bins.push_back(cur);
    else {
      bins.back().first += cur.first;
      bins.back().second += cur.second;
    }
  }
  if (bins.size() < 2) return 1.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
  double stat = 0.0;
  for (const auto& [ca, cb] : bins) {
    const double diff = ka * ca - kb * cb;
    stat += diff * diff / (ca + cb);
  }
  const boost::math::chi_squared dist(static_cast<double>(bins.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// ---------------------------------------------------------------------------
// tree_core

Outcome increasing_property(std::uint64_t seed) {
  std::size_t trees = 0;
  for (std::size_t n : {1, 2, 3, 10, 100, 1000}) {
    for (std::uint64_t i = 0; i < 50; ++i) {
      Stream s = derive_stream(seed, i * 7919 + n);
      const RecursiveTree trees_built[] = {grow_uniform(n, s), grow_floor_map(n, s),
                                           grow_yule(n, s).tree, grow_tilted(n, 0.5, s).tree};
      for (const auto& t : trees_built) {
        const auto p = t.parents();
        for (std::size_t j = 0; j < p.size(); ++j)
          if (p[j] > j) return fail(fmt("vertex ", j + 1, " attaches to later vertex ", p[j]));
        ++trees;
      }
    }
  }
  return pass(fmt(trees, " trees from 4 generators satisfy parent(t) < t"));
}

Outcome generator_equivalence(std::span<const std::size_t> sizes, std::uint64_t reps,
                              std::uint64_t seed) {
  std::ostringstream detail;
  bool ok = true;
  double worst = 0.0;
  for (std::size_t n : sizes) {
    const auto exact = brute_force_height_dist(n);
    const double total = factorial(n - 1).get_d();
    const char* names[] = {"uniform", "floor_map", "yule"};
    for (int g = 0; g < 3; ++g) {
      std::vector<double> hist(n, 0.0);
      for (std::uint64_t i = 0; i < reps; ++i) {
        Stream s = derive_stream(seed + static_cast<std::uint64_t>(g) * 1000003 + n, i);
        const RecursiveTree t =
            g == 0 ? grow_uniform(n, s) : g == 1 ? grow_floor_map(n, s) : grow_yule(n, s).tree;
        hist[tree_stats(t).height] += 1.0;
      }
      for (std::size_t h = 0; h < n; ++h) {
        const auto it = exact.find(h);
        const double p = it == exact.end() ? 0.0 : it->second.get_d() / total;
        const double phat = hist[h] / static_cast<double>(reps);
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
        const double z = se > 0 ? std::abs(phat - p) / se : (phat == p ? 0.0 : INFINITY);
        worst = std::max(worst, z);
        if (z > 4.0) {
          ok = false;
          detail << names[g] << " n=" << n << " h=" << h << " phat=" << phat << " p=" << p << "; ";
        }
      }
    }
  }
  detail << "max |z| over heights = " << std::setprecision(3) << worst << " (limit 4)";
  return {ok, detail.str()};
}

Outcome composition_law(std::size_t n, std::size_t m, std::uint64_t reps, std::uint64_t seed) {
  std::map<std::vector<std::size_t>, std::uint64_t> freq;
  for (std::uint64_t i = 0; i < reps; ++i) {
    Stream s = derive_stream(seed, i);
    ++freq[subtree_decomposition(grow_uniform(n, s), m).sizes];
  }
  const double expected_count =
      binomial(static_cast<std::uint64_t>(n - 1), static_cast<std::uint64_t>(m - 1)).get_d();
  const double p = 1.0 / expected_count;
  const double tol = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
  double worst = 0.0;
  for (const auto& [comp, c] : freq) {
    (void)comp;
    worst = std::max(worst, std::abs(static_cast<double>(c) / static_cast<double>(reps) - p));
  }
  const bool ok = static_cast<double>(freq.size()) == expected_count && worst <= tol;
  return {ok, fmt(freq.size(), " of ", expected_count, " compositions seen; max |freq - ", p,
                  "| = ", worst, " (limit ", tol, ")")};
}

Outcome level_set_recursion(std::size_t n, std::uint64_t reps, std::uint64_t seed) {
  std::vector<std::int64_t> direct(reps), rebuilt(reps);
  for (std::uint64_t i = 0; i < reps; ++i) {
    Stream s = derive_stream(seed, i);
    const auto stats = tree_stats(grow_uniform(n, s));
    direct[i] = stats.level_sizes.size() > 2 ? stats.level_sizes[2] : 0;
  }
  for (std::uint64_t i = 0; i < reps; ++i) {
    Stream s = derive_stream(seed ^ 0x5bd1e995ULL, i);
    const RecursiveTree outer = grow_uniform(n, s);
    const auto sizes = subtree_sizes(outer);
    std::int64_t sum = 0;
    for (std::size_t v = 1; v < n; ++v) {
      if (outer.parent(static_cast<Vertex>(v)) != 0) continue;
      const auto inner = tree_stats(grow_uniform(sizes[v], s));
      sum += inner.level_sizes.size() > 1 ? inner.level_sizes[1] : 0;
    }
    rebuilt[i] = sum;
  }
  const double p = two_sample_chi_square_p(direct, rebuilt);
  return {p > 0.001, fmt("two-sample chi-square p = ", p, " (need > 0.001)")};
}

Outcome determinism(std::uint64_t seed) {
  for (std::size_t n : {1, 5, 300}) {
    Stream a = derive_stream(seed, n), b = derive_stream(seed, n);
    if (!(grow_uniform(n, a) == grow_uniform(n, b))) return fail("grow_uniform differs");
    if (!(grow_floor_map(n, a) == grow_floor_map(n, b))) return fail("grow_floor_map differs");
    const auto ya = grow_yule(n, a), yb = grow_yule(n, b);
    if (!(ya.tree == yb.tree) || ya.birth_times != yb.birth_times) return fail("grow_yule differs");
  }
  const auto e1 = estimate_pi_tail(500, 4, 3.0, 5000, seed);
  const auto e2 = estimate_pi_tail(500, 4, 3.0, 5000, seed);
  if (!(e1 == e2)) return fail("estimate_pi_tail differs between identical runs");
  return pass("identical seeds give identical trees and estimates");
}

// ---------------------------------------------------------------------------
// exact_engine

Outcome oracle_equality(std::size_t n_max, std::size_t k_max) {
  const auto table = build_cdf_table(n_max, k_max);
  std::size_t cells = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto dist = brute_force_height_dist(n);
    mpz_class cumulative = 0;
    for (std::size_t k = 0; k <= k_max; ++k) {
      if (auto it = dist.find(k); it != dist.end()) cumulative += it->second;
      if (table.count(n, k) != cumulative)
        return fail(fmt("A_", k, "(", n, ") = ", table.count(n, k).get_str(), " but enumeration gives ",
                        cumulative.get_str()));
      ++cells;
    }
  }
  return pass(fmt(cells, " cells of A_k(n) equal brute-force enumeration"));
}

Outcome bell_identity(std::size_t n_max) {
  const auto table = build_cdf_table(n_max, 2);
  const auto bell = bell_numbers(n_max);
  for (std::size_t n = 1; n <= n_max; ++n)
    if (table.count(n, 2) != bell[n - 1])
      return fail(fmt("A_2(", n, ") = ", table.count(n, 2).get_str(), " != Bell(", n - 1, ") = ",
                      bell[n - 1].get_str()));
  return pass(fmt("A_2(n) = Bell(n-1) for n <= ", n_max, "; Bell(", n_max - 1, ") = ",
                  bell[n_max - 1].get_str()));
}

Outcome product_tail_identity(std::int64_t m_max, std::int64_t n_max) {
  // ways[p][s]: compositions of s into p parts, from the bounded DP
  std::vector<std::vector<mpz_class>> ways(static_cast<std::size_t>(m_max) + 1);
  for (std::int64_t p = 0; p <= m_max; ++p)
    for (std::int64_t s = 0; s <= n_max; ++s)
      ways[p].push_back(count_compositions_bounded(s, p, 1, std::max<std::int64_t>(s, 1)));

  std::size_t checked = 0;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    for (std::int64_t n = m; n <= n_max; ++n) {
      const mpz_class& total = ways[m][n];
      if (subtree_tail_product(m, n, n - m + 1) != 0) return fail("product nonzero for k + m > n");
      mpz_class favourable = 0;
      for (std::int64_t k = n - m; k >= 0; --k) {
        favourable += ways[m - 1][n - (k + 1)];  // first part exactly k+1
        mpq_class ratio(favourable, total);
        ratio.canonicalize();
        if (ratio != subtree_tail_product(m, n, k))
          return fail(fmt("P_{", m, ",", n, "}(", k, ") mismatch"));
        ++checked;
      }
    }
  }
  return pass(fmt(checked, " (m,n,k) triples: product formula equals composition DP ratio exactly"));
}

Outcome monotone_domination(std::int64_t m_max, std::int64_t n_max, const mpq_class& theta) {
  std::unordered_map<std::uint64_t, mpq_class> memo;
  const auto stride = static_cast<std::uint64_t>(n_max) + 1;
  auto P = [&](std::int64_t m, std::int64_t n, std::int64_t t) -> const mpq_class& {
    const std::uint64_t key = (static_cast<std::uint64_t>(m) * stride + static_cast<std::uint64_t>(n)) * stride +
                              static_cast<std::uint64_t>(t);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, subtree_tail_product(m, n, t)).first;
    return it->second;
  };
  const mpz_class tn = theta.get_num(), td = theta.get_den();
  std::uint64_t comparisons = 0;
  for (std::int64_t m = 2; m <= m_max; ++m) {
    for (std::int64_t n = m; n <= n_max; ++n) {
      // t < theta n / m  <=>  t m td < tn n
      for (std::int64_t t = 0; mpz_class(t * m) * td < tn * n; ++t) {
        for (std::int64_t r = 1; r < m; ++r) {
          // r <= L <= r theta n / m  <=>  L m td <= r tn n
          for (std::int64_t L = r; mpz_class(L * m) * td <= tn * (r * n); ++L) {
            ++comparisons;
            if (P(m, n, t) > P(m - r, n - L, t))
              return fail(fmt("P_{", m, ",", n, "}(", t, ") > P_{", m - r, ",", n - L, "}(", t, ")"));
          }
        }
      }
    }
  }
  return pass(fmt(comparisons, " comparisons P_{m,n}(t) <= P_{m-r,n-L}(t) hold"));
}

Outcome max_part_bound(std::span<const std::int64_t> parts, std::span<const std::int64_t> ratios) {
  std::ostringstream detail;
  bool ok = true;
  for (std::int64_t m : parts) {
    for (std::int64_t q : ratios) {
      const std::int64_t n = m * q;
      const mpz_class good = count_compositions_bounded(n, m, 1, (2 * n) / m);
      mpq_class p(good, binomial(static_cast<std::uint64_t>(n - 1), static_cast<std::uint64_t>(m - 1)));
      p.canonicalize();
      const bool holds = at_least_exp_neg(p, static_cast<unsigned long>(m));
      ok = ok && holds;
      detail << "(m=" << m << ",n=" << n << "): P=" << to_decimal(p, 6) << (holds ? " >= " : " < ")
             << "e^-" << m << "; ";
    }
  }
  return {ok, detail.str()};
}

Outcome balanced_count_bound(std::int64_t m, std::int64_t n) {
  const mpz_class count = balanced_composition_count(n, m);
  // count >= m^{-1/2} (n/m)^{m-1}  <=>  count^2 m >= (n/m)^{2(m-1)}
  mpz_class num, den;
  mpz_ui_pow_ui(num.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(2 * (m - 1)));
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(2 * (m - 1)));
  const mpq_class rhs(num, den);
  const mpq_class lhs(count * count * m);
  detail::Mpfr ratio(128);
  detail::log_rational(ratio, lhs / rhs);
  const double log10_margin = ratio.to_double() / 2.0 / std::numbers::ln10;
  return {lhs >= rhs, fmt("|G_{n,m}| / (m^-1/2 (n/m)^(m-1)) = 10^", log10_margin, " at (m,n)=(", m, ",", n, ")")};
}

Outcome partition_oracle(std::uint64_t lo, std::uint64_t hi) {
  for (std::uint64_t N = lo; N <= hi; ++N) {
    const auto formula = partition_scheme(N).count;
    const auto brute = enumerate_scheme_partitions(N);
    if (formula != mpz_class(std::to_string(brute)))
      return fail(fmt("N=", N, ": formula ", formula.get_str(), " vs enumeration ", brute));
  }
  return pass(fmt("partition counts match exhaustive enumeration for N in [", lo, ", ", hi, "]"));
}

Outcome partition_asymptotic(std::span<const std::uint64_t> sizes) {
  std::ostringstream detail;
  bool ok = true;
  for (std::uint64_t N : sizes) {
    const auto ps = partition_scheme(N);
    detail::Mpfr lg(128);
    detail::log_rational(lg, mpq_class(ps.count));
    const double ln_n = std::log(static_cast<double>(N));
    const double ratio = lg.to_double() / (static_cast<double>(N) * (ln_n - std::log(ln_n) - 1.0));
    ok = ok && ratio >= 0.9 && ratio <= 1.1;
    detail << "N=" << N << ": ratio " << std::setprecision(5) << ratio << "; ";
  }
  detail << "(band [0.9, 1.1])";
  return {ok, detail.str()};
}

Outcome small_part_exchangeability(std::int64_t n, std::int64_t m, std::int64_t cap) {
  const auto pmf = small_part_count_dist(n, m, cap);
  mpq_class mean = 0, total = 0;
  for (std::size_t s = 0; s < pmf.size(); ++s) {
    mean += pmf[s] * static_cast<long>(s);
    total += pmf[s];
  }
  const mpq_class expected = m * (1 - subtree_tail_product(m, n, cap - 1));
  const bool ok = mean == expected && total == 1;
  return {ok, fmt("mean ", mean.get_str(), " vs m(1 - P_{m,n}(cap-1)) = ", expected.get_str())};
}

Outcome small_part_chernoff(const mpq_class& theta) {
  std::ostringstream detail;
  bool ok = true;
  std::size_t checked = 0;
  for (auto [m, n] : {std::pair<std::int64_t, std::int64_t>{10, 500}, {20, 1000}, {40, 2000}}) {
    mpq_class cap_q = theta * n / m;
    mpz_class cap_z;
    mpz_cdiv_q(cap_z.get_mpz_t(), cap_q.get_num_mpz_t(), cap_q.get_den_mpz_t());
    const std::int64_t cap = cap_z.get_si();  // size < theta n / m  <=>  size < cap
    const auto pmf = small_part_count_dist(n, m, cap);
    const double p = mpq_class(1 - subtree_tail_product(m, n, cap - 1)).get_d();
    for (double gamma : {p + 0.05, p + 0.15, p + 0.3}) {
      if (gamma > 1.0) continue;
      const auto need = static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(m) - 1e-12));
      mpq_class tail = 0;
      for (std::size_t s = need; s < pmf.size(); ++s) tail += pmf[s];
      const double bound = generalized_chernoff(static_cast<double>(m), gamma, p);
      ++checked;
      if (tail.get_d() > bound * (1 + 1e-12)) {
        ok = false;
        detail << "(m=" << m << ",gamma=" << gamma << ") tail " << tail.get_d() << " > " << bound << "; ";
      }
    }
  }
  detail << checked << " (m, gamma) points: P(|J| >= gamma m) <= exp(-m D(gamma||p))";
  return {ok, detail.str()};
}

Outcome omega_trend(double alpha, std::span<const std::size_t> sizes, std::size_t k_max) {
  const auto table = build_cdf_table(*std::max_element(sizes.begin(), sizes.end()), k_max);
  std::vector<double> omegas;
  std::ostringstream detail;
  bool positive = true;
  for (std::size_t n : sizes) {
    const auto w = omega_alpha(table, n, alpha);
    omegas.push_back(w.omega);
    positive = positive && w.omega > 0.0;
    detail << "omega(" << n << ")=" << std::setprecision(6) << w.omega << " [k=" << w.threshold << "]; ";
  }
  const bool trend = omegas.back() > omegas.front();
  return {positive && trend, detail.str()};
}

// ---------------------------------------------------------------------------
// analytic_bounds

Outcome root_degree_poisson_domination(std::size_t n) {
  const auto law = poisson_binomial_x1(n);
  const double lambda = std::log(static_cast<double>(n - 1));
  double worst = -INFINITY;
  for (std::size_t t = 1; t < n; ++t) {
    const double lhs = law.exact_tail(t).get_d();
    // P(1 + eta >= t) = P(eta > t - 2)
    const double rhs = t < 2 ? 1.0 : poisson_sf(lambda, static_cast<std::int64_t>(t) - 2);
    worst = std::max(worst, lhs - rhs);
    if (lhs > rhs + 1e-15)
      return fail(fmt("t=", t, ": P(X_1 >= t) = ", lhs, " > ", rhs));
  }
  return pass(fmt("P(X_1(", n, ") >= t) <= P(1 + Poisson(ln ", n - 1, ") >= t) on all ", n - 1,
                  " support points; max lhs - rhs = ", worst));
}

Outcome root_degree_chernoff(std::size_t n) {
  const auto law = poisson_binomial_x1(n);
  const double lnln = std::log(std::log(static_cast<double>(n)));
  std::size_t checked = 0;
  for (auto t = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))); t < n; ++t) {
    const double bracket = std::log(static_cast<double>(t)) - lnln - 1.0;
    if (!(bracket > 0.0)) continue;
    const double log_bound = -(static_cast<double>(t) - 1.0) * bracket;
    if (law.log_tail(t) > log_bound)
      return fail(fmt("t=", t, ": log P(X_1 >= t) = ", law.log_tail(t), " > ", log_bound));
    ++checked;
  }
  return pass(fmt(checked, " values of t in [sqrt n, n): tail below exp(-(t-1)[ln t - ln ln n - 1])"));
}

Outcome gamma_poisson_duality(std::uint64_t k_max, double z_max) {
  double worst = 0.0, worst_ref = 0.0, worst_cdf = 0.0;
  std::size_t checked = 0;
  std::vector<double> zs;
  for (double z = 0.25; z <= z_max; z *= 1.25) zs.push_back(z);
  for (double z = 1.0; z <= z_max; z += 1.0) zs.push_back(z);
  auto relative = [](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale < std::numeric_limits<double>::min() ? 0.0 : std::abs(a - b) / scale;
  };
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    for (double z : zs) {
      const double g = gamma_cdf(k, z);
      const double p = poisson_sf(z, static_cast<std::int64_t>(k) - 1);
      // independent reference: regularized lower incomplete gamma
      const double ref = boost::math::gamma_p(static_cast<double>(k), z);
      ++checked;
      const double rel = relative(g, p), rel_ref = relative(g, ref);
      worst = std::max(worst, rel);
      worst_ref = std::max(worst_ref, rel_ref);
      if (rel > 1e-12) return fail(fmt("k=", k, ", z=", z, ": gamma ", g, " vs poisson ", p));
      if (rel_ref > 1e-12) return fail(fmt("k=", k, ", z=", z, ": gamma ", g, " vs gamma_p ", ref));
      // complement of the CDF carries absolute, not relative, accuracy
      const double gap = std::abs((1.0 - poisson_cdf(z, static_cast<std::int64_t>(k) - 1)) - g);
      worst_cdf = std::max(worst_cdf, gap);
      if (gap > 1e-12) return fail(fmt("k=", k, ", z=", z, ": 1 - poisson_cdf off by ", gap));
    }
  }
  return pass(fmt(checked, " (k, z) points; max relative gap vs poisson_sf ", worst, ", vs boost gamma_p ", worst_ref,
                  "; max absolute gap vs 1 - poisson_cdf ", worst_cdf, " (limits 1e-12)"));
}

Outcome rate_identity() {
  double worst = 0.0;
  for (double beta : {1.1, 2.0, 3.0, 10.0}) {
    const double j = rate_functions(beta).J;
    const double jsf = rate_functions(std::numbers::e * beta).J_sf;
    worst = std::max(worst, std::abs(j - jsf) / std::abs(j));
  }
  return {worst <= 1e-14, fmt("max relative |J(b) - Jsf(e b)| = ", worst, " (limit 1e-14)")};
}

Outcome level1_tail_bound(std::size_t n, double rho) {
  const auto law = poisson_binomial_x1(n);
  const auto t_lo = static_cast<std::size_t>(std::ceil(static_cast<double>(n) / std::log(static_cast<double>(n))));
  // suffix log-sums, descending
  double acc = -INFINITY;
  double worst = -INFINITY;
  std::size_t worst_t = 0, violations = 0, checked = 0;
  for (std::size_t t = n - 1; t >= t_lo; --t) {
    const double lp = law.log_pmf[t];
    if (lp != -INFINITY) acc = acc == -INFINITY ? lp : std::max(acc, lp) + std::log1p(std::exp(-std::abs(acc - lp)));
    const double td = static_cast<double>(t);
    const double gap = acc + rho * td * std::log(td);
    ++checked;
    if (gap > 0) ++violations;
    if (gap > worst) {
      worst = gap;
      worst_t = t;
    }
  }
  return {violations == 0, fmt("t in [", t_lo, ", ", n - 1, "]: ", violations, " of ", checked,
                               " points violate log P(X_1 >= t) <= -rho t ln t; max excess ", worst, " at t=", worst_t)};
}

Outcome remark13(std::span<const double> lambdas) {
  std::ostringstream detail;
  bool ok = true;
  for (double l : lambdas) {
    const auto r = remark13_inequality(l);
    ok = ok && r.holds;
    detail << "lambda=" << l << ": " << r.left << " > " << r.right << "; ";
  }
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// rare_event

Outcome is_unbiasedness(std::span<const std::uint64_t> sizes, double theta, std::uint64_t reps,
                        std::uint64_t seed) {
  const auto n_max = *std::max_element(sizes.begin(), sizes.end());
  const auto table = build_cdf_table(n_max, n_max - 1);
  std::ostringstream detail;
  bool ok = true;
  double worst = 0.0;
  std::size_t checked = 0, unresolved = 0;
  for (std::uint64_t n : sizes) {
    for (std::uint64_t k = 0; k < n; ++k) {
      const auto est = estimate_height_at_most_is(n, static_cast<std::int64_t>(k), {theta}, reps,
                                                  seed + n * 1000 + k);
      const double exact = exact_height_cdf(table, n, k).approx;
      ++checked;
      if (est.value == 0.0 && est.std_error == 0.0) {
        // No replicate survived: the standard error carries no information,
        // fall back to the rule-of-three resolution 3/reps.
        ++unresolved;
        if (exact > 3.0 / static_cast<double>(reps)) {
          ok = false;
          detail << "n=" << n << " k=" << k << " no hits but exact=" << exact << "; ";
        }
        continue;
      }
      const double z = std::abs(est.value - exact) / est.std_error;
      worst = std::max(worst, z);
      if (z > 3.0) {
        ok = false;
        detail << "n=" << n << " k=" << k << " est=" << est.value << " exact=" << exact << " z=" << z << "; ";
      }
    }
  }
  detail << checked << " thresholds, max |z| = " << std::setprecision(3) << worst << " (limit 3), "
         << unresolved << " with no surviving replicate";
  return {ok, detail.str()};
}

Outcome lower_tail_is_point(std::uint64_t n, double alpha, double theta, std::uint64_t reps,
                            std::uint64_t seed) {
  const auto est = estimate_lower_tail_is(n, alpha, {theta}, reps, seed);
  const auto table = build_cdf_table(n, static_cast<std::size_t>(est.threshold));
  const auto exact = exact_height_cdf(table, n, static_cast<std::size_t>(est.threshold));
  const double z = est.std_error > 0 ? std::abs(est.value - exact.approx) / est.std_error : INFINITY;
  return {z <= 3.0, fmt("P(H_", n, " <= ", est.threshold, "): IS ", est.value, " +- ", est.std_error,
                        ", exact ", exact.approx, ", |z| = ", z)};
}

Outcome sandwich_containment(std::uint64_t reps, std::uint64_t seed, const Execution& exec) {
  std::ostringstream detail;
  bool ok = true;
  std::size_t points = 0;
  double min_margin = INFINITY;  // in standard errors, to the nearer edge
  for (std::uint64_t n : {100, 1000, 10000}) {
    for (std::uint64_t k : {3, 5, 8}) {
      for (double beta : {3.0, 4.0}) {
        const auto est = estimate_pi_tail(n, k, beta, reps, seed + points, exec);
        const auto band = pi_tail_sandwich(n, k, beta);
        ++points;
        const double lo = band.lower - 3 * est.std_error, hi = band.upper + 3 * est.std_error;
        if (est.value < lo || est.value > hi) {
          ok = false;
          detail << "(n=" << n << ",k=" << k << ",beta=" << beta << ") " << est.value << " not in ["
                 << lo << ", " << hi << "]; ";
        }
        if (est.std_error > 0)
          min_margin = std::min(min_margin, std::min(est.value - band.lower, band.upper - est.value) / est.std_error);
      }
    }
  }
  detail << points << " grid points; closest approach to an edge " << std::setprecision(3) << min_margin << " SE";
  return {ok, detail.str()};
}

Outcome upper_tail_exponent(double beta, std::span<const std::uint64_t> sizes,
                            std::span<const std::uint64_t> reps, std::uint64_t seed) {
  std::vector<double> xs, ys;
  std::ostringstream detail;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto est = estimate_upper_tail(sizes[i], beta, reps[i], seed + i);
    detail << "n=" << sizes[i] << ": p=" << std::setprecision(5) << est.value << " (rel SE "
           << std::setprecision(3) << (est.value > 0 ? est.std_error / est.value : INFINITY) << ", b=" << est.threshold
           << "); ";
    if (!(est.value > 0)) return fail(detail.str() + "zero estimate");
    xs.push_back(std::log(static_cast<double>(sizes[i])));
    ys.push_back(std::log(est.value));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  const double target = -rate_functions(beta).J_sf;
  detail << "slope " << std::setprecision(5) << slope << " vs " << target << " (tolerance 0.15)";
  return {std::abs(slope - target) <= 0.15, detail.str()};
}

Outcome parallel_invariance(std::span<const int> worker_counts, std::uint64_t seed) {
  auto run = [seed](const Execution& ex) {
    std::vector<TailEstimate> out;
    out.push_back(estimate_pi_tail(1000, 5, 3.0, 20000, seed, ex));
    out.push_back(estimate_upper_tail(1000, 3.0, 5000, seed + 1, ex));
    out.push_back(estimate_height_at_most_is(64, 5, {0.6}, 20000, seed + 2, ex));
    const auto g = estimate_good_vertices(500, 3.0, 1000, seed + 3, ex);
    out.push_back(g.mean_sigma);
    out.push_back(g.p_nonempty);
    return out;
  };
  const auto reference = run({Backend::openmp, worker_counts.front()});
  for (int w : worker_counts)
    if (run({Backend::openmp, w}) != reference) return fail(fmt("estimates differ with ", w, " workers"));
  const auto serial = run({Backend::serial, 1});
  for (std::size_t i = 0; i < serial.size(); ++i) {
    const double scale = std::max(std::abs(reference[i].value), 1e-300);
    if (std::abs(serial[i].value - reference[i].value) / scale > 1e-12)
      return fail(fmt("serial reference differs on estimate ", i));
  }
  std::ostringstream workers;
  for (int w : worker_counts) workers << w << " ";
  return pass("bitwise-identical estimates for worker counts " + workers.str() +
              "and agreement with the serial reference");
}

Outcome variance_sanity(std::uint64_t seed) {
  double worst = 0.0;
  for (const auto& est : {estimate_upper_tail(300, 3.0, 10000, seed), estimate_pi_tail(1000, 5, 3.0, 30000, seed + 1),
                          estimate_good_vertices(300, 3.0, 2000, seed + 2).p_nonempty}) {
    const double p = est.value;
    const double expected = std::sqrt(p * (1 - p) / static_cast<double>(est.reps));
    worst = std::max(worst, std::abs(est.std_error - expected));
  }
  return {worst <= 1e-12, fmt("max |SE - sqrt(p(1-p)/reps)| = ", worst, " (limit 1e-12)")};
}

Outcome good_vertex_consistency(std::uint64_t n, double beta, std::uint64_t reps, std::uint64_t seed) {
  const auto g = estimate_good_vertices(n, beta, reps, seed);
  const auto up = estimate_upper_tail(n, beta, reps, seed + 1);
  const double slack = 3 * std::hypot(g.p_nonempty.std_error, up.std_error);
  return {g.p_nonempty.value <= up.value + slack,
          fmt("P(Sigma_n >= 1) = ", g.p_nonempty.value, " <= P(H_n >= b_n) = ", up.value, " + ", slack,
              "; E[Sigma_n] = ", g.mean_sigma.value)};
}

// ---------------------------------------------------------------------------
// registry

const std::vector<NamedCheck>& registry() {
  static const std::vector<NamedCheck> checks = [] {
    static constexpr std::size_t kEquivSizes[] = {4, 5};
    static constexpr std::int64_t kParts[] = {10, 20, 40};
    static constexpr std::int64_t kRatios[] = {20, 100};
    static constexpr std::uint64_t kSchemeSizes[] = {1000, 10000, 100000};
    static constexpr std::size_t kOmegaSizes[] = {50, 100, 200, 400};
    static constexpr double kLambdas[] = {1e-6, 0.1, 1.0, 10.0, 100.0};
    static constexpr std::uint64_t kIsSizes[] = {8, 16, 32};
    static constexpr std::uint64_t kUpperSizes[] = {1000, 10000, 100000};
    static constexpr std::uint64_t kUpperReps[] = {200000, 100000, 50000};
    static constexpr int kWorkers[] = {1, 4, 16};
    return std::vector<NamedCheck>{
        {"tree", "increasing_property", [] { return increasing_property(11); }},
        {"tree", "generator_equivalence", [] { return generator_equivalence(kEquivSizes, 100000, 12); }},
        {"tree", "composition_law", [] { return composition_law(6, 3, 100000, 13); }},
        {"tree", "level_set_recursion", [] { return level_set_recursion(200, 20000, 14); }},
        {"tree", "determinism", [] { return determinism(15); }},
        {"exact", "oracle_equality", [] { return oracle_equality(10, 9); }},
        {"exact", "bell_identity", [] { return bell_identity(25); }},
        {"exact", "product_tail_identity", [] { return product_tail_identity(20, 200); }},
        {"exact", "monotone_domination", [] { return monotone_domination(20, 200, mpq_class(1, 2)); }},
        {"exact", "max_part_bound", [] { return max_part_bound(kParts, kRatios); }},
        {"exact", "balanced_count_bound", [] { return balanced_count_bound(64, 65536); }},
        {"exact", "partition_oracle", [] { return partition_oracle(4, 12); }},
        {"exact", "partition_asymptotic", [] { return partition_asymptotic(kSchemeSizes); }},
        {"exact", "small_part_exchangeability", [] { return small_part_exchangeability(30, 5, 4); }},
        {"exact", "small_part_chernoff", [] { return small_part_chernoff(mpq_class(1, 2)); }},
        {"exact", "omega_trend", [] { return omega_trend(0.5, kOmegaSizes, 12); }},
        {"bounds", "root_degree_poisson_domination", [] { return root_degree_poisson_domination(100); }},
        {"bounds", "root_degree_chernoff", [] { return root_degree_chernoff(100); }},
        {"bounds", "gamma_poisson_duality", [] { return gamma_poisson_duality(200, 400.0); }},
        {"bounds", "rate_identity", [] { return rate_identity(); }},
        {"bounds", "level1_tail_bound", [] { return level1_tail_bound(10000, 0.9); }},
        {"bounds", "remark13", [] { return remark13(kLambdas); }},
        {"rare", "is_unbiasedness", [] { return is_unbiasedness(kIsSizes, 0.6, 100000, 21); }},
        {"rare", "lower_tail_is_point", [] { return lower_tail_is_point(64, 0.5, 0.6, 100000, 22); }},
        {"rare", "sandwich_containment", [] { return sandwich_containment(100000, 23); }},
        {"rare", "upper_tail_exponent", [] { return upper_tail_exponent(3.0, kUpperSizes, kUpperReps, 24); }},
        {"rare", "parallel_invariance", [] { return parallel_invariance(kWorkers, 25); }},
        {"rare", "variance_sanity", [] { return variance_sanity(26); }},
        {"rare", "good_vertex_consistency", [] { return good_vertex_consistency(1000, 3.0, 20000, 27); }},
    };
  }();
  return checks;
}

std::vector<std::string> suite_names() { return {"tree", "exact", "bounds", "rare"}; }

std::vector<CheckResult> run_suite(const std::string& suite) {
  const auto names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    throw std::invalid_argument("unknown suite '" + suite + "'");
  std::vector<CheckResult> results;
  for (const auto& check : registry()) {
    if (suite != "all" && check.suite != suite) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back({check.suite, check.name, std::move(outcome), secs});
  }
  return results;
}

bool print_report(std::ostream& os, const std::vector<CheckResult>& results) {
  std::size_t passed = 0;
  for (const auto& r : results) {
    os << (r.outcome.passed ? "[PASS] " : "[FAIL] ") << r.suite << "/" << r.name << ": " << r.outcome.detail
       << "\n";
    passed += r.outcome.passed ? 1 : 0;
  }
  os << passed << "/" << results.size() << " checks passed\n";
  return passed == results.size();
}

}  // namespace rrt::verify
