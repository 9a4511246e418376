#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rrt/exact.hpp"
#include "rrt/rare_event.hpp"
#include "rrt/replicates.hpp"
#include "rrt/verify.hpp"

using namespace rrt;

TEST_CASE("upper threshold") {
  CHECK(upper_tail_threshold(1000, 3.0) == 21);  // 3 ln 1000 = 20.72
  CHECK(upper_tail_threshold(8, 3.0 / std::log(8.0)) == 3);
}

TEST_CASE("impossible upper event") {
  const auto est = estimate_upper_tail(10, 10.0, 1000, 1);
  CHECK(est.value == 0.0);
  CHECK(est.std_error == 0.0);
  CHECK(est.threshold == 24);
}

TEST_CASE("upper tail at n=8 against the exact table") {
  const auto est = estimate_upper_tail(8, 3.0 / std::log(8.0), 100000, 2);
  const auto t = build_cdf_table(8, 2);
  const double exact = 1.0 - exact_height_cdf(t, 8, 2).approx;
  CHECK(est.threshold == 3);
  CHECK(std::abs(est.value - exact) <= 3 * est.std_error);
}

TEST_CASE("upper tail at n=100 against the exact table") {
  const auto est = estimate_upper_tail(100, 3.0, 200000, 8);
  const auto t = build_cdf_table(100, 13);
  const double exact = 1.0 - exact_height_cdf(t, 100, 13).approx;  // about 1.32e-3
  CHECK(est.threshold == 14);
  CHECK(std::abs(est.value - exact) <= 3 * est.std_error);
}

TEST_CASE("single-step likelihood ratio at n=3") {
  // third vertex on the root under theta = 0.5: (1/2) / (1/(1 + 0.5)) = 0.75
  int seen = 0;
  for (std::uint64_t i = 0; i < 200 && seen < 5; ++i) {
    Stream s = derive_stream(17, i);
    const auto t = grow_tilted(3, 0.5, s);
    if (t.tree.parent(2) != 0) continue;
    ++seen;
    CHECK(std::exp(t.log_likelihood_ratio) == doctest::Approx(0.75).epsilon(1e-14));
  }
  CHECK(seen == 5);
}

TEST_CASE("same seed gives the same estimate") {
  CHECK(estimate_upper_tail(500, 3.0, 3000, 9) == estimate_upper_tail(500, 3.0, 3000, 9));
  CHECK(estimate_lower_tail_is(64, 0.5, {0.6}, 3000, 9) == estimate_lower_tail_is(64, 0.5, {0.6}, 3000, 9));
}

TEST_CASE("theta = 1 is plain Monte Carlo") {
  const auto est = estimate_height_at_most_is(8, 3, {1.0}, 50000, 4);
  const auto t = build_cdf_table(8, 3);
  const double exact = exact_height_cdf(t, 8, 3).approx;
  CHECK(std::abs(est.value - exact) <= 3 * est.std_error);
  // weights are 0 or 1, so the indicator variance formula applies
  CHECK(est.std_error == doctest::Approx(std::sqrt(est.value * (1 - est.value) / 50000)).epsilon(1e-10));
}

TEST_CASE("tilted estimator on small trees") {
  const auto t = build_cdf_table(16, 15);
  for (std::int64_t k : {2, 3, 5}) {
    const auto est = estimate_height_at_most_is(16, k, {0.6}, 50000, 10 + k);
    const double exact = exact_height_cdf(t, 16, k).approx;
    CHECK(std::abs(est.value - exact) <= 3 * est.std_error);
  }
  CHECK(estimate_height_at_most_is(16, 0, {0.6}, 100, 1).value == 0.0);
  CHECK_THROWS_AS(estimate_lower_tail_is(16, 1.5, {0.6}, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(estimate_height_at_most_is(16, 3, {0.0}, 100, 1), std::invalid_argument);
}

TEST_CASE("pi chain") {
  const auto est = estimate_pi_tail(10, 1, std::numbers::e, 100000, 5);
  CHECK(std::abs(est.value - 0.3) <= 3 * est.std_error);
  CHECK(estimate_pi_tail(1, 1, 3.0, 1000, 5).value == 0.0);
  CHECK(estimate_pi_tail(1, 4, 3.0, 1000, 5).value == 0.0);
}

TEST_CASE("good vertices") {
  const RecursiveTree chain({0, 1, 2});
  CHECK(is_good_vertex(chain, 3, 0, 3.0));
  CHECK(is_good_vertex(chain, 2, 0, 3.0));
  const RecursiveTree star({0, 0, 0});
  CHECK_FALSE(is_good_vertex(star, 3, 1, 3.0));
  CHECK_THROWS_AS(estimate_good_vertices(100, 2.0, 10, 1), std::invalid_argument);
  const auto g = estimate_good_vertices(200, 3.0, 2000, 6);
  CHECK(g.p_nonempty.value <= 1.0);
  CHECK(g.mean_sigma.value >= g.p_nonempty.value);
}

TEST_CASE("serial and OpenMP drivers agree") {
  auto fn = [](Stream& s, std::uint64_t) { return std::array<double, 1>{s.uniform01() < 0.3 ? 1.0 : 0.0}; };
  const auto serial = run_replicates_serial<1>(10000, 3, fn);
  for (int w : {1, 2, 3, 8}) {
    const auto omp = run_replicates_omp<1>(10000, 3, fn, w);
    CHECK(omp[0].sum == serial[0].sum);
    CHECK(omp[0].sum_sq == serial[0].sum_sq);
  }
  auto real_fn = [](Stream& s, std::uint64_t) { return std::array<double, 1>{s.exponential()}; };
  const auto a = run_replicates_omp<1>(5000, 4, real_fn, 1);
  const auto b = run_replicates_omp<1>(5000, 4, real_fn, 7);
  CHECK(a[0].sum == b[0].sum);
  const auto c = run_replicates_serial<1>(5000, 4, real_fn);
  CHECK(c[0].sum == doctest::Approx(a[0].sum).epsilon(1e-12));
}

TEST_CASE("worker cap from the environment") {
  setenv("RRT_LDP_THREADS", "1", 1);
  CHECK(default_workers() == 1);
  setenv("RRT_LDP_THREADS", "junk", 1);
  CHECK(default_workers() >= 1);
  unsetenv("RRT_LDP_THREADS");
}

TEST_CASE("registry checks for rare_event at reduced size") {
  const int workers[] = {1, 3};
  CHECK(verify::parallel_invariance(workers, 1).passed);
  CHECK(verify::variance_sanity(2).passed);
  CHECK(verify::lower_tail_is_point(64, 0.5, 0.6, 20000, 3).passed);
}
