#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rrt/exact.hpp"
#include "rrt/verify.hpp"

using namespace rrt;

TEST_CASE("cdf table small values") {
  const auto t = build_cdf_table(6, 5);
  CHECK(t.count(1, 0) == 1);
  CHECK(t.count(2, 0) == 0);
  CHECK(t.count(2, 1) == 1);
  CHECK(t.count(4, 2) == 5);
  CHECK(t.count(4, 1) == 1);
  CHECK(t.count(4, 3) == 6);
  CHECK(t.count(6, 5) == 120);
  CHECK_THROWS_AS(t.count(7, 0), std::invalid_argument);
  CHECK_THROWS_AS(t.count(3, 6), std::invalid_argument);
}

TEST_CASE("exact probability") {
  const auto t = build_cdf_table(4, 3);
  const auto p = exact_height_cdf(t, 3, 1);
  CHECK(p.value == mpq_class(1, 2));
  CHECK(p.approx == 0.5);
  CHECK(p.decimal.rfind("5.000000000", 0) == 0);
  CHECK(exact_height_cdf(t, 4, 2).value == mpq_class(5, 6));
}

TEST_CASE("resource limits") {
  CHECK_THROWS_AS(build_cdf_table(kCdfTableMaxN + 1, 3), ResourceLimitError);
  CHECK_THROWS_AS(build_cdf_table(4000, 4000), ResourceLimitError);
  CHECK_THROWS_AS(build_cdf_table(2000, 25), ResourceLimitError);
  CHECK_THROWS_AS(brute_force_height_dist(kBruteForceMaxN + 1), ResourceLimitError);
}

TEST_CASE("brute-force height distribution") {
  const auto d1 = brute_force_height_dist(1);
  CHECK(d1.size() == 1);
  CHECK(d1.at(0) == 1);
  const auto d3 = brute_force_height_dist(3);
  CHECK(d3.at(1) == 1);
  CHECK(d3.at(2) == 1);
  const auto d4 = brute_force_height_dist(4);
  CHECK(d4.at(1) == 1);
  CHECK(d4.at(2) == 4);
  CHECK(d4.at(3) == 1);
}

TEST_CASE("lower-tail threshold and omega") {
  CHECK(lower_tail_threshold(10, 0.5) == 3);  // 0.5 e ln 10 = 3.129
  const auto t = build_cdf_table(10, 9);
  const auto w = omega_alpha(t, 10, 0.5);
  const auto d = brute_force_height_dist(10);
  mpz_class a3 = 0;
  for (const auto& [h, c] : d)
    if (h <= 3) a3 += c;
  const double f = mpq_class(a3, factorial(9)).get_d();
  CHECK(w.threshold == 3);
  CHECK(w.neg_ln_f == doctest::Approx(-std::log(f)).epsilon(1e-12));
  const double scale = std::sqrt(10.0) * std::pow(std::log(10.0), -3.0 / (2.0 * std::numbers::e));
  CHECK(w.omega == doctest::Approx(-std::log(f) / scale).epsilon(1e-12));
  const auto w3 = omega_alpha(build_cdf_table(3, 2), 3, 0.9);
  CHECK(w3.threshold == 2);
  CHECK(w3.omega == 0.0);
  CHECK_THROWS_AS(omega_alpha(t, 10, 1.5), std::invalid_argument);
  CHECK(std::isinf(omega_alpha(t, 2, 0.1).omega));
}

TEST_CASE("partition scheme") {
  const auto p4 = partition_scheme(4);
  CHECK(p4.s == 1);
  CHECK(p4.d == 2);
  CHECK(p4.r == 0);
  CHECK(p4.count == 3);
  const auto p10 = partition_scheme(10);
  CHECK(p10.s == 2);
  CHECK(p10.d == 3);
  CHECK(p10.r == 1);
  CHECK(p10.count == 2100);
  CHECK(partition_scheme(12).count == mpz_class(std::to_string(verify::enumerate_scheme_partitions(12))));
  CHECK(verify::enumerate_scheme_partitions(10) == 2100);
  CHECK_THROWS_AS(partition_scheme(2), std::invalid_argument);
}

TEST_CASE("composition counts") {
  CHECK(count_compositions_bounded(5, 2, 1, 5) == 4);
  CHECK(count_compositions_bounded(5, 2, 1, 3) == 2);
  CHECK(count_compositions_bounded(4, 4, 1, 1) == 1);
  CHECK(count_compositions_bounded(4, 5, 1, 1) == 0);
  const PartRange parts[] = {{2, 3}, {1, 1}, {1, 4}};
  CHECK(count_compositions(5, parts) == 2);  // (2,1,2), (3,1,1)
  CHECK(count_compositions_bounded(20, 5, 1, 20) == binomial(19, 4));
}

TEST_CASE("small-part distribution") {
  const auto pmf = small_part_count_dist(5, 2, 3);
  REQUIRE(pmf.size() == 3);
  CHECK(pmf[0] == 0);
  CHECK(pmf[1] == 1);
  CHECK(pmf[2] == 0);
  const auto one = small_part_count_dist(7, 3, 1);
  CHECK(one[0] == 1);
  CHECK(verify::small_part_exchangeability(30, 5, 4).passed);
}

TEST_CASE("subtree tail product") {
  CHECK(subtree_tail_product(2, 5, 0) == 1);
  CHECK(subtree_tail_product(2, 5, 2) == mpq_class(1, 2));
  CHECK(subtree_tail_product(3, 5, 3) == 0);
  CHECK(subtree_tail_product(1, 5, 4) == 1);
}

TEST_CASE("helpers") {
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(3, 10) == 0);
  CHECK(factorial(0) == 1);
  CHECK(factorial(10) == 3628800);
  CHECK(to_decimal(mpq_class(1, 3), 5).rfind("3.3333", 0) == 0);
  CHECK(at_least_exp_neg(mpq_class(1, 2), 1));   // e^-1 = 0.3679
  CHECK_FALSE(at_least_exp_neg(mpq_class(1, 3), 1));
}

TEST_CASE("bell triangle") {
  const auto b = verify::bell_numbers(8);
  const long expected[] = {1, 1, 2, 5, 15, 52, 203, 877};
  for (int i = 0; i < 8; ++i) CHECK(b[i] == expected[i]);
}

TEST_CASE("registry checks for exact_engine at reduced size") {
  CHECK(verify::oracle_equality(8, 7).passed);
  CHECK(verify::bell_identity(25).passed);
  CHECK(verify::product_tail_identity(6, 40).passed);
  CHECK(verify::monotone_domination(6, 40, mpq_class(1, 2)).passed);
  const std::int64_t parts[] = {10};
  const std::int64_t ratios[] = {20};
  CHECK(verify::max_part_bound(parts, ratios).passed);
  CHECK(verify::balanced_count_bound(8, 512).passed);
  CHECK(verify::partition_oracle(4, 10).passed);
}
