#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>

#include "rrt/random.hpp"
#include "rrt/tree.hpp"
#include "rrt/verify.hpp"

using namespace rrt;

namespace {

RecursiveTree figure_tree() {
  return RecursiveTree({0, 0, 1, 0, 1, 2, 3, 0, 4, 3, 0, 1, 2, 3});
}

}  // namespace

TEST_CASE("stream is deterministic and in range") {
  Stream a(7), b(7);
  for (int i = 0; i < 1000; ++i) CHECK(a() == b());
  Stream s(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(s.uniform_below(7) < 7u);
  }
  CHECK(s.uniform_below(1) == 0u);
  CHECK(derive_stream(1, 0)() != derive_stream(1, 1)());
  CHECK(derive_stream(1, 5)() == derive_stream(1, 5)());
}

TEST_CASE("recursive tree validates parents") {
  CHECK_NOTHROW(RecursiveTree({0, 1, 2}));
  CHECK_THROWS_AS(RecursiveTree({0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(RecursiveTree({1}), std::invalid_argument);
  const RecursiveTree t({0, 0, 1});
  CHECK(t.size() == 4);
  CHECK(t.parent(3) == 1);
}

TEST_CASE("small generators") {
  Stream s(11);
  const auto t1 = grow_uniform(1, s);
  CHECK(t1.size() == 1);
  CHECK(tree_stats(t1).height == 0);
  for (int i = 0; i < 20; ++i) {
    CHECK(grow_uniform(2, s).parents()[0] == 0);
    CHECK(grow_floor_map(2, s).parents()[0] == 0);
    CHECK(grow_yule(2, s).tree.parents()[0] == 0);
  }
  CHECK_THROWS_AS(grow_uniform(0, s), std::invalid_argument);
}

TEST_CASE("floor map parent") {
  CHECK(floor_map_parent(1, 0.7) == 0);
  CHECK(floor_map_parent(2, 0.6) == 1);
  CHECK(floor_map_parent(5, 0.9999999) == 4);
}

TEST_CASE("height of n=3 is 2 half the time") {
  const std::uint64_t reps = 100000;
  double hits = 0;
  Stream s(5);
  for (std::uint64_t i = 0; i < reps; ++i) hits += tree_stats(grow_uniform(3, s)).height == 2 ? 1 : 0;
  const double phat = hits / reps;
  CHECK(std::abs(phat - 0.5) <= 4 * std::sqrt(0.25 / reps));
}

TEST_CASE("floor map and uniform agree in distribution at n=50") {
  const std::uint64_t reps = 100000;
  std::vector<std::int64_t> a(reps), b(reps);
  for (std::uint64_t i = 0; i < reps; ++i) {
    Stream s = derive_stream(91, i);
    a[i] = tree_stats(grow_floor_map(50, s)).height;
    b[i] = tree_stats(grow_uniform(50, s)).height;
  }
  CHECK(verify::two_sample_chi_square_p(a, b) > 0.001);
}

TEST_CASE("yule height pmf at n=4") {
  const std::uint64_t reps = 100000;
  const double p[] = {0.0, 1.0 / 6, 4.0 / 6, 1.0 / 6};
  double hist[4] = {};
  for (std::uint64_t i = 0; i < reps; ++i) {
    Stream s = derive_stream(92, i);
    hist[tree_stats(grow_yule(4, s).tree).height] += 1;
  }
  for (int h = 0; h < 4; ++h)
    CHECK(std::abs(hist[h] / reps - p[h]) <= 4 * std::sqrt(p[h] * (1 - p[h]) / reps) + 1e-15);
}

TEST_CASE("yule birth times increase") {
  Stream s(4);
  const auto y = grow_yule(200, s);
  REQUIRE(y.birth_times.size() == 200);
  CHECK(y.birth_times[0] == 0.0);
  for (std::size_t i = 1; i < y.birth_times.size(); ++i) CHECK(y.birth_times[i] > y.birth_times[i - 1]);
}

TEST_CASE("tree stats") {
  const auto chain = tree_stats(RecursiveTree({0, 1, 2}));
  CHECK(chain.depths == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(chain.height == 3);
  CHECK(chain.level_sizes == std::vector<std::uint32_t>{1, 1, 1, 1});
  const auto star = tree_stats(RecursiveTree({0, 0, 0}));
  CHECK(star.height == 1);
  CHECK(star.level_sizes[1] == 3);
  Stream s(8);
  for (int i = 0; i < 50; ++i) {
    const auto st = tree_stats(grow_uniform(100, s));
    CHECK(std::accumulate(st.level_sizes.begin(), st.level_sizes.end(), std::uint64_t{0}) == 100u);
  }
}

TEST_CASE("subtree decomposition") {
  const auto fig = figure_tree();
  CHECK(subtree_decomposition(fig, 4).sizes == std::vector<std::size_t>{5, 3, 3, 4});
  CHECK(subtree_decomposition(fig, 1).sizes == std::vector<std::size_t>{15});
  CHECK(subtree_decomposition(fig, 15).sizes == std::vector<std::size_t>(15, 1));
  CHECK_THROWS_AS(subtree_decomposition(fig, 0), std::invalid_argument);
  CHECK_THROWS_AS(subtree_decomposition(fig, 16), std::invalid_argument);
}

TEST_CASE("ancestor walk") {
  const RecursiveTree chain({0, 1, 2});
  CHECK(ancestor(chain, 3, 0) == 3);
  CHECK(ancestor(chain, 3, 2) == 1);
  CHECK(ancestor(chain, 3, 10) == 0);
}

TEST_CASE("subtree sizes") {
  const auto sizes = subtree_sizes(RecursiveTree({0, 0, 1}));
  CHECK(sizes == std::vector<std::uint32_t>{4, 2, 1, 1});
}

TEST_CASE("fast height sampler matches tree_stats") {
  std::vector<std::uint32_t> scratch;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Stream a = derive_stream(3, i), b = derive_stream(3, i);
    CHECK(sample_uniform_height(300, a, scratch) == tree_stats(grow_uniform(300, b)).height);
    Stream c = derive_stream(3, i);
    const auto h = tree_stats(grow_uniform(300, c)).height;
    Stream d = derive_stream(3, i);
    CHECK(sample_uniform_reaches(300, 9, d, scratch) == (h >= 9));
    Stream e = derive_stream(3, i);
    CHECK(sample_uniform_reaches(300, 12, e, scratch) == (h >= 12));
  }
}

TEST_CASE("tilted growth") {
  Stream s(2);
  const auto t = grow_tilted(50, 1.0, s);
  CHECK(t.log_likelihood_ratio == doctest::Approx(0.0));
  const auto u = grow_tilted(50, 0.3, s);
  CHECK(u.tree.size() == 50);
}

TEST_CASE("registry checks for tree_core") {
  CHECK(verify::increasing_property(1).passed);
  CHECK(verify::determinism(2).passed);
  const std::size_t sizes[] = {4};
  CHECK(verify::generator_equivalence(sizes, 20000, 3).passed);
  CHECK(verify::composition_law(6, 3, 20000, 4).passed);
  CHECK(verify::level_set_recursion(100, 5000, 5).passed);
}

TEST_CASE("chi-square oracle") {
  std::vector<std::int64_t> a(1000, 1), b(1000, 1);
  for (int i = 0; i < 500; ++i) a[i] = b[i] = 2;
  CHECK(verify::two_sample_chi_square_p(a, b) == doctest::Approx(1.0));
  std::vector<std::int64_t> c(1000, 1);
  CHECK(verify::two_sample_chi_square_p(a, c) < 1e-6);
}
