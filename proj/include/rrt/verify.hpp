#pragma once

// Named invariant checks, grouped into suites. The CLI `verify` command and
// the acceptance binary both run these.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "rrt/replicates.hpp"

namespace rrt::verify {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct NamedCheck {
  std::string suite;
  std::string name;
  std::function<Outcome()> run;
};

struct CheckResult {
  std::string suite;
  std::string name;
  Outcome outcome;
  double seconds = 0.0;
};

/// Suites: "tree", "exact", "bounds", "rare". Heavy default parameters match
/// the acceptance thresholds.
const std::vector<NamedCheck>& registry();

std::vector<std::string> suite_names();

/// Runs "all" or one suite; throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_suite(const std::string& suite);

// --- independent oracles -------------------------------------------------

/// Bell numbers B_0..B_count-1 from the Bell triangle.
std::vector<mpz_class> bell_numbers(std::size_t count);

/// Set partitions of an N-set whose block sizes are d-1 blocks of s+1 and one
/// block of s+1+r (the partition_scheme shape), by exhaustive enumeration.
std::uint64_t enumerate_scheme_partitions(std::uint64_t N);

/// p-value of the two-sample chi-square homogeneity test on integer samples;
/// adjacent values are pooled until each bin holds at least `min_bin` points.
double two_sample_chi_square_p(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                               std::size_t min_bin = 10);

// --- tree_core ------------------------------------------------------------
Outcome increasing_property(std::uint64_t seed);
Outcome generator_equivalence(std::span<const std::size_t> sizes, std::uint64_t reps,
                              std::uint64_t seed);
Outcome composition_law(std::size_t n, std::size_t m, std::uint64_t reps, std::uint64_t seed);
Outcome level_set_recursion(std::size_t n, std::uint64_t reps, std::uint64_t seed);
Outcome determinism(std::uint64_t seed);

// --- exact_engine ---------------------------------------------------------
Outcome oracle_equality(std::size_t n_max, std::size_t k_max);
Outcome bell_identity(std::size_t n_max);
Outcome product_tail_identity(std::int64_t m_max, std::int64_t n_max);
Outcome monotone_domination(std::int64_t m_max, std::int64_t n_max, const mpq_class& theta);
Outcome max_part_bound(std::span<const std::int64_t> parts, std::span<const std::int64_t> ratios);
Outcome balanced_count_bound(std::int64_t m, std::int64_t n);
Outcome partition_oracle(std::uint64_t lo, std::uint64_t hi);
Outcome partition_asymptotic(std::span<const std::uint64_t> sizes);
Outcome small_part_exchangeability(std::int64_t n, std::int64_t m, std::int64_t cap);
Outcome small_part_chernoff(const mpq_class& theta);
Outcome omega_trend(double alpha, std::span<const std::size_t> sizes, std::size_t k_max);

// --- analytic_bounds ------------------------------------------------------
Outcome root_degree_poisson_domination(std::size_t n);
Outcome root_degree_chernoff(std::size_t n);
Outcome gamma_poisson_duality(std::uint64_t k_max, double z_max);
Outcome rate_identity();
Outcome level1_tail_bound(std::size_t n, double rho);
Outcome remark13(std::span<const double> lambdas);

// --- rare_event -----------------------------------------------------------
Outcome is_unbiasedness(std::span<const std::uint64_t> sizes, double theta, std::uint64_t reps,
                        std::uint64_t seed);
Outcome lower_tail_is_point(std::uint64_t n, double alpha, double theta, std::uint64_t reps,
                            std::uint64_t seed);
Outcome sandwich_containment(std::uint64_t reps, std::uint64_t seed, const Execution& exec = {});
Outcome upper_tail_exponent(double beta, std::span<const std::uint64_t> sizes,
                            std::span<const std::uint64_t> reps, std::uint64_t seed);
Outcome parallel_invariance(std::span<const int> worker_counts, std::uint64_t seed);
Outcome variance_sanity(std::uint64_t seed);
Outcome good_vertex_consistency(std::uint64_t n, double beta, std::uint64_t reps, std::uint64_t seed);

/// "[PASS] suite/name: detail" lines plus a summary; returns true when all passed.
bool print_report(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace rrt::verify
