#pragma once

// Seeded Monte Carlo estimators for tail events of the tree height, the
// parent-chain (pi-chain) tail and the good-vertex count.

#include <cstdint>
#include <string>

#include "rrt/replicates.hpp"
#include "rrt/tree.hpp"

namespace rrt {

struct TailEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t reps = 0;
  std::uint64_t root_seed = 0;
  std::string event_desc;
  /// Integer threshold the event was evaluated at.
  std::int64_t threshold = 0;

  friend bool operator==(const TailEstimate&, const TailEstimate&) = default;
};

/// Importance-sampling proposal: attachment weight theta^depth.
struct TiltConfig {
  double theta = 1.0;
};

struct GoodVertexEstimate {
  TailEstimate mean_sigma;  // E[Sigma_n]
  TailEstimate p_nonempty;  // P(Sigma_n >= 1)
};

/// ceil(beta ln n), snapping values within 1e-9 of an integer.
std::int64_t upper_tail_threshold(std::uint64_t n, double beta);

/// Mean and standard error sqrt((E[v^2] - E[v]^2) / reps) from raw moments.
TailEstimate summarize(const Moments& m, std::uint64_t reps, std::uint64_t root_seed);

/// P(H_n >= ceil(beta ln n)) by plain Monte Carlo over uniform trees.
TailEstimate estimate_upper_tail(std::uint64_t n, double beta, std::uint64_t reps,
                                 std::uint64_t root_seed, const Execution& exec = {});

/// P(H_n <= k) by importance sampling under the theta^depth tilt, weighted by
/// the exact likelihood ratio. Unbiased for every theta in (0,1].
TailEstimate estimate_height_at_most_is(std::uint64_t n, std::int64_t k, TiltConfig tilt,
                                        std::uint64_t reps, std::uint64_t root_seed,
                                        const Execution& exec = {});

/// P(H_n <= floor(alpha e ln n)) through estimate_height_at_most_is.
TailEstimate estimate_lower_tail_is(std::uint64_t n, double alpha, TiltConfig tilt,
                                    std::uint64_t reps, std::uint64_t root_seed,
                                    const Execution& exec = {});

/// P(pi^(k)(n) >= n e^{-k/beta}), iterating x <- floor(x U) from x = n.
TailEstimate estimate_pi_tail(std::uint64_t n, std::uint64_t k, double beta, std::uint64_t reps,
                              std::uint64_t root_seed, const Execution& exec = {});

/// Sigma_n = #{x in [n/2, n-1] : x in G_beta(b_n)}, b_n = ceil(beta ln n),
/// on floor-map trees.
GoodVertexEstimate estimate_good_vertices(std::uint64_t n, double beta, std::uint64_t reps,
                                          std::uint64_t root_seed, const Execution& exec = {});

/// x in G_beta(k): pi^(j)(x) >= x e^{-j/beta} for every 1 <= j <= k.
bool is_good_vertex(const RecursiveTree& tree, Vertex x, std::uint64_t k, double beta);

}  // namespace rrt
