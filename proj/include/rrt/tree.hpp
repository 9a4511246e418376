#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "rrt/random.hpp"

namespace rrt {

using Vertex = std::uint32_t;

/// Increasing tree on vertices {0, ..., n-1} rooted at 0, stored as a parent
/// array: parent(t) for t >= 1 is parents()[t-1] and always lies in [0, t).
class RecursiveTree {
 public:
  /// Single root, no edges.
  RecursiveTree() = default;

  /// Validates the increasing property; throws std::invalid_argument.
  explicit RecursiveTree(std::vector<Vertex> parents);

  std::size_t size() const noexcept { return parents_.size() + 1; }
  std::span<const Vertex> parents() const noexcept { return parents_; }
  Vertex parent(Vertex t) const noexcept { return parents_[t - 1]; }

  friend bool operator==(const RecursiveTree&, const RecursiveTree&) = default;

 private:
  std::vector<Vertex> parents_;
};

struct TreeStats {
  std::vector<std::uint32_t> depths;
  std::uint32_t height = 0;
  /// level_sizes[k] is the number of vertices at depth k.
  std::vector<std::uint32_t> level_sizes;
};

struct SubtreeDecomposition {
  std::size_t m = 0;
  /// sizes[j]: vertices of the component containing j once every edge with
  /// both endpoints in {0, ..., m-1} is removed.
  std::vector<std::size_t> sizes;
};

struct YuleTree {
  RecursiveTree tree;
  /// birth_times[t] is the birth time of vertex t; birth_times[0] = 0.
  std::vector<double> birth_times;
};

/// Tree grown under the depth-tilted kernel together with the log of the
/// likelihood ratio (uniform law over tilted law) of the realized choices.
struct TiltedTree {
  RecursiveTree tree;
  double log_likelihood_ratio = 0.0;
};

/// Vertex t attaches to a parent drawn uniformly from {0, ..., t-1}.
RecursiveTree grow_uniform(std::size_t n, Stream& stream);

/// floor(t * u) for u in [0,1).
inline Vertex floor_map_parent(std::size_t t, double u) {
  return static_cast<Vertex>(std::floor(static_cast<double>(t) * u));
}

/// Vertex t attaches to floor(t * U_t), U_t uniform in [0,1).
RecursiveTree grow_floor_map(std::size_t n, Stream& stream);

/// Family tree of a unit-rate Yule process stopped at the n-th birth,
/// simulated with one exponential clock per living individual.
YuleTree grow_yule(std::size_t n, Stream& stream);

/// Vertex t attaches to v with probability theta^depth(v) / sum_w theta^depth(w).
/// theta = 1 is the uniform law. Throws std::invalid_argument unless theta in (0,1].
TiltedTree grow_tilted(std::size_t n, double theta, Stream& stream);

TreeStats tree_stats(const RecursiveTree& tree);

/// Throws std::invalid_argument unless 1 <= m <= n.
SubtreeDecomposition subtree_decomposition(const RecursiveTree& tree, std::size_t m);

/// k-fold parent map, clamped at the root. Throws std::invalid_argument
/// when x is not a vertex.
Vertex ancestor(const RecursiveTree& tree, Vertex x, std::uint64_t k);

/// Number of vertices in the subtree rooted at each vertex (itself included).
std::vector<std::uint32_t> subtree_sizes(const RecursiveTree& tree);

/// Height of a uniform tree on n vertices. Consumes the stream exactly as
/// grow_uniform does, so the tree is the one grow_uniform would return.
/// `depth_scratch` is resized as needed and reused between calls.
std::uint32_t sample_uniform_height(std::size_t n, Stream& stream,
                                    std::vector<std::uint32_t>& depth_scratch);

/// Whether a uniform tree on n vertices reaches depth `target`. Same stream
/// usage as grow_uniform up to the first vertex at depth `target`, where it
/// stops drawing.
bool sample_uniform_reaches(std::size_t n, std::uint32_t target, Stream& stream,
                            std::vector<std::uint32_t>& depth_scratch);

}  // namespace rrt
