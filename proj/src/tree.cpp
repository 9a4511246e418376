#include "rrt/tree.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

namespace rrt {

namespace {

void require_vertices(std::size_t n, const char* who) {
  if (n == 0) throw std::invalid_argument(std::string(who) + ": n must be >= 1");
  if (n > std::size_t{0xffffffffu})
    throw std::invalid_argument(std::string(who) + ": n exceeds 32-bit vertex range");
}

}  // namespace

RecursiveTree::RecursiveTree(std::vector<Vertex> parents) : parents_(std::move(parents)) {
  for (std::size_t i = 0; i < parents_.size(); ++i) {
    if (parents_[i] > i)
      throw std::invalid_argument("RecursiveTree: parent of vertex " + std::to_string(i + 1) +
                                  " is " + std::to_string(parents_[i]) +
                                  ", not an earlier vertex");
  }
}

RecursiveTree grow_uniform(std::size_t n, Stream& stream) {
  require_vertices(n, "grow_uniform");
  std::vector<Vertex> parents(n - 1);
  for (std::size_t t = 1; t < n; ++t)
    parents[t - 1] = static_cast<Vertex>(stream.uniform_below(t));
  return RecursiveTree(std::move(parents));
}

RecursiveTree grow_floor_map(std::size_t n, Stream& stream) {
  require_vertices(n, "grow_floor_map");
  std::vector<Vertex> parents(n - 1);
  for (std::size_t t = 1; t < n; ++t) {
    parents[t - 1] = floor_map_parent(t, stream.uniform01());
  }
  return RecursiveTree(std::move(parents));
}

YuleTree grow_yule(std::size_t n, Stream& stream) {
  require_vertices(n, "grow_yule");
  // (next birth time, individual); min-heap on time.
  using Clock = std::pair<double, Vertex>;
  std::priority_queue<Clock, std::vector<Clock>, std::greater<>> pending;

  std::vector<Vertex> parents;
  parents.reserve(n - 1);
  std::vector<double> births{0.0};
  births.reserve(n);

  pending.emplace(stream.exponential(), Vertex{0});
  while (births.size() < n) {
    const auto [time, mother] = pending.top();
    pending.pop();
    const auto child = static_cast<Vertex>(births.size());
    parents.push_back(mother);
    births.push_back(time);
    pending.emplace(time + stream.exponential(), mother);
    pending.emplace(time + stream.exponential(), child);
  }
  return {RecursiveTree(std::move(parents)), std::move(births)};
}

TiltedTree grow_tilted(std::size_t n, double theta, Stream& stream) {
  require_vertices(n, "grow_tilted");
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("grow_tilted: theta must lie in (0, 1]");

  std::vector<std::vector<Vertex>> by_depth{{0}};
  std::vector<double> power{1.0};  // theta^d
  std::vector<Vertex> parents;
  parents.reserve(n - 1);
  double total = 1.0;  // sum over existing vertices of theta^depth
  double log_lr = 0.0;

  for (std::size_t t = 1; t < n; ++t) {
    const double target = stream.uniform01() * total;
    std::size_t d = 0;
    double acc = 0.0;
    for (; d + 1 < by_depth.size(); ++d) {
      acc += static_cast<double>(by_depth[d].size()) * power[d];
      if (target < acc) break;
    }
    while (by_depth[d].empty()) --d;
    const auto& level = by_depth[d];
    const Vertex chosen = level[stream.uniform_below(level.size())];
    parents.push_back(chosen);

    // (1/t) / (theta^d / total)
    log_lr += std::log(total) - std::log(static_cast<double>(t)) - std::log(power[d]);

    if (d + 1 == by_depth.size()) {
      by_depth.emplace_back();
      power.push_back(power.back() * theta);
    }
    by_depth[d + 1].push_back(static_cast<Vertex>(t));
    total += power[d + 1];
  }
  return {RecursiveTree(std::move(parents)), log_lr};
}

TreeStats tree_stats(const RecursiveTree& tree) {
  const std::size_t n = tree.size();
  TreeStats stats;
  stats.depths.assign(n, 0);
  for (std::size_t t = 1; t < n; ++t) {
    const std::uint32_t d = stats.depths[tree.parent(static_cast<Vertex>(t))] + 1;
    stats.depths[t] = d;
    stats.height = std::max(stats.height, d);
  }
  stats.level_sizes.assign(stats.height + 1, 0);
  for (const auto d : stats.depths) ++stats.level_sizes[d];
  return stats;
}

SubtreeDecomposition subtree_decomposition(const RecursiveTree& tree, std::size_t m) {
  const std::size_t n = tree.size();
  if (m < 1 || m > n)
    throw std::invalid_argument("subtree_decomposition: m must lie in [1, " +
                                std::to_string(n) + "], got " + std::to_string(m));
  std::vector<Vertex> component(n);
  SubtreeDecomposition out{m, std::vector<std::size_t>(m, 0)};
  for (std::size_t x = 0; x < n; ++x) {
    component[x] = x < m ? static_cast<Vertex>(x) : component[tree.parent(static_cast<Vertex>(x))];
    ++out.sizes[component[x]];
  }
  return out;
}

Vertex ancestor(const RecursiveTree& tree, Vertex x, std::uint64_t k) {
  if (x >= tree.size())
    throw std::invalid_argument("ancestor: vertex " + std::to_string(x) + " out of range");
  for (; k > 0 && x != 0; --k) x = tree.parent(x);
  return x;
}

std::vector<std::uint32_t> subtree_sizes(const RecursiveTree& tree) {
  const std::size_t n = tree.size();
  std::vector<std::uint32_t> sizes(n, 1);
  // Children carry larger labels, so a reverse sweep sees every child first.
  for (std::size_t t = n - 1; t >= 1; --t) sizes[tree.parent(static_cast<Vertex>(t))] += sizes[t];
  return sizes;
}

std::uint32_t sample_uniform_height(std::size_t n, Stream& stream,
                                    std::vector<std::uint32_t>& depth) {
  require_vertices(n, "sample_uniform_height");
  depth.resize(n);
  depth[0] = 0;
  std::uint32_t height = 0;
  for (std::size_t t = 1; t < n; ++t) {
    const std::uint32_t d = depth[stream.uniform_below(t)] + 1;
    depth[t] = d;
    height = std::max(height, d);
  }
  return height;
}

bool sample_uniform_reaches(std::size_t n, std::uint32_t target, Stream& stream,
                            std::vector<std::uint32_t>& depth) {
  require_vertices(n, "sample_uniform_reaches");
  if (target == 0) return true;
  depth.resize(n);
  depth[0] = 0;
  for (std::size_t t = 1; t < n; ++t) {
    const std::uint32_t d = depth[stream.uniform_below(t)] + 1;
    if (d >= target) return true;
    depth[t] = d;
  }
  return false;
}

}  // namespace rrt
