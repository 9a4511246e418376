#pragma once

// Replicate-level Monte Carlo driver.
//
// Two implementations of the same contract:
//   * run_replicates_serial: one pass, one running accumulator. Reference
//     implementation, kept for testing and benchmarking.
//   * run_replicates_omp: fixed blocks of kReplicateBlock replicates summed
//     in order, then a pairwise reduction over blocks in index order. The
//     result depends only on (reps, root_seed, fn), never on the number of
//     workers or on scheduling.
// Replicate i always draws from derive_stream(root_seed, i).

#include <omp.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rrt/random.hpp"

namespace rrt {

enum class Backend { serial, openmp };

struct Execution {
  Backend backend = Backend::openmp;
  /// 0 selects default_workers().
  int workers = 0;
};

/// omp_get_max_threads(), capped by the RRT_LDP_THREADS environment variable
/// when it holds a positive integer.
int default_workers();

inline constexpr std::uint64_t kReplicateBlock = 1024;

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double v) noexcept {
    sum += v;
    sum_sq += v * v;
  }
  friend Moments operator+(Moments a, const Moments& b) noexcept {
    a.sum += b.sum;
    a.sum_sq += b.sum_sq;
    return a;
  }
};

template <std::size_t K>
using MomentSet = std::array<Moments, K>;

namespace detail {

template <std::size_t K>
MomentSet<K> merge(const MomentSet<K>& a, const MomentSet<K>& b) {
  MomentSet<K> out;
  for (std::size_t c = 0; c < K; ++c) out[c] = a[c] + b[c];
  return out;
}

template <std::size_t K>
MomentSet<K> pairwise_reduce(std::span<const MomentSet<K>> parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts.front();
  const std::size_t half = parts.size() / 2;
  return merge<K>(pairwise_reduce<K>(parts.first(half)), pairwise_reduce<K>(parts.subspan(half)));
}

}  // namespace detail

/// fn(Stream&, replicate index) -> std::array<double, K>
template <std::size_t K, class Fn>
MomentSet<K> run_replicates_serial(std::uint64_t reps, std::uint64_t root_seed, Fn&& fn) {
  MomentSet<K> acc{};
  for (std::uint64_t i = 0; i < reps; ++i) {
    Stream stream = derive_stream(root_seed, i);
    const std::array<double, K> v = fn(stream, i);
    for (std::size_t c = 0; c < K; ++c) acc[c].add(v[c]);
  }
  return acc;
}

template <std::size_t K, class Fn>
MomentSet<K> run_replicates_omp(std::uint64_t reps, std::uint64_t root_seed, Fn&& fn, int workers) {
  const std::uint64_t blocks = (reps + kReplicateBlock - 1) / kReplicateBlock;
  std::vector<MomentSet<K>> partial(blocks);
  const auto nblocks = static_cast<std::int64_t>(blocks);

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kReplicateBlock;
    const std::uint64_t end = begin + kReplicateBlock < reps ? begin + kReplicateBlock : reps;
    MomentSet<K> acc{};
    for (std::uint64_t i = begin; i < end; ++i) {
      Stream stream = derive_stream(root_seed, i);
      const std::array<double, K> v = fn(stream, i);
      for (std::size_t c = 0; c < K; ++c) acc[c].add(v[c]);
    }
    partial[static_cast<std::size_t>(b)] = acc;
  }
  return detail::pairwise_reduce<K>(std::span<const MomentSet<K>>(partial));
}

template <std::size_t K, class Fn>
MomentSet<K> run_replicates(std::uint64_t reps, std::uint64_t root_seed, Fn&& fn,
                            const Execution& exec = {}) {
  if (exec.backend == Backend::serial) return run_replicates_serial<K>(reps, root_seed, fn);
  const int workers = exec.workers > 0 ? exec.workers : default_workers();
  return run_replicates_omp<K>(reps, root_seed, fn, workers);
}

}  // namespace rrt
