#include "rrt/rare_event.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rrt/exact.hpp"

namespace rrt {

namespace {

void require_reps(std::uint64_t reps) {
  if (reps < 1) throw std::invalid_argument("estimator: reps must be >= 1");
}

std::string describe(const std::string& event, std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream os;
  os.precision(17);
  os << event;
  for (const auto& [name, value] : params) os << ", " << name << "=" << value;
  return os.str();
}

// One depth-tilted growth; returns the likelihood-ratio weight of the event
// {H_n <= k}, i.e. zero as soon as a vertex lands below depth k.
double tilted_weight(std::uint64_t n, std::int64_t k, double theta, Stream& stream,
                     std::vector<std::uint64_t>& count, std::vector<double>& power) {
  const auto levels = static_cast<std::size_t>(k) + 1;
  count.assign(levels, 0);
  count[0] = 1;
  power.resize(levels);
  power[0] = 1.0;
  for (std::size_t d = 1; d < levels; ++d) power[d] = power[d - 1] * theta;

  const double log_theta = std::log(theta);
  double total = 1.0;
  double log_lr = 0.0;
  std::size_t deepest = 0;
  for (std::uint64_t t = 1; t < n; ++t) {
    const double target = stream.uniform01() * total;
    std::size_t d = 0;
    double acc = 0.0;
    for (; d < deepest; ++d) {
      acc += static_cast<double>(count[d]) * power[d];
      if (target < acc) break;
    }
    if (d + 1 >= levels) return 0.0;
    log_lr += std::log(total) - std::log(static_cast<double>(t)) - static_cast<double>(d) * log_theta;
    ++count[d + 1];
    total += power[d + 1];
    if (d + 1 > deepest) deepest = d + 1;
  }
  return std::exp(log_lr);
}

}  // namespace

std::int64_t upper_tail_threshold(std::uint64_t n, double beta) {
  const double x = beta * std::log(static_cast<double>(n));
  const double r = std::round(x);
  if (std::abs(x - r) < 1e-9) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

TailEstimate summarize(const Moments& m, std::uint64_t reps, std::uint64_t root_seed) {
  TailEstimate e;
  const double r = static_cast<double>(reps);
  e.value = m.sum / r;
  const double var = std::max(m.sum_sq / r - e.value * e.value, 0.0);
  e.std_error = std::sqrt(var / r);
  e.reps = reps;
  e.root_seed = root_seed;
  return e;
}

TailEstimate estimate_upper_tail(std::uint64_t n, double beta, std::uint64_t reps,
                                 std::uint64_t root_seed, const Execution& exec) {
  if (n < 2) throw std::invalid_argument("estimate_upper_tail: n must be >= 2");
  if (!(beta > 0.0)) throw std::invalid_argument("estimate_upper_tail: beta must be positive");
  require_reps(reps);
  const std::int64_t b = upper_tail_threshold(n, beta);

  TailEstimate out;
  if (b > static_cast<std::int64_t>(n) - 1) {
    out.reps = reps;
    out.root_seed = root_seed;
  } else {
    const auto target = static_cast<std::uint32_t>(std::max<std::int64_t>(b, 0));
    auto moments = run_replicates<1>(
        reps, root_seed,
        [n, target](Stream& s, std::uint64_t) {
          thread_local std::vector<std::uint32_t> depth;
          return std::array<double, 1>{sample_uniform_reaches(n, target, s, depth) ? 1.0 : 0.0};
        },
        exec);
    out = summarize(moments[0], reps, root_seed);
  }
  out.threshold = b;
  out.event_desc = describe("H_n >= " + std::to_string(b) + " (ceil(beta ln n))",
                            {{"n", static_cast<double>(n)}, {"beta", beta}});
  return out;
}

TailEstimate estimate_height_at_most_is(std::uint64_t n, std::int64_t k, TiltConfig tilt,
                                        std::uint64_t reps, std::uint64_t root_seed,
                                        const Execution& exec) {
  if (n < 2) throw std::invalid_argument("estimate_lower_tail_is: n must be >= 2");
  if (!(tilt.theta > 0.0 && tilt.theta <= 1.0))
    throw std::invalid_argument("estimate_lower_tail_is: theta must lie in (0, 1]");
  require_reps(reps);

  TailEstimate out;
  if (k < 1) {
    // H_n >= 1 for n >= 2
    out.reps = reps;
    out.root_seed = root_seed;
  } else {
    const double theta = tilt.theta;
    auto moments = run_replicates<1>(
        reps, root_seed,
        [n, k, theta](Stream& s, std::uint64_t) {
          thread_local std::vector<std::uint64_t> count;
          thread_local std::vector<double> power;
          return std::array<double, 1>{tilted_weight(n, k, theta, s, count, power)};
        },
        exec);
    out = summarize(moments[0], reps, root_seed);
  }
  out.threshold = k;
  out.event_desc = describe("H_n <= " + std::to_string(k) + " (importance sampling)",
                            {{"n", static_cast<double>(n)}, {"theta", tilt.theta}});
  return out;
}

TailEstimate estimate_lower_tail_is(std::uint64_t n, double alpha, TiltConfig tilt,
                                    std::uint64_t reps, std::uint64_t root_seed,
                                    const Execution& exec) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("estimate_lower_tail_is: alpha must lie in (0, 1)");
  const auto k = static_cast<std::int64_t>(lower_tail_threshold(n, alpha));
  auto out = estimate_height_at_most_is(n, k, tilt, reps, root_seed, exec);
  out.event_desc = describe("H_n <= " + std::to_string(k) + " (floor(alpha e ln n), importance sampling)",
                            {{"n", static_cast<double>(n)}, {"alpha", alpha}, {"theta", tilt.theta}});
  return out;
}

TailEstimate estimate_pi_tail(std::uint64_t n, std::uint64_t k, double beta, std::uint64_t reps,
                              std::uint64_t root_seed, const Execution& exec) {
  if (n < 1 || k < 1) throw std::invalid_argument("estimate_pi_tail: need n >= 1 and k >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("estimate_pi_tail: beta must be positive");
  require_reps(reps);
  const double level = static_cast<double>(n) * std::exp(-static_cast<double>(k) / beta);
  auto moments = run_replicates<1>(
      reps, root_seed,
      [n, k, level](Stream& s, std::uint64_t) {
        std::uint64_t x = n;
        for (std::uint64_t j = 0; j < k && x != 0; ++j)
          x = static_cast<std::uint64_t>(std::floor(static_cast<double>(x) * s.uniform01()));
        return std::array<double, 1>{static_cast<double>(x) >= level ? 1.0 : 0.0};
      },
      exec);
  auto out = summarize(moments[0], reps, root_seed);
  out.threshold = static_cast<std::int64_t>(std::ceil(level));
  out.event_desc = describe("pi^(k)(n) >= n exp(-k/beta)",
                            {{"n", static_cast<double>(n)}, {"k", static_cast<double>(k)}, {"beta", beta}});
  return out;
}

bool is_good_vertex(const RecursiveTree& tree, Vertex x, std::uint64_t k, double beta) {
  const double xd = static_cast<double>(x);
  Vertex y = x;
  for (std::uint64_t j = 1; j <= k; ++j) {
    y = y == 0 ? 0 : tree.parent(y);
    if (static_cast<double>(y) < xd * std::exp(-static_cast<double>(j) / beta)) return false;
  }
  return true;
}

GoodVertexEstimate estimate_good_vertices(std::uint64_t n, double beta, std::uint64_t reps,
                                          std::uint64_t root_seed, const Execution& exec) {
  if (n < 4) throw std::invalid_argument("estimate_good_vertices: n must be >= 4");
  if (!(beta > std::numbers::e))
    throw std::invalid_argument("estimate_good_vertices: beta must exceed e");
  require_reps(reps);
  const std::int64_t b = upper_tail_threshold(n, beta);
  const auto k = static_cast<std::uint64_t>(std::max<std::int64_t>(b, 0));
  const std::uint64_t first = (n + 1) / 2;  // ceil(n/2)

  auto moments = run_replicates<2>(
      reps, root_seed,
      [n, k, beta, first](Stream& s, std::uint64_t) {
        const RecursiveTree tree = grow_floor_map(n, s);
        double sigma = 0.0;
        for (std::uint64_t x = first; x < n; ++x)
          if (is_good_vertex(tree, static_cast<Vertex>(x), k, beta)) sigma += 1.0;
        return std::array<double, 2>{sigma, sigma >= 1.0 ? 1.0 : 0.0};
      },
      exec);

  GoodVertexEstimate out{summarize(moments[0], reps, root_seed), summarize(moments[1], reps, root_seed)};
  out.mean_sigma.threshold = out.p_nonempty.threshold = b;
  const auto params = {std::pair<const char*, double>{"n", static_cast<double>(n)}, {"beta", beta}};
  out.mean_sigma.event_desc = describe("E[Sigma_n], b_n=" + std::to_string(b), params);
  out.p_nonempty.event_desc = describe("Sigma_n >= 1, b_n=" + std::to_string(b), params);
  return out;
}

}  // namespace rrt
