#include "rrt/random.hpp"

#include <cmath>

namespace rrt {

double Stream::exponential() noexcept { return -std::log1p(-uniform01()); }

}  // namespace rrt
