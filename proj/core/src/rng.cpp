#include "rmteq/rng.hpp"

#include <cmath>
#include <numbers>

namespace rmteq {

namespace {
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
}

double RngStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double RngStream::gaussian() noexcept {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  // u1 in (0, 1] so the logarithm stays finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * kTwoPow53Inv;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  return r * std::cos(phi);
}

}  // namespace rmteq
