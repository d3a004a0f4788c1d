#pragma once

#include <numbers>

namespace lvar::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr double log_two_pi = 1.83787706640934548356;
inline constexpr double log_two = std::numbers::ln2;

}  // namespace lvar::constants
