#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "satotate/error.hpp"

namespace satotate::family {

/// F(alpha, beta) = (2/pi) * integral of sqrt(1 - t^2) over [alpha, beta],
/// for -1 <= alpha <= beta <= 1.
inline double f_measure(double alpha, double beta) {
    if (!(alpha >= -1.0 && alpha <= beta && beta <= 1.0))
        throw DomainError("f_measure needs -1 <= alpha <= beta <= 1, got [" + std::to_string(alpha) + ", " +
                          std::to_string(beta) + "]");
    auto prim = [](double t) { return std::asin(t) + t * std::sqrt((1.0 - t) * (1.0 + t)); };
    return (prim(beta) - prim(alpha)) / std::numbers::pi;
}

}  // namespace satotate::family
