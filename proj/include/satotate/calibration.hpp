#pragma once

// Empirical constants standing in for unspecified O(1) terms. They are
// artifact choices checked by the acceptance run, not proven bounds.
namespace satotate::calibration {

// |S(U,V,r) - K_r| <= partial_sum_constant * (1/sqrt(U) + 1/V^2)
inline constexpr double partial_sum_constant = 2.0;
// |S(1e4, 1e2, 1) - K_1|
inline constexpr double partial_sum_tolerance = 0.05;
// allowed increase of |S - K_r| when U grows
inline constexpr double partial_sum_monotone_slack = 0.02;
// |sum_{u<r<=u+v} K_r - v|
inline constexpr double window_sum_bound = 5.0;
// sum over nonprincipal chi mod q of |sum_{n<=N} chi(n)|^4 <= c N^2 q log^6 q
inline constexpr double fourth_moment_constant = 10.0;

}  // namespace satotate::calibration
