#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace satotate::numeric {

// Neumaier's variant of Kahan summation. Results depend on the order of
// add() calls, so callers reduce in a fixed index order.
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(double init) : sum_(init) {}

    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }

    CompensatedSum& operator+=(double v) noexcept {
        add(v);
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

/// Pairwise reduction over compensated leaf blocks. Deterministic for a
/// given input length.
inline double pairwise_sum(std::span<const double> xs) noexcept {
    constexpr std::size_t leaf = 128;
    if (xs.size() <= leaf) return compensated_sum(xs);
    const std::size_t half = xs.size() / 2;
    CompensatedSum s;
    s.add(pairwise_sum(xs.first(half)));
    s.add(pairwise_sum(xs.subspan(half)));
    return s.value();
}

/// Exact fixed-point accumulator for sums of logarithms. Each term is
/// rounded once to a multiple of 2^-32; sums are then exact integers, so
/// adjacent window sums add up bit-exactly as long as the total stays below
/// 2^53 units (about 2·10^6 in value).
class FixedLogSum {
public:
    static constexpr double unit = 0x1p-32;
    static constexpr double scale = 0x1p32;

    static std::int64_t quantize(double v) noexcept {
        return static_cast<std::int64_t>(std::llround(v * scale));
    }

    void add_units(std::int64_t u) noexcept { units_ += u; }
    void add(double v) noexcept { units_ += quantize(v); }

    std::int64_t units() const noexcept { return units_; }
    double value() const noexcept { return static_cast<double>(units_) * unit; }

private:
    std::int64_t units_ = 0;
};

}  // namespace satotate::numeric
