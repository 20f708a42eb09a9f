#include "pararob/poisson.hpp"

#include <cmath>
#include <string>

#include "pararob/error.hpp"

namespace pararob {

namespace {

/// log P(N = m) for N ~ Poisson(rate), m = floor(rate) >= 0.
long double log_mode_probability(double rate, std::size_t m) {
    const long double lam = rate;
    const long double mm = static_cast<long double>(m);
    if (m < 20) {
        return -lam + mm * std::log(lam) - std::lgamma(mm + 1.0L);
    }
    // Stirling form: avoids the cancellation between m*log(rate) and lgamma(m+1).
    const long double f = lam - mm;
    const long double inv = 1.0L / mm;
    const long double inv2 = inv * inv;
    const long double series =
        inv * (1.0L / 12 - inv2 * (1.0L / 360 - inv2 * (1.0L / 1260 - inv2 * (1.0L / 1680))));
    constexpr long double kTwoPi = 6.283185307179586476925286766559L;
    return -f + mm * std::log1p(f / mm) - 0.5L * std::log(kTwoPi * mm) - series;
}

}  // namespace

PoissonWindow fox_glynn(double rate, double delta, const PoissonOptions& options) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw Error(ErrorCode::InvalidArgument, "Poisson rate must be finite and nonnegative");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "Poisson truncation tolerance must lie in (0, 1)");
    }
    if (rate > options.max_rate) {
        throw Error(ErrorCode::Overflow, "uniformization rate * time = " + std::to_string(rate) +
                                             " exceeds limit " + std::to_string(options.max_rate));
    }

    PoissonWindow w;
    if (rate == 0.0) {
        w.weights = {1.0};
        return w;
    }

    const long double lam = rate;
    const auto mode = static_cast<std::size_t>(std::floor(rate));
    const long double p_mode = std::exp(log_mode_probability(rate, mode));
    // Each side stops well inside its share of delta so that individual weights just outside the
    // window are negligible, not merely their sum.
    const long double side_budget = 0.5e-3L * static_cast<long double>(delta);

    // Right side: for j > i >= rate the ratio p(j+1)/p(j) = rate/(j+1) <= rate/(i+2) < 1.
    std::vector<long double> right{p_mode};
    long double right_tail = 0.0L;
    for (std::size_t i = mode;; ++i) {
        const long double p_next = right.back() * lam / static_cast<long double>(i + 1);
        const long double ratio = lam / static_cast<long double>(i + 2);
        if (ratio < 1.0L) {
            const long double bound = p_next / (1.0L - ratio);
            if (bound <= side_budget) {
                right_tail = bound;
                break;
            }
        }
        right.push_back(p_next);
    }

    // Left side: for j < i <= rate the ratio p(j-1)/p(j) = j/rate <= (i-1)/rate < 1.
    std::vector<long double> left;
    long double left_tail = 0.0L;
    std::size_t lo = mode;
    long double p_cur = p_mode;
    while (lo > 0) {
        const long double p_prev = p_cur * static_cast<long double>(lo) / lam;
        const long double ratio = static_cast<long double>(lo - 1) / lam;
        const long double bound = p_prev / (1.0L - ratio);
        if (bound <= side_budget) {
            left_tail = bound;
            break;
        }
        left.push_back(p_prev);
        p_cur = p_prev;
        --lo;
    }

    w.left = lo;
    w.right = mode + right.size() - 1;
    w.weights.reserve(left.size() + right.size());
    for (auto it = left.rbegin(); it != left.rend(); ++it) w.weights.push_back(static_cast<double>(*it));
    for (long double p : right) w.weights.push_back(static_cast<double>(p));

    // Compensated sum; rounding must never push the total above one.
    double sum = 0.0;
    double carry = 0.0;
    for (double x : w.weights) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    if (sum > 1.0) {
        for (double& x : w.weights) x /= sum;
        sum = 1.0;
    }
    w.tail_error = std::max(static_cast<double>(left_tail + right_tail), 1.0 - sum);
    return w;
}

}  // namespace pararob
