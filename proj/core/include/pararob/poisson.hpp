#pragma once

#include <cstddef>
#include <vector>

namespace pararob {

/// Truncated Poisson(rate) distribution: weights[i] approximates P(N = left + i).
struct PoissonWindow {
    std::size_t left = 0;
    std::size_t right = 0;
    std::vector<double> weights;
    /// Certified bound on the Poisson mass outside [left, right].
    double tail_error = 0.0;

    [[nodiscard]] double weight(std::size_t i) const {
        return i < left || i > right ? 0.0 : weights[i - left];
    }
};

struct PoissonOptions {
    double max_rate = 1e7;
};

/// Fox-Glynn style window holding all but at most `delta` of the Poisson(rate) mass.
/// Weights are evaluated from the mode outward; the left and right tails are bounded by
/// geometric majorants. Throws Error(Overflow) above options.max_rate.
[[nodiscard]] PoissonWindow fox_glynn(double rate, double delta, const PoissonOptions& options = {});

}  // namespace pararob
