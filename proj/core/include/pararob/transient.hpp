#pragma once

#include <span>
#include <vector>

#include "pararob/interval.hpp"
#include "pararob/poisson.hpp"
#include "pararob/state_space.hpp"

namespace pararob {

/// Probability vector over the state space plus the mass absorbed by SINK.
struct Distribution {
    std::vector<double> probs;
    double sink = 0.0;
    /// Poisson mass not accounted for in probs/sink.
    double tail_error = 0.0;
};

/// Per-state probability intervals over a parameter box.
struct BoundedDistribution {
    std::vector<double> lo;
    std::vector<double> hi;
    double sink_lo = 0.0;
    double sink_hi = 0.0;
    double tail_error = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return lo.size(); }
};

struct TransientOptions {
    /// Total tolerance; half goes to the Poisson window, half is reported slack.
    double delta = 1e-10;
    PoissonOptions poisson{};
    /// Uniformization rate override; 0 uses the generator's own. Must not be below it.
    double uniformization_rate = 0.0;
};

/// Point mass on the initial state (index 0).
[[nodiscard]] Distribution initial_distribution(const StateSpace& space);

/// Interval state vector: lo/hi per state plus SINK bounds.
struct IntervalVector {
    std::vector<double> lo;
    std::vector<double> hi;
    double sink_lo = 0.0;
    double sink_hi = 0.0;
};

/// One uniformized step of the interval chain, P = I + Q/L with L = gen.uniformization_rate():
///   out_lo(u) = v_lo(u) (1 - E_hi(u)/L) + sum_{s->u} v_lo(s) q_lo(s,u)/L
///   out_hi(u) = v_hi(u) (1 - E_lo(u)/L) + sum_{s->u} v_hi(s) q_hi(s,u)/L
/// each clamped to [0, 1]. `out` is resized as needed and must not alias `v`.
void step_bounds(const IntervalGenerator& gen, const IntervalVector& v, IntervalVector& out);
[[nodiscard]] IntervalVector step_bounds(const IntervalGenerator& gen, const IntervalVector& v);

/// Standard uniformization at a parameter point. Requires gen.is_point().
[[nodiscard]] Distribution transient_point(const IntervalGenerator& gen, const Distribution& init,
                                           double t, const TransientOptions& options = {});

/// Min/max uniformization: Poisson-weighted accumulation of repeated step_bounds from a point
/// initial distribution.
[[nodiscard]] BoundedDistribution transient_bounds(const IntervalGenerator& gen,
                                                   const Distribution& init, double t,
                                                   const TransientOptions& options = {});

}  // namespace pararob
