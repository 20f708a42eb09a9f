#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "pararob/csl.hpp"
#include "pararob/interval.hpp"
#include "pararob/model.hpp"
#include "pararob/poisson.hpp"
#include "pararob/state_space.hpp"

namespace pararob {

/// Density over the perturbation space: uniform when `pieces` is empty, otherwise
/// piecewise constant on boxes with pairwise-disjoint interiors.
struct WeightSpec {
    struct Piece {
        ParamBox box;
        double density = 0.0;
    };
    std::vector<Piece> pieces;

    [[nodiscard]] static WeightSpec uniform() { return {}; }
    [[nodiscard]] static WeightSpec piecewise(std::vector<Piece> pieces) { return {std::move(pieces)}; }
    [[nodiscard]] bool is_uniform() const noexcept { return pieces.empty(); }
};

/// Halve `b` along the dimension of largest relative width (lowest index on ties).
/// Throws Error(Atomic) when every dimension has zero width.
[[nodiscard]] std::pair<ParamBox, ParamBox> split_box(const ParamBox& b);

/// Normalized measure of `b` within `P`. A zero-volume `P` gives its whole mass to `b`.
/// Throws Error(Coverage) when a piecewise density does not cover `b`.
[[nodiscard]] double weight_mass(const WeightSpec& w, const ParamBox& b, const ParamBox& P);

struct PartitionEntry {
    ParamBox box;
    Interval validity;  // [D_lo, D_hi]
    double mass = 0.0;
};

/// [sum mass * D_lo, sum mass * D_hi]. Throws Error(Tiling) unless the boxes tile P.
[[nodiscard]] Interval robustness_bounds(const std::vector<PartitionEntry>& partition,
                                         const WeightSpec& w, const ParamBox& P);

struct RefineOptions {
    double epsilon = 0.01;
    std::size_t budget = 4096;
    double delta = 1e-10;
    std::size_t workers = 1;
    PoissonOptions poisson{};
};

struct RobustnessResult {
    std::vector<PartitionEntry> partition;  // sorted by lower corner
    double r_lo = 0.0;
    double r_hi = 0.0;
    double gap = 0.0;
    std::size_t boxes_evaluated = 0;
    bool budget_exhausted = false;
    /// Gap after the initial evaluation and after every round.
    std::vector<double> gap_history;

    /// Every remaining box is atomic and the gap is still above epsilon.
    [[nodiscard]] bool stalled(double epsilon) const { return gap > epsilon && !budget_exhausted; }
};

/// Adaptive refinement of `P` until the robustness bracket is at most `options.epsilon` wide or
/// the evaluation budget runs out. Splits happen in rounds of fixed size so the result does not
/// depend on `options.workers`. Throws Error(EpsilonTooTight) when epsilon <= 4 * delta and
/// Error(NotQuery) unless `formula` is a root P=? property.
[[nodiscard]] RobustnessResult refine(const ReactionNetwork& net,
                                      std::shared_ptr<const StateSpace> space,
                                      const csl::Formula& formula, const ParamBox& P,
                                      const WeightSpec& w, const RefineOptions& options = {});

}  // namespace pararob
