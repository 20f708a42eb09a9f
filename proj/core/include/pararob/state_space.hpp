#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "pararob/interval.hpp"
#include "pararob/model.hpp"

namespace pararob {

using StateIndex = std::uint32_t;

/// Pseudo-state absorbing every firing that would leave the truncation bounds.
inline constexpr StateIndex kSink = std::numeric_limits<StateIndex>::max();

struct Transition {
    std::uint32_t reaction;
    StateIndex target;  // kSink for truncation outflow
    double combinations;
};

/// Truncated reachable state space, indexed in BFS order from the initial state.
class StateSpace {
public:
    StateSpace(std::size_t num_species, std::vector<Count> counts,
               std::vector<std::size_t> row_offsets, std::vector<Transition> transitions);

    [[nodiscard]] std::size_t size() const noexcept { return num_states_; }
    [[nodiscard]] std::size_t num_species() const noexcept { return num_species_; }

    [[nodiscard]] std::span<const Count> state(StateIndex s) const {
        return {counts_.data() + static_cast<std::size_t>(s) * num_species_, num_species_};
    }
    [[nodiscard]] std::span<const Transition> transitions(StateIndex s) const {
        return {transitions_.data() + row_offsets_[s], row_offsets_[s + 1] - row_offsets_[s]};
    }
    [[nodiscard]] std::size_t num_transitions() const noexcept { return transitions_.size(); }
    [[nodiscard]] std::size_t row_offset(StateIndex s) const { return row_offsets_[s]; }

    /// Index of a count vector, or kSink if it is not in the table.
    [[nodiscard]] StateIndex find(std::span<const Count> counts) const;

private:
    std::size_t num_species_;
    std::size_t num_states_;
    std::vector<Count> counts_;
    std::vector<std::size_t> row_offsets_;
    std::vector<Transition> transitions_;
    std::vector<StateIndex> hash_slots_;
};

struct EnumerationOptions {
    std::size_t max_states = 5'000'000;
};

/// Breadth-first enumeration from the initial state, reactions explored in declaration order.
/// Throws Error(Explosion) when the state count exceeds the cap.
[[nodiscard]] StateSpace enumerate_states(const ReactionNetwork& net,
                                          const EnumerationOptions& options = {});

/// Rate-interval annotation of a state space for one parameter box.
///
/// Row entries mirror StateSpace::transitions() one-to-one. exit_lo/exit_hi are the sums of the
/// row's q_lo/q_hi (SINK entries included); the uniformization rate is the largest exit_hi.
class IntervalGenerator {
public:
    [[nodiscard]] const StateSpace& space() const noexcept { return *space_; }
    [[nodiscard]] std::shared_ptr<const StateSpace> shared_space() const noexcept { return space_; }
    [[nodiscard]] const ParamBox& box() const noexcept { return box_; }
    [[nodiscard]] std::size_t size() const noexcept { return space_->size(); }

    [[nodiscard]] std::span<const Interval> rates(StateIndex s) const {
        const std::size_t begin = space_->row_offset(s);
        return {rates_.data() + begin, space_->row_offset(s + 1) - begin};
    }
    [[nodiscard]] std::span<const Interval> exit_rates() const noexcept { return exits_; }
    [[nodiscard]] const Interval& exit_rate(StateIndex s) const { return exits_[s]; }
    [[nodiscard]] double uniformization_rate() const noexcept { return lambda_; }
    [[nodiscard]] bool is_point() const noexcept { return point_; }

private:
    friend IntervalGenerator build_generator(std::shared_ptr<const StateSpace> space,
                                             const ReactionNetwork& net, const ParamBox& box);

    std::shared_ptr<const StateSpace> space_;
    ParamBox box_;
    std::vector<Interval> rates_;
    std::vector<Interval> exits_;
    double lambda_ = 0.0;
    bool point_ = false;
};

/// Populate rate intervals from propensity bounds. The box must lie within the declared ranges.
[[nodiscard]] IntervalGenerator build_generator(std::shared_ptr<const StateSpace> space,
                                                const ReactionNetwork& net, const ParamBox& box);

/// One line per transition: "src reaction target q_lo q_hi", target "SINK" for truncation outflow.
void write_generator_dump(std::ostream& os, const IntervalGenerator& gen,
                          const ReactionNetwork& net);

}  // namespace pararob
