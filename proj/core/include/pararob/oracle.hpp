#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pararob/csl.hpp"
#include "pararob/model.hpp"
#include "pararob/state_space.hpp"
#include "pararob/transient.hpp"

/// Brute-force references for testing: dense CME integration with classical RK4 at a single
/// parameter point. Shares no numerical code with the uniformization engine.
namespace pararob::oracle {

struct OracleOptions {
    std::size_t max_states = 2048;
    /// Accept a result once halving the step changes it by less than this (max-norm).
    double richardson_tolerance = 1e-8;
    /// Initial step as a fraction of 1 / (largest exit rate).
    double step_factor = 1.0;
    /// Fewest steps of the coarsest resolution, whatever the rates.
    std::size_t min_steps = 64;
    /// Number of step halvings tried before giving up with E_UNSTABLE.
    int max_halvings = 8;
};

/// Dense generator at a parameter point over `space` plus SINK (index size()).
class DenseCme {
public:
    DenseCme(const ReactionNetwork& net, const StateSpace& space, std::span<const double> point,
             const OracleOptions& options = {});

    /// Number of rows including SINK.
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] double rate(std::size_t from, std::size_t to) const { return q_[from * dim_ + to]; }
    [[nodiscard]] double exit(std::size_t s) const { return -q_[s * dim_ + s]; }
    [[nodiscard]] double max_exit() const noexcept { return max_exit_; }
    [[nodiscard]] const OracleOptions& options() const noexcept { return options_; }

    struct Entry {
        std::size_t from;
        std::size_t to;
        double rate;  // off-diagonal entries only
    };
    [[nodiscard]] const std::vector<Entry>& entries() const noexcept { return entries_; }

private:
    std::size_t dim_;
    std::vector<double> q_;
    std::vector<Entry> entries_;
    double max_exit_ = 0.0;
    OracleOptions options_;
};

/// Forward CME pi' = pi Q from `init` over [0, t]; the sink entry is carried in Distribution::sink.
[[nodiscard]] Distribution cme_rk4(const DenseCme& cme, const Distribution& init, double t);

/// Probability of phi U[t1,t2] psi from every state (size dim(); SINK last).
[[nodiscard]] std::vector<double> until_values(const DenseCme& cme, const std::vector<std::uint8_t>& phi,
                                               const std::vector<std::uint8_t>& psi, double t1, double t2);

/// Exact satisfaction set of a threshold formula at the point (size dim(); SINK last).
[[nodiscard]] std::vector<std::uint8_t> point_sat(const DenseCme& cme, const ReactionNetwork& net,
                                                  const StateSpace& space, const csl::Formula& f);

/// Quantitative validity of a root P=? formula at the initial state.
[[nodiscard]] double point_validity(const ReactionNetwork& net, const StateSpace& space,
                                    std::span<const double> point, const csl::Formula& f,
                                    const OracleOptions& options = {});

}  // namespace pararob::oracle
