#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pararob/interval.hpp"
#include "pararob/model.hpp"
#include "pararob/poisson.hpp"
#include "pararob/state_space.hpp"

namespace pararob::csl {

enum class Comparison { Ge, Gt, Le, Lt };

/// True when `lhs cmp rhs` holds.
template <typename T>
[[nodiscard]] constexpr bool compare(T lhs, Comparison cmp, T rhs) noexcept {
    switch (cmp) {
        case Comparison::Ge: return lhs >= rhs;
        case Comparison::Gt: return lhs > rhs;
        case Comparison::Le: return lhs <= rhs;
        case Comparison::Lt: return lhs < rhs;
    }
    return false;
}

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct TrueFormula {};

/// sum_i coeffs[i] * x_i  cmp  bound. Equality is desugared into a conjunction by the parser.
struct AtomicFormula {
    std::vector<std::int64_t> coeffs;
    Comparison cmp = Comparison::Ge;
    std::int64_t bound = 0;

    [[nodiscard]] bool holds(std::span<const Count> state) const;
};

struct NotFormula {
    FormulaPtr operand;
};

struct AndFormula {
    FormulaPtr lhs;
    FormulaPtr rhs;
};

struct OrFormula {
    FormulaPtr lhs;
    FormulaPtr rhs;
};

/// lhs U[t1,t2] rhs. F[t1,t2] g is stored as true U[t1,t2] g.
struct UntilPath {
    FormulaPtr lhs;
    FormulaPtr rhs;
    double t1 = 0.0;
    double t2 = 0.0;
};

/// P cmp threshold [path], or the query P=? [path] when cmp is empty.
struct ProbFormula {
    std::optional<Comparison> cmp;
    double threshold = 0.0;
    UntilPath path;

    [[nodiscard]] bool is_query() const noexcept { return !cmp.has_value(); }
};

struct Formula {
    std::variant<TrueFormula, AtomicFormula, NotFormula, AndFormula, OrFormula, ProbFormula> node;
};

[[nodiscard]] FormulaPtr make_true();
[[nodiscard]] FormulaPtr make_atomic(std::vector<std::int64_t> coeffs, Comparison cmp,
                                     std::int64_t bound);
[[nodiscard]] FormulaPtr make_not(FormulaPtr f);
[[nodiscard]] FormulaPtr make_and(FormulaPtr lhs, FormulaPtr rhs);
[[nodiscard]] FormulaPtr make_or(FormulaPtr lhs, FormulaPtr rhs);
[[nodiscard]] FormulaPtr make_prob(std::optional<Comparison> cmp, double threshold, UntilPath path);
[[nodiscard]] FormulaPtr make_query(UntilPath path);

/// Parse a property; species names resolve against `net`.
/// Throws SyntaxError with E_SYNTAX, E_BAD_THRESHOLD, E_BAD_INTERVAL or E_UNKNOWN_SPECIES.
[[nodiscard]] FormulaPtr parse_csl(std::string_view text, const ReactionNetwork& net);
[[nodiscard]] FormulaPtr load_csl(const std::string& path, const ReactionNetwork& net);

[[nodiscard]] std::string to_string(const Formula& f, const ReactionNetwork& net);

/// Min/max satisfaction sets over size()+1 entries; the last entry is SINK.
/// lo: satisfied for every parameter in the box. hi: satisfied for some admissible resolution.
struct SatBounds {
    std::vector<std::uint8_t> lo;
    std::vector<std::uint8_t> hi;

    [[nodiscard]] std::size_t size() const noexcept { return lo.size(); }
    [[nodiscard]] bool in_lo(std::size_t s) const { return lo[s] != 0; }
    [[nodiscard]] bool in_hi(std::size_t s) const { return hi[s] != 0; }
    [[nodiscard]] std::vector<StateIndex> lo_indices(std::size_t num_states) const;
    [[nodiscard]] std::vector<StateIndex> hi_indices(std::size_t num_states) const;
};

struct CheckOptions {
    double delta = 1e-10;
    PoissonOptions poisson{};
    /// Per-state exit-rate ceiling used to pick the uniformization rate of each until pass.
    /// Empty means the generator's own upper exit rates. Refinement passes the root box's rates
    /// so that every sub-box is uniformized with the same constant.
    std::vector<double> exit_ceiling;
};

class ModelChecker {
public:
    explicit ModelChecker(const IntervalGenerator& gen, CheckOptions options = {});

    /// Throws Error(QueryNotBoolean) if a P=? node is reached.
    [[nodiscard]] SatBounds check(const Formula& f) const;

    /// Per-entry probability intervals (size()+1 entries, SINK last) for phi U[t1,t2] psi.
    [[nodiscard]] std::vector<Interval> until_bounds(const SatBounds& phi, const SatBounds& psi,
                                                     double t1, double t2) const;

    /// Interval of the initial state for a root P=? formula. Throws Error(NotQuery) otherwise.
    [[nodiscard]] Interval quantitative_validity(const Formula& f) const;

private:
    [[nodiscard]] SatBounds check_prob(const ProbFormula& p) const;
    [[nodiscard]] std::vector<double> bounded_pass(const std::vector<std::uint8_t>& evolving,
                                                   std::vector<double> values, double horizon,
                                                   bool maximize) const;

    const IntervalGenerator& gen_;
    CheckOptions options_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> targets_;  // SINK mapped to size()
    std::vector<Interval> rates_;
};

/// One uniformized backward step of a single row, v(s) + sum_u q(s,u) (v(u) - v(s)) / lambda, with
/// q(s,u) chosen in [q_lo, q_hi] to minimize (or maximize) the result: q_hi towards successors that
/// move the value in the optimized direction, q_lo otherwise, q_lo on ties. Not clamped.
[[nodiscard]] double greedy_row_value(double self, std::span<const double> successors,
                                      std::span<const Interval> rates, double lambda, bool maximize);

[[nodiscard]] SatBounds check_formula(const IntervalGenerator& gen, const Formula& f,
                                      const CheckOptions& options = {});
[[nodiscard]] std::vector<Interval> until_probability_bounds(const IntervalGenerator& gen,
                                                             const SatBounds& phi,
                                                             const SatBounds& psi, double t1,
                                                             double t2,
                                                             const CheckOptions& options = {});
[[nodiscard]] Interval quantitative_validity(const IntervalGenerator& gen, const Formula& f,
                                             const CheckOptions& options = {});

}  // namespace pararob::csl
