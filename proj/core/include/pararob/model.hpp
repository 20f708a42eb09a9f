#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pararob/interval.hpp"

namespace pararob {

using Count = std::uint32_t;

struct Species {
    std::string name;
    Count init = 0;
    Count max = 0;

    friend bool operator==(const Species&, const Species&) = default;
};

/// Kinetic constant with its admissible range; a point value has lo == hi.
struct Parameter {
    std::string name;
    Interval range;

    friend bool operator==(const Parameter&, const Parameter&) = default;
};

/// Mass-action reaction. Propensity is rate_scale * k[param] * prod_i C(x_i, reactants_i).
struct Reaction {
    std::string name;
    std::vector<Count> reactants;
    std::vector<Count> products;
    std::size_t param = 0;
    double rate_scale = 1.0;

    friend bool operator==(const Reaction&, const Reaction&) = default;
};

/// Axis-aligned box over the parameter space, one interval per declared parameter.
class ParamBox {
public:
    ParamBox() = default;
    explicit ParamBox(std::vector<Interval> dims);

    [[nodiscard]] std::size_t size() const noexcept { return dims_.size(); }
    [[nodiscard]] const Interval& operator[](std::size_t i) const { return dims_[i]; }
    [[nodiscard]] std::span<const Interval> dims() const noexcept { return dims_; }

    [[nodiscard]] bool contains(const ParamBox& other) const;
    [[nodiscard]] bool contains_point(std::span<const double> point) const;
    [[nodiscard]] bool is_point() const;
    [[nodiscard]] std::vector<double> lower_corner() const;
    [[nodiscard]] std::vector<double> upper_corner() const;

    /// Replace one dimension; used by refinement.
    [[nodiscard]] ParamBox with(std::size_t dim, Interval value) const;

    friend bool operator==(const ParamBox&, const ParamBox&) = default;

private:
    std::vector<Interval> dims_;
};

class ReactionNetwork {
public:
    ReactionNetwork(std::vector<Species> species, std::vector<Parameter> params,
                    std::vector<Reaction> reactions);

    [[nodiscard]] const std::vector<Species>& species() const noexcept { return species_; }
    [[nodiscard]] const std::vector<Parameter>& params() const noexcept { return params_; }
    [[nodiscard]] const std::vector<Reaction>& reactions() const noexcept { return reactions_; }

    [[nodiscard]] std::optional<std::size_t> species_index(std::string_view name) const;
    [[nodiscard]] std::optional<std::size_t> param_index(std::string_view name) const;

    /// The declared perturbation space.
    [[nodiscard]] ParamBox declared_box() const;

    friend bool operator==(const ReactionNetwork&, const ReactionNetwork&) = default;

private:
    std::vector<Species> species_;
    std::vector<Parameter> params_;
    std::vector<Reaction> reactions_;
};

/// Parse the line-oriented model format. Throws SyntaxError / Error.
[[nodiscard]] ReactionNetwork parse_model(std::string_view text);
[[nodiscard]] ReactionNetwork load_model(const std::string& path);

/// Canonical text form; parse_model(print_model(n)) == n.
[[nodiscard]] std::string print_model(const ReactionNetwork& net);

/// Number of distinct reactant combinations, prod_i C(x_i, nu_i); 0 when some x_i < nu_i.
[[nodiscard]] double combinations(std::span<const Count> state, std::span<const Count> reactants);

[[nodiscard]] double propensity(std::span<const Count> state, const Reaction& r, double k);

/// Exact range of the propensity over the box; mass action is linear and nondecreasing in k.
[[nodiscard]] Interval propensity_bounds(std::span<const Count> state, const Reaction& r,
                                         const ParamBox& box);

/// Format a real with 17 significant digits (the round-trip form used in all outputs).
[[nodiscard]] std::string format_real(double x);

}  // namespace pararob
