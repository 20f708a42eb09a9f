#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "pararob/csl.hpp"
#include "pararob/error.hpp"
#include "pararob/model.hpp"
#include "pararob/state_space.hpp"

namespace pararob::test {

inline std::string data_path(const std::string& name) { return std::string(PARAROB_DATA_DIR) + "/" + name; }
inline std::string golden_path(const std::string& name) {
    return std::string(PARAROB_GOLDEN_DIR) + "/" + name;
}

inline std::shared_ptr<const StateSpace> space_of(const ReactionNetwork& net) {
    return std::make_shared<const StateSpace>(enumerate_states(net));
}

inline ParamBox point_box(std::span<const double> p) {
    std::vector<Interval> dims;
    for (double x : p) dims.push_back({x, x});
    return ParamBox(std::move(dims));
}

/// Uniform sample from a box; zero-width dimensions return their value.
inline std::vector<double> sample_point(const ParamBox& box, std::mt19937_64& rng) {
    std::vector<double> p(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
        std::uniform_real_distribution<double> u(box[i].lo, box[i].hi);
        p[i] = box[i].is_point() ? box[i].lo : u(rng);
    }
    return p;
}

/// Random box inside the declared ranges of `net`.
inline ParamBox random_sub_box(const ReactionNetwork& net, std::mt19937_64& rng) {
    std::vector<Interval> dims;
    for (const auto& p : net.params()) {
        std::uniform_real_distribution<double> u(p.range.lo, p.range.hi);
        double a = u(rng);
        double b = u(rng);
        if (a > b) std::swap(a, b);
        dims.push_back({a, b});
    }
    return ParamBox(std::move(dims));
}

/// Random mass-action network with at most 3 species and at most `max_states` candidate states.
inline ReactionNetwork random_network(std::mt19937_64& rng, std::size_t max_states = 200) {
    std::uniform_int_distribution<int> n_species_d(1, 3);
    const int n_species = n_species_d(rng);
    std::vector<Species> species;
    std::size_t budget = max_states;
    for (int i = 0; i < n_species; ++i) {
        const auto cap = static_cast<Count>(
            std::max<double>(1.0, std::floor(std::pow(double(budget), 1.0 / double(n_species - i))) - 1.0));
        std::uniform_int_distribution<Count> max_d(1, std::max<Count>(1, std::min<Count>(cap, 40)));
        const Count mx = max_d(rng);
        std::uniform_int_distribution<Count> init_d(0, mx);
        species.push_back({"S" + std::to_string(i), init_d(rng), mx});
        budget /= (mx + 1);
    }

    std::uniform_int_distribution<int> n_params_d(1, 3);
    const int n_params = n_params_d(rng);
    std::vector<Parameter> params;
    std::uniform_real_distribution<double> lo_d(0.1, 1.0);
    std::uniform_real_distribution<double> width_d(0.0, 1.0);
    for (int i = 0; i < n_params; ++i) {
        const double lo = lo_d(rng);
        params.push_back({"k" + std::to_string(i), {lo, lo + width_d(rng)}});
    }

    std::uniform_int_distribution<int> n_reactions_d(2, 5);
    std::uniform_int_distribution<Count> stoich_d(0, 2);
    std::uniform_int_distribution<std::size_t> param_d(0, params.size() - 1);
    std::uniform_real_distribution<double> scale_d(0.2, 2.0);
    std::vector<Reaction> reactions;
    const int n_reactions = n_reactions_d(rng);
    while (static_cast<int>(reactions.size()) < n_reactions) {
        Reaction r;
        r.name = "r" + std::to_string(reactions.size());
        r.reactants.resize(species.size());
        r.products.resize(species.size());
        for (std::size_t i = 0; i < species.size(); ++i) {
            r.reactants[i] = stoich_d(rng) == 2 ? 1 : 0;
            r.products[i] = stoich_d(rng) == 2 ? stoich_d(rng) : 0;
        }
        if (r.reactants == r.products) continue;
        r.param = param_d(rng);
        r.rate_scale = scale_d(rng);
        reactions.push_back(std::move(r));
    }
    return ReactionNetwork(std::move(species), std::move(params), std::move(reactions));
}

/// Random P=? until formula over the species of `net`, optionally with a positive t1.
inline csl::FormulaPtr random_query(const ReactionNetwork& net, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> sp_d(0, net.species().size() - 1);
    auto atom = [&] {
        const std::size_t i = sp_d(rng);
        std::vector<std::int64_t> coeffs(net.species().size(), 0);
        coeffs[i] = 1;
        std::uniform_int_distribution<std::int64_t> b_d(0, net.species()[i].max);
        std::bernoulli_distribution ge(0.5);
        return csl::make_atomic(coeffs, ge(rng) ? csl::Comparison::Ge : csl::Comparison::Le, b_d(rng));
    };
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> t_d(0.1, 1.5);
    const double t2 = t_d(rng);
    const double t1 = coin(rng) ? 0.0 : 0.5 * t2;
    auto phi = coin(rng) ? csl::make_true() : csl::make_not(atom());
    return csl::make_query({phi, atom(), t1, t2});
}

}  // namespace pararob::test
