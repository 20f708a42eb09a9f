#include "pararob/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "pararob/error.hpp"

namespace pararob::oracle {

namespace {

/// C(x, nu) via a running product; deliberately independent of the engine's combinations().
double binomial(Count x, Count nu) {
    if (x < nu) return 0.0;
    double num = 1.0;
    double den = 1.0;
    for (Count j = 0; j < nu; ++j) {
        num *= static_cast<double>(x - j);
        den *= static_cast<double>(j + 1);
    }
    return num / den;
}

double max_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

using Derivative = std::function<void(const std::vector<double>&, std::vector<double>&)>;

std::vector<double> rk4_fixed(const Derivative& f, std::vector<double> y, double t, std::size_t steps) {
    const double h = t / static_cast<double>(steps);
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (std::size_t step = 0; step < steps; ++step) {
        f(y, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        f(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        f(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        f(tmp, k4);
        for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return y;
}

/// RK4 with step halving until two successive resolutions agree.
std::vector<double> integrate(const Derivative& f, const std::vector<double>& y0, double t, double rate,
                              const OracleOptions& options) {
    if (t == 0.0 || rate == 0.0) return y0;
    auto steps = static_cast<std::size_t>(std::ceil(t * rate / options.step_factor));
    steps = std::max<std::size_t>(steps, options.min_steps);
    std::vector<double> coarse = rk4_fixed(f, y0, t, steps);
    for (int halving = 0; halving <= options.max_halvings; ++halving) {
        steps *= 2;
        std::vector<double> fine = rk4_fixed(f, y0, t, steps);
        if (max_norm_diff(coarse, fine) < options.richardson_tolerance) return fine;
        coarse = std::move(fine);
    }
    throw Error(ErrorCode::Unstable, "RK4 results did not settle under step halving");
}

}  // namespace

DenseCme::DenseCme(const ReactionNetwork& net, const StateSpace& space, std::span<const double> point,
                   const OracleOptions& options)
    : dim_(space.size() + 1), options_(options) {
    if (space.size() > options.max_states) {
        throw Error(ErrorCode::OracleCap, "state space exceeds the oracle cap");
    }
    if (point.size() != net.params().size()) {
        throw Error(ErrorCode::InvalidArgument, "parameter point has the wrong dimension");
    }
    q_.assign(dim_ * dim_, 0.0);
    const auto& species = net.species();
    std::vector<Count> next(species.size());
    for (StateIndex s = 0; s < space.size(); ++s) {
        const auto x = space.state(s);
        for (const Reaction& r : net.reactions()) {
            double h = 1.0;
            for (std::size_t i = 0; i < species.size(); ++i) h *= binomial(x[i], r.reactants[i]);
            if (h == 0.0) continue;
            bool outside = false;
            for (std::size_t i = 0; i < species.size(); ++i) {
                const std::int64_t c = std::int64_t{x[i]} - r.reactants[i] + r.products[i];
                outside = outside || c > species[i].max;
                next[i] = static_cast<Count>(c);
            }
            std::size_t to = dim_ - 1;
            if (!outside) {
                const StateIndex found = space.find(next);
                if (found == kSink) throw Error(ErrorCode::InvalidArgument, "reachable state missing from space");
                to = found;
            }
            const double rate = point[r.param] * r.rate_scale * h;
            q_[s * dim_ + to] += rate;
            q_[s * dim_ + s] -= rate;
        }
    }
    for (std::size_t s = 0; s < dim_; ++s) {
        for (std::size_t u = 0; u < dim_; ++u) {
            if (u != s && q_[s * dim_ + u] > 0.0) entries_.push_back({s, u, q_[s * dim_ + u]});
        }
        max_exit_ = std::max(max_exit_, exit(s));
    }
}

Distribution cme_rk4(const DenseCme& cme, const Distribution& init, double t) {
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "time must be nonnegative");
    const std::size_t n = cme.dim();
    if (init.probs.size() + 1 != n) throw Error(ErrorCode::InvalidArgument, "initial distribution size");
    std::vector<double> y0(init.probs);
    y0.push_back(init.sink);
    std::vector<double> exits(n);
    for (std::size_t s = 0; s < n; ++s) exits[s] = cme.exit(s);

    const Derivative f = [&](const std::vector<double>& y, std::vector<double>& dy) {
        for (std::size_t s = 0; s < n; ++s) dy[s] = -exits[s] * y[s];
        for (const auto& e : cme.entries()) dy[e.to] += y[e.from] * e.rate;
    };
    std::vector<double> y = integrate(f, y0, t, cme.max_exit(), cme.options());

    double before = 0.0;
    for (double v : y0) before += v;
    double after = 0.0;
    for (double& v : y) {
        if (v < -1e-12) throw Error(ErrorCode::Unstable, "RK4 produced a negative probability");
        v = std::max(v, 0.0);
        after += v;
    }
    if (after > 0.0) {
        for (double& v : y) v *= before / after;
    }
    Distribution out;
    out.sink = y.back();
    y.pop_back();
    out.probs = std::move(y);
    return out;
}

std::vector<double> until_values(const DenseCme& cme, const std::vector<std::uint8_t>& phi,
                                 const std::vector<std::uint8_t>& psi, double t1, double t2) {
    const std::size_t n = cme.dim();
    if (phi.size() != n || psi.size() != n) throw Error(ErrorCode::InvalidArgument, "set size mismatch");
    if (!(t1 >= 0.0 && t1 <= t2)) throw Error(ErrorCode::BadInterval, "time bounds need 0 <= t1 <= t2");

    // Backward Kolmogorov equation v' = Q v restricted to the evolving states.
    auto solve = [&](const std::vector<std::uint8_t>& evolving, std::vector<double> v, double horizon) {
        double rate = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            if (evolving[s]) rate = std::max(rate, cme.exit(s));
        }
        std::vector<DenseCme::Entry> active;
        for (const auto& e : cme.entries()) {
            if (evolving[e.from]) active.push_back(e);
        }
        const Derivative f = [&](const std::vector<double>& y, std::vector<double>& dy) {
            std::fill(dy.begin(), dy.end(), 0.0);
            for (const auto& e : active) dy[e.from] += e.rate * (y[e.to] - y[e.from]);
        };
        return integrate(f, v, horizon, rate, cme.options());
    };

    std::vector<std::uint8_t> evolving(n);
    std::vector<double> v(n);
    for (std::size_t s = 0; s < n; ++s) {
        evolving[s] = phi[s] && !psi[s];
        v[s] = psi[s] ? 1.0 : 0.0;
    }
    v = solve(evolving, std::move(v), t2 - t1);
    if (t1 > 0.0) {
        for (std::size_t s = 0; s < n; ++s) {
            evolving[s] = phi[s];
            if (!phi[s]) v[s] = 0.0;
        }
        v = solve(evolving, std::move(v), t1);
    }
    for (double& x : v) x = std::clamp(x, 0.0, 1.0);
    return v;
}

std::vector<std::uint8_t> point_sat(const DenseCme& cme, const ReactionNetwork& net,
                                    const StateSpace& space, const csl::Formula& f) {
    const std::size_t n = cme.dim();
    return std::visit(
        [&](const auto& node) -> std::vector<std::uint8_t> {
            using T = std::decay_t<decltype(node)>;
            std::vector<std::uint8_t> out(n, 0);
            if constexpr (std::is_same_v<T, csl::TrueFormula>) {
                std::fill(out.begin(), out.end(), 1);
            } else if constexpr (std::is_same_v<T, csl::AtomicFormula>) {
                for (StateIndex s = 0; s < space.size(); ++s) {
                    const auto x = space.state(s);
                    std::int64_t sum = 0;
                    for (std::size_t i = 0; i < x.size(); ++i) sum += node.coeffs[i] * std::int64_t{x[i]};
                    out[s] = csl::compare(sum, node.cmp, node.bound);
                }
            } else if constexpr (std::is_same_v<T, csl::NotFormula>) {
                const auto a = point_sat(cme, net, space, *node.operand);
                for (std::size_t s = 0; s < n; ++s) out[s] = !a[s];
            } else if constexpr (std::is_same_v<T, csl::AndFormula>) {
                const auto a = point_sat(cme, net, space, *node.lhs);
                const auto b = point_sat(cme, net, space, *node.rhs);
                for (std::size_t s = 0; s < n; ++s) out[s] = a[s] && b[s];
            } else if constexpr (std::is_same_v<T, csl::OrFormula>) {
                const auto a = point_sat(cme, net, space, *node.lhs);
                const auto b = point_sat(cme, net, space, *node.rhs);
                for (std::size_t s = 0; s < n; ++s) out[s] = a[s] || b[s];
            } else {
                if (node.is_query()) throw Error(ErrorCode::QueryNotBoolean, "nested P=? has no truth value");
                const auto phi = point_sat(cme, net, space, *node.path.lhs);
                const auto psi = point_sat(cme, net, space, *node.path.rhs);
                const auto p = until_values(cme, phi, psi, node.path.t1, node.path.t2);
                for (std::size_t s = 0; s < n; ++s) out[s] = csl::compare(p[s], *node.cmp, node.threshold);
            }
            return out;
        },
        f.node);
}

double point_validity(const ReactionNetwork& net, const StateSpace& space, std::span<const double> point,
                      const csl::Formula& f, const OracleOptions& options) {
    const auto* prob = std::get_if<csl::ProbFormula>(&f.node);
    if (prob == nullptr || !prob->is_query()) throw Error(ErrorCode::NotQuery, "point validity needs P=?");
    const DenseCme cme(net, space, point, options);
    const auto phi = point_sat(cme, net, space, *prob->path.lhs);
    const auto psi = point_sat(cme, net, space, *prob->path.rhs);
    return until_values(cme, phi, psi, prob->path.t1, prob->path.t2)[0];
}

}  // namespace pararob::oracle
