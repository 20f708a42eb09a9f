#include "pararob/transient.hpp"

#include <algorithm>
#include <cmath>

#include "pararob/error.hpp"

namespace pararob {

namespace {

// Values below this are flushed: lower bounds to 0 and upper bounds up to kTiny. Both moves
// keep the bounds sound and keep the inner loops out of subnormal arithmetic.
constexpr double kTiny = 1e-300;

/// Uniformized transition probabilities of an interval generator, precomputed once per run.
class Stepper {
public:
    Stepper(const IntervalGenerator& gen, double lambda) : n_(gen.size()) {
        const StateSpace& sp = gen.space();
        offsets_.reserve(n_ + 1);
        offsets_.push_back(0);
        self_lo_.resize(n_);
        self_hi_.resize(n_);
        for (StateIndex s = 0; s < n_; ++s) {
            const auto row = sp.transitions(s);
            const auto rates = gen.rates(s);
            for (std::size_t j = 0; j < row.size(); ++j) {
                targets_.push_back(row[j].target);
                p_lo_.push_back(lambda > 0.0 ? rates[j].lo / lambda : 0.0);
                p_hi_.push_back(lambda > 0.0 ? rates[j].hi / lambda : 0.0);
            }
            offsets_.push_back(targets_.size());
            const Interval& e = gen.exit_rate(s);
            self_lo_[s] = lambda > 0.0 ? 1.0 - e.hi / lambda : 1.0;
            self_hi_[s] = lambda > 0.0 ? 1.0 - e.lo / lambda : 1.0;
        }
    }

    void step(const IntervalVector& v, IntervalVector& out) const {
        out.lo.resize(n_);
        out.hi.resize(n_);
        for (std::size_t u = 0; u < n_; ++u) {
            out.lo[u] = v.lo[u] * self_lo_[u];
            out.hi[u] = v.hi[u] * self_hi_[u];
        }
        double sink_lo = v.sink_lo;
        double sink_hi = v.sink_hi;
        for (std::size_t s = 0; s < n_; ++s) {
            const double lo = v.lo[s];
            const double hi = v.hi[s];
            if (hi == 0.0) continue;
            for (std::size_t j = offsets_[s]; j < offsets_[s + 1]; ++j) {
                const StateIndex u = targets_[j];
                if (u == kSink) {
                    sink_lo += lo * p_lo_[j];
                    sink_hi += hi * p_hi_[j];
                } else {
                    out.lo[u] += lo * p_lo_[j];
                    out.hi[u] += hi * p_hi_[j];
                }
            }
        }
        for (std::size_t u = 0; u < n_; ++u) {
            double lo = std::clamp(out.lo[u], 0.0, 1.0);
            double hi = std::clamp(out.hi[u], 0.0, 1.0);
            if (lo < kTiny) lo = 0.0;
            if (hi > 0.0 && hi < kTiny) hi = kTiny;
            out.lo[u] = lo;
            out.hi[u] = hi;
        }
        out.sink_lo = std::clamp(sink_lo, 0.0, 1.0);
        out.sink_hi = std::clamp(sink_hi, 0.0, 1.0);
    }

    /// Exact step for a point generator (lo channel only).
    void step_point(std::span<const double> v, double sink, std::vector<double>& out,
                    double& sink_out) const {
        out.resize(n_);
        for (std::size_t u = 0; u < n_; ++u) out[u] = v[u] * self_lo_[u];
        for (std::size_t s = 0; s < n_; ++s) {
            const double x = v[s];
            if (x == 0.0) continue;
            for (std::size_t j = offsets_[s]; j < offsets_[s + 1]; ++j) {
                const StateIndex u = targets_[j];
                if (u == kSink) {
                    sink += x * p_lo_[j];
                } else {
                    out[u] += x * p_lo_[j];
                }
            }
        }
        for (double& x : out) {
            x = std::clamp(x, 0.0, 1.0);
            if (x < kTiny) x = 0.0;
        }
        sink_out = std::clamp(sink, 0.0, 1.0);
    }

private:
    std::size_t n_;
    std::vector<std::size_t> offsets_;
    std::vector<StateIndex> targets_;
    std::vector<double> p_lo_;
    std::vector<double> p_hi_;
    std::vector<double> self_lo_;
    std::vector<double> self_hi_;
};

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw Error(ErrorCode::InvalidArgument, "time horizon must be finite and nonnegative");
    }
}

double rate_for(const IntervalGenerator& gen, const TransientOptions& options) {
    if (options.uniformization_rate == 0.0) return gen.uniformization_rate();
    if (!(options.uniformization_rate >= gen.uniformization_rate()) ||
        !std::isfinite(options.uniformization_rate)) {
        throw Error(ErrorCode::InvalidArgument, "uniformization rate below the generator's exit rates");
    }
    return options.uniformization_rate;
}

void check_init(const IntervalGenerator& gen, const Distribution& init) {
    if (init.probs.size() != gen.size()) {
        throw Error(ErrorCode::InvalidArgument, "initial distribution size does not match the state space");
    }
}

}  // namespace

Distribution initial_distribution(const StateSpace& space) {
    Distribution d;
    d.probs.assign(space.size(), 0.0);
    if (!d.probs.empty()) d.probs[0] = 1.0;
    return d;
}

void step_bounds(const IntervalGenerator& gen, const IntervalVector& v, IntervalVector& out) {
    if (v.lo.size() != gen.size() || v.hi.size() != gen.size()) {
        throw Error(ErrorCode::InvalidArgument, "interval vector size does not match the state space");
    }
    if (gen.uniformization_rate() == 0.0) {
        out = v;
        return;
    }
    Stepper(gen, gen.uniformization_rate()).step(v, out);
}

IntervalVector step_bounds(const IntervalGenerator& gen, const IntervalVector& v) {
    IntervalVector out;
    step_bounds(gen, v, out);
    return out;
}

Distribution transient_point(const IntervalGenerator& gen, const Distribution& init, double t,
                             const TransientOptions& options) {
    if (!gen.is_point()) {
        throw Error(ErrorCode::InvalidArgument, "transient_point needs a generator built for a point box");
    }
    check_time(t);
    check_init(gen, init);

    const double lambda = rate_for(gen, options);
    const PoissonWindow window = fox_glynn(lambda * t, 0.5 * options.delta, options.poisson);
    const Stepper stepper(gen, lambda);

    Distribution acc;
    acc.probs.assign(gen.size(), 0.0);
    std::vector<double> v = init.probs;
    std::vector<double> next;
    double sink = init.sink;
    for (std::size_t i = 0;; ++i) {
        if (i >= window.left) {
            const double w = window.weights[i - window.left];
            for (std::size_t s = 0; s < v.size(); ++s) acc.probs[s] += w * v[s];
            acc.sink += w * sink;
        }
        if (i == window.right) break;
        stepper.step_point(v, sink, next, sink);
        v.swap(next);
    }
    acc.tail_error = window.tail_error;
    return acc;
}

BoundedDistribution transient_bounds(const IntervalGenerator& gen, const Distribution& init,
                                     double t, const TransientOptions& options) {
    check_time(t);
    check_init(gen, init);

    const double lambda = rate_for(gen, options);
    const PoissonWindow window = fox_glynn(lambda * t, 0.5 * options.delta, options.poisson);

    BoundedDistribution acc;
    acc.lo.assign(gen.size(), 0.0);
    acc.hi.assign(gen.size(), 0.0);
    acc.tail_error = window.tail_error;

    IntervalVector v{init.probs, init.probs, init.sink, init.sink};
    if (window.right == 0) {
        acc.lo = v.lo;
        acc.hi = v.hi;
        acc.sink_lo = acc.sink_hi = init.sink;
        return acc;
    }

    const Stepper stepper(gen, lambda);
    IntervalVector next;
    for (std::size_t i = 0;; ++i) {
        if (i >= window.left) {
            const double w = window.weights[i - window.left];
            for (std::size_t s = 0; s < v.lo.size(); ++s) {
                acc.lo[s] += w * v.lo[s];
                acc.hi[s] += w * v.hi[s];
            }
            acc.sink_lo += w * v.sink_lo;
            acc.sink_hi += w * v.sink_hi;
        }
        if (i == window.right) break;
        stepper.step(v, next);
        std::swap(v, next);
    }
    for (std::size_t s = 0; s < acc.lo.size(); ++s) {
        acc.lo[s] = std::clamp(acc.lo[s], 0.0, 1.0);
        acc.hi[s] = std::clamp(acc.hi[s], acc.lo[s], 1.0);
    }
    acc.sink_lo = std::clamp(acc.sink_lo, 0.0, 1.0);
    acc.sink_hi = std::clamp(acc.sink_hi, acc.sink_lo, 1.0);
    return acc;
}

}  // namespace pararob
