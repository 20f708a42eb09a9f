#include "pararob/robustness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "pararob/error.hpp"

namespace pararob {

namespace {

constexpr double kWidthFloor = 1e-300;
constexpr double kVolumeSlack = 1e-12;
// Boxes split per refinement round. Fixed so the partition is independent of the worker count.
constexpr std::size_t kSplitsPerRound = 8;

/// Volume of `b` measured over the dimensions along which `P` has positive width.
double volume_in(const ParamBox& b, const ParamBox& P) {
    double v = 1.0;
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (P[i].width() > 0.0) v *= std::max(0.0, b[i].width());
    }
    return v;
}

ParamBox intersect_box(const ParamBox& a, const ParamBox& b) {
    std::vector<Interval> dims(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Interval iv = intersect(a[i], b[i]);
        dims[i] = iv.lo <= iv.hi ? iv : Interval{iv.lo, iv.lo};
    }
    return ParamBox(std::move(dims));
}

bool overlaps_with_volume(const ParamBox& a, const ParamBox& b, const ParamBox& P) {
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (P[i].width() == 0.0) continue;
        if (std::max(a[i].lo, b[i].lo) >= std::min(a[i].hi, b[i].hi)) return false;
    }
    return true;
}

void check_dims(const ParamBox& b, const ParamBox& P) {
    if (b.size() != P.size()) {
        throw Error(ErrorCode::InvalidArgument, "box dimension does not match the perturbation space");
    }
}

/// Run task(i) for i in [0, n) on up to `workers` threads; rethrows the first failure by index.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& task) {
    std::vector<std::exception_ptr> errors(n);
    auto guarded = [&](std::size_t i) {
        try {
            task(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) guarded(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) guarded(i);
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

std::pair<ParamBox, ParamBox> split_box(const ParamBox& b) {
    std::size_t best = b.size();
    double best_rel = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double rel = b[i].width() / std::max(std::abs(b[i].hi), kWidthFloor);
        if (rel > best_rel) {
            best_rel = rel;
            best = i;
        }
    }
    if (best == b.size()) throw Error(ErrorCode::Atomic, "cannot split a box of zero width");
    const double mid = b[best].midpoint();
    if (!(mid > b[best].lo && mid < b[best].hi)) {
        throw Error(ErrorCode::Atomic, "box is too narrow to split in floating point");
    }
    return {b.with(best, {b[best].lo, mid}), b.with(best, {mid, b[best].hi})};
}

double weight_mass(const WeightSpec& w, const ParamBox& b, const ParamBox& P) {
    check_dims(b, P);
    if (!P.contains(b)) throw Error(ErrorCode::InvalidArgument, "box lies outside the perturbation space");
    const double total_volume = volume_in(P, P);
    if (w.is_uniform()) {
        if (P.is_point() || total_volume == 0.0) return 1.0;
        return std::clamp(volume_in(b, P) / total_volume, 0.0, 1.0);
    }

    double covered = 0.0;
    double weighted = 0.0;
    double total = 0.0;
    for (const auto& piece : w.pieces) {
        check_dims(piece.box, P);
        if (!(piece.density >= 0.0) || !std::isfinite(piece.density)) {
            throw Error(ErrorCode::InvalidArgument, "weight density must be finite and nonnegative");
        }
        const double in_b = volume_in(intersect_box(piece.box, b), P);
        covered += in_b;
        weighted += piece.density * in_b;
        total += piece.density * volume_in(intersect_box(piece.box, P), P);
    }
    const double need = volume_in(b, P);
    if (covered < need * (1.0 - kVolumeSlack)) {
        throw Error(ErrorCode::Coverage, "weight specification does not cover the box");
    }
    if (total_volume == 0.0) return 1.0;
    if (!(total > 0.0)) throw Error(ErrorCode::Coverage, "weight specification has zero total mass");
    return std::clamp(weighted / total, 0.0, 1.0);
}

Interval robustness_bounds(const std::vector<PartitionEntry>& partition, const WeightSpec& w,
                           const ParamBox& P) {
    if (partition.empty()) throw Error(ErrorCode::Tiling, "empty partition");
    const double total_volume = volume_in(P, P);
    double volume = 0.0;
    for (std::size_t i = 0; i < partition.size(); ++i) {
        check_dims(partition[i].box, P);
        if (!P.contains(partition[i].box)) {
            throw Error(ErrorCode::Tiling, "partition box lies outside the perturbation space");
        }
        volume += volume_in(partition[i].box, P);
        for (std::size_t j = 0; j < i; ++j) {
            if (overlaps_with_volume(partition[i].box, partition[j].box, P)) {
                throw Error(ErrorCode::Tiling, "partition boxes overlap");
            }
        }
    }
    if (total_volume == 0.0) {
        if (partition.size() != 1) throw Error(ErrorCode::Tiling, "a point space has a single box");
    } else if (std::abs(volume - total_volume) > kVolumeSlack * total_volume) {
        throw Error(ErrorCode::Tiling, "partition boxes do not cover the perturbation space");
    }

    double lo = 0.0;
    double hi = 0.0;
    for (const auto& e : partition) {
        const double m = weight_mass(w, e.box, P);
        lo += m * e.validity.lo;
        hi += m * e.validity.hi;
    }
    return {std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0)};
}

RobustnessResult refine(const ReactionNetwork& net, std::shared_ptr<const StateSpace> space,
                        const csl::Formula& formula, const ParamBox& P, const WeightSpec& w,
                        const RefineOptions& options) {
    if (!(options.epsilon > 4.0 * options.delta)) {
        throw Error(ErrorCode::EpsilonTooTight, "epsilon must exceed 4 * delta");
    }
    if (options.budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be at least 1");
    const auto* root = std::get_if<csl::ProbFormula>(&formula.node);
    if (root == nullptr || !root->is_query()) {
        throw Error(ErrorCode::NotQuery, "robustness needs a P=? property");
    }

    // The root box's exit rates dominate every sub-box, so one ceiling serves the whole run.
    const IntervalGenerator root_gen = build_generator(space, net, P);
    csl::CheckOptions check_options;
    check_options.delta = options.delta;
    check_options.poisson = options.poisson;
    check_options.exit_ceiling.resize(root_gen.size());
    for (std::size_t s = 0; s < root_gen.size(); ++s) {
        check_options.exit_ceiling[s] = root_gen.exit_rate(static_cast<StateIndex>(s)).hi;
    }

    auto evaluate = [&](const ParamBox& box) {
        const IntervalGenerator gen = build_generator(space, net, box);
        return csl::ModelChecker(gen, check_options).quantitative_validity(formula);
    };

    struct Leaf {
        PartitionEntry entry;
        std::size_t created;
        bool atomic = false;
    };
    std::vector<Leaf> leaves;
    leaves.push_back({{P, csl::ModelChecker(root_gen, check_options).quantitative_validity(formula),
                       weight_mass(w, P, P)},
                      0});
    std::size_t created = 1;

    RobustnessResult result;
    result.boxes_evaluated = 1;
    auto bracket = [&] {
        double lo = 0.0;
        double hi = 0.0;
        for (const auto& l : leaves) {
            lo += l.entry.mass * l.entry.validity.lo;
            hi += l.entry.mass * l.entry.validity.hi;
        }
        lo = std::clamp(lo, 0.0, 1.0);
        return Interval{lo, std::clamp(hi, lo, 1.0)};
    };
    auto current_gap = [&] { return bracket().width(); };
    double gap = current_gap();
    result.gap_history.push_back(gap);

    while (gap > options.epsilon) {
        const std::size_t room = (options.budget - result.boxes_evaluated) / 2;
        if (room == 0) {
            result.budget_exhausted = true;
            break;
        }
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            if (!leaves[i].atomic && leaves[i].entry.mass * leaves[i].entry.validity.width() > 0.0) {
                order.push_back(i);
            }
        }
        if (order.empty()) break;  // stalled: nothing left that can be split
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double ga = leaves[a].entry.mass * leaves[a].entry.validity.width();
            const double gb = leaves[b].entry.mass * leaves[b].entry.validity.width();
            if (ga != gb) return ga > gb;
            return leaves[a].created < leaves[b].created;
        });

        const std::size_t quota = std::min(kSplitsPerRound, room);
        std::vector<std::size_t> parents;
        std::vector<ParamBox> children;
        for (std::size_t i : order) {
            if (parents.size() == quota) break;
            try {
                auto [a, b] = split_box(leaves[i].entry.box);
                parents.push_back(i);
                children.push_back(std::move(a));
                children.push_back(std::move(b));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::Atomic) throw;
                leaves[i].atomic = true;
            }
        }
        if (parents.empty()) continue;  // every candidate turned out atomic; re-rank

        std::vector<Interval> values(children.size());
        parallel_for(children.size(), options.workers,
                     [&](std::size_t i) { values[i] = evaluate(children[i]); });
        result.boxes_evaluated += children.size();

        std::vector<Leaf> next;
        next.reserve(leaves.size() + parents.size());
        std::vector<std::uint8_t> replaced(leaves.size(), 0);
        for (std::size_t i : parents) replaced[i] = 1;
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            if (!replaced[i]) next.push_back(std::move(leaves[i]));
        }
        for (std::size_t k = 0; k < parents.size(); ++k) {
            const Interval parent = leaves[parents[k]].entry.validity;
            for (std::size_t c = 0; c < 2; ++c) {
                const std::size_t idx = 2 * k + c;
                // Children are at least as tight as the parent; intersecting keeps the bracket
                // monotone despite independent rounding in the two evaluations.
                Interval v = intersect(values[idx], parent);
                if (v.lo > v.hi) v = {v.lo, v.lo};
                next.push_back({{children[idx], v, weight_mass(w, children[idx], P)}, created++});
            }
        }
        leaves = std::move(next);
        gap = current_gap();
        result.gap_history.push_back(gap);
    }

    const Interval r = bracket();
    result.r_lo = r.lo;
    result.r_hi = r.hi;
    result.gap = r.width();
    std::sort(leaves.begin(), leaves.end(), [](const Leaf& a, const Leaf& b) {
        for (std::size_t i = 0; i < a.entry.box.size(); ++i) {
            if (a.entry.box[i].lo != b.entry.box[i].lo) return a.entry.box[i].lo < b.entry.box[i].lo;
        }
        return a.created < b.created;
    });
    for (auto& l : leaves) result.partition.push_back(std::move(l.entry));
    return result;
}

}  // namespace pararob
