#include "pararob/state_space.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <string>

#include "pararob/error.hpp"

namespace pararob {

namespace {

std::uint64_t hash_counts(std::span<const Count> counts) {
    // FNV-1a over the 32-bit words, followed by a final avalanche.
    std::uint64_t h = 1469598103934665603ull;
    for (Count c : counts) {
        h ^= c;
        h *= 1099511628211ull;
    }
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return h;
}

/// Open-addressing index over a growing flat table of count vectors.
class StateTable {
public:
    explicit StateTable(std::size_t num_species) : num_species_(num_species), slots_(1024, kSink) {}

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] std::span<const Count> at(StateIndex s) const {
        return {counts_.data() + static_cast<std::size_t>(s) * num_species_, num_species_};
    }

    /// Returns (index, inserted).
    std::pair<StateIndex, bool> insert(std::span<const Count> counts) {
        if ((size_ + 1) * 2 > slots_.size()) grow();
        std::size_t mask = slots_.size() - 1;
        std::size_t i = hash_counts(counts) & mask;
        while (slots_[i] != kSink) {
            if (std::equal(counts.begin(), counts.end(), at(slots_[i]).begin())) return {slots_[i], false};
            i = (i + 1) & mask;
        }
        const auto idx = static_cast<StateIndex>(size_);
        slots_[i] = idx;
        counts_.insert(counts_.end(), counts.begin(), counts.end());
        ++size_;
        return {idx, true};
    }

    std::vector<Count> take_counts() { return std::move(counts_); }
    std::vector<StateIndex> take_slots() { return std::move(slots_); }

private:
    void grow() {
        std::vector<StateIndex> slots(slots_.size() * 2, kSink);
        const std::size_t mask = slots.size() - 1;
        for (std::size_t s = 0; s < size_; ++s) {
            std::size_t i = hash_counts(at(static_cast<StateIndex>(s))) & mask;
            while (slots[i] != kSink) i = (i + 1) & mask;
            slots[i] = static_cast<StateIndex>(s);
        }
        slots_ = std::move(slots);
    }

    std::size_t num_species_;
    std::size_t size_ = 0;
    std::vector<Count> counts_;
    std::vector<StateIndex> slots_;
};

std::vector<StateIndex> build_slots(std::size_t num_species, std::span<const Count> counts,
                                    std::size_t num_states) {
    const std::size_t capacity = std::bit_ceil(std::max<std::size_t>(16, num_states * 2));
    std::vector<StateIndex> slots(capacity, kSink);
    const std::size_t mask = capacity - 1;
    for (std::size_t s = 0; s < num_states; ++s) {
        std::size_t i = hash_counts(counts.subspan(s * num_species, num_species)) & mask;
        while (slots[i] != kSink) i = (i + 1) & mask;
        slots[i] = static_cast<StateIndex>(s);
    }
    return slots;
}

}  // namespace

StateSpace::StateSpace(std::size_t num_species, std::vector<Count> counts,
                       std::vector<std::size_t> row_offsets, std::vector<Transition> transitions)
    : num_species_(num_species),
      num_states_(num_species == 0 ? 0 : counts.size() / num_species),
      counts_(std::move(counts)),
      row_offsets_(std::move(row_offsets)),
      transitions_(std::move(transitions)) {
    if (row_offsets_.size() != num_states_ + 1 || row_offsets_.back() != transitions_.size()) {
        throw Error(ErrorCode::InvalidArgument, "inconsistent state space rows");
    }
    hash_slots_ = build_slots(num_species_, counts_, num_states_);
}

StateIndex StateSpace::find(std::span<const Count> counts) const {
    if (counts.size() != num_species_) return kSink;
    const std::size_t mask = hash_slots_.size() - 1;
    std::size_t i = hash_counts(counts) & mask;
    while (hash_slots_[i] != kSink) {
        const auto s = hash_slots_[i];
        const auto candidate = state(s);
        if (std::equal(counts.begin(), counts.end(), candidate.begin())) return s;
        i = (i + 1) & mask;
    }
    return kSink;
}

StateSpace enumerate_states(const ReactionNetwork& net, const EnumerationOptions& options) {
    const auto& species = net.species();
    const auto& reactions = net.reactions();
    const std::size_t ns = species.size();

    StateTable table(ns);
    std::vector<Count> init(ns);
    for (std::size_t i = 0; i < ns; ++i) init[i] = species[i].init;
    table.insert(init);

    std::vector<std::size_t> row_offsets{0};
    std::vector<Transition> transitions;
    std::vector<Count> current(ns);
    std::vector<Count> next(ns);

    // The table doubles as the BFS queue: states are expanded in index order.
    for (std::size_t s = 0; s < table.size(); ++s) {
        const auto src = table.at(static_cast<StateIndex>(s));
        current.assign(src.begin(), src.end());
        for (std::size_t r = 0; r < reactions.size(); ++r) {
            const auto& rx = reactions[r];
            const double h = combinations(current, rx.reactants);
            if (h <= 0.0) continue;
            bool in_bounds = true;
            for (std::size_t i = 0; i < ns; ++i) {
                const std::uint64_t v =
                    static_cast<std::uint64_t>(current[i]) - rx.reactants[i] + rx.products[i];
                if (v > species[i].max) in_bounds = false;
                next[i] = static_cast<Count>(std::min<std::uint64_t>(v, species[i].max));
            }
            StateIndex target = kSink;
            if (in_bounds) {
                const auto [idx, inserted] = table.insert(next);
                if (inserted && table.size() > options.max_states) {
                    throw Error(ErrorCode::Explosion,
                                "state space exceeds " + std::to_string(options.max_states) + " states");
                }
                target = idx;
            }
            transitions.push_back({static_cast<std::uint32_t>(r), target, h});
        }
        row_offsets.push_back(transitions.size());
    }

    return StateSpace(ns, table.take_counts(), std::move(row_offsets), std::move(transitions));
}

IntervalGenerator build_generator(std::shared_ptr<const StateSpace> space,
                                  const ReactionNetwork& net, const ParamBox& box) {
    if (box.size() != net.params().size()) {
        throw Error(ErrorCode::InvalidArgument, "parameter box dimension does not match the model");
    }
    if (!net.declared_box().contains(box)) {
        throw Error(ErrorCode::Bounds, "parameter box leaves the declared parameter ranges");
    }
    IntervalGenerator gen;
    gen.space_ = std::move(space);
    gen.box_ = box;
    const StateSpace& sp = *gen.space_;
    gen.rates_.resize(sp.num_transitions());
    gen.exits_.resize(sp.size());
    gen.point_ = true;

    const auto& reactions = net.reactions();
    for (StateIndex s = 0; s < sp.size(); ++s) {
        const auto row = sp.transitions(s);
        const std::size_t base = sp.row_offset(s);
        Interval exit{0.0, 0.0};
        for (std::size_t j = 0; j < row.size(); ++j) {
            const auto& rx = reactions[row[j].reaction];
            const Interval& k = box[rx.param];
            // Same association as propensity(): k * scale * h.
            const Interval q{k.lo * rx.rate_scale * row[j].combinations,
                             k.hi * rx.rate_scale * row[j].combinations};
            gen.rates_[base + j] = q;
            exit.lo += q.lo;
            exit.hi += q.hi;
            if (q.lo != q.hi) gen.point_ = false;
        }
        gen.exits_[s] = exit;
        gen.lambda_ = std::max(gen.lambda_, exit.hi);
    }
    return gen;
}

void write_generator_dump(std::ostream& os, const IntervalGenerator& gen,
                          const ReactionNetwork& net) {
    const StateSpace& sp = gen.space();
    for (StateIndex s = 0; s < sp.size(); ++s) {
        const auto row = sp.transitions(s);
        const auto rates = gen.rates(s);
        for (std::size_t j = 0; j < row.size(); ++j) {
            os << s << ' ' << net.reactions()[row[j].reaction].name << ' ';
            if (row[j].target == kSink) {
                os << "SINK";
            } else {
                os << row[j].target;
            }
            os << ' ' << format_real(rates[j].lo) << ' ' << format_real(rates[j].hi) << '\n';
        }
    }
}

}  // namespace pararob
