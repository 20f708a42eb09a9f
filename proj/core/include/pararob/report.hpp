#pragma once

#include <ostream>
#include <string>

#include "pararob/csl.hpp"
#include "pararob/interval.hpp"
#include "pararob/model.hpp"
#include "pararob/robustness.hpp"
#include "pararob/state_space.hpp"
#include "pararob/transient.hpp"

namespace pararob {

/// "state,count_<species>...,p_lo,p_hi", one row per state in index order.
void write_landscape_csv(std::ostream& os, const ReactionNetwork& net, const StateSpace& space,
                         const BoundedDistribution& dist);

/// Upper bounds as a red polyline, lower bounds as a green one. Single-species models are plotted
/// against the molecule count, others against the state index.
void write_landscape_svg(std::ostream& os, const ReactionNetwork& net, const StateSpace& space,
                         const BoundedDistribution& dist, double time);

/// {"sat_lo": [...], "sat_hi": [...], "initial": {"in_sat_lo": b, "in_sat_hi": b}}. SINK omitted.
void write_check_json(std::ostream& os, const csl::SatBounds& sat, std::size_t num_states);

/// {"D_lo": x, "D_hi": y}
void write_query_json(std::ostream& os, const Interval& validity);

void write_robust_json(std::ostream& os, const ReactionNetwork& net, const RobustnessResult& result);

/// "<p>_lo...,<p>_hi...,D_lo,D_hi,mass", one row per partition box.
void write_partition_csv(std::ostream& os, const ReactionNetwork& net, const RobustnessResult& result);

}  // namespace pararob
