#include "pararob/report.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <vector>

namespace pararob {

namespace {

const char* json_bool(bool b) { return b ? "true" : "false"; }

void write_index_list(std::ostream& os, const std::vector<std::uint8_t>& mask, std::size_t n) {
    os << '[';
    bool first = true;
    for (std::size_t s = 0; s < n; ++s) {
        if (!mask[s]) continue;
        if (!first) os << ", ";
        os << s;
        first = false;
    }
    os << ']';
}

std::string svg_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

}  // namespace

void write_landscape_csv(std::ostream& os, const ReactionNetwork& net, const StateSpace& space,
                         const BoundedDistribution& dist) {
    os << "state";
    for (const auto& sp : net.species()) os << ",count_" << sp.name;
    os << ",p_lo,p_hi\n";
    for (StateIndex s = 0; s < space.size(); ++s) {
        os << s;
        for (Count c : space.state(s)) os << ',' << c;
        os << ',' << format_real(dist.lo[s]) << ',' << format_real(dist.hi[s]) << '\n';
    }
}

void write_landscape_svg(std::ostream& os, const ReactionNetwork& net, const StateSpace& space,
                         const BoundedDistribution& dist, double time) {
    constexpr double kWidth = 900, kHeight = 480;
    constexpr double kLeft = 80, kRight = 20, kTop = 30, kBottom = 80;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    const bool by_count = net.species().size() == 1;
    std::vector<StateIndex> order(space.size());
    std::iota(order.begin(), order.end(), StateIndex{0});
    if (by_count) {
        std::sort(order.begin(), order.end(),
                  [&](StateIndex a, StateIndex b) { return space.state(a)[0] < space.state(b)[0]; });
    }
    auto x_of = [&](StateIndex s) { return by_count ? double(space.state(s)[0]) : double(s); };
    double x_max = 1.0;
    double y_max = 0.0;
    for (StateIndex s = 0; s < space.size(); ++s) {
        x_max = std::max(x_max, x_of(s));
        y_max = std::max(y_max, dist.hi[s]);
    }
    if (y_max <= 0.0) y_max = 1.0;
    auto px = [&](double x) { return kLeft + plot_w * x / x_max; };
    auto py = [&](double y) { return kTop + plot_h * (1.0 - y / y_max); };

    auto polyline = [&](const std::vector<double>& ys, const char* colour) {
        os << "  <polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (StateIndex s : order) {
            if (!first) os << ' ';
            os << svg_number(px(x_of(s))) << ',' << svg_number(py(ys[s]));
            first = false;
        }
        os << "\"/>\n";
    };

    const std::string x_label = by_count ? "molecule count of " + net.species()[0].name : "state index";
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
       << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" fill=\"white\"/>\n"
       << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
       << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n"
       << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
       << kTop + plot_h << "\" stroke=\"black\"/>\n";
    os << "  <text x=\"" << kLeft << "\" y=\"" << kTop + plot_h + 16 << "\" font-size=\"12\">0</text>\n"
       << "  <text x=\"" << kLeft + plot_w << "\" y=\"" << kTop + plot_h + 16
       << "\" font-size=\"12\" text-anchor=\"end\">" << x_max << "</text>\n"
       << "  <text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4
       << "\" font-size=\"12\" text-anchor=\"end\">" << svg_number(y_max * 1000) << "e-3</text>\n"
       << "  <text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kTop + plot_h + 36
       << "\" font-size=\"14\" text-anchor=\"middle\">" << x_label << "</text>\n"
       << "  <text x=\"20\" y=\"" << kTop + plot_h / 2 << "\" font-size=\"14\" text-anchor=\"middle\""
       << " transform=\"rotate(-90 20 " << kTop + plot_h / 2 << ")\">probability at t = "
       << format_real(time) << "</text>\n";
    polyline(dist.hi, "red");
    polyline(dist.lo, "green");
    os << "  <text x=\"" << kLeft << "\" y=\"" << kHeight - 12
       << "\" font-size=\"12\">upper bound red, lower bound green; SINK mass in ["
       << format_real(dist.sink_lo) << ", " << format_real(dist.sink_hi) << "]</text>\n"
       << "</svg>\n";
}

void write_check_json(std::ostream& os, const csl::SatBounds& sat, std::size_t num_states) {
    os << "{\n  \"sat_lo\": ";
    write_index_list(os, sat.lo, num_states);
    os << ",\n  \"sat_hi\": ";
    write_index_list(os, sat.hi, num_states);
    os << ",\n  \"initial\": { \"in_sat_lo\": " << json_bool(sat.in_lo(0))
       << ", \"in_sat_hi\": " << json_bool(sat.in_hi(0)) << " }\n}\n";
}

void write_query_json(std::ostream& os, const Interval& validity) {
    os << "{\n  \"D_lo\": " << format_real(validity.lo) << ",\n  \"D_hi\": " << format_real(validity.hi)
       << "\n}\n";
}

void write_robust_json(std::ostream& os, const ReactionNetwork& net, const RobustnessResult& result) {
    os << "{\n  \"R_lo\": " << format_real(result.r_lo) << ",\n  \"R_hi\": " << format_real(result.r_hi)
       << ",\n  \"gap\": " << format_real(result.gap) << ",\n  \"boxes\": [";
    for (std::size_t i = 0; i < result.partition.size(); ++i) {
        const auto& e = result.partition[i];
        os << (i ? ",\n" : "\n") << "    { \"box\": { ";
        for (std::size_t d = 0; d < e.box.size(); ++d) {
            os << (d ? ", " : "") << '"' << net.params()[d].name << "\": [" << format_real(e.box[d].lo)
               << ", " << format_real(e.box[d].hi) << ']';
        }
        os << " }, \"D_lo\": " << format_real(e.validity.lo) << ", \"D_hi\": " << format_real(e.validity.hi)
           << ", \"mass\": " << format_real(e.mass) << " }";
    }
    os << "\n  ],\n  \"budget_exhausted\": " << json_bool(result.budget_exhausted)
       << ",\n  \"boxes_evaluated\": " << result.boxes_evaluated << "\n}\n";
}

void write_partition_csv(std::ostream& os, const ReactionNetwork& net, const RobustnessResult& result) {
    for (const auto& p : net.params()) os << p.name << "_lo,";
    for (const auto& p : net.params()) os << p.name << "_hi,";
    os << "D_lo,D_hi,mass\n";
    for (const auto& e : result.partition) {
        for (std::size_t d = 0; d < e.box.size(); ++d) os << format_real(e.box[d].lo) << ',';
        for (std::size_t d = 0; d < e.box.size(); ++d) os << format_real(e.box[d].hi) << ',';
        os << format_real(e.validity.lo) << ',' << format_real(e.validity.hi) << ',' << format_real(e.mass)
           << '\n';
    }
}

}  // namespace pararob
