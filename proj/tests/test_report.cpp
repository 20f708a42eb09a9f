#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>

#include "pararob/report.hpp"
#include "support.hpp"

using namespace pararob;
using nlohmann::json;

namespace {

struct BirthDeath {
    ReactionNetwork net = load_model(test::golden_path("birth_death.model"));
    std::shared_ptr<const StateSpace> space = test::space_of(net);
    IntervalGenerator gen = build_generator(space, net, net.declared_box());
    BoundedDistribution dist = transient_bounds(gen, initial_distribution(*space), 1.0);
};

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST(Report, LandscapeCsv) {
    const BirthDeath m;
    std::ostringstream os;
    write_landscape_csv(os, m.net, *m.space, m.dist);
    const auto lines = lines_of(os.str());
    ASSERT_EQ(lines.size(), m.space->size() + 1);
    EXPECT_EQ(lines[0], "state,count_X,p_lo,p_hi");
    for (std::size_t s = 0; s < m.space->size(); ++s) {
        std::istringstream row(lines[s + 1]);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        ASSERT_EQ(cells.size(), 4u);
        EXPECT_EQ(std::stoul(cells[0]), s);
        EXPECT_EQ(std::stoul(cells[1]), m.space->state(s)[0]);
        // Round trip is exact with 17 significant digits.
        EXPECT_EQ(std::stod(cells[2]), m.dist.lo[s]);
        EXPECT_EQ(std::stod(cells[3]), m.dist.hi[s]);
    }
}

TEST(Report, LandscapeSvgHasTwoColouredPolylines) {
    const BirthDeath m;
    std::ostringstream os;
    write_landscape_svg(os, m.net, *m.space, m.dist, 1.0);
    const std::string svg = os.str();
    const std::regex poly(R"re(<polyline[^>]*stroke="(\w+)"[^>]*points="([^"]*)"/>)re");
    std::vector<std::string> colours;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly); it != std::sregex_iterator(); ++it) {
        colours.push_back((*it)[1]);
        std::istringstream pts((*it)[2].str());
        std::size_t n = 0;
        for (std::string p; pts >> p;) ++n;
        EXPECT_EQ(n, m.space->size());
    }
    EXPECT_EQ(colours, (std::vector<std::string>{"red", "green"}));
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("molecule count of X"), std::string::npos);
    // Every opened tag is closed.
    std::size_t open = 0, self_closed = 0, closed = 0;
    for (std::size_t i = 0; (i = svg.find('<', i)) != std::string::npos; ++i) {
        if (svg.compare(i, 2, "<?") == 0) continue;
        if (svg[i + 1] == '/') {
            ++closed;
        } else {
            const auto end = svg.find('>', i);
            if (svg[end - 1] == '/') ++self_closed;
            else ++open;
        }
    }
    EXPECT_EQ(open, closed);
    EXPECT_GT(self_closed, 0u);
}

TEST(Report, CheckJson) {
    const BirthDeath m;
    const auto f = csl::parse_csl("P>=0.1 [ F[0,1] X>=2 ]", m.net);
    const auto sat = csl::check_formula(m.gen, *f);
    std::ostringstream os;
    write_check_json(os, sat, m.space->size());
    const auto j = json::parse(os.str());
    std::vector<std::size_t> lo, hi;
    for (std::size_t s = 0; s < m.space->size(); ++s) {
        if (sat.in_lo(s)) lo.push_back(s);
        if (sat.in_hi(s)) hi.push_back(s);
    }
    EXPECT_EQ(j.at("sat_lo").get<std::vector<std::size_t>>(), lo);
    EXPECT_EQ(j.at("sat_hi").get<std::vector<std::size_t>>(), hi);
    EXPECT_EQ(j.at("initial").at("in_sat_lo").get<bool>(), sat.in_lo(0));
    EXPECT_EQ(j.at("initial").at("in_sat_hi").get<bool>(), sat.in_hi(0));
}

TEST(Report, QueryJsonRoundTrips) {
    std::ostringstream os;
    write_query_json(os, {0.1, 1.0 / 3.0});
    const auto j = json::parse(os.str());
    EXPECT_EQ(j.at("D_lo").get<double>(), 0.1);
    EXPECT_EQ(j.at("D_hi").get<double>(), 1.0 / 3.0);
}

TEST(Report, RobustJsonAndPartitionCsv) {
    const BirthDeath m;
    const auto f = csl::parse_csl("P=? [ F[0,1] X>=2 ]", m.net);
    RefineOptions options;
    options.epsilon = 0.05;
    const auto r = refine(m.net, m.space, *f, m.net.declared_box(), WeightSpec::uniform(), options);

    std::ostringstream js;
    write_robust_json(js, m.net, r);
    const auto j = json::parse(js.str());
    EXPECT_EQ(j.at("R_lo").get<double>(), r.r_lo);
    EXPECT_EQ(j.at("R_hi").get<double>(), r.r_hi);
    EXPECT_EQ(j.at("gap").get<double>(), r.gap);
    EXPECT_EQ(j.at("budget_exhausted").get<bool>(), r.budget_exhausted);
    EXPECT_EQ(j.at("boxes_evaluated").get<std::size_t>(), r.boxes_evaluated);
    ASSERT_EQ(j.at("boxes").size(), r.partition.size());
    for (std::size_t i = 0; i < r.partition.size(); ++i) {
        const auto& b = j.at("boxes")[i];
        EXPECT_EQ(b.at("box").size(), 2u);
        EXPECT_EQ(b.at("box").at("kb")[0].get<double>(), r.partition[i].box[0].lo);
        EXPECT_EQ(b.at("box").at("kd")[1].get<double>(), r.partition[i].box[1].hi);
        EXPECT_EQ(b.at("D_lo").get<double>(), r.partition[i].validity.lo);
        EXPECT_EQ(b.at("mass").get<double>(), r.partition[i].mass);
    }

    std::ostringstream cs;
    write_partition_csv(cs, m.net, r);
    const auto lines = lines_of(cs.str());
    ASSERT_EQ(lines.size(), r.partition.size() + 1);
    EXPECT_EQ(lines[0], "kb_lo,kd_lo,kb_hi,kd_hi,D_lo,D_hi,mass");
}
