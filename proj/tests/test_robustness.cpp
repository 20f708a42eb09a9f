#include <gtest/gtest.h>

#include "pararob/robustness.hpp"
#include "support.hpp"

using namespace pararob;

namespace {

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error";
    return ErrorCode::InvalidArgument;
}

struct Schlogl {
    ReactionNetwork net = load_model(test::data_path("schlogl.model"));
    std::shared_ptr<const StateSpace> space = test::space_of(net);
    csl::FormulaPtr query = csl::load_csl(test::data_path("schlogl_query.csl"), net);
};

}  // namespace

TEST(SplitBox, Midpoint) {
    const auto [a, b] = split_box(ParamBox({{1, 3}}));
    EXPECT_EQ(a, ParamBox({{1, 2}}));
    EXPECT_EQ(b, ParamBox({{2, 3}}));
}

TEST(SplitBox, WidestRelativeDimension) {
    const auto [a, b] = split_box(ParamBox({{0, 4}, {0, 1}}));
    EXPECT_EQ(a, ParamBox({{0, 2}, {0, 1}}));
    EXPECT_EQ(b, ParamBox({{2, 4}, {0, 1}}));
    // Relative width: [1, 2] is 0.5 of its upper end, [100, 110] only about 0.09.
    const auto [c, d] = split_box(ParamBox({{100, 110}, {1, 2}}));
    EXPECT_EQ(c, ParamBox({{100, 110}, {1, 1.5}}));
    // Ties go to the lowest index.
    const auto [e, f] = split_box(ParamBox({{0, 1}, {0, 1}}));
    EXPECT_EQ(e, ParamBox({{0, 0.5}, {0, 1}}));
    (void)d;
    (void)f;
}

TEST(SplitBox, PointIsAtomic) {
    EXPECT_EQ(code_of([] { (void)split_box(ParamBox({{1, 1}, {2, 2}})); }), ErrorCode::Atomic);
}

TEST(WeightMass, Uniform) {
    const ParamBox P({{0, 2}, {5, 5}});
    EXPECT_EQ(weight_mass(WeightSpec::uniform(), ParamBox({{0, 1}, {5, 5}}), P), 0.5);
    EXPECT_EQ(weight_mass(WeightSpec::uniform(), ParamBox({{3, 3}}), ParamBox({{3, 3}})), 1.0);
}

TEST(WeightMass, PiecewiseNormalizesAndIsScaleInvariant) {
    const ParamBox P({{0, 2}});
    const ParamBox left({{0, 1}});
    const ParamBox right({{1, 2}});
    for (double c : {1.0, 3.5, 1e-6}) {
        const auto w = WeightSpec::piecewise({{left, 2 * c}, {right, 0}});
        EXPECT_DOUBLE_EQ(weight_mass(w, left, P), 1.0);
        EXPECT_DOUBLE_EQ(weight_mass(w, right, P), 0.0);
        EXPECT_DOUBLE_EQ(weight_mass(w, ParamBox({{0.5, 1.5}}), P), 0.5);
    }
}

TEST(WeightMass, CoverageGap) {
    const auto w = WeightSpec::piecewise({{ParamBox({{0, 1}}), 1.0}});
    EXPECT_EQ(code_of([&] { (void)weight_mass(w, ParamBox({{0.5, 2}}), ParamBox({{0, 2}})); }),
              ErrorCode::Coverage);
}

TEST(RobustnessBounds, Examples) {
    const ParamBox P({{0, 4}});
    const auto u = WeightSpec::uniform();
    EXPECT_EQ(robustness_bounds({{P, {1, 1}, 1}}, u, P), (Interval{1, 1}));
    EXPECT_EQ(robustness_bounds({{ParamBox({{0, 2}}), {0, 0}, 0.5}, {ParamBox({{2, 4}}), {1, 1}, 0.5}}, u, P),
              (Interval{0.5, 0.5}));
    const auto r = robustness_bounds({{ParamBox({{0, 1}}), {0.1, 0.2}, 0.25},
                                      {ParamBox({{1, 2}}), {0.3, 0.3}, 0.25},
                                      {ParamBox({{2, 4}}), {0.5, 0.9}, 0.5}},
                                     u, P);
    EXPECT_EQ(r, (Interval{0.35, 0.575}));
}

TEST(RobustnessBounds, TilingErrors) {
    const ParamBox P({{0, 4}});
    const auto u = WeightSpec::uniform();
    EXPECT_EQ(code_of([&] { (void)robustness_bounds({{ParamBox({{0, 2}}), {0, 0}, 0.5}}, u, P); }),
              ErrorCode::Tiling);
    EXPECT_EQ(code_of([&] {
                  (void)robustness_bounds(
                      {{ParamBox({{0, 3}}), {0, 0}, 0.5}, {ParamBox({{1, 4}}), {0, 0}, 0.5}}, u, P);
              }),
              ErrorCode::Tiling);
}

TEST(Refine, TrueQueryNeedsNoSplits) {
    const Schlogl m;
    const auto f = csl::load_csl(test::data_path("true_query.csl"), m.net);
    const auto r = refine(m.net, m.space, *f, m.net.declared_box(), WeightSpec::uniform());
    EXPECT_EQ(r.partition.size(), 1u);
    EXPECT_EQ(r.r_lo, 1.0);
    EXPECT_EQ(r.r_hi, 1.0);
    EXPECT_EQ(r.gap, 0.0);
    EXPECT_EQ(r.boxes_evaluated, 1u);
}

TEST(Refine, PointSpace) {
    const auto net = load_model(test::data_path("schlogl_point.model"));
    const auto f = csl::load_csl(test::data_path("schlogl_query.csl"), net);
    RefineOptions options;
    const auto r = refine(net, test::space_of(net), *f, net.declared_box(), WeightSpec::uniform(), options);
    EXPECT_EQ(r.boxes_evaluated, 1u);
    EXPECT_LE(r.gap, 2 * options.delta);
}

TEST(Refine, BudgetOfOne) {
    const Schlogl m;
    RefineOptions options;
    options.budget = 1;
    const auto r = refine(m.net, m.space, *m.query, m.net.declared_box(), WeightSpec::uniform(), options);
    EXPECT_TRUE(r.budget_exhausted);
    EXPECT_EQ(r.partition.size(), 1u);
    EXPECT_EQ(r.boxes_evaluated, 1u);
}

TEST(Refine, RejectsTightEpsilonAndNonQuery) {
    const Schlogl m;
    RefineOptions tight;
    tight.epsilon = 4e-10;
    EXPECT_EQ(code_of([&] {
                  (void)refine(m.net, m.space, *m.query, m.net.declared_box(), WeightSpec::uniform(), tight);
              }),
              ErrorCode::EpsilonTooTight);
    const auto f = csl::parse_csl("P>=0.5 [ F[0,2] X>=400 ]", m.net);
    EXPECT_EQ(code_of([&] { (void)refine(m.net, m.space, *f, m.net.declared_box(), WeightSpec::uniform()); }),
              ErrorCode::NotQuery);
}

TEST(Refine, SchloglInvariantsAndWorkerIndependence) {
    const Schlogl m;
    const ParamBox P = m.net.declared_box();
    RefineOptions options;
    options.epsilon = 0.05;
    const auto r1 = refine(m.net, m.space, *m.query, P, WeightSpec::uniform(), options);
    options.workers = 4;
    const auto r4 = refine(m.net, m.space, *m.query, P, WeightSpec::uniform(), options);

    EXPECT_LE(r1.gap, 0.05);
    EXPECT_FALSE(r1.budget_exhausted);
    EXPECT_LE(r1.boxes_evaluated, options.budget);
    for (std::size_t i = 1; i < r1.gap_history.size(); ++i) {
        EXPECT_LE(r1.gap_history[i], r1.gap_history[i - 1] + 1e-12);
    }
    double mass = 0.0;
    for (const auto& e : r1.partition) mass += e.mass;
    EXPECT_NEAR(mass, 1.0, 1e-12);
    const auto bracket = robustness_bounds(r1.partition, WeightSpec::uniform(), P);
    EXPECT_NEAR(bracket.lo, r1.r_lo, 1e-12);
    EXPECT_NEAR(bracket.hi, r1.r_hi, 1e-12);
    // Complement: [1 - D_hi, 1 - D_lo] brackets the negated property.
    EXPECT_LE(r1.r_lo + (1 - r1.r_hi), 1.0 + 1e-12);
    EXPECT_GE(r1.r_hi + (1 - r1.r_lo), 1.0 - 1e-12);

    ASSERT_EQ(r1.partition.size(), r4.partition.size());
    for (std::size_t i = 0; i < r1.partition.size(); ++i) {
        EXPECT_EQ(r1.partition[i].box, r4.partition[i].box);
        EXPECT_EQ(r1.partition[i].validity, r4.partition[i].validity);
        EXPECT_EQ(r1.partition[i].mass, r4.partition[i].mass);
    }
    EXPECT_EQ(r1.r_lo, r4.r_lo);
    EXPECT_EQ(r1.r_hi, r4.r_hi);
}

TEST(Refine, ChildrenInsideParents) {
    const Schlogl m;
    const ParamBox P = m.net.declared_box();
    RefineOptions options;
    options.epsilon = 0.2;
    const auto r = refine(m.net, m.space, *m.query, P, WeightSpec::uniform(), options);
    const auto root = csl::quantitative_validity(build_generator(m.space, m.net, P), *m.query);
    for (const auto& e : r.partition) {
        EXPECT_GE(e.validity.lo, root.lo - 1e-9);
        EXPECT_LE(e.validity.hi, root.hi + 1e-9);
    }
}
