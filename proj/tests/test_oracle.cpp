#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pararob/oracle.hpp"
#include "support.hpp"

using namespace pararob;

namespace {

ReactionNetwork pure_death() {
    return parse_model("species X init 1 max 1\nparam k = 1\nreaction d: X -> 0 @ 1 * k\n");
}

}  // namespace

TEST(Oracle, PureDeathHalfLife) {
    const auto net = pure_death();
    const auto space = enumerate_states(net);
    const oracle::DenseCme cme(net, space, std::vector<double>{1.0});
    const auto d = oracle::cme_rk4(cme, initial_distribution(space), std::log(2.0));
    EXPECT_NEAR(d.probs[space.find(std::vector<Count>{0})], 0.5, 1e-8);
}

TEST(Oracle, ZeroTime) {
    const auto net = pure_death();
    const auto space = enumerate_states(net);
    const oracle::DenseCme cme(net, space, std::vector<double>{1.0});
    const auto init = initial_distribution(space);
    EXPECT_EQ(oracle::cme_rk4(cme, init, 0.0).probs, init.probs);
}

TEST(Oracle, DenseGeneratorRowsSumToZero) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        const auto net = test::random_network(rng);
        const auto space = enumerate_states(net);
        const oracle::DenseCme cme(net, space, test::sample_point(net.declared_box(), rng));
        for (std::size_t s = 0; s < cme.dim(); ++s) {
            double row = 0.0;
            for (std::size_t u = 0; u < cme.dim(); ++u) {
                if (u != s) EXPECT_GE(cme.rate(s, u), 0.0);
                row += cme.rate(s, u);
            }
            EXPECT_NEAR(row, 0.0, 1e-9 * (1 + cme.exit(s)));
        }
    }
}

TEST(Oracle, TwoStateValidity) {
    const auto net = parse_model("species X init 0 max 1\nparam k = 1.5\nreaction r: 0 -> X @ 1 * k\n");
    const auto space = enumerate_states(net);
    const auto f = csl::parse_csl("P=? [ F[0,1] X>=1 ]", net);
    EXPECT_NEAR(oracle::point_validity(net, space, std::vector<double>{1.5}, *f), 1 - std::exp(-1.5), 1e-8);
    const auto g = csl::parse_csl("P=? [ F[0,1] true ]", net);
    EXPECT_NEAR(oracle::point_validity(net, space, std::vector<double>{1.5}, *g), 1.0, 1e-12);
}

TEST(Oracle, RandomFiveStateAgainstFineGrid) {
    // Random 5-state birth-death-like chain with random until formulas; the reference resolution
    // uses a fixed step of 1e-5.
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int trial = 0; trial < 5; ++trial) {
        const auto net = parse_model(
            "species X init 0 max 4\nparam a = " + format_real(u(rng)) + "\nparam b = " + format_real(u(rng)) +
            "\nparam c = " + format_real(u(rng)) +
            "\nreaction up: 0 -> X @ 1 * a\nreaction down: X -> 0 @ 1 * b\nreaction jump: 2 X -> 4 X @ 1 * c\n");
        const auto space = enumerate_states(net);
        ASSERT_EQ(space.size(), 5u);
        const auto p = net.declared_box().lower_corner();
        const auto f = test::random_query(net, rng);
        const double v = oracle::point_validity(net, space, p, *f);

        oracle::OracleOptions fine;
        const oracle::DenseCme probe(net, space, p);
        fine.step_factor = 1e-5 * probe.max_exit();
        fine.max_halvings = 0;
        fine.richardson_tolerance = 1.0;
        fine.min_steps = 1;
        const double ref = oracle::point_validity(net, space, p, *f, fine);
        EXPECT_NEAR(v, ref, 1e-6) << csl::to_string(*f, net);
    }
}

TEST(Oracle, CapAndUnstable) {
    const auto net = load_model(test::data_path("schlogl.model"));
    const auto space = enumerate_states(net);
    oracle::OracleOptions small;
    small.max_states = 100;
    try {
        (void)oracle::DenseCme(net, space, net.declared_box().lower_corner(), small);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OracleCap);
    }
    const auto pd = pure_death();
    const auto pd_space = enumerate_states(pd);
    oracle::OracleOptions impossible;
    impossible.richardson_tolerance = 0.0;
    impossible.max_halvings = 1;
    const oracle::DenseCme cme(pd, pd_space, std::vector<double>{1.0}, impossible);
    try {
        (void)oracle::cme_rk4(cme, initial_distribution(pd_space), 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Unstable);
    }
}
