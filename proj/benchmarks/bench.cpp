#include <benchmark/benchmark.h>

#include <memory>
#include <string>

#include "pararob/csl.hpp"
#include "pararob/poisson.hpp"
#include "pararob/transient.hpp"

using namespace pararob;

namespace {

struct Schlogl {
    ReactionNetwork net = load_model(std::string(PARAROB_DATA_DIR) + "/schlogl.model");
    std::shared_ptr<const StateSpace> space = std::make_shared<const StateSpace>(enumerate_states(net));
    IntervalGenerator gen = build_generator(space, net, net.declared_box());
};

const Schlogl& schlogl() {
    static const Schlogl s;
    return s;
}

void BM_StepBounds(benchmark::State& state) {
    const auto& m = schlogl();
    IntervalVector v;
    v.lo.assign(m.space->size(), 0.0);
    v.hi.assign(m.space->size(), 1e-3);
    IntervalVector out;
    for (auto _ : state) {
        step_bounds(m.gen, v, out);
        benchmark::DoNotOptimize(out.hi.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(m.space->size()));
}
BENCHMARK(BM_StepBounds);

void BM_FoxGlynn(benchmark::State& state) {
    const double rate = double(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fox_glynn(rate, 1e-10));
}
BENCHMARK(BM_FoxGlynn)->Arg(10)->Arg(400)->Arg(100000);

void BM_TransientBounds(benchmark::State& state) {
    const auto& m = schlogl();
    const double t = double(state.range(0)) / 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(transient_bounds(m.gen, initial_distribution(*m.space), t));
}
BENCHMARK(BM_TransientBounds)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_QuantitativeValidity(benchmark::State& state) {
    const auto& m = schlogl();
    const auto f = csl::load_csl(std::string(PARAROB_DATA_DIR) + "/schlogl_query.csl", m.net);
    for (auto _ : state) benchmark::DoNotOptimize(csl::quantitative_validity(m.gen, *f));
}
BENCHMARK(BM_QuantitativeValidity)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
