// pararob: landscape, check and robust analyses of parametric reaction networks.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "pararob/csl.hpp"
#include "pararob/error.hpp"
#include "pararob/model.hpp"
#include "pararob/report.hpp"
#include "pararob/robustness.hpp"
#include "pararob/state_space.hpp"
#include "pararob/transient.hpp"

namespace {

namespace fs = std::filesystem;
using namespace pararob;

enum Exit : int {
    kOk = 0,
    kFalse = 1,
    kUsage = 2,
    kResources = 3,
    kIndeterminate = 4,
    kBudget = 5,
};

struct RunConfig {
    std::string model;
    std::string prop;
    double time = 10.0;
    double epsilon = 0.01;
    double delta = 1e-10;
    std::size_t budget = 4096;
    std::string out = ".";
    bool csv = false;
    bool json = false;
    bool svg = false;
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::size_t max_states = EnumerationOptions{}.max_states;
    std::string dump_generator;
};

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out);
    const fs::path path = fs::path(cfg.out) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    return os;
}

struct Loaded {
    ReactionNetwork net;
    std::shared_ptr<const StateSpace> space;
};

Loaded load(const RunConfig& cfg) {
    ReactionNetwork net = load_model(cfg.model);
    auto space = std::make_shared<const StateSpace>(enumerate_states(net, {cfg.max_states}));
    return {std::move(net), std::move(space)};
}

void maybe_dump(const RunConfig& cfg, const IntervalGenerator& gen, const ReactionNetwork& net) {
    if (cfg.dump_generator.empty()) return;
    std::ofstream os(cfg.dump_generator, std::ios::binary);
    if (!os) throw Error(ErrorCode::Io, "cannot write '" + cfg.dump_generator + "'");
    write_generator_dump(os, gen, net);
}

int cmd_landscape(const RunConfig& cfg) {
    const Loaded in = load(cfg);
    const IntervalGenerator gen = build_generator(in.space, in.net, in.net.declared_box());
    maybe_dump(cfg, gen, in.net);
    TransientOptions options;
    options.delta = cfg.delta;
    const BoundedDistribution dist = transient_bounds(gen, initial_distribution(*in.space), cfg.time, options);

    const bool any = cfg.csv || cfg.json || cfg.svg;
    if (cfg.csv || !any) {
        auto os = open_output(cfg, "landscape.csv");
        write_landscape_csv(os, in.net, *in.space, dist);
    }
    if (cfg.svg) {
        auto os = open_output(cfg, "landscape.svg");
        write_landscape_svg(os, in.net, *in.space, dist, cfg.time);
    }
    std::cout << in.space->size() << " states, SINK mass in [" << format_real(dist.sink_lo) << ", "
              << format_real(dist.sink_hi) << "]\n";
    return kOk;
}

int cmd_check(const RunConfig& cfg) {
    const Loaded in = load(cfg);
    const auto formula = csl::load_csl(cfg.prop, in.net);
    const IntervalGenerator gen = build_generator(in.space, in.net, in.net.declared_box());
    maybe_dump(cfg, gen, in.net);
    csl::CheckOptions options;
    options.delta = cfg.delta;

    if (const auto* p = std::get_if<csl::ProbFormula>(&formula->node); p && p->is_query()) {
        const Interval d = csl::quantitative_validity(gen, *formula, options);
        auto os = open_output(cfg, "check.json");
        write_query_json(os, d);
        std::cout << "D in [" << format_real(d.lo) << ", " << format_real(d.hi) << "]\n";
        return kOk;
    }

    const csl::SatBounds sat = csl::check_formula(gen, *formula, options);
    auto os = open_output(cfg, "check.json");
    write_check_json(os, sat, in.space->size());
    if (sat.in_lo(0)) {
        std::cout << "true for every parameter in the box\n";
        return kOk;
    }
    if (!sat.in_hi(0)) {
        std::cout << "false for every parameter in the box\n";
        return kFalse;
    }
    std::cout << "indeterminate over the box\n";
    return kIndeterminate;
}

int cmd_robust(const RunConfig& cfg) {
    if (!(cfg.epsilon > 4.0 * cfg.delta)) {
        throw Error(ErrorCode::EpsilonTooTight, "epsilon must exceed 4 * delta");
    }
    const Loaded in = load(cfg);
    const auto formula = csl::load_csl(cfg.prop, in.net);
    const ParamBox P = in.net.declared_box();
    if (!cfg.dump_generator.empty()) maybe_dump(cfg, build_generator(in.space, in.net, P), in.net);

    RefineOptions options;
    options.epsilon = cfg.epsilon;
    options.budget = cfg.budget;
    options.delta = cfg.delta;
    options.workers = cfg.workers;
    const RobustnessResult r = refine(in.net, in.space, *formula, P, WeightSpec::uniform(), options);

    const bool any = cfg.csv || cfg.json || cfg.svg;
    if (cfg.json || !any) {
        auto os = open_output(cfg, "robust.json");
        write_robust_json(os, in.net, r);
    }
    if (cfg.csv || !any) {
        auto os = open_output(cfg, "partition.csv");
        write_partition_csv(os, in.net, r);
    }
    std::cout << "R in [" << format_real(r.r_lo) << ", " << format_real(r.r_hi) << "] (gap "
              << format_real(r.gap) << ")\n";
    if (r.gap <= cfg.epsilon) return kOk;
    if (r.budget_exhausted) {
        std::cerr << "budget of " << cfg.budget << " boxes exhausted\n";
    } else {
        std::cerr << "refinement stalled: remaining boxes cannot be split\n";
    }
    return kBudget;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::Explosion:
        case ErrorCode::Overflow:
            return kResources;
        default:
            return kUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounds on transient probabilities, CSL validity and robustness over parameter boxes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pararob 0.1.0");

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub, bool needs_prop) {
        sub->add_option("--model", cfg.model, "Model file")->required();
        auto* prop = sub->add_option("--prop", cfg.prop, "Property file");
        if (needs_prop) prop->required();
        sub->add_option("--delta", cfg.delta, "Transient tolerance")->capture_default_str();
        sub->add_option("--out", cfg.out, "Output directory")->capture_default_str();
        sub->add_flag("--csv", cfg.csv, "Write CSV output");
        sub->add_flag("--json", cfg.json, "Write JSON output");
        sub->add_flag("--svg", cfg.svg, "Write an SVG plot (landscape)");
        sub->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--max-states", cfg.max_states, "State enumeration cap")->capture_default_str();
        sub->add_option("--dump-generator", cfg.dump_generator, "Write the interval generator to a file");
        sub->add_option("--time", cfg.time, "Time horizon (landscape)")->capture_default_str();
        sub->add_option("--epsilon", cfg.epsilon, "Target robustness gap")->capture_default_str();
        sub->add_option("--budget", cfg.budget, "Maximum boxes evaluated")->capture_default_str();
    };
    auto* landscape = app.add_subcommand("landscape", "Per-state probability bounds at a time horizon");
    add_common(landscape, false);
    auto* check = app.add_subcommand("check", "Min/max satisfaction of a CSL property");
    add_common(check, true);
    auto* robust = app.add_subcommand("robust", "Bracket the robustness integral by box refinement");
    add_common(robust, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*landscape) return cmd_landscape(cfg);
        if (*check) return cmd_check(cfg);
        return cmd_robust(cfg);
    } catch (const Error& e) {
        std::cerr << "pararob: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "pararob: " << e.what() << '\n';
        return kUsage;
    }
}
