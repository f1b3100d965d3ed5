#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "nefmul/cli/run_config.hpp"

using namespace nefmul;

namespace {

RunConfig odd_config() {
    RunConfig cfg;
    cfg.mode = "rate";
    cfg.mantissa_width = 7;
    cfg.budget.exponent_adder = 123;
    cfg.budget.bias_subtractor = 456;
    cfg.budget.mantissa_multiplier = 789;
    cfg.budget.sign_of_uf = 12;
    cfg.sim.dt = 0.00025;
    cfg.sim.probe_interval = 0.007;
    cfg.sim.settle_time = 0.31;
    cfg.sim.readout_window = 0.093;
    cfg.sim.master_seed = 0xFEDCBA9876543210ull;
    cfg.trials = 17;
    cfg.output_path = "out/metrics.csv";
    cfg.kernel = "scalar";
    return cfg;
}

}  // namespace

TEST_CASE("defaults form a valid spiking full-width run") {
    RunConfig cfg;
    CHECK(cfg.mode == "spiking");
    CHECK(cfg.mantissa_width == 23u);
    CHECK(cfg.budget == NeuronBudget{});
    CHECK(cfg.trials == 50u);
    CHECK(cfg.kernel == "auto");
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.sim_mode() == SimMode::spiking);
}

TEST_CASE("stream round-trip is lossless, including awkward doubles") {
    const RunConfig cfg = odd_config();
    std::stringstream ss;
    write_run_config(ss, cfg);
    const RunConfig back = parse_run_config(ss);
    CHECK(back == cfg);
}

TEST_CASE("file round-trip is lossless") {
    const RunConfig cfg = odd_config();
    const std::string path = "run_config_roundtrip.tmp";
    save_run_config(path, cfg);
    const RunConfig back = load_run_config(path);
    CHECK(back == cfg);
    std::remove(path.c_str());
}

TEST_CASE("comments and blank lines are ignored") {
    std::stringstream ss;
    ss << "# a comment\n\nmode=rate\n# another\ntrials=3\n";
    const RunConfig cfg = parse_run_config(ss);
    CHECK(cfg.mode == "rate");
    CHECK(cfg.trials == 3u);
    CHECK(cfg.mantissa_width == 23u);  // untouched defaults survive
}

TEST_CASE("malformed input is rejected with context") {
    auto parse = [](const std::string& text) {
        std::stringstream ss(text);
        return parse_run_config(ss);
    };
    CHECK_THROWS_AS((void)parse("no_equals_here\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse("unknown_key=3\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse("trials=-1\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse("trials=abc\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse("dt=fast\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse("mantissa_width=2x\n"),
                    std::invalid_argument);
}

TEST_CASE("load reports missing files") {
    CHECK_THROWS_AS((void)load_run_config("definitely/not/here.cfg"),
                    std::runtime_error);
}

TEST_CASE("validate catches out-of-contract values") {
    RunConfig cfg;
    cfg.mode = "quantum";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = RunConfig{};
    cfg.mantissa_width = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.mantissa_width = 24;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = RunConfig{};
    cfg.budget.mantissa_multiplier = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = RunConfig{};
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = RunConfig{};
    cfg.kernel = "gpu";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = RunConfig{};
    cfg.sim.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("gate_config carries mode and sim timing through") {
    RunConfig cfg;
    cfg.mode = "rate";
    cfg.sim.master_seed = 99;
    const GateConfig g = cfg.gate_config();
    CHECK(g.mode == SimMode::rate);
    CHECK(g.sim == cfg.sim);
}

TEST_CASE("neuron overrides: bare count, per-component, and errors") {
    const NeuronBudget base{};

    auto all = apply_neuron_overrides(base, {"250"});
    CHECK(all.exponent_adder == 250u);
    CHECK(all.bias_subtractor == 250u);
    CHECK(all.mantissa_multiplier == 250u);
    CHECK(all.sign_of_uf == 250u);

    auto one = apply_neuron_overrides(base, {"mantissa_multiplier=700"});
    CHECK(one.mantissa_multiplier == 700u);
    CHECK(one.exponent_adder == base.exponent_adder);

    auto two = apply_neuron_overrides(base, {"150", "sign_of_uf=50"});
    CHECK(two.exponent_adder == 150u);
    CHECK(two.sign_of_uf == 50u);

    CHECK_THROWS_AS(
        (void)apply_neuron_overrides(base, {"flux_capacitor=10"}),
        std::invalid_argument);
    CHECK_THROWS_AS((void)apply_neuron_overrides(base, {"sign_of_uf=ten"}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)apply_neuron_overrides(base, {"-5"}),
                    std::invalid_argument);
}
