#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <vector>

#include "nefmul/analysis/metrics.hpp"

using namespace nefmul;

namespace {

MeasureOptions rate_options(unsigned width, std::size_t inputs) {
    MeasureOptions opt;
    opt.mantissa_width = width;
    opt.mode = SimMode::rate;
    opt.inputs_per_trial = inputs;
    return opt;
}

MetricsReport row(const char* component, std::size_t neurons,
                  std::uint64_t seed, double mae) {
    MetricsReport r;
    r.component = component;
    r.neurons_per_ensemble = neurons;
    r.n_trials = 1;
    r.seeds = {seed};
    r.mae = mae;
    r.accuracy = (1.0 - mae) * 100.0;
    r.mee = 0.0;
    r.bit_errors = 0;
    r.total_bits = 10;
    r.wall_time_s = 0.25;
    return r;
}

}  // namespace

TEST_CASE("component names parse both ways") {
    const Component all[] = {Component::exponent_adder,
                             Component::bias_subtractor,
                             Component::mantissa_multiplier,
                             Component::sign_of_uf};
    for (Component c : all) {
        const auto back = parse_component(component_name(c));
        REQUIRE(back.has_value());
        CHECK(*back == c);
    }
    CHECK(!parse_component("carry_llama").has_value());
    CHECK(!parse_component("").has_value());
}

TEST_CASE("the default budget matches the working configuration") {
    const NeuronBudget b = default_neuron_budget();
    CHECK(b.exponent_adder == 300u);
    CHECK(b.bias_subtractor == 300u);
    CHECK(b.mantissa_multiplier == 600u);
    CHECK(b.sign_of_uf == 100u);
    CHECK(budget_for(b, Component::exponent_adder) == 300u);
    CHECK(budget_for(b, Component::mantissa_multiplier) == 600u);
    CHECK(budget_for(b, Component::sign_of_uf) == 100u);
}

TEST_CASE("error metrics on hand-checked vectors") {
    const std::vector<double> computed = {0.9, 0.1, 0.6, -0.1};
    const std::vector<int> actual = {1, 0, 1, 0};
    CHECK(mean_absolute_error(computed, actual) ==
          doctest::Approx(0.175).epsilon(1e-12));

    const std::vector<int> encoded = {1, 0, 1};
    const std::vector<int> reference = {1, 1, 1};
    CHECK(mean_encoded_error(encoded, reference) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(mean_encoded_error(reference, reference) == 0.0);

    CHECK_THROWS_AS(
        (void)mean_absolute_error(std::vector<double>{},
                                  std::vector<int>{}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)mean_absolute_error(computed, encoded),  // length mismatch
        std::invalid_argument);
}

TEST_CASE("measured reports keep their internal identities") {
    const auto opt = rate_options(3, 4);
    const auto rep = measure_component(Component::mantissa_multiplier, 200, 3,
                                       11, opt);
    CHECK(rep.component == "mantissa_multiplier");
    CHECK(rep.neurons_per_ensemble == 200u);
    CHECK(rep.n_trials == 3u);
    CHECK(rep.seeds.size() == 3u);
    CHECK(rep.total_bits == 3u * 4u * 8u);  // trials * inputs * (2W+2) lines
    CHECK(rep.accuracy == doctest::Approx((1.0 - rep.mae) * 100.0)
                              .epsilon(1e-12));
    CHECK(rep.mee == doctest::Approx(static_cast<double>(rep.bit_errors) /
                                     static_cast<double>(rep.total_bits))
                         .epsilon(1e-12));
    CHECK(rep.wall_time_s >= 0.0);

    // rate mode at a healthy budget decodes every line correctly
    CHECK(rep.bit_errors == 0u);
    CHECK(rep.mee == 0.0);
    CHECK(rep.mae < 0.2);
}

TEST_CASE("exponent components measure cleanly in rate mode") {
    const auto opt = rate_options(6, 5);
    const auto adder =
        measure_component(Component::exponent_adder, 200, 2, 7, opt);
    CHECK(adder.total_bits == 2u * 5u * 9u);  // 8 sum lines + carry
    CHECK(adder.bit_errors == 0u);

    const auto bias =
        measure_component(Component::bias_subtractor, 200, 2, 7, opt);
    CHECK(bias.total_bits == 2u * 5u * 8u);
    CHECK(bias.bit_errors == 0u);

    const auto sign = measure_component(Component::sign_of_uf, 100, 2, 7, opt);
    CHECK(sign.total_bits == 2u * 5u);
    CHECK(sign.bit_errors == 0u);
}

TEST_CASE("measurement campaigns are deterministic in the master seed") {
    const auto opt = rate_options(4, 3);
    const auto a = measure_component(Component::mantissa_multiplier, 150, 2,
                                     42, opt);
    const auto b = measure_component(Component::mantissa_multiplier, 150, 2,
                                     42, opt);
    CHECK(a.mae == b.mae);
    CHECK(a.mee == b.mee);
    CHECK(a.bit_errors == b.bit_errors);
    CHECK(a.seeds == b.seeds);

    const auto c = measure_component(Component::mantissa_multiplier, 150, 2,
                                     43, opt);
    CHECK(a.seeds != c.seeds);
}

TEST_CASE("measure_component rejects empty campaigns") {
    const auto opt = rate_options(3, 0);
    CHECK_THROWS_AS((void)measure_component(Component::sign_of_uf, 50, 1, 0,
                                            opt),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)measure_component(Component::sign_of_uf, 50, 0, 0,
                                            rate_options(3, 1)),
                    std::invalid_argument);
}

TEST_CASE("bit_error_rate is the campaign MEE") {
    const auto opt = rate_options(3, 3);
    const double ber =
        bit_error_rate(Component::exponent_adder, 150, 2, 5, opt);
    const auto rep =
        measure_component(Component::exponent_adder, 150, 2, 5, opt);
    CHECK(ber == rep.mee);
}

TEST_CASE("sweeps aggregate per count and stay deterministic") {
    const auto opt = rate_options(3, 2);
    const std::vector<std::size_t> counts = {100, 200};
    const auto s1 = sweep_neurons(Component::mantissa_multiplier, counts, 2,
                                  9, opt);
    REQUIRE(s1.neuron_counts == counts);
    REQUIRE(s1.per_count.size() == 2u);
    REQUIRE(s1.rows.size() == 4u);  // 2 counts x 2 seeds
    for (const auto& r : s1.rows) {
        CHECK((r.neurons_per_ensemble == 100u ||
               r.neurons_per_ensemble == 200u));
        CHECK(r.n_trials == 1u);
    }
    CHECK(s1.per_count[0].neurons_per_ensemble == 100u);
    CHECK(s1.per_count[1].neurons_per_ensemble == 200u);
    CHECK(s1.per_count[0].n_trials == 2u);
    for (std::size_t i = 1; i < s1.rows.size(); ++i) {
        const auto& prev = s1.rows[i - 1];
        const auto& cur = s1.rows[i];
        const bool ordered =
            prev.neurons_per_ensemble < cur.neurons_per_ensemble ||
            (prev.neurons_per_ensemble == cur.neurons_per_ensemble &&
             prev.seeds.front() < cur.seeds.front());
        CHECK(ordered);
    }

    const auto s2 = sweep_neurons(Component::mantissa_multiplier, counts, 2,
                                  9, opt);
    for (std::size_t i = 0; i < s1.rows.size(); ++i) {
        CHECK(s1.rows[i].mae == s2.rows[i].mae);
        CHECK(s1.rows[i].accuracy == s2.rows[i].accuracy);
    }
}

TEST_CASE("CSV schema is stable and sorted by neurons then seed") {
    std::vector<MetricsReport> rows;
    rows.push_back(row("mantissa_multiplier", 300, 2, 0.125));
    rows.push_back(row("mantissa_multiplier", 100, 9, 0.25));
    rows.push_back(row("mantissa_multiplier", 300, 1, 0.0625));

    std::ostringstream os;
    write_csv(os, rows);
    const std::string expect =
        "component,neurons,seed,mae,accuracy,mee,bit_errors,total_bits,"
        "wall_time_s\n"
        "mantissa_multiplier,100,9,0.25,75,0,0,10,0.250\n"
        "mantissa_multiplier,300,1,0.0625,93.75,0,0,10,0.250\n"
        "mantissa_multiplier,300,2,0.125,87.5,0,0,10,0.250\n";
    CHECK(os.str() == expect);
}

TEST_CASE("knee estimate finds the first count near peak accuracy") {
    SweepResult sweep;
    sweep.neuron_counts = {100, 200, 300, 400};
    const double maes[] = {0.10, 0.045, 0.041, 0.037};
    for (std::size_t i = 0; i < 4; ++i) {
        MetricsReport r = row("mantissa_multiplier", sweep.neuron_counts[i],
                              0, maes[i]);
        sweep.per_count.push_back(r);
    }
    // accuracies 90, 95.5, 95.9, 96.3: the first within 1 point of 96.3
    CHECK(knee_estimate(sweep) == 200u);

    // a flat curve knees at the smallest count
    SweepResult flat;
    flat.neuron_counts = {100, 200};
    flat.per_count.push_back(row("sign_of_uf", 100, 0, 0.04));
    flat.per_count.push_back(row("sign_of_uf", 200, 0, 0.04));
    CHECK(knee_estimate(flat) == 100u);
}
