#include "nefmul/analysis/metrics.hpp"

#include <chrono>
#include <stdexcept>

#include "nefmul/nef/rng.hpp"

namespace nefmul {
namespace {

constexpr std::uint64_t kTrialTag = 0x7219AL;
constexpr std::uint64_t kInputTag = 0x1DE8;

struct LineSamples {
    std::vector<double> computed;
    std::vector<int> encoded;
    std::vector<int> actual;

    void add(const LineReadout& line, int reference) {
        computed.push_back(line.analog);
        encoded.push_back(line.bit);
        actual.push_back(reference);
    }
};

// One trial: build the component from its trial seed, run
// inputs_per_trial random inputs, record every output line.
void run_trial(Component c, std::size_t neurons, std::uint64_t trial_seed,
               const MeasureOptions& opt, LineSamples& samples) {
    GateConfig cfg = opt.base;
    cfg.neurons_per_ensemble = neurons;
    cfg.mode = opt.mode;
    cfg.sim.master_seed = trial_seed;
    Rng in_rng(mix_seed(trial_seed, kInputTag));

    switch (c) {
        case Component::exponent_adder: {
            ExponentAdder unit(cfg, mix_seed(trial_seed, 1));
            for (std::size_t q = 0; q < opt.inputs_per_trial; ++q) {
                const auto e1 = static_cast<unsigned>(in_rng.below(256));
                const auto e2 = static_cast<unsigned>(in_rng.below(256));
                const int cin = static_cast<int>(in_rng.below(2));
                const auto res = unit.add(e1, e2, cin);
                const unsigned ref = e1 + e2 + static_cast<unsigned>(cin);
                for (std::size_t k = 0; k < 8; ++k) {
                    samples.add(res.sum[k],
                                static_cast<int>((ref >> k) & 1u));
                }
                samples.add(res.carry, static_cast<int>((ref >> 8) & 1u));
            }
            break;
        }
        case Component::bias_subtractor: {
            BiasSubtractor unit(cfg, mix_seed(trial_seed, 2));
            for (std::size_t q = 0; q < opt.inputs_per_trial; ++q) {
                const auto e_sum = static_cast<unsigned>(in_rng.below(256));
                const auto res = unit.subtract(e_sum);
                const unsigned ref = (e_sum + 129u) & 0xFFu;
                for (std::size_t k = 0; k < 8; ++k) {
                    samples.add(res.out[k],
                                static_cast<int>((ref >> k) & 1u));
                }
            }
            break;
        }
        case Component::mantissa_multiplier: {
            MantissaArray unit(opt.mantissa_width, cfg,
                               mix_seed(trial_seed, 3));
            const std::uint64_t m_range = 1ull << opt.mantissa_width;
            for (std::size_t q = 0; q < opt.inputs_per_trial; ++q) {
                const auto m1 =
                    static_cast<std::uint32_t>(in_rng.below(m_range));
                const auto m2 =
                    static_cast<std::uint32_t>(in_rng.below(m_range));
                const auto res = unit.multiply(m1, m2);
                const std::uint64_t ref =
                    (m_range | m1) * (m_range | m2);
                for (std::size_t k = 0; k < res.bits.size(); ++k) {
                    samples.add(res.bits[k],
                                static_cast<int>((ref >> k) & 1u));
                }
            }
            break;
        }
        case Component::sign_of_uf: {
            SignUnit unit(cfg, mix_seed(trial_seed, 4));
            for (std::size_t q = 0; q < opt.inputs_per_trial; ++q) {
                const int s1 = static_cast<int>(in_rng.below(2));
                const int s2 = static_cast<int>(in_rng.below(2));
                samples.add(unit.eval(s1, s2), s1 ^ s2);
            }
            break;
        }
    }
}

}  // namespace

const char* component_name(Component c) {
    switch (c) {
        case Component::exponent_adder:
            return "exponent_adder";
        case Component::bias_subtractor:
            return "bias_subtractor";
        case Component::mantissa_multiplier:
            return "mantissa_multiplier";
        case Component::sign_of_uf:
            return "sign_of_uf";
    }
    return "unknown";
}

std::optional<Component> parse_component(std::string_view name) {
    if (name == "exponent_adder") return Component::exponent_adder;
    if (name == "bias_subtractor") return Component::bias_subtractor;
    if (name == "mantissa_multiplier") return Component::mantissa_multiplier;
    if (name == "sign_of_uf") return Component::sign_of_uf;
    return std::nullopt;
}

NeuronBudget default_neuron_budget() { return NeuronBudget{}; }

std::size_t budget_for(const NeuronBudget& budget, Component c) {
    switch (c) {
        case Component::exponent_adder:
            return budget.exponent_adder;
        case Component::bias_subtractor:
            return budget.bias_subtractor;
        case Component::mantissa_multiplier:
            return budget.mantissa_multiplier;
        case Component::sign_of_uf:
            return budget.sign_of_uf;
    }
    return 0;
}

double mean_absolute_error(std::span<const double> computed,
                           std::span<const int> actual) {
    if (computed.empty() || computed.size() != actual.size()) {
        throw std::invalid_argument(
            "mean_absolute_error: need equal, nonempty inputs");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < computed.size(); ++i) {
        const double d = computed[i] - static_cast<double>(actual[i]);
        sum += d < 0.0 ? -d : d;
    }
    return sum / static_cast<double>(computed.size());
}

double mean_encoded_error(std::span<const int> encoded,
                          std::span<const int> actual) {
    if (encoded.empty() || encoded.size() != actual.size()) {
        throw std::invalid_argument(
            "mean_encoded_error: need equal, nonempty inputs");
    }
    std::size_t errors = 0;
    for (std::size_t i = 0; i < encoded.size(); ++i) {
        errors += static_cast<std::size_t>((encoded[i] ^ actual[i]) & 1);
    }
    return static_cast<double>(errors) / static_cast<double>(encoded.size());
}

MetricsReport measure_component(Component c, std::size_t neurons,
                                std::size_t trials, std::uint64_t master_seed,
                                const MeasureOptions& opt) {
    if (trials == 0 || opt.inputs_per_trial == 0) {
        throw std::invalid_argument(
            "measure_component: need at least one trial and one input");
    }
    const auto t0 = std::chrono::steady_clock::now();
    LineSamples samples;
    MetricsReport report;
    report.component = component_name(c);
    report.neurons_per_ensemble = neurons;
    report.n_trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed =
            mix_seed(master_seed, kTrialTag + t);
        report.seeds.push_back(trial_seed);
        run_trial(c, neurons, trial_seed, opt, samples);
    }
    report.total_bits = samples.actual.size();
    report.mae = mean_absolute_error(samples.computed, samples.actual);
    report.accuracy = (1.0 - report.mae) * 100.0;
    report.mee = mean_encoded_error(samples.encoded, samples.actual);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < samples.encoded.size(); ++i) {
        errors += static_cast<std::size_t>(
            (samples.encoded[i] ^ samples.actual[i]) & 1);
    }
    report.bit_errors = errors;
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return report;
}

double bit_error_rate(Component c, std::size_t neurons, std::size_t trials,
                      std::uint64_t master_seed, const MeasureOptions& opt) {
    return measure_component(c, neurons, trials, master_seed, opt).mee;
}

}  // namespace nefmul
