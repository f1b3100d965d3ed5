#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nefmul/fpmul/multiplier.hpp"

namespace nefmul {

enum class Component {
    exponent_adder,
    bias_subtractor,
    mantissa_multiplier,
    sign_of_uf,
};

const char* component_name(Component c);
std::optional<Component> parse_component(std::string_view name);

// Per-ensemble neuron counts used for full-circuit runs.
NeuronBudget default_neuron_budget();
std::size_t budget_for(const NeuronBudget& budget, Component c);

// Mean |computed - actual| over paired values. computed holds the
// pre-binarization decoded line values, actual the reference bits.
double mean_absolute_error(std::span<const double> computed,
                           std::span<const int> actual);

// Mean Hamming distance between binarized outputs and reference bits.
double mean_encoded_error(std::span<const int> encoded,
                          std::span<const int> actual);

struct MetricsReport {
    std::string component;
    std::size_t neurons_per_ensemble = 0;
    std::size_t n_trials = 0;
    std::vector<std::uint64_t> seeds;
    double mae = 0.0;
    double accuracy = 100.0;  // (1 - mae) * 100
    double mee = 0.0;         // bit_errors / total_bits
    std::size_t bit_errors = 0;
    std::size_t total_bits = 0;
    double wall_time_s = 0.0;
};

struct MeasureOptions {
    unsigned mantissa_width = 6;  // desk-scale default for array sweeps
    SimMode mode = SimMode::spiking;
    std::size_t inputs_per_trial = 3;
    GateConfig base;  // sim timing / lif defaults; neurons and seeds are set
                      // per trial by the harness
};

// Builds the component fresh per trial (trial seed derived from
// master_seed), evaluates inputs_per_trial random inputs per trial, and
// aggregates MAE / MEE over every output line against the integer oracle.
MetricsReport measure_component(Component c, std::size_t neurons,
                                std::size_t trials, std::uint64_t master_seed,
                                const MeasureOptions& opt);

// Aggregate error fraction (MEE) of the same campaign.
double bit_error_rate(Component c, std::size_t neurons, std::size_t trials,
                      std::uint64_t master_seed, const MeasureOptions& opt);

struct SweepResult {
    std::vector<std::size_t> neuron_counts;     // strictly increasing
    std::vector<MetricsReport> per_count;       // aggregated over seeds
    std::vector<MetricsReport> rows;            // one per (count, seed)
};

// Accuracy-vs-population-size experiment: fresh component instances at every
// neuron count, trials_per_count seeded repetitions each. Deterministic in
// master_seed.
SweepResult sweep_neurons(Component c, const std::vector<std::size_t>& counts,
                          std::size_t trials_per_count,
                          std::uint64_t master_seed,
                          const MeasureOptions& opt);

// CSV with header component,neurons,seed,mae,accuracy,mee,bit_errors,
// total_bits,wall_time_s; rows sorted by (neurons, seed).
void write_csv(std::ostream& os, const std::vector<MetricsReport>& rows);

// Smallest count whose aggregate accuracy is within one percentage point of
// the maximum observed in the sweep.
std::size_t knee_estimate(const SweepResult& sweep);

}  // namespace nefmul
