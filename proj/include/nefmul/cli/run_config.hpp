#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nefmul/analysis/metrics.hpp"

namespace nefmul {

// Everything a command run needs, persistable as a flat key=value file.
// Numeric fields serialize with enough digits to round-trip exactly.
struct RunConfig {
    std::string mode = "spiking";  // "rate" or "spiking"
    unsigned mantissa_width = 23;
    NeuronBudget budget;
    SimConfig sim;  // dt, probe_interval, settle_time, readout_window, seed
    std::size_t trials = 50;
    std::string output_path;
    std::string kernel = "auto";  // "scalar", "avx2" or "auto"

    bool operator==(const RunConfig&) const = default;

    SimMode sim_mode() const;  // throws std::invalid_argument on bad mode
    GateConfig gate_config() const;
    void validate() const;
};

RunConfig parse_run_config(std::istream& is);
void write_run_config(std::ostream& os, const RunConfig& cfg);

RunConfig load_run_config(const std::string& path);
void save_run_config(const std::string& path, const RunConfig& cfg);

// Neuron overrides: each entry is either a bare count applied to every
// component or a component=count pair (component names as in analysis).
NeuronBudget apply_neuron_overrides(NeuronBudget base,
                                    const std::vector<std::string>& specs);

}  // namespace nefmul
