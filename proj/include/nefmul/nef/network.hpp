#pragma once

#include <cstdint>
#include <vector>

#include "nefmul/nef/ensemble.hpp"

namespace nefmul {

enum class SimMode { rate, spiking };

struct SimConfig {
    double dt = 1e-3;              // integration step, seconds
    double probe_interval = 1e-2;  // probe sampling period
    double settle_time = 0.2;      // total run length
    double readout_window = 0.05;  // trailing window averaged by readout()
    std::uint64_t master_seed = 0;

    // Throws std::invalid_argument unless dt > 0, probe_interval >= dt and
    // settle_time >= readout_window > 0.
    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

// Index of a scalar signal in a network: either a constant input or the
// (filtered) decoded output of an ensemble instance.
struct SignalRef {
    std::size_t index = 0;
};

struct ProbeRecord {
    std::vector<double> times;
    std::vector<float> values;
};

struct SimResult {
    std::vector<ProbeRecord> probes;  // one per add_probe, in order
};

// A feedforward graph of ensemble instances. Ensembles are borrowed, not
// owned; one Ensemble may back several instances, each with its own
// simulation state. Connections sum weighted source signals into one input
// dimension of an instance.
class Network {
public:
    SignalRef add_input(float value);

    // Registers an instance of ens and returns its instance id.
    std::size_t add_ensemble(const Ensemble* ens);

    // Adds weight * signal into dimension dim of the instance's input.
    void connect(SignalRef src, std::size_t instance, std::size_t dim,
                 float weight = 1.0f);

    // Registers a decoded output: in spiking mode the spike train is decoded
    // by column and passed through a first-order synapse with time constant
    // synapse_tau (0 disables filtering); in rate mode the decode is exact.
    SignalRef add_decode(std::size_t instance, std::vector<float> column,
                         float synapse_tau);

    // Records the signal every probe_interval; returns the probe id.
    std::size_t add_probe(SignalRef sig);

    // Instance order such that every decode feeding an instance comes from an
    // earlier instance. Throws std::runtime_error if the graph has a cycle.
    std::vector<std::size_t> topological_order() const;

private:
    friend SimResult run_network(const Network&, SimMode, const SimConfig&);

    struct Signal {
        bool is_input = true;
        float value = 0.0f;          // input constant
        std::size_t instance = 0;    // decode source instance
        std::vector<float> column;   // decode weights, length n_neurons
        float synapse_tau = 0.0f;
    };
    struct Connection {
        std::size_t signal;
        std::size_t instance;
        std::size_t dim;
        float weight;
    };

    std::vector<Signal> signals_;
    std::vector<const Ensemble*> instances_;
    std::vector<Connection> connections_;
    std::vector<std::size_t> probes_;
};

// Runs the network for settle_time. Spiking mode integrates every membrane
// with steps of sim.dt from a seeded initial voltage; rate mode performs one
// steady-state pass using analytic rates. Deterministic given
// (network, mode, sim).
SimResult run_network(const Network& net, SimMode mode, const SimConfig& sim);

// Mean of the probe samples inside the trailing readout window
// (settle_time - readout_window, settle_time]. Throws std::runtime_error if
// the probe does not span settle_time or the window holds no samples.
double readout(const ProbeRecord& probe, const SimConfig& sim);

}  // namespace nefmul
