#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "nefmul/nef/decoders.hpp"
#include "nefmul/nef/network.hpp"

namespace nefmul {

// A logic-level wire between circuit stages: the decoded analog value, the
// bit obtained by thresholding it, and the threshold that was applied.
struct BitLine {
    double analog_value = 0.0;
    int logical_value = 0;
    double threshold = 0.5;
};

// 1 iff x >= threshold (boundary inclusive).
inline int binarize(double x, double threshold) {
    return x >= threshold ? 1 : 0;
}

// A clean host-level bit (analog = bit exactly).
BitLine make_bit(int bit);

struct GateConfig {
    std::size_t neurons_per_ensemble = 100;
    // Represented range of the gate's sum ensemble; 0 selects the per-gate
    // default (2 for two-input gates, 3 for the full adder).
    double radius = 0.0;
    SimMode mode = SimMode::rate;
    SimConfig sim;  // master_seed also seeds ensemble construction
    LifParameters lif;
    float synapse_tau = 0.005f;
    float regularization = 0.1f;
    std::size_t eval_points = 500;
};

// The shared gate core: one 1-D ensemble representing the sum of k one-bit
// inputs, with one or more decoded readouts. Evaluation runs a small network
// to the configured settle time and averages the trailing readout window.
// Runs are deterministic per (instance, input bits), so results are cached.
class SumGateEnsemble {
public:
    enum class Target { identity, parity, carry };

    SumGateEnsemble(std::size_t n_inputs, std::vector<Target> targets,
                    double default_radius, const GateConfig& cfg,
                    std::uint64_t seed);

    // Analog readout per target for the given input bits (each 0 or 1).
    const std::vector<double>& eval(const std::vector<int>& bits);

    const Ensemble& ensemble() const { return ens_; }

private:
    GateConfig cfg_;
    std::size_t n_inputs_;
    std::vector<Target> targets_;
    std::uint64_t seed_;
    Ensemble ens_;
    Decoders dec_;
    std::map<int, std::vector<double>> cache_;
};

class AndGate {
public:
    AndGate(const GateConfig& cfg, std::uint64_t seed);
    BitLine eval(const BitLine& a, const BitLine& b);

private:
    SumGateEnsemble core_;
};

class XorGate {
public:
    XorGate(const GateConfig& cfg, std::uint64_t seed);
    BitLine eval(const BitLine& a, const BitLine& b);

private:
    SumGateEnsemble core_;
};

class FullAdderGate {
public:
    FullAdderGate(const GateConfig& cfg, std::uint64_t seed);
    // Returns (sum, carry_out).
    std::pair<BitLine, BitLine> eval(const BitLine& a, const BitLine& b,
                                     const BitLine& c_in);

private:
    SumGateEnsemble core_;
};

// W chained full adders, carry rippling from bit 0 upward. Values are
// little-endian bit vectors; every inter-stage wire is re-binarized by the
// host before it feeds the next stage.
class RippleAdder {
public:
    RippleAdder(std::size_t width, const GateConfig& cfg, std::uint64_t seed);

    struct Result {
        std::vector<BitLine> sum;  // width entries, little-endian
        BitLine carry_out;
    };
    Result add(const std::vector<BitLine>& a, const std::vector<BitLine>& b,
               const BitLine& c_in);

    std::size_t width() const { return adders_.size(); }

private:
    std::vector<FullAdderGate> adders_;
};

// One-shot forms: build a fresh gate seeded from cfg.sim.master_seed,
// evaluate once. Handy for truth-table checks; use the classes above when
// evaluating one instance repeatedly.
BitLine and_gate(const BitLine& a, const BitLine& b, const GateConfig& cfg);
BitLine xor_gate(const BitLine& a, const BitLine& b, const GateConfig& cfg);
std::pair<BitLine, BitLine> full_adder(const BitLine& a, const BitLine& b,
                                       const BitLine& c_in,
                                       const GateConfig& cfg);
std::pair<std::vector<BitLine>, BitLine> ripple_adder(
    const std::vector<BitLine>& a, const std::vector<BitLine>& b,
    const BitLine& c_in, const GateConfig& cfg);

}  // namespace nefmul
