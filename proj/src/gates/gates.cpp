#include "nefmul/gates/gates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nefmul/nef/rng.hpp"

namespace nefmul {
namespace {

constexpr double kAndThreshold = 1.5;  // AND reads the raw two-bit sum
constexpr double kBitThreshold = 0.5;  // single-bit lines

// Decoder targets as functions of the represented sum. The inputs are exact
// integers. The continuum extensions are the continuous ones that agree with
// the boolean functions at every integer: parity as the triangle wave
// 1 - |s mod 2 - 1| and carry as the unit ramp between 1 and 2. A literal
// step (s mod 2, s >= 2) would put its discontinuity exactly at the
// operating point s = 2, where the least-squares fit settles near the
// midpoint of the jump and the binarized output is wrong by construction.
double target_value(SumGateEnsemble::Target t, double s) {
    switch (t) {
        case SumGateEnsemble::Target::identity:
            return s;
        case SumGateEnsemble::Target::parity:
            return 1.0 - std::fabs(std::fmod(s, 2.0) - 1.0);
        case SumGateEnsemble::Target::carry:
            return std::fmin(std::fmax(s - 1.0, 0.0), 1.0);
    }
    return 0.0;
}

int checked_bit(const BitLine& line, const char* what) {
    if (line.logical_value != 0 && line.logical_value != 1) {
        throw std::invalid_argument(std::string(what) +
                                    ": logical value must be 0 or 1");
    }
    return line.logical_value;
}

// Tags for deriving the per-gate-type seeds of the one-shot helpers.
constexpr std::uint64_t kAndTag = 0xA11D;
constexpr std::uint64_t kXorTag = 0x8012;
constexpr std::uint64_t kAdderTag = 0xADD3;
constexpr std::uint64_t kRippleTag = 0x41BB;

}  // namespace

BitLine make_bit(int bit) {
    if (bit != 0 && bit != 1) {
        throw std::invalid_argument("make_bit: bit must be 0 or 1");
    }
    return BitLine{static_cast<double>(bit), bit, kBitThreshold};
}

SumGateEnsemble::SumGateEnsemble(std::size_t n_inputs,
                                 std::vector<Target> targets,
                                 double default_radius, const GateConfig& cfg,
                                 std::uint64_t seed)
    : cfg_(cfg),
      n_inputs_(n_inputs),
      targets_(std::move(targets)),
      seed_(seed) {
    if (n_inputs_ == 0 || n_inputs_ > 3) {
        throw std::invalid_argument(
            "SumGateEnsemble: supports 1 to 3 bit inputs");
    }
    if (targets_.empty()) {
        throw std::invalid_argument("SumGateEnsemble: need a readout target");
    }
    const double radius =
        cfg_.radius > 0.0 ? cfg_.radius : default_radius;
    cfg_.radius = radius;

    ens_ = build_ensemble(cfg_.neurons_per_ensemble, 1,
                          static_cast<float>(radius), cfg_.lif,
                          mix_seed(seed_, 0xE5));

    // The represented value is a sum of bits, so fit on [0, radius].
    const std::vector<float> grid =
        linspace(0.0f, static_cast<float>(radius), cfg_.eval_points);
    std::vector<float> tv(grid.size() * targets_.size());
    for (std::size_t p = 0; p < grid.size(); ++p) {
        for (std::size_t k = 0; k < targets_.size(); ++k) {
            tv[p * targets_.size() + k] = static_cast<float>(
                target_value(targets_[k], static_cast<double>(grid[p])));
        }
    }
    dec_ = solve_decoders(ens_, grid, tv, targets_.size(),
                          cfg_.regularization);
}

const std::vector<double>& SumGateEnsemble::eval(
    const std::vector<int>& bits) {
    if (bits.size() != n_inputs_) {
        throw std::invalid_argument("SumGateEnsemble: input count mismatch");
    }
    int key = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0 && bits[i] != 1) {
            throw std::invalid_argument(
                "SumGateEnsemble: inputs must be bits");
        }
        key |= bits[i] << i;
    }
    const auto hit = cache_.find(key);
    if (hit != cache_.end()) {
        return hit->second;
    }

    Network net;
    const std::size_t inst = net.add_ensemble(&ens_);
    for (const int b : bits) {
        net.connect(net.add_input(static_cast<float>(b)), inst, 0);
    }
    std::vector<std::size_t> probes;
    probes.reserve(targets_.size());
    for (std::size_t k = 0; k < targets_.size(); ++k) {
        probes.push_back(net.add_probe(
            net.add_decode(inst, dec_.columns[k], cfg_.synapse_tau)));
    }
    SimConfig sim = cfg_.sim;
    // Per-input-combination membrane stream, fixed given (gate seed, input).
    sim.master_seed = mix_seed(seed_, 0x100 + static_cast<std::uint64_t>(key));
    const SimResult res = run_network(net, cfg_.mode, sim);

    std::vector<double> analogs(targets_.size());
    for (std::size_t k = 0; k < targets_.size(); ++k) {
        analogs[k] = readout(res.probes[probes[k]], sim);
    }
    return cache_.emplace(key, std::move(analogs)).first->second;
}

AndGate::AndGate(const GateConfig& cfg, std::uint64_t seed)
    : core_(2, {SumGateEnsemble::Target::identity}, 2.0, cfg, seed) {}

BitLine AndGate::eval(const BitLine& a, const BitLine& b) {
    const int ba = checked_bit(a, "and_gate");
    const int bb = checked_bit(b, "and_gate");
    const double s = core_.eval({ba, bb})[0];
    return BitLine{s, binarize(s, kAndThreshold), kAndThreshold};
}

XorGate::XorGate(const GateConfig& cfg, std::uint64_t seed)
    : core_(2, {SumGateEnsemble::Target::parity}, 2.0, cfg, seed) {}

BitLine XorGate::eval(const BitLine& a, const BitLine& b) {
    const int ba = checked_bit(a, "xor_gate");
    const int bb = checked_bit(b, "xor_gate");
    const double s = core_.eval({ba, bb})[0];
    return BitLine{s, binarize(s, kBitThreshold), kBitThreshold};
}

FullAdderGate::FullAdderGate(const GateConfig& cfg, std::uint64_t seed)
    : core_(3,
            {SumGateEnsemble::Target::parity, SumGateEnsemble::Target::carry},
            3.0, cfg, seed) {}

std::pair<BitLine, BitLine> FullAdderGate::eval(const BitLine& a,
                                                const BitLine& b,
                                                const BitLine& c_in) {
    const int ba = checked_bit(a, "full_adder");
    const int bb = checked_bit(b, "full_adder");
    const int bc = checked_bit(c_in, "full_adder");
    const std::vector<double>& out = core_.eval({ba, bb, bc});
    const BitLine sum{out[0], binarize(out[0], kBitThreshold), kBitThreshold};
    const BitLine carry{out[1], binarize(out[1], kBitThreshold),
                        kBitThreshold};
    return {sum, carry};
}

RippleAdder::RippleAdder(std::size_t width, const GateConfig& cfg,
                         std::uint64_t seed) {
    if (width == 0) {
        throw std::invalid_argument("RippleAdder: width must be >= 1");
    }
    adders_.reserve(width);
    for (std::size_t k = 0; k < width; ++k) {
        adders_.emplace_back(cfg, mix_seed(seed, k));
    }
}

RippleAdder::Result RippleAdder::add(const std::vector<BitLine>& a,
                                     const std::vector<BitLine>& b,
                                     const BitLine& c_in) {
    if (a.size() != width() || b.size() != width()) {
        throw std::invalid_argument("RippleAdder: operand width mismatch");
    }
    Result out;
    out.sum.reserve(width());
    BitLine carry = c_in;
    for (std::size_t k = 0; k < width(); ++k) {
        auto [s, c] = adders_[k].eval(a[k], b[k], carry);
        out.sum.push_back(s);
        carry = c;
    }
    out.carry_out = carry;
    return out;
}

BitLine and_gate(const BitLine& a, const BitLine& b, const GateConfig& cfg) {
    AndGate gate(cfg, mix_seed(cfg.sim.master_seed, kAndTag));
    return gate.eval(a, b);
}

BitLine xor_gate(const BitLine& a, const BitLine& b, const GateConfig& cfg) {
    XorGate gate(cfg, mix_seed(cfg.sim.master_seed, kXorTag));
    return gate.eval(a, b);
}

std::pair<BitLine, BitLine> full_adder(const BitLine& a, const BitLine& b,
                                       const BitLine& c_in,
                                       const GateConfig& cfg) {
    FullAdderGate gate(cfg, mix_seed(cfg.sim.master_seed, kAdderTag));
    return gate.eval(a, b, c_in);
}

std::pair<std::vector<BitLine>, BitLine> ripple_adder(
    const std::vector<BitLine>& a, const std::vector<BitLine>& b,
    const BitLine& c_in, const GateConfig& cfg) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("ripple_adder: operand width mismatch");
    }
    RippleAdder adder(a.size(), cfg,
                      mix_seed(cfg.sim.master_seed, kRippleTag));
    auto result = adder.add(a, b, c_in);
    return {std::move(result.sum), result.carry_out};
}

}  // namespace nefmul
