#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nefmul/fpmul/float_fields.hpp"
#include "nefmul/gates/gates.hpp"

namespace nefmul {

// Per-ensemble neuron counts for each circuit component.
struct NeuronBudget {
    std::size_t exponent_adder = 300;
    std::size_t bias_subtractor = 300;
    std::size_t mantissa_multiplier = 600;
    std::size_t sign_of_uf = 100;

    bool operator==(const NeuronBudget&) const = default;
};

// One output wire of a component: decoded analog value and the binarized bit
// actually fed forward.
struct LineReadout {
    double analog = 0.0;
    int bit = 0;
};

std::uint64_t fold_bits(const std::vector<int>& bits);       // little-endian
std::vector<int> to_bits(std::uint64_t value, std::size_t n);

// W bits of mantissa following the leading one of the raw product: a right
// shift by one when the top bit is set, then truncation. Host bit slicing.
std::vector<int> normalize_product(const std::vector<int>& raw_bits,
                                   int norm_bit, unsigned width);

// The (W+1) x (W+1) grid of AND + full-adder blocks. Stage i block j ANDs
// operand bits A_i, B_j and full-adds the result with the sum passed down
// from block (j+1) of stage (i-1) (the last block instead receives the
// previous stage's final carry) and the carry rippling from block (j-1).
// Block 0 of each stage emits product bit i; after the last stage the
// remaining sums and the final carry provide the high-order bits.
class MantissaArray {
public:
    MantissaArray(unsigned width, const GateConfig& cfg, std::uint64_t seed);

    struct Result {
        std::vector<LineReadout> bits;  // 2W+2 product bits, little-endian
        int norm_bit = 0;               // == bits.back().bit
        std::uint64_t product = 0;
    };
    // Mantissas only; the hidden leading 1 is appended internally.
    Result multiply(std::uint32_t m1, std::uint32_t m2);

    unsigned width() const { return width_; }

private:
    unsigned width_;
    std::vector<AndGate> ands_;
    std::vector<FullAdderGate> adders_;
};

// 8-bit ripple adder over stored exponents, carry-in fed by the
// normalization bit.
class ExponentAdder {
public:
    ExponentAdder(const GateConfig& cfg, std::uint64_t seed);

    struct Result {
        std::vector<LineReadout> sum;  // 8 lines, little-endian
        LineReadout carry;
        unsigned value = 0;            // binarized sum as an integer
    };
    Result add(unsigned e1, unsigned e2, int carry_in);

private:
    RippleAdder adder_;
};

// Removes the bias 127: the host flips its bits (10000000), one neural adder
// adds 1 to form the two's complement (10000001), a second neural adder adds
// that to the exponent sum. The final carry is discarded.
class BiasSubtractor {
public:
    BiasSubtractor(const GateConfig& cfg, std::uint64_t seed);

    struct Result {
        std::vector<LineReadout> out;  // 8 lines of E_out
        unsigned value = 0;
    };
    Result subtract(unsigned e_sum);

private:
    RippleAdder increment_;
    RippleAdder add_;
};

class SignUnit {
public:
    SignUnit(const GateConfig& cfg, std::uint64_t seed);
    LineReadout eval(int s1, int s2);

private:
    XorGate xor_;
};

struct ProductResult {
    Float32Fields fields;
    int normalization_bit = 0;
    int exponent_carry = 0;
    int of_uf_flag = 0;              // the carry, per the flag rule
    std::vector<int> raw_product;    // 2W+2 bits, little-endian
    int true_overflow = 0;           // E1 + E2 - 127 > 254
    int true_underflow = 0;          // E1 + E2 < 127

    // Pre-binarization readouts of every output line, for metrics.
    std::vector<LineReadout> mantissa_lines;  // raw product bits
    std::vector<LineReadout> exponent_lines;  // exponent sum bits
    LineReadout exponent_carry_line;
    std::vector<LineReadout> bias_lines;      // E_out bits
    LineReadout sign_line;
};

// The full architecture: mantissa array feeding the normalization bit into
// the exponent adder, bias subtraction, and the sign/flag unit. Construction
// builds and solves every ensemble; multiplication is staged evaluation with
// host binarization between stages.
class MultiplierCircuit {
public:
    // base_cfg.radius should be left 0 so each gate keeps its own range;
    // base_cfg.neurons_per_ensemble is overridden per component from budget.
    MultiplierCircuit(unsigned mantissa_width, const NeuronBudget& budget,
                      const GateConfig& base_cfg);

    ProductResult multiply(const Float32Fields& x, const Float32Fields& y);

    unsigned width() const { return width_; }
    MantissaArray& mantissa_array() { return array_; }
    ExponentAdder& exponent_adder_unit() { return exponent_; }
    BiasSubtractor& bias_subtractor_unit() { return bias_; }
    SignUnit& sign_unit() { return sign_; }

private:
    unsigned width_;
    MantissaArray array_;
    ExponentAdder exponent_;
    BiasSubtractor bias_;
    SignUnit sign_;
};

// One-shot component helpers building a fresh seeded instance per call.
ExponentAdder::Result exponent_adder(unsigned e1, unsigned e2, int norm_bit,
                                     const GateConfig& cfg);
BiasSubtractor::Result bias_subtractor(unsigned e_sum, const GateConfig& cfg);
MantissaArray::Result mantissa_multiplier(std::uint32_t m1, std::uint32_t m2,
                                          unsigned width,
                                          const GateConfig& cfg);
// Returns (S_out, of_uf): sign from a neural XOR, flag copied from the carry.
std::pair<LineReadout, int> sign_of_uf(int s1, int s2, int exponent_carry,
                                       const GateConfig& cfg);

}  // namespace nefmul
