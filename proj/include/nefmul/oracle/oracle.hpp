#pragma once

// Integer-arithmetic reference for the truncating float multiply and for the
// mantissa array wiring. Everything here is a pure function; the whole
// module favors obviousness over speed.

#include <cstdint>
#include <optional>
#include <vector>

#include "nefmul/fpmul/float_fields.hpp"

namespace nefmul {

struct OracleResult {
    Float32Fields fields;          // result triple at the operand width
    int norm_bit = 0;              // top bit of the raw mantissa product
    std::uint64_t raw_product = 0; // (2^W + M1) * (2^W + M2)
    unsigned e_sum = 0;            // (E1 + E2 + norm_bit) mod 256
    int exponent_carry = 0;        // carry out of that 8-bit addition
    int of_uf_flag = 0;            // the OF/UF flag: equal to exponent_carry
    int true_overflow = 0;         // E1 + E2 - 127 > 254
    int true_underflow = 0;        // E1 + E2 < 127
};

// Truncating multiply in exact integer arithmetic: full-width mantissa
// product, conditional one-bit right shift, truncation to W bits, exponent
// sum with the normalization bit as carry-in, bias removal mod 256 (final
// carry discarded), sign XOR. Inputs must be normalized and share one
// mantissa width; throws NonNormalizedError / std::invalid_argument.
OracleResult ieee_mul_truncate(const Float32Fields& a,
                               const Float32Fields& b);

// White-box reference for the multiplier array: simulates the (W+1)^2 grid
// of AND + full-adder blocks with ideal boolean gates and records every
// intermediate value. a, b < 2^(W+1).
struct ArrayTrace {
    unsigned width = 0;              // W; blocks are indexed i*(W+1)+j
    std::vector<int> and_out;
    std::vector<int> s_out;
    std::vector<int> c_out;
    std::vector<int> product_bits;   // 2W+2 bits, little-endian
    std::uint64_t product = 0;
};
ArrayTrace array_multiply_reference(std::uint64_t a, std::uint64_t b,
                                    unsigned width);

// Full-width cross-check computed with host floating point: exact double
// product, mantissa truncated toward zero to 24 bits. Returns the 32-bit
// result pattern, or nullopt when the product leaves the normal range.
std::optional<std::uint32_t> host_mul_truncate(std::uint32_t a_bits,
                                               std::uint32_t b_bits);

}  // namespace nefmul
