#include "nefmul/oracle/oracle.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace nefmul {

OracleResult ieee_mul_truncate(const Float32Fields& a,
                               const Float32Fields& b) {
    if (a.mantissa_width != b.mantissa_width || a.mantissa_width > 23 ||
        a.mantissa_width == 0) {
        throw std::invalid_argument(
            "ieee_mul_truncate: operands must share a mantissa width in "
            "[1, 23]");
    }
    require_normalized(a);
    require_normalized(b);
    const unsigned w = a.mantissa_width;
    const std::uint64_t mask = (1ull << w) - 1;
    if ((a.mantissa & ~mask) != 0 || (b.mantissa & ~mask) != 0) {
        throw std::invalid_argument(
            "ieee_mul_truncate: mantissa wider than declared width");
    }

    OracleResult r;
    const std::uint64_t av = (1ull << w) | a.mantissa;
    const std::uint64_t bv = (1ull << w) | b.mantissa;
    r.raw_product = av * bv;
    r.norm_bit = static_cast<int>((r.raw_product >> (2 * w + 1)) & 1u);

    const std::uint64_t m_out = r.norm_bit
                                    ? (r.raw_product >> (w + 1)) & mask
                                    : (r.raw_product >> w) & mask;

    const unsigned sum9 = a.exponent + b.exponent +
                          static_cast<unsigned>(r.norm_bit);
    r.e_sum = sum9 & 0xFFu;
    r.exponent_carry = static_cast<int>((sum9 >> 8) & 1u);
    r.of_uf_flag = r.exponent_carry;
    // Subtracting the bias is adding its two's complement (129) mod 256 with
    // the final carry discarded.
    const unsigned e_out = (r.e_sum + 129u) & 0xFFu;

    const int e_true = static_cast<int>(a.exponent) +
                       static_cast<int>(b.exponent);
    r.true_overflow = (e_true - 127 > 254) ? 1 : 0;
    r.true_underflow = (e_true < 127) ? 1 : 0;

    r.fields.sign = a.sign ^ b.sign;
    r.fields.exponent = e_out;
    r.fields.mantissa = static_cast<std::uint32_t>(m_out);
    r.fields.mantissa_width = w;
    return r;
}

ArrayTrace array_multiply_reference(std::uint64_t a, std::uint64_t b,
                                    unsigned width) {
    const unsigned n = width + 1;  // operand bits, hidden bit included
    if (a >= (1ull << n) || b >= (1ull << n)) {
        throw std::invalid_argument(
            "array_multiply_reference: operand exceeds width+1 bits");
    }
    ArrayTrace t;
    t.width = width;
    t.and_out.assign(n * n, 0);
    t.s_out.assign(n * n, 0);
    t.c_out.assign(n * n, 0);
    t.product_bits.assign(2 * width + 2, 0);

    const auto at = [n](unsigned i, unsigned j) { return i * n + j; };
    for (unsigned i = 0; i < n; ++i) {      // stage = bit of a
        for (unsigned j = 0; j < n; ++j) {  // block = bit of b
            const int and_bit = static_cast<int>((a >> i) & 1u) &
                                static_cast<int>((b >> j) & 1u);
            t.and_out[at(i, j)] = and_bit;

            // Sum input: from the previous stage, block j+1; the last block
            // instead takes the previous stage's final carry.
            int s_in = 0;
            if (i > 0) {
                s_in = (j < width) ? t.s_out[at(i - 1, j + 1)]
                                   : t.c_out[at(i - 1, width)];
            }
            // Carry input ripples within the stage; block 0 gets constant 0.
            const int c_in = (j > 0) ? t.c_out[at(i, j - 1)] : 0;

            const int total = and_bit + s_in + c_in;
            t.s_out[at(i, j)] = total & 1;
            t.c_out[at(i, j)] = total >> 1;
        }
        t.product_bits[i] = t.s_out[at(i, 0)];  // stage emits product bit i
    }
    // After the last stage the remaining sums hold the high-order bits.
    for (unsigned j = 1; j <= width; ++j) {
        t.product_bits[width + j] = t.s_out[at(width, j)];
    }
    t.product_bits[2 * width + 1] = t.c_out[at(width, width)];

    t.product = 0;
    for (unsigned k = 0; k < t.product_bits.size(); ++k) {
        t.product |= static_cast<std::uint64_t>(t.product_bits[k]) << k;
    }
    return t;
}

std::optional<std::uint32_t> host_mul_truncate(std::uint32_t a_bits,
                                               std::uint32_t b_bits) {
    const float fa = std::bit_cast<float>(a_bits);
    const float fb = std::bit_cast<float>(b_bits);
    require_normalized(unpack_bits(a_bits));
    require_normalized(unpack_bits(b_bits));

    // 24-bit x 24-bit significands: the double product is exact.
    const double prod = static_cast<double>(fa) * static_cast<double>(fb);
    const std::uint32_t sign = ((a_bits ^ b_bits) >> 31) & 1u;

    int e2 = 0;
    const double frac = std::frexp(std::fabs(prod), &e2);  // in [0.5, 1)
    // 53-bit integer significand, exact; keep the top 24 bits (truncation).
    const auto sig53 = static_cast<std::uint64_t>(std::ldexp(frac, 53));
    const std::uint64_t sig24 = sig53 >> 29;

    const int stored_e = e2 - 1 + 127;
    if (stored_e <= 0 || stored_e >= 255) {
        return std::nullopt;
    }
    return (sign << 31) |
           (static_cast<std::uint32_t>(stored_e) << 23) |
           static_cast<std::uint32_t>(sig24 & 0x7FFFFFu);
}

}  // namespace nefmul
