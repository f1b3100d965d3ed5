#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nefmul {

enum class FloatClass { normalized, zero, subnormal, infinity, nan };

const char* float_class_name(FloatClass c);

// Sign / exponent / mantissa triple. exponent is the 8-bit stored form
// (bias 127). mantissa holds the low mantissa_width bits; widths below 23
// give the desk-scale formats used by the reduced multiplier arrays.
struct Float32Fields {
    unsigned sign = 0;
    unsigned exponent = 0;
    std::uint32_t mantissa = 0;
    unsigned mantissa_width = 23;

    bool operator==(const Float32Fields&) const = default;
};

// Raised for zero, subnormal, infinity and NaN operands, which the
// multiplier does not model.
class NonNormalizedError : public std::invalid_argument {
public:
    explicit NonNormalizedError(FloatClass c);
    FloatClass fclass;
};

FloatClass classify(const Float32Fields& f);
void require_normalized(const Float32Fields& f);  // throws NonNormalizedError

Float32Fields unpack_bits(std::uint32_t bits);     // full-width (W = 23)
std::uint32_t pack_bits(const Float32Fields& f);   // requires W = 23

// (-1)^sign * (1 + mantissa / 2^W) * 2^(exponent - 127); normalized only.
double field_value(const Float32Fields& f);

// Accepts "0x" + exactly 8 hex digits (IEEE bit pattern) or a decimal float
// literal (converted to the nearest float). Throws std::invalid_argument on
// malformed text. The result is not classified; callers decide whether
// non-normalized values are acceptable.
Float32Fields parse_float_input(const std::string& text);

std::string format_hex(const Float32Fields& f);    // requires W = 23
std::string describe_fields(const Float32Fields& f);

}  // namespace nefmul
