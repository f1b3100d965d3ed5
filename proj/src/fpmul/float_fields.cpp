#include "nefmul/fpmul/float_fields.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace nefmul {

const char* float_class_name(FloatClass c) {
    switch (c) {
        case FloatClass::normalized:
            return "normalized";
        case FloatClass::zero:
            return "zero";
        case FloatClass::subnormal:
            return "subnormal";
        case FloatClass::infinity:
            return "infinity";
        case FloatClass::nan:
            return "NaN";
    }
    return "unknown";
}

NonNormalizedError::NonNormalizedError(FloatClass c)
    : std::invalid_argument(std::string(float_class_name(c)) +
                            " input unsupported; operands must be "
                            "normalized floats"),
      fclass(c) {}

FloatClass classify(const Float32Fields& f) {
    if (f.exponent == 0) {
        return f.mantissa == 0 ? FloatClass::zero : FloatClass::subnormal;
    }
    if (f.exponent == 255) {
        return f.mantissa == 0 ? FloatClass::infinity : FloatClass::nan;
    }
    return FloatClass::normalized;
}

void require_normalized(const Float32Fields& f) {
    const FloatClass c = classify(f);
    if (c != FloatClass::normalized) {
        throw NonNormalizedError(c);
    }
}

Float32Fields unpack_bits(std::uint32_t bits) {
    Float32Fields f;
    f.sign = (bits >> 31) & 1u;
    f.exponent = (bits >> 23) & 0xFFu;
    f.mantissa = bits & 0x7FFFFFu;
    f.mantissa_width = 23;
    return f;
}

std::uint32_t pack_bits(const Float32Fields& f) {
    if (f.mantissa_width != 23) {
        throw std::invalid_argument(
            "pack_bits: only full-width (W=23) fields pack to 32 bits");
    }
    return (static_cast<std::uint32_t>(f.sign & 1u) << 31) |
           (static_cast<std::uint32_t>(f.exponent & 0xFFu) << 23) |
           (f.mantissa & 0x7FFFFFu);
}

double field_value(const Float32Fields& f) {
    require_normalized(f);
    const double frac =
        1.0 + std::ldexp(static_cast<double>(f.mantissa),
                         -static_cast<int>(f.mantissa_width));
    const double mag = std::ldexp(frac, static_cast<int>(f.exponent) - 127);
    return f.sign ? -mag : mag;
}

Float32Fields parse_float_input(const std::string& text) {
    if (text.size() >= 2 && text[0] == '0' &&
        (text[1] == 'x' || text[1] == 'X')) {
        const std::string digits = text.substr(2);
        if (digits.size() != 8) {
            throw std::invalid_argument(
                "hex input must be 0x followed by exactly 8 hex digits: " +
                text);
        }
        std::uint32_t bits = 0;
        for (const char ch : digits) {
            if (!std::isxdigit(static_cast<unsigned char>(ch))) {
                throw std::invalid_argument("bad hex digit in: " + text);
            }
            const char c = static_cast<char>(
                std::tolower(static_cast<unsigned char>(ch)));
            bits = (bits << 4) |
                   static_cast<std::uint32_t>(
                       c <= '9' ? c - '0' : c - 'a' + 10);
        }
        return unpack_bits(bits);
    }

    char* end = nullptr;
    const float v = std::strtof(text.c_str(), &end);
    if (end == text.c_str() || end == nullptr || *end != '\0') {
        throw std::invalid_argument("cannot parse float input: " + text);
    }
    return unpack_bits(std::bit_cast<std::uint32_t>(v));
}

std::string format_hex(const Float32Fields& f) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "0x%08X", pack_bits(f));
    return buf;
}

std::string describe_fields(const Float32Fields& f) {
    std::string s = "sign=" + std::to_string(f.sign) +
                    " exponent=" + std::to_string(f.exponent) + " mantissa=";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "0x%X", f.mantissa);
    s += buf;
    s += " width=" + std::to_string(f.mantissa_width);
    if (classify(f) == FloatClass::normalized) {
        std::snprintf(buf, sizeof(buf), "%.9g", field_value(f));
        s += " value=";
        s += buf;
    } else {
        s += std::string(" class=") + float_class_name(classify(f));
    }
    return s;
}

}  // namespace nefmul
