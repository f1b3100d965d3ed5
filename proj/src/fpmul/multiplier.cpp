#include "nefmul/fpmul/multiplier.hpp"

#include <stdexcept>

#include "nefmul/nef/rng.hpp"

namespace nefmul {
namespace {

// Component tags for deriving ensemble seeds from one circuit seed.
constexpr std::uint64_t kArrayTag = 0x11;
constexpr std::uint64_t kExponentTag = 0x22;
constexpr std::uint64_t kBiasIncTag = 0x33;
constexpr std::uint64_t kBiasAddTag = 0x44;
constexpr std::uint64_t kSignTag = 0x55;

GateConfig with_neurons(GateConfig cfg, std::size_t neurons) {
    cfg.neurons_per_ensemble = neurons;
    return cfg;
}

LineReadout line_of(const BitLine& b) {
    return LineReadout{b.analog_value, b.logical_value};
}

std::vector<BitLine> bit_lines(std::uint64_t value, std::size_t n) {
    std::vector<BitLine> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(make_bit(static_cast<int>((value >> k) & 1u)));
    }
    return out;
}

}  // namespace

std::uint64_t fold_bits(const std::vector<int>& bits) {
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        v |= static_cast<std::uint64_t>(bits[k] & 1) << k;
    }
    return v;
}

std::vector<int> to_bits(std::uint64_t value, std::size_t n) {
    std::vector<int> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = static_cast<int>((value >> k) & 1u);
    }
    return out;
}

std::vector<int> normalize_product(const std::vector<int>& raw_bits,
                                   int norm_bit, unsigned width) {
    if (raw_bits.size() != 2 * width + 2) {
        throw std::invalid_argument("normalize_product: raw product size");
    }
    const unsigned lo = norm_bit ? width + 1 : width;
    std::vector<int> m(width);
    for (unsigned k = 0; k < width; ++k) {
        m[k] = raw_bits[lo + k];
    }
    return m;
}

MantissaArray::MantissaArray(unsigned width, const GateConfig& cfg,
                             std::uint64_t seed)
    : width_(width) {
    if (width < 1 || width > 23) {
        throw std::invalid_argument(
            "MantissaArray: width must be in [1, 23]");
    }
    const unsigned n = width + 1;
    ands_.reserve(n * n);
    adders_.reserve(n * n);
    const std::uint64_t and_seed = mix_seed(seed, 0xA);
    const std::uint64_t fa_seed = mix_seed(seed, 0xF);
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; j < n; ++j) {
            ands_.emplace_back(cfg, mix_seed(and_seed, i * n + j));
            adders_.emplace_back(cfg, mix_seed(fa_seed, i * n + j));
        }
    }
}

MantissaArray::Result MantissaArray::multiply(std::uint32_t m1,
                                              std::uint32_t m2) {
    const unsigned n = width_ + 1;
    if (m1 >= (1u << width_) || m2 >= (1u << width_)) {
        throw std::invalid_argument(
            "MantissaArray: mantissa wider than the array");
    }
    const std::uint32_t a = (1u << width_) | m1;
    const std::uint32_t b = (1u << width_) | m2;

    const auto at = [n](unsigned i, unsigned j) { return i * n + j; };
    std::vector<BitLine> s_out(n * n), c_out(n * n);
    Result res;
    res.bits.resize(2 * width_ + 2);

    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; j < n; ++j) {
            const BitLine and_line =
                ands_[at(i, j)].eval(make_bit((a >> i) & 1),
                                     make_bit((b >> j) & 1));
            BitLine s_in = make_bit(0);
            if (i > 0) {
                s_in = (j < width_) ? s_out[at(i - 1, j + 1)]
                                    : c_out[at(i - 1, width_)];
            }
            const BitLine c_in =
                (j > 0) ? c_out[at(i, j - 1)] : make_bit(0);
            auto [s, c] = adders_[at(i, j)].eval(and_line, s_in, c_in);
            s_out[at(i, j)] = s;
            c_out[at(i, j)] = c;
        }
        res.bits[i] = line_of(s_out[at(i, 0)]);
    }
    for (unsigned j = 1; j <= width_; ++j) {
        res.bits[width_ + j] = line_of(s_out[at(width_, j)]);
    }
    res.bits[2 * width_ + 1] = line_of(c_out[at(width_, width_)]);

    std::vector<int> bits(res.bits.size());
    for (std::size_t k = 0; k < res.bits.size(); ++k) {
        bits[k] = res.bits[k].bit;
    }
    res.product = fold_bits(bits);
    res.norm_bit = res.bits.back().bit;
    return res;
}

ExponentAdder::ExponentAdder(const GateConfig& cfg, std::uint64_t seed)
    : adder_(8, cfg, seed) {}

ExponentAdder::Result ExponentAdder::add(unsigned e1, unsigned e2,
                                         int carry_in) {
    if (e1 > 255 || e2 > 255) {
        throw std::invalid_argument("ExponentAdder: operands are 8-bit");
    }
    const auto r =
        adder_.add(bit_lines(e1, 8), bit_lines(e2, 8), make_bit(carry_in));
    Result out;
    out.sum.reserve(8);
    unsigned value = 0;
    for (std::size_t k = 0; k < 8; ++k) {
        out.sum.push_back(line_of(r.sum[k]));
        value |= static_cast<unsigned>(r.sum[k].logical_value) << k;
    }
    out.carry = line_of(r.carry_out);
    out.value = value;
    return out;
}

BiasSubtractor::BiasSubtractor(const GateConfig& cfg, std::uint64_t seed)
    : increment_(8, cfg, mix_seed(seed, 1)),
      add_(8, cfg, mix_seed(seed, 2)) {}

BiasSubtractor::Result BiasSubtractor::subtract(unsigned e_sum) {
    if (e_sum > 255) {
        throw std::invalid_argument("BiasSubtractor: input is 8-bit");
    }
    // Host bit-flip of the bias constant, then +1 through the first adder.
    const unsigned flipped = (~127u) & 0xFFu;  // 10000000
    const auto twos =
        increment_.add(bit_lines(flipped, 8), bit_lines(1, 8), make_bit(0));
    const auto sum = add_.add(bit_lines(e_sum, 8), twos.sum, make_bit(0));
    // sum.carry_out is discarded by design.
    Result out;
    out.out.reserve(8);
    unsigned value = 0;
    for (std::size_t k = 0; k < 8; ++k) {
        out.out.push_back(line_of(sum.sum[k]));
        value |= static_cast<unsigned>(sum.sum[k].logical_value) << k;
    }
    out.value = value;
    return out;
}

SignUnit::SignUnit(const GateConfig& cfg, std::uint64_t seed)
    : xor_(cfg, seed) {}

LineReadout SignUnit::eval(int s1, int s2) {
    return line_of(xor_.eval(make_bit(s1), make_bit(s2)));
}

MultiplierCircuit::MultiplierCircuit(unsigned mantissa_width,
                                     const NeuronBudget& budget,
                                     const GateConfig& base_cfg)
    : width_(mantissa_width),
      array_(mantissa_width,
             with_neurons(base_cfg, budget.mantissa_multiplier),
             mix_seed(base_cfg.sim.master_seed, kArrayTag)),
      exponent_(with_neurons(base_cfg, budget.exponent_adder),
                mix_seed(base_cfg.sim.master_seed, kExponentTag)),
      bias_(with_neurons(base_cfg, budget.bias_subtractor),
            mix_seed(base_cfg.sim.master_seed, kBiasIncTag)),
      sign_(with_neurons(base_cfg, budget.sign_of_uf),
            mix_seed(base_cfg.sim.master_seed, kSignTag)) {}

ProductResult MultiplierCircuit::multiply(const Float32Fields& x,
                                          const Float32Fields& y) {
    if (x.mantissa_width != width_ || y.mantissa_width != width_) {
        throw std::invalid_argument(
            "MultiplierCircuit: operand width does not match the circuit");
    }
    require_normalized(x);
    require_normalized(y);

    ProductResult r;
    const auto arr = array_.multiply(x.mantissa, y.mantissa);
    r.mantissa_lines = arr.bits;
    r.normalization_bit = arr.norm_bit;
    r.raw_product.resize(arr.bits.size());
    for (std::size_t k = 0; k < arr.bits.size(); ++k) {
        r.raw_product[k] = arr.bits[k].bit;
    }
    const std::vector<int> m_out =
        normalize_product(r.raw_product, r.normalization_bit, width_);

    const auto ea = exponent_.add(x.exponent, y.exponent, r.normalization_bit);
    r.exponent_lines = ea.sum;
    r.exponent_carry_line = ea.carry;
    r.exponent_carry = ea.carry.bit;
    r.of_uf_flag = ea.carry.bit;

    const auto bs = bias_.subtract(ea.value);
    r.bias_lines = bs.out;

    r.sign_line = sign_.eval(static_cast<int>(x.sign),
                             static_cast<int>(y.sign));

    const int e_true = static_cast<int>(x.exponent) +
                       static_cast<int>(y.exponent);
    r.true_overflow = (e_true - 127 > 254) ? 1 : 0;
    r.true_underflow = (e_true < 127) ? 1 : 0;

    r.fields.sign = static_cast<unsigned>(r.sign_line.bit);
    r.fields.exponent = bs.value;
    r.fields.mantissa = static_cast<std::uint32_t>(fold_bits(m_out));
    r.fields.mantissa_width = width_;
    return r;
}

ExponentAdder::Result exponent_adder(unsigned e1, unsigned e2, int norm_bit,
                                     const GateConfig& cfg) {
    ExponentAdder unit(cfg, mix_seed(cfg.sim.master_seed, kExponentTag));
    return unit.add(e1, e2, norm_bit);
}

BiasSubtractor::Result bias_subtractor(unsigned e_sum,
                                       const GateConfig& cfg) {
    BiasSubtractor unit(cfg, mix_seed(cfg.sim.master_seed, kBiasIncTag));
    return unit.subtract(e_sum);
}

MantissaArray::Result mantissa_multiplier(std::uint32_t m1, std::uint32_t m2,
                                          unsigned width,
                                          const GateConfig& cfg) {
    MantissaArray unit(width, cfg, mix_seed(cfg.sim.master_seed, kArrayTag));
    return unit.multiply(m1, m2);
}

std::pair<LineReadout, int> sign_of_uf(int s1, int s2, int exponent_carry,
                                       const GateConfig& cfg) {
    if (exponent_carry != 0 && exponent_carry != 1) {
        throw std::invalid_argument("sign_of_uf: carry must be a bit");
    }
    SignUnit unit(cfg, mix_seed(cfg.sim.master_seed, kSignTag));
    return {unit.eval(s1, s2), exponent_carry};
}

}  // namespace nefmul
