// Command-line front end: single multiplications with oracle comparison
// (mul), bulk equivalence runs against the integer oracle (verify), and
// accuracy-vs-neuron-count sweeps written as CSV (sweep).
//
// Exit codes: 0 success, 1 usage/parse error, 2 verification mismatch.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nefmul/analysis/metrics.hpp"
#include "nefmul/cli/run_config.hpp"
#include "nefmul/fpmul/float_fields.hpp"
#include "nefmul/fpmul/multiplier.hpp"
#include "nefmul/kernels/kernels.hpp"
#include "nefmul/nef/rng.hpp"
#include "nefmul/oracle/oracle.hpp"

namespace {

using namespace nefmul;

constexpr std::uint64_t kVerifyInputTag = 0xEF;

struct CommonOpts {
    RunConfig cfg;
    std::vector<std::string> neuron_specs;
    double settle_ms = 0.0, readout_ms = 0.0, dt_ms = 0.0, probe_ms = 0.0;
    std::string config_path;  // consumed by the pre-scan; registered so the
                              // parser accepts and documents it
    CLI::Option* settle_opt = nullptr;
    CLI::Option* readout_opt = nullptr;
    CLI::Option* dt_opt = nullptr;
    CLI::Option* probe_opt = nullptr;

    // Applies parsed flags on top of the config-file/default values and
    // validates the result.
    void finalize() {
        if (settle_opt->count()) cfg.sim.settle_time = settle_ms * 1e-3;
        if (readout_opt->count()) cfg.sim.readout_window = readout_ms * 1e-3;
        if (dt_opt->count()) cfg.sim.dt = dt_ms * 1e-3;
        if (probe_opt->count()) cfg.sim.probe_interval = probe_ms * 1e-3;
        cfg.budget = apply_neuron_overrides(cfg.budget, neuron_specs);
        cfg.validate();
        if (cfg.kernel != "auto") kernels::force_backend(cfg.kernel);
    }
};

void add_common_flags(CLI::App* cmd, CommonOpts& c, bool with_trials) {
    cmd->add_option("--mode", c.cfg.mode, "simulation mode: rate or spiking")
        ->capture_default_str();
    cmd->add_option("--width", c.cfg.mantissa_width, "mantissa width, 1..23")
        ->check(CLI::Range(1u, 23u))
        ->capture_default_str();
    cmd->add_option(
        "--neurons", c.neuron_specs,
        "neurons per ensemble: a bare count for every component or "
        "component=count (components: exponent_adder, bias_subtractor, "
        "mantissa_multiplier, sign_of_uf); repeatable");
    cmd->add_option("--seed", c.cfg.sim.master_seed, "master seed")
        ->capture_default_str();
    if (with_trials)
        cmd->add_option("--trials", c.cfg.trials, "number of trials")
            ->capture_default_str();
    c.settle_opt = cmd->add_option("--settle-ms", c.settle_ms,
                                   "simulated settling time per gate, ms");
    c.readout_opt = cmd->add_option("--readout-ms", c.readout_ms,
                                    "trailing readout window, ms");
    c.dt_opt = cmd->add_option("--dt-ms", c.dt_ms, "integration step, ms");
    c.probe_opt =
        cmd->add_option("--probe-ms", c.probe_ms, "probe sampling period, ms");
    cmd->add_option("--out", c.cfg.output_path, "output file path");
    cmd->add_option("--kernel", c.cfg.kernel,
                    "arithmetic backend: scalar, avx2 or auto")
        ->capture_default_str();
    cmd->add_option("--config", c.config_path,
                    "key=value config file; flags override its entries");
}

std::string budget_string(const NeuronBudget& b) {
    return "exponent_adder=" + std::to_string(b.exponent_adder) +
           " bias_subtractor=" + std::to_string(b.bias_subtractor) +
           " mantissa_multiplier=" + std::to_string(b.mantissa_multiplier) +
           " sign_of_uf=" + std::to_string(b.sign_of_uf);
}

// Headline form of a result triple: hex pattern at full width, field triple
// otherwise, with the decoded decimal when the pattern is a normal number.
std::string result_string(const Float32Fields& f) {
    std::string s;
    if (f.mantissa_width == 23) {
        s = format_hex(f);
        if (classify(f) == FloatClass::normalized) {
            char buf[40];
            std::snprintf(buf, sizeof buf, " (%.9g)", field_value(f));
            s += buf;
        } else {
            s += std::string(" (") + float_class_name(classify(f)) +
                 " pattern)";
        }
        return s;
    }
    return describe_fields(f);
}

const char* match_str(bool ok) { return ok ? "MATCH" : "MISMATCH"; }

struct LineStats {
    double mae = 0.0;
    double mee = 0.0;
    std::size_t errors = 0;
    std::size_t bits = 0;
};

LineStats line_stats(const std::vector<LineReadout>& lines,
                     const std::vector<int>& ref) {
    std::vector<double> analog(lines.size());
    std::vector<int> encoded(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        analog[i] = lines[i].analog;
        encoded[i] = lines[i].bit;
    }
    LineStats s;
    s.mae = mean_absolute_error(analog, ref);
    s.mee = mean_encoded_error(encoded, ref);
    s.bits = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i)
        s.errors += encoded[i] != ref[i];
    return s;
}

void print_component_stats(const char* name, const LineStats& s) {
    std::printf("  %-20s mae=%.6f accuracy=%.4f%% mee=%.6f errors=%zu/%zu\n",
                name, s.mae, (1.0 - s.mae) * 100.0, s.mee, s.errors, s.bits);
}

Float32Fields parse_operand(const char* label, const std::string& text,
                            unsigned width) {
    Float32Fields f;
    try {
        f = parse_float_input(text);
        require_normalized(f);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("operand " + std::string(label) + ": " +
                                    e.what());
    }
    if (width < 23) {
        f.mantissa >>= (23u - width);
        f.mantissa_width = width;
    }
    return f;
}

int run_mul(const std::string& a_text, const std::string& b_text,
            CommonOpts& c) {
    c.finalize();
    const RunConfig& cfg = c.cfg;
    const unsigned width = cfg.mantissa_width;

    const Float32Fields a = parse_operand("a", a_text, width);
    const Float32Fields b = parse_operand("b", b_text, width);

    std::printf("operand a: %s\n", describe_fields(a).c_str());
    std::printf("operand b: %s\n", describe_fields(b).c_str());
    if (width < 23)
        std::printf("note: operands truncated to mantissa width %u\n", width);
    std::printf("mode=%s width=%u seed=%llu kernel=%s\n", cfg.mode.c_str(),
                width, static_cast<unsigned long long>(cfg.sim.master_seed),
                kernels::active().name);
    std::printf("neurons: %s\n", budget_string(cfg.budget).c_str());

    const OracleResult o = ieee_mul_truncate(a, b);

    MultiplierCircuit circuit(width, cfg.budget, cfg.gate_config());
    const ProductResult r = circuit.multiply(a, b);

    std::printf("result: %s\n", result_string(r.fields).c_str());
    std::printf("  norm_bit=%d of_uf_flag=%d exponent_carry=%d\n",
                r.normalization_bit, r.of_uf_flag, r.exponent_carry);
    std::printf("  true_overflow=%s true_underflow=%s\n",
                r.true_overflow ? "yes" : "no",
                r.true_underflow ? "yes" : "no");
    if (r.of_uf_flag || r.true_overflow || r.true_underflow)
        std::printf(
            "  note: result exponent is the wrapped 8-bit value; the flag "
            "and diagnostics above qualify it\n");

    const bool sign_ok = r.fields.sign == o.fields.sign;
    const bool exp_ok = r.fields.exponent == o.fields.exponent;
    const bool man_ok = r.fields.mantissa == o.fields.mantissa;
    const bool norm_ok = r.normalization_bit == o.norm_bit;
    const bool flag_ok = r.of_uf_flag == o.of_uf_flag;
    const bool all_ok = sign_ok && exp_ok && man_ok && norm_ok && flag_ok;

    std::printf("oracle comparison:\n");
    std::printf("  sign:       %s (%u)\n", match_str(sign_ok), o.fields.sign);
    std::printf("  exponent:   %s (%u)\n", match_str(exp_ok),
                o.fields.exponent);
    std::printf("  mantissa:   %s (0x%X)\n", match_str(man_ok),
                o.fields.mantissa);
    std::printf("  norm_bit:   %s (%d)\n", match_str(norm_ok), o.norm_bit);
    std::printf("  of_uf_flag: %s (%d)\n", match_str(flag_ok), o.of_uf_flag);
    std::printf("  overall:    %s\n", match_str(all_ok));

    std::printf("component metrics (decoded lines vs reference bits):\n");
    print_component_stats(
        "mantissa_multiplier",
        line_stats(r.mantissa_lines,
                   to_bits(o.raw_product, r.mantissa_lines.size())));
    {
        std::vector<LineReadout> lines = r.exponent_lines;
        lines.push_back(r.exponent_carry_line);
        std::vector<int> ref = to_bits(o.e_sum, 8);
        ref.push_back(o.exponent_carry);
        print_component_stats("exponent_adder", line_stats(lines, ref));
    }
    print_component_stats("bias_subtractor",
                          line_stats(r.bias_lines,
                                     to_bits(o.fields.exponent, 8)));
    print_component_stats(
        "sign_of_uf",
        line_stats({r.sign_line}, {static_cast<int>(o.fields.sign)}));

    return all_ok ? 0 : 2;
}

int run_verify(CommonOpts& c, bool exhaustive) {
    c.finalize();
    const RunConfig& cfg = c.cfg;
    const unsigned width = cfg.mantissa_width;
    if (exhaustive && width > 4) {
        std::fprintf(stderr,
                     "error: --exhaustive is supported for --width <= 4 "
                     "(got %u)\n",
                     width);
        return 1;
    }

    MultiplierCircuit circuit(width, cfg.budget, cfg.gate_config());
    Rng rng(mix_seed(cfg.sim.master_seed, kVerifyInputTag));

    std::size_t cases = 0;
    std::vector<std::string> mismatches;
    auto check = [&](const Float32Fields& a, const Float32Fields& b) {
        ++cases;
        const OracleResult o = ieee_mul_truncate(a, b);
        const ProductResult r = circuit.multiply(a, b);
        std::string bad;
        if (r.fields.sign != o.fields.sign) bad += " sign";
        if (r.fields.exponent != o.fields.exponent) bad += " exponent";
        if (r.fields.mantissa != o.fields.mantissa) bad += " mantissa";
        if (r.normalization_bit != o.norm_bit) bad += " norm_bit";
        if (r.of_uf_flag != o.of_uf_flag) bad += " of_uf_flag";
        if (!bad.empty())
            mismatches.push_back("a={" + describe_fields(a) + "} b={" +
                                 describe_fields(b) + "} fields:" + bad);
    };

    const std::uint32_t m_count = 1u << width;
    if (exhaustive) {
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            const unsigned e1 = 1u + static_cast<unsigned>(rng.below(254));
            const unsigned e2 = 1u + static_cast<unsigned>(rng.below(254));
            for (std::uint32_t m1 = 0; m1 < m_count; ++m1)
                for (std::uint32_t m2 = 0; m2 < m_count; ++m2)
                    for (unsigned s = 0; s < 4; ++s)
                        check({s & 1u, e1, m1, width},
                              {s >> 1u, e2, m2, width});
        }
    } else {
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            const Float32Fields a{static_cast<unsigned>(rng.below(2)),
                                  1u + static_cast<unsigned>(rng.below(254)),
                                  static_cast<std::uint32_t>(
                                      rng.below(m_count)),
                                  width};
            const Float32Fields b{static_cast<unsigned>(rng.below(2)),
                                  1u + static_cast<unsigned>(rng.below(254)),
                                  static_cast<std::uint32_t>(
                                      rng.below(m_count)),
                                  width};
            check(a, b);
        }
    }

    std::printf(
        "verify: width=%u mode=%s %s trials=%zu seed=%llu kernel=%s\n", width,
        cfg.mode.c_str(), exhaustive ? "exhaustive" : "random", cfg.trials,
        static_cast<unsigned long long>(cfg.sim.master_seed),
        kernels::active().name);
    std::printf("neurons: %s\n", budget_string(cfg.budget).c_str());
    std::printf("cases=%zu mismatches=%zu\n", cases, mismatches.size());
    const std::size_t shown = std::min<std::size_t>(mismatches.size(), 20);
    for (std::size_t i = 0; i < shown; ++i)
        std::printf("mismatch: %s\n", mismatches[i].c_str());
    if (mismatches.size() > shown)
        std::printf("... and %zu more\n", mismatches.size() - shown);
    return mismatches.empty() ? 0 : 2;
}

int run_sweep(CommonOpts& c, const std::string& component,
              std::vector<std::size_t> counts) {
    c.finalize();
    const RunConfig& cfg = c.cfg;

    const auto comp = parse_component(component);
    if (!comp) {
        std::fprintf(stderr,
                     "error: unknown component '%s' (expected exponent_adder, "
                     "bias_subtractor, mantissa_multiplier or sign_of_uf)\n",
                     component.c_str());
        return 1;
    }
    if (counts.empty()) counts = {100, 200, 300, 400, 500, 600, 700, 800};
    std::sort(counts.begin(), counts.end());
    counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
    if (counts.front() == 0) {
        std::fprintf(stderr, "error: neuron counts must be positive\n");
        return 1;
    }

    MeasureOptions opt;
    opt.mantissa_width = cfg.mantissa_width;
    opt.mode = cfg.sim_mode();
    opt.base = cfg.gate_config();

    std::printf("sweep: component=%s mode=%s width=%u trials=%zu seed=%llu "
                "kernel=%s\n",
                component_name(*comp), cfg.mode.c_str(), cfg.mantissa_width,
                cfg.trials,
                static_cast<unsigned long long>(cfg.sim.master_seed),
                kernels::active().name);

    const SweepResult sweep = sweep_neurons(*comp, counts, cfg.trials,
                                            cfg.sim.master_seed, opt);

    for (const MetricsReport& agg : sweep.per_count)
        std::printf(
            "neurons=%zu accuracy=%.4f%% mae=%.6f mee=%.6f errors=%zu/%zu\n",
            agg.neurons_per_ensemble, agg.accuracy, agg.mae, agg.mee,
            agg.bit_errors, agg.total_bits);
    std::printf("knee estimate: %zu neurons\n", knee_estimate(sweep));

    if (cfg.output_path.empty()) {
        write_csv(std::cout, sweep.rows);
    } else {
        std::ofstream out(cfg.output_path);
        if (!out)
            throw std::runtime_error("cannot write CSV file: " +
                                     cfg.output_path);
        write_csv(out, sweep.rows);
        out.flush();
        if (!out)
            throw std::runtime_error("error writing CSV file: " +
                                     cfg.output_path);
        std::printf("csv written to %s\n", cfg.output_path.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        // The config file provides defaults, so it must be known before the
        // options are registered; scan for it first.
        std::string config_path;
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc)
                config_path = argv[i + 1];
            else if (arg.rfind("--config=", 0) == 0)
                config_path = arg.substr(9);
        }
        RunConfig base;
        const bool had_config = !config_path.empty();
        if (had_config) base = load_run_config(config_path);

        CLI::App app{
            "IEEE 754 single-precision multiplication on simulated spiking "
            "neurons, with an integer oracle and accuracy sweeps"};
        app.require_subcommand(1);

        std::string a_text, b_text, component;
        std::vector<std::size_t> counts;

        CommonOpts mul_opts;
        mul_opts.cfg = base;
        CLI::App* mul = app.add_subcommand(
            "mul", "multiply two floats on the neural circuit");
        mul->add_option("a", a_text, "first operand (0xXXXXXXXX or decimal)")
            ->required();
        mul->add_option("b", b_text, "second operand")->required();
        add_common_flags(mul, mul_opts, false);

        CommonOpts verify_opts;
        verify_opts.cfg = base;
        if (!had_config) {
            verify_opts.cfg.mode = "rate";
            verify_opts.cfg.mantissa_width = 3;
            verify_opts.cfg.trials = 100;
        }
        bool exhaustive = false;
        CLI::App* verify = app.add_subcommand(
            "verify", "compare many multiplications against the oracle");
        verify->add_flag("--exhaustive", exhaustive,
                         "all mantissa and sign pairs (width <= 4) per "
                         "random exponent pair; --trials counts exponent "
                         "pairs");
        add_common_flags(verify, verify_opts, true);

        CommonOpts sweep_opts;
        sweep_opts.cfg = base;
        if (!had_config) {
            sweep_opts.cfg.mantissa_width = 6;
            sweep_opts.cfg.trials = 5;
        }
        CLI::App* sweep = app.add_subcommand(
            "sweep", "accuracy vs neurons-per-ensemble, CSV output");
        sweep->add_option("component", component,
                          "exponent_adder, bias_subtractor, "
                          "mantissa_multiplier or sign_of_uf")
            ->required();
        sweep->add_option("--counts", counts,
                          "comma-separated neuron counts (default 100..800)")
            ->delimiter(',');
        add_common_flags(sweep, sweep_opts, true);

        int rc = 0;
        mul->callback([&] { rc = run_mul(a_text, b_text, mul_opts); });
        verify->callback([&] { rc = run_verify(verify_opts, exhaustive); });
        sweep->callback([&] { rc = run_sweep(sweep_opts, component, counts); });

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 1;
        }
        return rc;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
