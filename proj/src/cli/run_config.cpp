#include "nefmul/cli/run_config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nefmul {
namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw std::invalid_argument("run config: bad value for " + key + ": '" +
                                value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
    const char* s = value.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || errno == ERANGE) bad_value(key, value);
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    if (value.empty() || value[0] == '-') bad_value(key, value);
    const char* s = value.c_str();
    char* end = nullptr;
    errno = 0;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0' || errno == ERANGE) bad_value(key, value);
    return static_cast<std::uint64_t>(v);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SimMode RunConfig::sim_mode() const {
    if (mode == "rate") return SimMode::rate;
    if (mode == "spiking") return SimMode::spiking;
    throw std::invalid_argument("run config: mode must be 'rate' or 'spiking', got '" +
                                mode + "'");
}

GateConfig RunConfig::gate_config() const {
    GateConfig g;
    g.mode = sim_mode();
    g.sim = sim;
    return g;
}

void RunConfig::validate() const {
    (void)sim_mode();
    sim.validate();
    if (mantissa_width < 1 || mantissa_width > 23)
        throw std::invalid_argument("run config: mantissa_width must be in [1, 23]");
    if (budget.exponent_adder == 0 || budget.bias_subtractor == 0 ||
        budget.mantissa_multiplier == 0 || budget.sign_of_uf == 0)
        throw std::invalid_argument("run config: neuron counts must be positive");
    if (trials == 0)
        throw std::invalid_argument("run config: trials must be positive");
    if (kernel != "auto" && kernel != "scalar" && kernel != "avx2")
        throw std::invalid_argument(
            "run config: kernel must be 'auto', 'scalar' or 'avx2', got '" +
            kernel + "'");
}

RunConfig parse_run_config(std::istream& is) {
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("run config: line " + std::to_string(lineno) +
                                        " is not key=value: '" + line + "'");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);

        if (key == "mode") {
            cfg.mode = value;
        } else if (key == "mantissa_width") {
            cfg.mantissa_width = static_cast<unsigned>(parse_u64(key, value));
        } else if (key == "neurons.exponent_adder") {
            cfg.budget.exponent_adder = parse_u64(key, value);
        } else if (key == "neurons.bias_subtractor") {
            cfg.budget.bias_subtractor = parse_u64(key, value);
        } else if (key == "neurons.mantissa_multiplier") {
            cfg.budget.mantissa_multiplier = parse_u64(key, value);
        } else if (key == "neurons.sign_of_uf") {
            cfg.budget.sign_of_uf = parse_u64(key, value);
        } else if (key == "dt") {
            cfg.sim.dt = parse_double(key, value);
        } else if (key == "probe_interval") {
            cfg.sim.probe_interval = parse_double(key, value);
        } else if (key == "settle_time") {
            cfg.sim.settle_time = parse_double(key, value);
        } else if (key == "readout_window") {
            cfg.sim.readout_window = parse_double(key, value);
        } else if (key == "master_seed") {
            cfg.sim.master_seed = parse_u64(key, value);
        } else if (key == "trials") {
            cfg.trials = parse_u64(key, value);
        } else if (key == "output_path") {
            cfg.output_path = value;
        } else if (key == "kernel") {
            cfg.kernel = value;
        } else {
            throw std::invalid_argument("run config: unknown key '" + key + "'");
        }
    }
    return cfg;
}

void write_run_config(std::ostream& os, const RunConfig& cfg) {
    os << "mode=" << cfg.mode << '\n';
    os << "mantissa_width=" << cfg.mantissa_width << '\n';
    os << "neurons.exponent_adder=" << cfg.budget.exponent_adder << '\n';
    os << "neurons.bias_subtractor=" << cfg.budget.bias_subtractor << '\n';
    os << "neurons.mantissa_multiplier=" << cfg.budget.mantissa_multiplier << '\n';
    os << "neurons.sign_of_uf=" << cfg.budget.sign_of_uf << '\n';
    os << "dt=" << format_double(cfg.sim.dt) << '\n';
    os << "probe_interval=" << format_double(cfg.sim.probe_interval) << '\n';
    os << "settle_time=" << format_double(cfg.sim.settle_time) << '\n';
    os << "readout_window=" << format_double(cfg.sim.readout_window) << '\n';
    os << "master_seed=" << cfg.sim.master_seed << '\n';
    os << "trials=" << cfg.trials << '\n';
    os << "output_path=" << cfg.output_path << '\n';
    os << "kernel=" << cfg.kernel << '\n';
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_run_config(in);
}

void save_run_config(const std::string& path, const RunConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file: " + path);
    write_run_config(out, cfg);
    out.flush();
    if (!out) throw std::runtime_error("error writing config file: " + path);
}

NeuronBudget apply_neuron_overrides(NeuronBudget base,
                                    const std::vector<std::string>& specs) {
    for (const auto& spec : specs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) {
            std::size_t n = parse_u64("--neurons", spec);
            base.exponent_adder = n;
            base.bias_subtractor = n;
            base.mantissa_multiplier = n;
            base.sign_of_uf = n;
            continue;
        }
        std::string name = spec.substr(0, eq);
        auto c = parse_component(name);
        if (!c)
            throw std::invalid_argument(
                "--neurons: unknown component '" + name +
                "' (expected exponent_adder, bias_subtractor, "
                "mantissa_multiplier or sign_of_uf)");
        std::size_t n = parse_u64("--neurons", spec.substr(eq + 1));
        switch (*c) {
            case Component::exponent_adder: base.exponent_adder = n; break;
            case Component::bias_subtractor: base.bias_subtractor = n; break;
            case Component::mantissa_multiplier: base.mantissa_multiplier = n; break;
            case Component::sign_of_uf: base.sign_of_uf = n; break;
        }
    }
    return base;
}

}  // namespace nefmul
