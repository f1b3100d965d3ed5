#include "nefmul/nef/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nefmul/kernels/kernels.hpp"
#include "nefmul/nef/rng.hpp"

namespace nefmul {
namespace {

// Tag space for per-instance membrane initialization streams, kept disjoint
// from the tags circuits use to derive ensemble seeds.
constexpr std::uint64_t kMembraneTag = 0x6D656D6272616E65ull;

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("SimConfig: dt must be > 0");
    }
    if (!(probe_interval >= dt)) {
        throw std::invalid_argument("SimConfig: probe_interval must be >= dt");
    }
    if (!(readout_window > 0.0) || !(settle_time >= readout_window)) {
        throw std::invalid_argument(
            "SimConfig: need settle_time >= readout_window > 0");
    }
}

SignalRef Network::add_input(float value) {
    Signal s;
    s.is_input = true;
    s.value = value;
    signals_.push_back(std::move(s));
    return SignalRef{signals_.size() - 1};
}

std::size_t Network::add_ensemble(const Ensemble* ens) {
    if (ens == nullptr || ens->n_neurons == 0) {
        throw std::invalid_argument("add_ensemble: empty ensemble");
    }
    instances_.push_back(ens);
    return instances_.size() - 1;
}

void Network::connect(SignalRef src, std::size_t instance, std::size_t dim,
                      float weight) {
    if (src.index >= signals_.size() || instance >= instances_.size()) {
        throw std::invalid_argument("connect: unknown signal or instance");
    }
    if (dim >= instances_[instance]->dimensions) {
        throw std::invalid_argument("connect: input dimension out of range");
    }
    connections_.push_back(Connection{src.index, instance, dim, weight});
}

SignalRef Network::add_decode(std::size_t instance, std::vector<float> column,
                              float synapse_tau) {
    if (instance >= instances_.size()) {
        throw std::invalid_argument("add_decode: unknown instance");
    }
    if (column.size() != instances_[instance]->n_neurons) {
        throw std::invalid_argument(
            "add_decode: decoder length does not match the ensemble");
    }
    Signal s;
    s.is_input = false;
    s.instance = instance;
    s.column = std::move(column);
    s.synapse_tau = synapse_tau;
    signals_.push_back(std::move(s));
    return SignalRef{signals_.size() - 1};
}

std::size_t Network::add_probe(SignalRef sig) {
    if (sig.index >= signals_.size()) {
        throw std::invalid_argument("add_probe: unknown signal");
    }
    probes_.push_back(sig.index);
    return probes_.size() - 1;
}

std::vector<std::size_t> Network::topological_order() const {
    const std::size_t n = instances_.size();
    // Edge u -> v when a decode of u feeds a connection into v.
    std::vector<std::vector<std::size_t>> out_edges(n);
    std::vector<std::size_t> indegree(n, 0);
    for (const Connection& c : connections_) {
        const Signal& s = signals_[c.signal];
        if (!s.is_input) {
            out_edges[s.instance].push_back(c.instance);
            ++indegree[c.instance];
        }
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) {
            ready.push_back(i);
        }
    }
    while (!ready.empty()) {
        const std::size_t u = ready.back();
        ready.pop_back();
        order.push_back(u);
        for (const std::size_t v : out_edges[u]) {
            if (--indegree[v] == 0) {
                ready.push_back(v);
            }
        }
    }
    if (order.size() != n) {
        throw std::runtime_error(
            "run_network: ensemble graph has a cycle; only feedforward "
            "networks are supported");
    }
    return order;
}

SimResult run_network(const Network& net, SimMode mode, const SimConfig& sim) {
    sim.validate();
    const std::vector<std::size_t> order = net.topological_order();
    const auto& ops = kernels::active();

    const std::size_t n_inst = net.instances_.size();
    const std::size_t n_sig = net.signals_.size();

    // Per-instance groupings, in declaration order for determinism.
    std::vector<std::vector<std::size_t>> conns_of(n_inst);
    for (std::size_t c = 0; c < net.connections_.size(); ++c) {
        conns_of[net.connections_[c].instance].push_back(c);
    }
    std::vector<std::vector<std::size_t>> decodes_of(n_inst);
    for (std::size_t s = 0; s < n_sig; ++s) {
        if (!net.signals_[s].is_input) {
            decodes_of[net.signals_[s].instance].push_back(s);
        }
    }

    std::vector<float> sig(n_sig, 0.0f);
    for (std::size_t s = 0; s < n_sig; ++s) {
        if (net.signals_[s].is_input) {
            sig[s] = net.signals_[s].value;
        }
    }

    std::vector<std::vector<float>> x(n_inst), j(n_inst);
    for (std::size_t i = 0; i < n_inst; ++i) {
        x[i].resize(net.instances_[i]->dimensions);
        j[i].resize(net.instances_[i]->n_neurons);
    }

    SimResult result;
    result.probes.resize(net.probes_.size());

    const auto gather_input = [&](std::size_t inst) {
        std::fill(x[inst].begin(), x[inst].end(), 0.0f);
        for (const std::size_t ci : conns_of[inst]) {
            const Network::Connection& c = net.connections_[ci];
            x[inst][c.dim] = x[inst][c.dim] + c.weight * sig[c.signal];
        }
    };
    const auto record_probes = [&](double t) {
        for (std::size_t p = 0; p < net.probes_.size(); ++p) {
            result.probes[p].times.push_back(t);
            result.probes[p].values.push_back(sig[net.probes_[p]]);
        }
    };

    if (mode == SimMode::rate) {
        // One steady-state pass in dependency order; synapses have unit gain
        // at steady state so filters are skipped.
        for (const std::size_t inst : order) {
            const Ensemble& ens = *net.instances_[inst];
            gather_input(inst);
            input_current(ens, x[inst].data(), j[inst].data());
            ops.lif_rate_batch(j[inst].data(), j[inst].data(), ens.n_neurons,
                               ens.lif.tau_rc, ens.lif.tau_ref);
            for (const std::size_t s : decodes_of[inst]) {
                sig[s] = ops.dot_f32(j[inst].data(),
                                     net.signals_[s].column.data(),
                                     ens.n_neurons);
            }
        }
        record_probes(sim.settle_time);
        return result;
    }

    // Spiking mode.
    const float dtf = static_cast<float>(sim.dt);
    const float inv_dt = 1.0f / dtf;
    std::vector<std::vector<float>> v(n_inst), refr(n_inst), spiked(n_inst);
    std::vector<kernels::LifStepConsts> consts(n_inst);
    for (std::size_t i = 0; i < n_inst; ++i) {
        const Ensemble& ens = *net.instances_[i];
        const std::size_t n = ens.n_neurons;
        v[i].resize(n);
        refr[i].assign(n, 0.0f);
        spiked[i].assign(n, 0.0f);
        Rng rng(mix_seed(sim.master_seed, kMembraneTag + i));
        for (std::size_t k = 0; k < n; ++k) {
            v[i][k] = static_cast<float>(rng.u01());
        }
        consts[i] = kernels::LifStepConsts{
            dtf,
            static_cast<float>(1.0 - std::exp(-sim.dt / ens.lif.tau_rc)),
            1.0f / ens.lif.tau_rc,
            ens.lif.tau_ref,
            ens.lif.v_threshold,
        };
    }
    // One filter gain per decode signal.
    std::vector<float> filt_gain(n_sig, 1.0f);
    for (std::size_t s = 0; s < n_sig; ++s) {
        const Network::Signal& d = net.signals_[s];
        if (!d.is_input && d.synapse_tau > 0.0f) {
            filt_gain[s] =
                static_cast<float>(1.0 - std::exp(-sim.dt / d.synapse_tau));
        }
    }

    const long long steps = std::llround(sim.settle_time / sim.dt);
    const long long stride =
        std::max(1ll, std::llround(sim.probe_interval / sim.dt));
    for (long long k = 1; k <= steps; ++k) {
        for (const std::size_t inst : order) {
            const Ensemble& ens = *net.instances_[inst];
            gather_input(inst);
            input_current(ens, x[inst].data(), j[inst].data());
            ops.lif_step(v[inst].data(), refr[inst].data(), j[inst].data(),
                         spiked[inst].data(), ens.n_neurons, consts[inst]);
            for (const std::size_t s : decodes_of[inst]) {
                const float raw = ops.dot_f32(spiked[inst].data(),
                                              net.signals_[s].column.data(),
                                              ens.n_neurons) *
                                  inv_dt;
                sig[s] = sig[s] + filt_gain[s] * (raw - sig[s]);
            }
        }
        if (k % stride == 0) {
            record_probes(static_cast<double>(k) * sim.dt);
        }
    }
    return result;
}

double readout(const ProbeRecord& probe, const SimConfig& sim) {
    sim.validate();
    if (probe.times.empty() ||
        probe.times.back() + 0.5 * sim.dt < sim.settle_time) {
        throw std::runtime_error(
            "readout: probe does not span the configured settle time");
    }
    const double lo = sim.settle_time - sim.readout_window + 0.25 * sim.dt;
    const double hi = sim.settle_time + 0.25 * sim.dt;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < probe.times.size(); ++i) {
        if (probe.times[i] > lo && probe.times[i] <= hi) {
            sum += probe.values[i];
            ++count;
        }
    }
    if (count == 0) {
        throw std::runtime_error(
            "readout: no probe samples inside the readout window");
    }
    return sum / static_cast<double>(count);
}

}  // namespace nefmul
