#include "nefmul/nef/ensemble.hpp"

#include <cmath>
#include <stdexcept>

#include "nefmul/kernels/kernels.hpp"
#include "nefmul/nef/rng.hpp"

namespace nefmul {

Ensemble build_ensemble(std::size_t n_neurons, std::size_t dimensions,
                        float radius, const LifParameters& lif,
                        std::uint64_t seed,
                        std::pair<float, float> rate_range,
                        std::pair<float, float> intercept_range) {
    lif.validate();
    if (n_neurons < 1 || dimensions < 1) {
        throw std::invalid_argument(
            "build_ensemble: need at least one neuron and one dimension");
    }
    if (!(radius > 0.0f)) {
        throw std::invalid_argument("build_ensemble: radius must be > 0");
    }
    if (!(rate_range.second > rate_range.first) ||
        !(rate_range.first > 0.0f)) {
        throw std::invalid_argument("build_ensemble: degenerate rate range");
    }
    if (!(intercept_range.second > intercept_range.first) ||
        !(intercept_range.second <= 1.0f)) {
        throw std::invalid_argument(
            "build_ensemble: intercepts must lie below 1");
    }

    Ensemble ens;
    ens.n_neurons = n_neurons;
    ens.dimensions = dimensions;
    ens.radius = radius;
    ens.lif = lif;
    ens.seed = seed;
    ens.encoders.resize(n_neurons * dimensions);
    ens.gains.resize(n_neurons);
    ens.biases.resize(n_neurons);
    ens.gain_enc.resize(n_neurons * dimensions);
    ens.max_rates.resize(n_neurons);
    ens.intercepts.resize(n_neurons);

    Rng rng(seed);
    const double tau_rc = lif.tau_rc;
    const double tau_ref = lif.tau_ref;
    for (std::size_t i = 0; i < n_neurons; ++i) {
        // Per-neuron draw order is fixed: encoder, max rate, intercept.
        double norm2 = 0.0;
        for (std::size_t k = 0; k < dimensions; ++k) {
            const double g = rng.normal();
            ens.encoders[i * dimensions + k] = static_cast<float>(g);
            norm2 += g * g;
        }
        if (norm2 == 0.0) {
            ens.encoders[i * dimensions] = 1.0f;
            norm2 = 1.0;
        }
        const double inv_norm = 1.0 / std::sqrt(norm2);
        for (std::size_t k = 0; k < dimensions; ++k) {
            ens.encoders[i * dimensions + k] = static_cast<float>(
                ens.encoders[i * dimensions + k] * inv_norm);
        }

        const double max_rate =
            rng.uniform(rate_range.first, rate_range.second);
        const double intercept =
            rng.uniform(intercept_range.first, intercept_range.second);

        // Invert the rate equation at the calibration point: a drive of
        // j_max must fire at max_rate, and drive 1 (threshold) must sit at
        // normalized input = intercept.
        const double z = (tau_ref - 1.0 / max_rate) / tau_rc;
        const double j_max = 1.0 / (1.0 - std::exp(z));
        const double gain = (j_max - 1.0) / (1.0 - intercept);
        const double bias = 1.0 - gain * intercept;

        ens.max_rates[i] = static_cast<float>(max_rate);
        ens.intercepts[i] = static_cast<float>(intercept);
        ens.gains[i] = static_cast<float>(gain);
        ens.biases[i] = static_cast<float>(bias);
        for (std::size_t k = 0; k < dimensions; ++k) {
            ens.gain_enc[i * dimensions + k] = static_cast<float>(
                gain * ens.encoders[i * dimensions + k] / radius);
        }
    }
    return ens;
}

void input_current(const Ensemble& ens, const float* x, float* j_out) {
    const std::size_t d = ens.dimensions;
    for (std::size_t i = 0; i < ens.n_neurons; ++i) {
        float acc = ens.biases[i];
        for (std::size_t k = 0; k < d; ++k) {
            acc = acc + ens.gain_enc[i * d + k] * x[k];
        }
        j_out[i] = acc;
    }
}

void neuron_activities(const Ensemble& ens, const float* x,
                       float* rates_out) {
    input_current(ens, x, rates_out);
    kernels::active().lif_rate_batch(rates_out, rates_out, ens.n_neurons,
                                     ens.lif.tau_rc, ens.lif.tau_ref);
}

std::vector<float> neuron_activities(const Ensemble& ens,
                                     std::span<const float> x) {
    if (x.size() != ens.dimensions) {
        throw std::invalid_argument(
            "neuron_activities: input dimension mismatch");
    }
    std::vector<float> rates(ens.n_neurons);
    neuron_activities(ens, x.data(), rates.data());
    return rates;
}

}  // namespace nefmul
