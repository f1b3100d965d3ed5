#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nefmul/nef/lif.hpp"

namespace nefmul {

// A population of LIF neurons jointly representing a point in R^dimensions.
// Neuron i responds to input x with rate G[gains[i] * (encoders_i . x) /
// radius + biases[i]]. gain_enc caches gains[i] * encoders[i][k] / radius so
// the per-step drive is a plain dot product plus bias.
struct Ensemble {
    std::size_t n_neurons = 0;
    std::size_t dimensions = 0;
    float radius = 1.0f;
    std::vector<float> encoders;    // n x d row-major, unit rows
    std::vector<float> gains;       // strictly positive
    std::vector<float> biases;
    std::vector<float> gain_enc;    // n x d, gains[i]*encoders[i*d+k]/radius
    std::vector<float> max_rates;   // sampled calibration rate at e.x = radius
    std::vector<float> intercepts;  // sampled threshold point in [-1, 1)
    LifParameters lif;
    std::uint64_t seed = 0;
};

// Samples encoders uniformly on the unit hypersphere and per-neuron
// (max_rate, intercept) from the given ranges, then solves gain and bias so
// the neuron is at threshold when (e.x)/radius = intercept and fires at
// max_rate when (e.x)/radius = 1. Deterministic in seed.
Ensemble build_ensemble(std::size_t n_neurons, std::size_t dimensions,
                        float radius, const LifParameters& lif,
                        std::uint64_t seed,
                        std::pair<float, float> rate_range = {200.0f, 400.0f},
                        std::pair<float, float> intercept_range = {-1.0f,
                                                                   1.0f});

// j_out[i] = gain_enc_i . x + biases[i]; x has ens.dimensions entries.
void input_current(const Ensemble& ens, const float* x, float* j_out);

// rates_out[i] = lif_rate(input current of neuron i). Throws on dimension
// mismatch in the span overload.
void neuron_activities(const Ensemble& ens, const float* x, float* rates_out);
std::vector<float> neuron_activities(const Ensemble& ens,
                                     std::span<const float> x);

}  // namespace nefmul
