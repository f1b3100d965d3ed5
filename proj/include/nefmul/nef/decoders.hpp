#pragma once

#include <cstdint>
#include <vector>

#include "nefmul/nef/ensemble.hpp"

namespace nefmul {

// Linear readout weights for one ensemble. Logical shape is
// n_neurons x output_dims; stored per output dimension so decoding is a
// contiguous dot product against an activity vector.
struct Decoders {
    std::size_t n_neurons = 0;
    std::size_t output_dims = 0;
    std::vector<std::vector<float>> columns;  // output_dims x n_neurons

    float entry(std::size_t neuron, std::size_t dim) const {
        return columns[dim][neuron];
    }
};

// m equally spaced values from lo to hi inclusive (m >= 2), or {lo} for m=1.
std::vector<float> linspace(float lo, float hi, std::size_t m);

// Activity matrix: row per eval point, column per neuron (m x n row-major).
// eval_points is m x dimensions row-major.
std::vector<float> tuning_matrix(const Ensemble& ens,
                                 const std::vector<float>& eval_points,
                                 std::size_t n_points);

// Least-squares decoders: minimizes sum_x |target(x) - sum_i a_i(x) d_i|^2
// + m * lambda |d|^2 with lambda = (regularization * max activity)^2 and m
// the number of eval points, via a Cholesky solve of the regularized Gram
// matrix in double precision. Scaling the penalty by m keeps it a fixed
// fraction of the Gram diagonal regardless of grid resolution.
// targets is m x output_dims row-major. Throws std::invalid_argument on
// shape errors and std::runtime_error if the system is numerically singular
// (possible only with regularization == 0).
Decoders solve_decoders(const Ensemble& ens,
                        const std::vector<float>& eval_points,
                        const std::vector<float>& targets,
                        std::size_t output_dims, float regularization);

// decoded[dim] = activities . columns[dim]
std::vector<float> decode(const Decoders& dec,
                          const std::vector<float>& activities);

}  // namespace nefmul
