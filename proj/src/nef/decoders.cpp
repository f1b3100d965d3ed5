#include "nefmul/nef/decoders.hpp"

#include <cmath>
#include <stdexcept>

#include "nefmul/kernels/kernels.hpp"

namespace nefmul {

std::vector<float> linspace(float lo, float hi, std::size_t m) {
    if (m == 0) {
        throw std::invalid_argument("linspace: need at least one point");
    }
    std::vector<float> pts(m);
    if (m == 1) {
        pts[0] = lo;
        return pts;
    }
    const double step = (static_cast<double>(hi) - lo) / (m - 1);
    for (std::size_t i = 0; i < m; ++i) {
        pts[i] = static_cast<float>(lo + step * i);
    }
    pts[m - 1] = hi;
    return pts;
}

std::vector<float> tuning_matrix(const Ensemble& ens,
                                 const std::vector<float>& eval_points,
                                 std::size_t n_points) {
    if (eval_points.size() != n_points * ens.dimensions) {
        throw std::invalid_argument("tuning_matrix: eval point shape");
    }
    std::vector<float> a(n_points * ens.n_neurons);
    for (std::size_t p = 0; p < n_points; ++p) {
        neuron_activities(ens, eval_points.data() + p * ens.dimensions,
                          a.data() + p * ens.n_neurons);
    }
    return a;
}

namespace {

// In-place lower Cholesky factorization of symmetric positive definite G
// (n x n row-major; only the lower triangle of the result is meaningful).
// Throws std::runtime_error when a pivot is not strictly positive.
void cholesky_lower(std::vector<double>& g, std::size_t n) {
    const auto& ops = kernels::active();
    for (std::size_t i = 0; i < n; ++i) {
        double* row_i = g.data() + i * n;
        for (std::size_t j = 0; j <= i; ++j) {
            const double* row_j = g.data() + j * n;
            const double s = row_i[j] - ops.dot_f64(row_i, row_j, j);
            if (i == j) {
                if (!(s > 0.0)) {
                    throw std::runtime_error(
                        "solve_decoders: Gram matrix is numerically "
                        "singular; use a nonzero regularization");
                }
                row_i[j] = std::sqrt(s);
            } else {
                row_i[j] = s / row_j[j];
            }
        }
    }
}

// Solves L L^T x = b with L lower triangular, overwriting b with x.
void cholesky_solve(const std::vector<double>& l, std::size_t n,
                    std::vector<double>& b) {
    const auto& ops = kernels::active();
    for (std::size_t i = 0; i < n; ++i) {
        const double* row_i = l.data() + i * n;
        b[i] = (b[i] - ops.dot_f64(row_i, b.data(), i)) / row_i[i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) {
            acc -= l[j * n + ii] * b[j];
        }
        b[ii] = acc / l[ii * n + ii];
    }
}

}  // namespace

Decoders solve_decoders(const Ensemble& ens,
                        const std::vector<float>& eval_points,
                        const std::vector<float>& targets,
                        std::size_t output_dims, float regularization) {
    const std::size_t d = ens.dimensions;
    const std::size_t n = ens.n_neurons;
    if (eval_points.empty() || eval_points.size() % d != 0) {
        throw std::invalid_argument("solve_decoders: eval point shape");
    }
    const std::size_t m = eval_points.size() / d;
    if (output_dims == 0 || targets.size() != m * output_dims) {
        throw std::invalid_argument("solve_decoders: target shape");
    }
    if (!(regularization >= 0.0f)) {
        throw std::invalid_argument(
            "solve_decoders: regularization must be >= 0");
    }

    const std::vector<float> a = tuning_matrix(ens, eval_points, m);
    const auto& ops = kernels::active();

    float a_max = 0.0f;
    for (const float v : a) {
        a_max = v > a_max ? v : a_max;
    }

    std::vector<double> gram(n * n, 0.0);
    std::vector<std::vector<double>> rhs(output_dims,
                                         std::vector<double>(n, 0.0));
    for (std::size_t p = 0; p < m; ++p) {
        const float* row = a.data() + p * n;
        ops.gram_update(gram.data(), row, n);
        for (std::size_t k = 0; k < output_dims; ++k) {
            ops.scaled_accum(rhs[k].data(), row,
                             static_cast<double>(targets[p * output_dims + k]),
                             n);
        }
    }

    // Ridge scaled by the eval-point count: the Gram entries are sums over
    // the m points, so the penalty must grow with m to stay a fixed fraction
    // of the diagonal. Minimizes sum_x |y - a.d|^2 + m*(reg*a_max)^2*|d|^2.
    const double lam = static_cast<double>(regularization) * a_max;
    const double ridge = static_cast<double>(m) * lam * lam;
    for (std::size_t i = 0; i < n; ++i) {
        gram[i * n + i] += ridge;
        for (std::size_t j = i + 1; j < n; ++j) {
            gram[j * n + i] = gram[i * n + j];
        }
    }

    cholesky_lower(gram, n);

    Decoders dec;
    dec.n_neurons = n;
    dec.output_dims = output_dims;
    dec.columns.resize(output_dims);
    for (std::size_t k = 0; k < output_dims; ++k) {
        cholesky_solve(gram, n, rhs[k]);
        dec.columns[k].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            dec.columns[k][i] = static_cast<float>(rhs[k][i]);
        }
    }
    return dec;
}

std::vector<float> decode(const Decoders& dec,
                          const std::vector<float>& activities) {
    if (activities.size() != dec.n_neurons) {
        throw std::invalid_argument("decode: activity length mismatch");
    }
    const auto& ops = kernels::active();
    std::vector<float> out(dec.output_dims);
    for (std::size_t k = 0; k < dec.output_dims; ++k) {
        out[k] =
            ops.dot_f32(activities.data(), dec.columns[k].data(), dec.n_neurons);
    }
    return out;
}

}  // namespace nefmul
