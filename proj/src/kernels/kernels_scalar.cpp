#include "nefmul/kernels/kernels.hpp"

namespace nefmul::kernels {
namespace {

void lif_rate_batch_scalar(float* out, const float* j, std::size_t n,
                           float tau_rc, float tau_ref) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lif_rate_scalar(j[i], tau_rc, tau_ref);
    }
}

void lif_step_batch_scalar(float* v, float* refr, const float* j,
                           float* spiked, std::size_t n,
                           const LifStepConsts& c) {
    for (std::size_t i = 0; i < n; ++i) {
        lif_step_scalar(v[i], refr[i], j[i], spiked[i], c);
    }
}

void axpy_f32_scalar(float* y, const float* x, float a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = y[i] + a * x[i];
    }
}

float dot_f32_scalar(const float* x, const float* y, std::size_t n) {
    float acc[8] = {0.0f, 0.0f, 0.0f, 0.0f, 0.0f, 0.0f, 0.0f, 0.0f};
    for (std::size_t i = 0; i < n; ++i) {
        acc[i & 7] = acc[i & 7] + x[i] * y[i];
    }
    const float s01 = acc[0] + acc[1];
    const float s23 = acc[2] + acc[3];
    const float s45 = acc[4] + acc[5];
    const float s67 = acc[6] + acc[7];
    return (s01 + s23) + (s45 + s67);
}

double dot_f64_scalar(const double* x, const double* y, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        acc[i & 3] = acc[i & 3] + x[i] * y[i];
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void gram_update_scalar(double* g, const float* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double ai = static_cast<double>(a[i]);
        double* row = g + i * n;
        for (std::size_t j = i; j < n; ++j) {
            row[j] = row[j] + ai * static_cast<double>(a[j]);
        }
    }
}

void scaled_accum_scalar(double* acc, const float* a, double t,
                         std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        acc[i] = acc[i] + static_cast<double>(a[i]) * t;
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",
        lif_rate_batch_scalar,
        lif_step_batch_scalar,
        axpy_f32_scalar,
        dot_f32_scalar,
        dot_f64_scalar,
        gram_update_scalar,
        scaled_accum_scalar,
    };
    return ops;
}

}  // namespace nefmul::kernels
