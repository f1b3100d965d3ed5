#pragma once

// Runtime-dispatched arithmetic kernels.
//
// Every operation has a scalar reference implementation and, on x86-64 with
// AVX2, a vector implementation. Backends are interchangeable bit-for-bit:
// the reductions use a fixed 8-bank (float) / 4-bank (double) tree and the
// elementwise ops use identical instruction-level arithmetic, so simulation
// results do not depend on which backend the host selects.

#include <cstddef>
#include <string_view>

#include "nefmul/kernels/scalar_ref.hpp"

namespace nefmul::kernels {

struct Ops {
    const char* name;

    // out[i] = lif_rate(j[i]); see lif_rate_scalar. out == j is allowed
    // (each element is read before it is written).
    void (*lif_rate_batch)(float* out, const float* j, std::size_t n,
                           float tau_rc, float tau_ref);

    // one voltage-integration step over n neurons
    void (*lif_step)(float* v, float* refr, const float* j, float* spiked,
                     std::size_t n, const LifStepConsts& c);

    // y[i] += a * x[i]
    void (*axpy_f32)(float* y, const float* x, float a, std::size_t n);

    // 8-bank reduction dot product
    float (*dot_f32)(const float* x, const float* y, std::size_t n);

    // 4-bank reduction dot product
    double (*dot_f64)(const double* x, const double* y, std::size_t n);

    // accumulate the outer product a*a^T into the upper triangle (j >= i) of
    // row-major G (n x n, double), widening each float exactly
    void (*gram_update)(double* g, const float* a, std::size_t n);

    // acc[i] += double(a[i]) * t
    void (*scaled_accum)(double* acc, const float* a, double t, std::size_t n);
};

const Ops& scalar_ops();
#ifdef NEFMUL_BUILD_AVX2
const Ops& avx2_ops();
#endif

bool avx2_available();

// Resolves a backend by name ("scalar", "avx2", "auto"). Throws
// std::invalid_argument for unknown names and std::runtime_error when the
// requested backend is unavailable on this host.
const Ops& select(std::string_view name);

// Pins the backend returned by active() from here on. Same errors as
// select(). Intended for process startup (CLI flag); not thread-safe against
// concurrent active() calls.
void force_backend(std::string_view name);

// Active backend: force_backend choice if set, else the NEFMUL_KERNEL
// environment variable ("scalar", "avx2", "auto"), else the best the CPU
// supports.
const Ops& active();

}  // namespace nefmul::kernels
