// AVX2 kernel backend. Compiled with -mavx2 in its own translation unit and
// only reachable after a runtime CPU check.
//
// Bit-exact contract with the scalar backend: elementwise ops perform the
// same mul/add/div/compare sequence per lane, reductions accumulate into the
// same banks in the same order, and tails fall back to the scalar reference.

#include <immintrin.h>

#include "nefmul/kernels/kernels.hpp"

namespace nefmul::kernels {
namespace {

inline __m256 fast_log8(__m256 x) {
    const __m256 vmin = _mm256_set1_ps(kMinNormal);
    x = _mm256_max_ps(vmin, x);
    const __m256i bits = _mm256_castps_si256(x);
    __m256i e = _mm256_sub_epi32(
        _mm256_srli_epi32(bits, 23), _mm256_set1_epi32(127));
    const __m256i mbits = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi32(0x007FFFFF)),
        _mm256_set1_epi32(0x3F800000));
    __m256 m = _mm256_castsi256_ps(mbits);
    const __m256 big = _mm256_cmp_ps(m, _mm256_set1_ps(kSqrt2), _CMP_GT_OQ);
    m = _mm256_blendv_ps(m, _mm256_mul_ps(m, _mm256_set1_ps(0.5f)), big);
    e = _mm256_sub_epi32(e, _mm256_castps_si256(big));  // mask is -1 per lane
    const __m256 r = _mm256_sub_ps(m, _mm256_set1_ps(1.0f));
    __m256 p = _mm256_set1_ps(kLogC9);
    p = _mm256_add_ps(_mm256_mul_ps(p, r), _mm256_set1_ps(kLogC8));
    p = _mm256_add_ps(_mm256_mul_ps(p, r), _mm256_set1_ps(kLogC7));
    p = _mm256_add_ps(_mm256_mul_ps(p, r), _mm256_set1_ps(kLogC6));
    p = _mm256_add_ps(_mm256_mul_ps(p, r), _mm256_set1_ps(kLogC5));
    p = _mm256_add_ps(_mm256_mul_ps(p, r), _mm256_set1_ps(kLogC4));
    p = _mm256_add_ps(_mm256_mul_ps(p, r), _mm256_set1_ps(kLogC3));
    p = _mm256_add_ps(_mm256_mul_ps(p, r), _mm256_set1_ps(kLogC2));
    p = _mm256_add_ps(_mm256_mul_ps(p, r), _mm256_set1_ps(kLogC1));
    p = _mm256_add_ps(_mm256_mul_ps(p, r), _mm256_set1_ps(kLogC0));
    const __m256 lnm = _mm256_mul_ps(r, p);
    const __m256 ef = _mm256_cvtepi32_ps(e);
    const __m256 t =
        _mm256_add_ps(lnm, _mm256_mul_ps(ef, _mm256_set1_ps(kLn2Lo)));
    return _mm256_add_ps(_mm256_mul_ps(ef, _mm256_set1_ps(kLn2Hi)), t);
}

void lif_rate_batch_avx2(float* out, const float* j, std::size_t n,
                         float tau_rc, float tau_ref) {
    const __m256 one = _mm256_set1_ps(1.0f);
    const __m256 vrc = _mm256_set1_ps(tau_rc);
    const __m256 vref = _mm256_set1_ps(tau_ref);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 vj = _mm256_loadu_ps(j + i);
        const __m256 u = _mm256_sub_ps(one, _mm256_div_ps(one, vj));
        const __m256 denom =
            _mm256_sub_ps(vref, _mm256_mul_ps(vrc, fast_log8(u)));
        const __m256 rate = _mm256_div_ps(one, denom);
        const __m256 fire = _mm256_cmp_ps(vj, one, _CMP_GT_OQ);
        _mm256_storeu_ps(out + i, _mm256_and_ps(rate, fire));
    }
    for (; i < n; ++i) {
        out[i] = lif_rate_scalar(j[i], tau_rc, tau_ref);
    }
}

void lif_step_batch_avx2(float* v, float* refr, const float* j, float* spiked,
                         std::size_t n, const LifStepConsts& c) {
    const __m256 zero = _mm256_setzero_ps();
    const __m256 one = _mm256_set1_ps(1.0f);
    const __m256 vdt = _mm256_set1_ps(c.dt);
    const __m256 vkfull = _mm256_set1_ps(c.k_full);
    const __m256 vinvrc = _mm256_set1_ps(c.inv_tau_rc);
    const __m256 vref = _mm256_set1_ps(c.tau_ref);
    const __m256 vthr = _mm256_set1_ps(c.threshold);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 r = _mm256_loadu_ps(refr + i);
        const __m256 rc = _mm256_max_ps(zero, r);
        const __m256 held = _mm256_min_ps(vdt, rc);
        const __m256 delta = _mm256_sub_ps(vdt, held);
        __m256 refr_next = _mm256_max_ps(zero, _mm256_sub_ps(r, vdt));
        const __m256 full = _mm256_cmp_ps(delta, vdt, _CMP_EQ_OQ);
        const __m256 kd =
            _mm256_blendv_ps(_mm256_mul_ps(delta, vinvrc), vkfull, full);
        const __m256 v0 = _mm256_loadu_ps(v + i);
        const __m256 vj = _mm256_loadu_ps(j + i);
        __m256 v1 =
            _mm256_add_ps(v0, _mm256_mul_ps(kd, _mm256_sub_ps(vj, v0)));
        v1 = _mm256_max_ps(zero, v1);
        const __m256 sp = _mm256_cmp_ps(v1, vthr, _CMP_GE_OQ);
        const __m256 f = _mm256_div_ps(_mm256_sub_ps(vthr, v0),
                                       _mm256_sub_ps(v1, v0));
        const __m256 t_after =
            _mm256_mul_ps(delta, _mm256_sub_ps(one, f));
        const __m256 refr_spike = _mm256_sub_ps(vref, t_after);
        refr_next = _mm256_blendv_ps(refr_next, refr_spike, sp);
        v1 = _mm256_andnot_ps(sp, v1);
        _mm256_storeu_ps(v + i, v1);
        _mm256_storeu_ps(refr + i, refr_next);
        _mm256_storeu_ps(spiked + i, _mm256_and_ps(one, sp));
    }
    for (; i < n; ++i) {
        lif_step_scalar(v[i], refr[i], j[i], spiked[i], c);
    }
}

void axpy_f32_avx2(float* y, const float* x, float a, std::size_t n) {
    const __m256 va = _mm256_set1_ps(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 vy = _mm256_loadu_ps(y + i);
        const __m256 vx = _mm256_loadu_ps(x + i);
        _mm256_storeu_ps(y + i, _mm256_add_ps(vy, _mm256_mul_ps(va, vx)));
    }
    for (; i < n; ++i) {
        y[i] = y[i] + a * x[i];
    }
}

float dot_f32_avx2(const float* x, const float* y, std::size_t n) {
    __m256 vacc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 vx = _mm256_loadu_ps(x + i);
        const __m256 vy = _mm256_loadu_ps(y + i);
        vacc = _mm256_add_ps(vacc, _mm256_mul_ps(vx, vy));
    }
    alignas(32) float acc[8];
    _mm256_store_ps(acc, vacc);
    for (; i < n; ++i) {
        acc[i & 7] = acc[i & 7] + x[i] * y[i];
    }
    const float s01 = acc[0] + acc[1];
    const float s23 = acc[2] + acc[3];
    const float s45 = acc[4] + acc[5];
    const float s67 = acc[6] + acc[7];
    return (s01 + s23) + (s45 + s67);
}

double dot_f64_avx2(const double* x, const double* y, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        vacc = _mm256_add_pd(vacc, _mm256_mul_pd(vx, vy));
    }
    alignas(32) double acc[4];
    _mm256_store_pd(acc, vacc);
    for (; i < n; ++i) {
        acc[i & 3] = acc[i & 3] + x[i] * y[i];
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void gram_update_avx2(double* g, const float* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double ai = static_cast<double>(a[i]);
        const __m256d vai = _mm256_set1_pd(ai);
        double* row = g + i * n;
        std::size_t jj = i;
        for (; jj + 4 <= n; jj += 4) {
            const __m256d aj = _mm256_cvtps_pd(_mm_loadu_ps(a + jj));
            const __m256d cur = _mm256_loadu_pd(row + jj);
            _mm256_storeu_pd(row + jj,
                             _mm256_add_pd(cur, _mm256_mul_pd(vai, aj)));
        }
        for (; jj < n; ++jj) {
            row[jj] = row[jj] + ai * static_cast<double>(a[jj]);
        }
    }
}

void scaled_accum_avx2(double* acc, const float* a, double t, std::size_t n) {
    const __m256d vt = _mm256_set1_pd(t);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_cvtps_pd(_mm_loadu_ps(a + i));
        const __m256d cur = _mm256_loadu_pd(acc + i);
        _mm256_storeu_pd(acc + i, _mm256_add_pd(cur, _mm256_mul_pd(va, vt)));
    }
    for (; i < n; ++i) {
        acc[i] = acc[i] + static_cast<double>(a[i]) * t;
    }
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops = {
        "avx2",
        lif_rate_batch_avx2,
        lif_step_batch_avx2,
        axpy_f32_avx2,
        dot_f32_avx2,
        dot_f64_avx2,
        gram_update_avx2,
        scaled_accum_avx2,
    };
    return ops;
}

}  // namespace nefmul::kernels
