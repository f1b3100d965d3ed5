#pragma once

// Scalar reference arithmetic shared by every kernel backend.
//
// The SIMD backends are required to reproduce these functions bit-for-bit,
// lane by lane. That constrains the implementations here:
//   * plain mul/add only, never std::fma (the vector code uses separate
//     multiply and add instructions),
//   * fixed evaluation order, including the 8-bank reduction tree for dots,
//   * branchless-representable selects (every ?: below maps onto a blend).
// The project is compiled with -ffp-contract=off so the compiler cannot
// re-fuse any of this.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace nefmul::kernels {

// log(1+r)/r on [1/sqrt(2)-1, sqrt(2)-1], Chebyshev fit, max abs error of the
// reconstructed log ~5e-8 in float evaluation.
inline constexpr float kLogC0 = 1.0f;
inline constexpr float kLogC1 = -0.4999999f;
inline constexpr float kLogC2 = 0.33333334f;
inline constexpr float kLogC3 = -0.2500127f;
inline constexpr float kLogC4 = 0.20001157f;
inline constexpr float kLogC5 = -0.16616514f;
inline constexpr float kLogC6 = 0.14202577f;
inline constexpr float kLogC7 = -0.13199031f;
inline constexpr float kLogC8 = 0.12748958f;
inline constexpr float kLogC9 = -0.07539981f;

inline constexpr float kLn2Hi = 6.9313812256e-01f;  // 0x3f317180
inline constexpr float kLn2Lo = 9.0580006145e-06f;  // 0x3717f7d1
inline constexpr float kSqrt2 = 1.41421356237f;
inline constexpr float kMinNormal = std::numeric_limits<float>::min();

// Natural log for x > 0. Nonpositive and subnormal inputs are clamped to the
// smallest normal float (callers mask those lanes out anyway).
inline float fast_log(float x) {
    x = x < kMinNormal ? kMinNormal : x;
    const uint32_t bits = std::bit_cast<uint32_t>(x);
    int32_t e = static_cast<int32_t>(bits >> 23) - 127;
    float m = std::bit_cast<float>((bits & 0x007FFFFFu) | 0x3F800000u);
    // shift the significand into [sqrt(2)/2, sqrt(2)) so r stays small
    if (m > kSqrt2) {
        m = m * 0.5f;
        e += 1;
    }
    const float r = m - 1.0f;
    float p = kLogC9;
    p = p * r + kLogC8;
    p = p * r + kLogC7;
    p = p * r + kLogC6;
    p = p * r + kLogC5;
    p = p * r + kLogC4;
    p = p * r + kLogC3;
    p = p * r + kLogC2;
    p = p * r + kLogC1;
    p = p * r + kLogC0;
    const float lnm = r * p;
    const float ef = static_cast<float>(e);
    const float t = lnm + ef * kLn2Lo;
    return ef * kLn2Hi + t;
}

// Steady-state LIF firing rate for drive j (threshold normalized to 1):
//   rate = 1 / (tau_ref - tau_rc * log(1 - 1/j))   for j > 1, else 0.
inline float lif_rate_scalar(float j, float tau_rc, float tau_ref) {
    const float u = 1.0f - 1.0f / j;
    const float denom = tau_ref - tau_rc * fast_log(u);
    const float rate = 1.0f / denom;
    return j > 1.0f ? rate : 0.0f;
}

struct LifStepConsts {
    float dt;          // step length, seconds
    float k_full;      // 1 - exp(-dt/tau_rc), exact decay over a full step
    float inv_tau_rc;  // partial windows after refractory use forward Euler
    float tau_ref;
    float threshold;
};

// One integration step for one neuron. Spike times are resolved inside the
// step by linear interpolation and charged against the refractory period, so
// the long-run spike rate tracks lif_rate_scalar to well under 1%.
inline void lif_step_scalar(float& v, float& refr, float j, float& spiked,
                            const LifStepConsts& c) {
    const float r = refr;
    const float rc = r < 0.0f ? 0.0f : r;
    const float held = rc > c.dt ? c.dt : rc;
    const float delta = c.dt - held;
    const float rn = r - c.dt;
    float refr_next = rn < 0.0f ? 0.0f : rn;
    const float kd = delta == c.dt ? c.k_full : delta * c.inv_tau_rc;
    const float v0 = v;
    float v1 = v0 + kd * (j - v0);
    v1 = v1 < 0.0f ? 0.0f : v1;
    const bool sp = v1 >= c.threshold;
    if (sp) {
        const float f = (c.threshold - v0) / (v1 - v0);
        const float t_after = delta * (1.0f - f);
        refr_next = c.tau_ref - t_after;
        v1 = 0.0f;
    }
    v = v1;
    refr = refr_next;
    spiked = sp ? 1.0f : 0.0f;
}

}  // namespace nefmul::kernels
