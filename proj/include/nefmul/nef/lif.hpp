#pragma once

#include <cstdint>

namespace nefmul {

struct LifParameters {
    float tau_rc = 0.02f;       // membrane time constant, seconds
    float tau_ref = 0.002f;     // refractory period, seconds
    float v_threshold = 1.0f;   // spike threshold (drive is normalized to it)
    float dt = 0.001f;          // integration step, seconds

    // Throws std::invalid_argument unless
    // tau_rc > 0, tau_ref >= 0, dt > 0, dt < tau_rc, v_threshold > 0.
    void validate() const;
};

// Steady-state firing rate for drive j (dimensionless, threshold at 1):
// 0 for j <= 1, else 1 / (tau_ref - tau_rc * ln(1 - 1/j)).
float lif_rate(float j, const LifParameters& params);

}  // namespace nefmul
