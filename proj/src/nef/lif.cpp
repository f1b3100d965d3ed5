#include "nefmul/nef/lif.hpp"

#include <stdexcept>

#include "nefmul/kernels/scalar_ref.hpp"

namespace nefmul {

void LifParameters::validate() const {
    if (!(tau_rc > 0.0f)) {
        throw std::invalid_argument("LifParameters: tau_rc must be > 0");
    }
    if (!(tau_ref >= 0.0f)) {
        throw std::invalid_argument("LifParameters: tau_ref must be >= 0");
    }
    if (!(dt > 0.0f)) {
        throw std::invalid_argument("LifParameters: dt must be > 0");
    }
    if (!(dt < tau_rc)) {
        throw std::invalid_argument("LifParameters: dt must be < tau_rc");
    }
    if (!(v_threshold > 0.0f)) {
        throw std::invalid_argument("LifParameters: v_threshold must be > 0");
    }
}

float lif_rate(float j, const LifParameters& params) {
    return kernels::lif_rate_scalar(j, params.tau_rc, params.tau_ref);
}

}  // namespace nefmul
