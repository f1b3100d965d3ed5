#include "nefmul/kernels/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace nefmul::kernels {

bool avx2_available() {
#if defined(NEFMUL_BUILD_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Ops& select(std::string_view name) {
    if (name == "scalar") {
        return scalar_ops();
    }
    if (name == "avx2") {
#if defined(NEFMUL_BUILD_AVX2)
        if (avx2_available()) {
            return avx2_ops();
        }
        throw std::runtime_error("avx2 kernels requested but CPU lacks AVX2");
#else
        throw std::runtime_error("avx2 kernels not compiled in");
#endif
    }
    if (name == "auto") {
#if defined(NEFMUL_BUILD_AVX2)
        if (avx2_available()) {
            return avx2_ops();
        }
#endif
        return scalar_ops();
    }
    throw std::invalid_argument("unknown kernel backend: " +
                                std::string(name));
}

namespace {
const Ops* forced_backend = nullptr;
}

void force_backend(std::string_view name) { forced_backend = &select(name); }

const Ops& active() {
    if (forced_backend != nullptr) {
        return *forced_backend;
    }
    static const Ops& ops = []() -> const Ops& {
        const char* env = std::getenv("NEFMUL_KERNEL");
        return select(env != nullptr ? std::string_view(env) : "auto");
    }();
    return ops;
}

}  // namespace nefmul::kernels
