#include <atomic>
#include <cmath>
#include <cstdlib>

#include "geophase/error.hpp"
#include "geophase/kernels.hpp"

namespace geophase::kernels {

ComplexBlock::ComplexBlock(int rows, int cols)
    : rows_(rows),
      cols_(cols),
      stride_((cols + 3) / 4 * 4),
      re_(static_cast<std::size_t>(rows) * static_cast<std::size_t>((cols + 3) / 4 * 4), 0.0),
      im_(re_.size(), 0.0) {}

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

Isa detected_isa() {
#if defined(GEOPHASE_HAVE_AVX2)
    static const bool has_avx2 = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    }();
    if (has_avx2) return Isa::avx2;
#endif
    return Isa::scalar;
}

namespace {

Isa initial_isa() {
    const char* force = std::getenv("GEOPHASE_FORCE_SCALAR");
    if (force != nullptr && force[0] != '\0' && force[0] != '0') return Isa::scalar;
    return detected_isa();
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

// Largest |g| * ||a^dagger - a|| handed to one Taylor evaluation.
constexpr double kMaxStepNorm = 0.5;

}  // namespace

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (isa == Isa::avx2 && detected_isa() != Isa::avx2) {
        throw UnsupportedError("AVX2 kernels are not available on this CPU or build");
    }
    active().store(isa, std::memory_order_relaxed);
}

int displace_step(ComplexBlock& block, std::complex<double> g, DisplaceWorkspace& ws) {
    const double bound = std::abs(g) * 2.0 * std::sqrt(static_cast<double>(block.rows()));
    const int pieces = bound > kMaxStepNorm ? static_cast<int>(std::ceil(bound / kMaxStepNorm)) : 1;
    const std::complex<double> piece = g / static_cast<double>(pieces);
    int terms = 0;
    for (int i = 0; i < pieces; ++i) {
#if defined(GEOPHASE_HAVE_AVX2)
        if (active_isa() == Isa::avx2) {
            terms += avx2::displace_step(block, piece, ws);
            continue;
        }
#endif
        terms += scalar::displace_step(block, piece, ws);
    }
    return terms;
}

double shoelace_sum(std::span<const double> x, std::span<const double> y) {
#if defined(GEOPHASE_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::shoelace_sum(x, y);
#endif
    return scalar::shoelace_sum(x, y);
}

double trapezoid(std::span<const double> t, std::span<const double> v) {
#if defined(GEOPHASE_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::trapezoid(t, v);
#endif
    return scalar::trapezoid(t, v);
}

}  // namespace geophase::kernels
