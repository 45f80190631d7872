#pragma once

// Data-parallel inner loops used by the phase functionals and the Fock-space
// propagator. Every kernel has a portable scalar reference implementation and,
// on x86-64, an AVX2+FMA variant. The variant is chosen once at runtime from
// CPUID; tests pin each variant explicitly and check them against each other.

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace geophase::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Best variant supported by this CPU (and this build).
Isa detected_isa();

/// Variant currently used by the dispatching entry points. Defaults to
/// detected_isa(); GEOPHASE_FORCE_SCALAR=1 in the environment forces scalar.
Isa active_isa();

/// Override the active variant. Requesting an unsupported ISA throws.
void set_active_isa(Isa isa);

/// RAII override of the active variant, restoring the previous one on exit.
class ScopedIsa {
public:
    explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
    ~ScopedIsa() { set_active_isa(previous_); }
    ScopedIsa(const ScopedIsa&) = delete;
    ScopedIsa& operator=(const ScopedIsa&) = delete;

private:
    Isa previous_;
};

/// Complex block in split (structure-of-arrays) layout: element (row, col)
/// lives at re[row * stride + col] and im[row * stride + col]. The stride is
/// a multiple of 4 and the padding columns are kept at zero.
class ComplexBlock {
public:
    ComplexBlock() = default;
    ComplexBlock(int rows, int cols);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int stride() const noexcept { return stride_; }

    double* re() noexcept { return re_.data(); }
    double* im() noexcept { return im_.data(); }
    const double* re() const noexcept { return re_.data(); }
    const double* im() const noexcept { return im_.data(); }

    std::complex<double> at(int row, int col) const {
        const auto k = static_cast<std::size_t>(row * stride_ + col);
        return {re_[k], im_[k]};
    }
    void set(int row, int col, std::complex<double> v) {
        const auto k = static_cast<std::size_t>(row * stride_ + col);
        re_[k] = v.real();
        im_[k] = v.imag();
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    int stride_ = 0;
    std::vector<double> re_;
    std::vector<double> im_;
};

/// Scratch buffers for displace_step, sized for one block shape.
struct DisplaceWorkspace {
    ComplexBlock term;
    ComplexBlock next;
    std::vector<double> sqrt_n;  // sqrt(n) for n = 0..rows
};

/// block <- exp(-(g a^dagger - conj(g) a)) block on the truncated oscillator
/// space of dimension block.rows(). The exponential is summed as a Taylor
/// series until the largest entry of the next term falls below 1e-18 relative
/// to the block. Returns the number of series terms used.
int displace_step(ComplexBlock& block, std::complex<double> g, DisplaceWorkspace& ws);

/// sum_k Im(conj(z_k) z_{k+1}) for z_k = x_k + i y_k; twice the signed
/// (counterclockwise-positive) area of the polygon through the samples when
/// the path is closed.
double shoelace_sum(std::span<const double> x, std::span<const double> y);

/// Trapezoidal integral of samples v over the (possibly nonuniform) grid t.
double trapezoid(std::span<const double> t, std::span<const double> v);

// Variant entry points, exposed for equivalence testing.
namespace scalar {
int displace_step(ComplexBlock& block, std::complex<double> g, DisplaceWorkspace& ws);
double shoelace_sum(std::span<const double> x, std::span<const double> y);
double trapezoid(std::span<const double> t, std::span<const double> v);
}  // namespace scalar

#if defined(GEOPHASE_HAVE_AVX2)
namespace avx2 {
int displace_step(ComplexBlock& block, std::complex<double> g, DisplaceWorkspace& ws);
double shoelace_sum(std::span<const double> x, std::span<const double> y);
double trapezoid(std::span<const double> t, std::span<const double> v);
}  // namespace avx2
#endif

}  // namespace geophase::kernels
