#pragma once

#include <array>
#include <optional>

#include "geophase/drives.hpp"
#include "geophase/linalg.hpp"
#include "geophase/phasespace.hpp"
#include "geophase/spin.hpp"

namespace geophase {

/// Tolerance on ||U^dagger U - 1|| accepted for any gate.
inline constexpr double kUnitarityTolerance = 1e-10;

/// Wraps an angle to (-pi, pi].
double wrap_phase(double angle);

/// A 4x4 unitary in the (|dd>, |du>, |ud>, |uu>) basis. Diagonal gates built
/// from phase data keep those phases (wrapped) next to the matrix, so callers
/// never have to re-extract angles from unit-modulus entries.
class TwoQubitGate {
public:
    explicit TwoQubitGate(const Matrix4c& matrix, std::optional<std::array<double, 4>> phases = std::nullopt);

    static TwoQubitGate identity();
    static TwoQubitGate diagonal(const std::array<double, 4>& phases);

    const Matrix4c& matrix() const noexcept { return matrix_; }
    const std::optional<std::array<double, 4>>& phases() const noexcept { return phases_; }
    bool is_diagonal(double tolerance = 1e-12) const;

    /// Stored phases, or the arguments of the diagonal entries; throws for
    /// non-diagonal gates.
    std::array<double, 4> diagonal_phases() const;

private:
    Matrix4c matrix_;
    std::optional<std::array<double, 4>> phases_;
};

/// diag(1, e^{i gamma}, e^{i gamma}, 1).
TwoQubitGate phase_gate(double gamma);

/// diag(1, 1, 1, -1).
TwoQubitGate controlled_z();

struct CollectiveGate {
    TwoQubitGate gate = TwoQubitGate::identity();
    double gamma0 = 0.0;
    double closure_residual = 0.0;
    /// Per basis state: geometric -beta^2 gamma0, dynamic 2 beta^2 gamma0.
    std::array<PhaseDecomposition, 4> per_state{};
};

/// Gate of a diagonal conditioner for a given gamma0: phases beta_jl^2 gamma0.
CollectiveGate collective_gate_from_gamma0(const SpinConditioner& conditioner, double gamma0);

/// Gate produced by `drive` over [0, tau] with a diagonal conditioner. The
/// drive's own conditioner is ignored. Throws NotClosedError when the path
/// does not return within closure_tolerance.
CollectiveGate collective_gate(const DriveProfile& drive, double tau, const SpinConditioner& conditioner,
                               int samples = kDefaultSamplesPerPeriod, double closure_tolerance = 1e-9);

/// exp(-i gamma Jy^2) with Jy = sigma_y (x) 1 + 1 (x) sigma_y, built from the
/// eigendecomposition of Jy^2 (spectrum {0, 4}).
TwoQubitGate jy_squared_gate(double gamma);

/// For diagonal gates: gamma_dd + gamma_uu - gamma_du - gamma_ud differs from
/// 0 mod 2 pi by more than `tolerance`. Throws UnsupportedError otherwise.
bool is_nontrivial(const TwoQubitGate& gate, double tolerance = 1e-9);

/// (R (x) R) gate with R = diag(1, e^{i theta}) acting on |d>, |u>.
TwoQubitGate apply_local_phase_correction(const TwoQubitGate& gate, double theta);

/// |tr(U^dagger V)| / 4; insensitive to global phase.
double gate_fidelity(const TwoQubitGate& u, const TwoQubitGate& v);

/// Same for raw matrices; throws ValidationError if either is not unitary.
double gate_fidelity(const Matrix4c& u, const Matrix4c& v);

}  // namespace geophase
