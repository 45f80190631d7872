#pragma once

// Brute-force reference for every analytic phase formula: the spin (x)
// oscillator dynamics propagated in a truncated Fock space as a time-ordered
// product of short-time exponentials, with the Pancharatnam and dynamic phases
// accumulated along the way.
//
// Joint-space ordering is spin-major: index = spin * (n_max + 1) + n.
//
// Because every Hamiltonian here is (oscillator operator) (x) (spin
// conditioner), the evolution splits into one oscillator problem per
// conditioner eigenvalue beta, driven by beta * f(t). Each distinct beta is
// propagated once; the joint evolution is reassembled from the eigenprojectors.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "geophase/drives.hpp"
#include "geophase/linalg.hpp"
#include "geophase/phasespace.hpp"

namespace geophase {

class FockSpace {
public:
    explicit FockSpace(int n_max);
    int n_max() const noexcept { return n_max_; }
    int dimension() const noexcept { return n_max_ + 1; }

private:
    int n_max_;
};

inline constexpr int kDefaultNMax = 64;
inline constexpr int kDefaultOracleSteps = 20000;
inline constexpr double kLeakageThreshold = 1e-10;
inline constexpr double kMinOverlap = 1e-6;

struct OracleSettings {
    int n_max = kDefaultNMax;
    int steps = kDefaultOracleSteps;
    /// Raise n_max so that max |beta alpha(t)|^2 <= n_max / 4.
    bool auto_escalate = true;
};

/// Truncation to use for `drive` over [0, tau] under `settings`.
FockSpace choose_fock_space(const DriveProfile& drive, double tau, const OracleSettings& settings);

/// H(t) = -i [f(t) a^dagger - f^*(t) a] (x) C on the joint space.
MatrixXc build_hamiltonian(const DriveProfile& drive, double t, const FockSpace& space);

struct PropagateOptions {
    /// Number of Fock columns |0>, ..., |columns - 1> propagated per sector;
    /// -1 propagates the full block.
    int columns = -1;
    /// Oscillator state |n0> the phases are tracked from.
    int initial_fock = 0;
    /// Population allowed in |n_max> along the tracked state before the run is
    /// rejected as under-truncated.
    double leakage_threshold = kLeakageThreshold;
};

/// One oscillator problem with drive beta * f(t).
struct SectorPropagation {
    double beta = 0.0;
    MatrixXc evolution;                        // dimension x columns
    std::vector<std::complex<double>> overlap;  // <n0| U(t_k) |n0>, k = 0..steps
    std::vector<double> dynamic;               // -integral_0^{t_k} <psi|H|psi>
    double leakage = 0.0;                      // max population in |n_max>
    double unitarity_defect = 0.0;             // ||U^dagger U - 1|| over the propagated columns
};

struct FockPropagation {
    FockSpace space{kDefaultNMax};
    int steps = 0;
    double tau = 0.0;
    int initial_fock = 0;
    std::vector<double> times;  // t_k = k tau / steps
    std::vector<SectorPropagation> sectors;
    std::array<double, 4> eigenvalues{};      // conditioner eigenvalue per eigenvector
    std::array<std::size_t, 4> sector_of{};   // eigenvector -> sector index
    Matrix4c eigenvectors = Matrix4c::Identity();
    double leakage = 0.0;
    double unitarity_defect = 0.0;

    /// U on the joint 4 (n_max+1) space. Requires full-block propagation.
    MatrixXc joint_evolution() const;

    /// <s, n0| U(t_k) |s, n0> for computational basis state s.
    std::complex<double> overlap(int spin_state, std::size_t step) const;

    /// Dynamic phase of |s, n0> accumulated up to t_k.
    double dynamic_phase(int spin_state, std::size_t step) const;
};

/// Time-ordered product of exp(-i H(t_mid) dt) over `steps` equal steps of
/// [0, tau], each exponential evaluated by a series on the tridiagonal
/// oscillator generator. Throws TruncationError if the tracked state leaks
/// into |n_max> beyond the threshold.
FockPropagation propagate(const DriveProfile& drive, double tau, const FockSpace& space, int steps,
                          const PropagateOptions& options = {});

/// exp(alpha a^dagger - alpha^* a) on the truncated space.
struct DisplacementMatrix {
    MatrixXc matrix;
    bool within_validity = true;  // |alpha|^2 <= n_max / 4
    std::string warning;
};
DisplacementMatrix displacement_matrix(PhasePoint alpha, const FockSpace& space);

/// arg <s, n0| Psi(t)> at the end of the run (or at `step`), unwrapped by
/// accumulating step-to-step increments. Throws UndefinedPhaseError when the
/// overlap modulus is below 1e-6.
double extract_total_phase(const FockPropagation& prop, int spin_state);
double extract_total_phase(const FockPropagation& prop, int spin_state, std::size_t step);

/// Unwrapped total-phase series for every step.
std::vector<double> total_phase_series(const FockPropagation& prop, int spin_state);

struct MagnusCheck {
    double deviation = 0.0;  // Frobenius norm over the n <= n_max/2 block
    double phase = 0.0;      // analytic Phi(tau)
    PhasePoint alpha;        // analytic alpha(tau)
    double leakage = 0.0;
    int block_size = 0;
};

/// ||U_oracle - e^{i Phi(tau)} D(alpha(tau))|| on the low-occupation block for a
/// constant detuned drive (one exponential segment), in the beta = 1 sector.
MagnusCheck verify_magnus_form(const DriveProfile& drive, double tau, const FockSpace& space, int steps);

/// Per spin basis state oracle phases of a diagonal-conditioner run.
struct OraclePhases {
    std::array<double, 4> total{};
    std::array<double, 4> dynamic{};
    std::array<double, 4> geometric{};  // total - dynamic
};
OraclePhases oracle_phases(const FockPropagation& prop);

}  // namespace geophase
