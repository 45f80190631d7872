#pragma once

// Oscillator drive profiles f(t) entering H(t) = -i [f(t) a^dagger - f^*(t) a] (x) C,
// with C a spin conditioner. The induced coherent-state path is
// alpha(t) = -integral_0^t f(t') dt'.
//
// Segments use absolute time: a segment active on [t_start, t_start + duration)
// evaluates f at the absolute time t, not at t - t_start.

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "geophase/phasespace.hpp"
#include "geophase/spin.hpp"

namespace geophase {

/// Constant-amplitude detuned drive: Rabi-like strength Omega_D, detuning
/// delta and laser phase phi_L, all with hbar = 1.
struct ConstantDriveParams {
    double omega_d = 0.0;
    double delta = 1.0;
    double phi_l = 0.0;

    ConstantDriveParams() = default;
    ConstantDriveParams(double omega_d_, double delta_, double phi_l_);
    static ConstantDriveParams from_ratio(double omega_over_delta, double delta, double phi_l);

    double omega_over_delta() const { return omega_d / delta; }
    /// Loop period 2 pi / |delta|.
    double period() const;
};

struct DriveSegment {
    enum class Kind { exponential, custom };

    Kind kind = Kind::exponential;
    double duration = 0.0;
    std::complex<double> amplitude;  // exponential: f(t) = amplitude * exp(-i frequency t)
    double frequency = 0.0;
    std::function<std::complex<double>(double)> custom;  // custom: f(t)

    static DriveSegment constant(double duration, std::complex<double> amplitude);
    static DriveSegment exponential(double duration, std::complex<double> amplitude, double frequency);
    static DriveSegment from_function(double duration, std::function<std::complex<double>(double)> f);

    std::complex<double> value(double t) const;
};

class DriveProfile {
public:
    DriveProfile(std::vector<DriveSegment> segments, SpinConditioner conditioner);

    /// f(t) = -Omega_D e^{i phi_L} e^{-i delta t} over [0, duration]. With the
    /// odd-parity projector this reproduces the stretch-mode Hamiltonian
    /// i Omega_D (a^dagger e^{-i delta t + i phi_L} - h.c.) on |du>, |ud>.
    static DriveProfile constant(const ConstantDriveParams& params, double duration,
                                 SpinConditioner conditioner = SpinConditioner::odd_parity_projector());

    static DriveProfile zero(double duration,
                             SpinConditioner conditioner = SpinConditioner::odd_parity_projector());

    const std::vector<DriveSegment>& segments() const noexcept { return segments_; }
    const SpinConditioner& conditioner() const noexcept { return conditioner_; }
    double total_duration() const noexcept { return total_duration_; }
    double segment_start(std::size_t index) const { return starts_[index]; }

    /// Index of the segment active at t (the last one for t = total_duration).
    std::size_t segment_at(double t) const;

    std::complex<double> f(double t) const;

    /// True when every segment has a closed-form antiderivative.
    bool is_closed_form() const;

    DriveProfile with_conditioner(SpinConditioner conditioner) const;

private:
    std::vector<DriveSegment> segments_;
    std::vector<double> starts_;
    SpinConditioner conditioner_;
    double total_duration_ = 0.0;
};

/// alpha(t) = -integral_0^t f. Exact for exponential/constant segments; custom
/// segments use composite 8-point Gauss-Legendre quadrature on 64 panels.
PhasePoint alpha_of_t(const DriveProfile& drive, double t);

/// |alpha(tau) - alpha(0)|.
double closure_residual(const DriveProfile& drive, double tau);

/// Phase functional gamma0(tau) = -integral_0^tau Im(alpha^* f) dt, so that a
/// spin sector with conditioner eigenvalue beta collects total phase
/// beta^2 gamma0, dynamic phase 2 beta^2 gamma0 and geometric phase
/// -beta^2 gamma0. Evaluated segment by segment with the trapezoidal rule;
/// `samples` is the total sample budget over [0, tau].
double gamma0(const DriveProfile& drive, double tau, int samples);

/// Inverse design: the constant drive whose one-period total phase equals
/// target_phase. Only negative targets are reachable, and |target| is capped at
/// kMaxDesignPhase so the loop stays inside the default Fock truncation.
ConstantDriveParams design_constant_drive(double target_phase, double delta, double phi_l);

inline constexpr double kMaxDesignPhase = 8.0 * kPi;

/// Four piecewise-constant segments, back to back from t = 0.
DriveProfile four_pulse_sequence(const std::array<std::complex<double>, 4>& amplitudes,
                                 const std::array<double, 4>& durations,
                                 SpinConditioner conditioner = SpinConditioner::odd_parity_projector());

struct LoopCheck {
    double residual = 0.0;
    bool closed = false;
    double gamma0 = 0.0;
};

LoopCheck check_loop(const DriveProfile& drive, double tau, int samples, double tolerance = 1e-9);

/// One sub-grid per segment overlapping [0, tau], endpoints included, with the
/// sample budget split in proportion to duration (at least 2 per segment).
struct SegmentGrid {
    std::size_t segment = 0;
    std::vector<double> times;
};
std::vector<SegmentGrid> segment_grids(const DriveProfile& drive, double tau, int samples);

/// Merged grid over [0, tau] containing every segment boundary once.
std::vector<double> drive_time_grid(const DriveProfile& drive, double tau, int samples);

/// The coherent path beta * alpha(t) of the spin sector with conditioner
/// eigenvalue beta, sampled on `times`.
Trajectory sample_trajectory(const DriveProfile& drive, std::span<const double> times, double beta = 1.0);

/// Energy <beta alpha| H_beta(t) |beta alpha> = 2 beta Im(f(t) conj(point)) for
/// the sector with eigenvalue beta. `segment` pins which segment's formula is
/// used, so boundary samples take one-sided limits.
EnergyFunction coherent_energy(const DriveProfile& drive, double beta, std::size_t segment);

/// Line-integral geometric phase and quadrature dynamic phase of the sector with
/// eigenvalue beta over [0, tau].
PhaseDecomposition drive_phases(const DriveProfile& drive, double tau, int samples, double beta = 1.0);

}  // namespace geophase
