#pragma once

// Coherent-state paths alpha(t) in oscillator phase space and the phase
// functionals evaluated along them.
//
// Orientation convention: the geometric phase is the line integral
//     (i/2) * integral (alpha^* d alpha - alpha d alpha^*)  =  -integral Im(alpha^* d alpha)
// which equals -2 * (signed enclosed area), with area counted positive for a
// counterclockwise loop in the (Re alpha, Im alpha) plane. A constant detuned
// drive with delta > 0 traverses its circle clockwise, so its geometric phase
// is positive: +pi/2 at |Omega_D / delta| = 1/2.
//
// Phases are never wrapped here; they are accumulated values in radians.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace geophase {

/// Samples per drive period used when a caller does not choose a grid. The
/// polygon through N samples of a circle falls short of its area by a relative
/// (2 pi / N)^2 / 6, about 1e-10 at this size.
inline constexpr int kDefaultSamplesPerPeriod = 1 << 18;

/// eta is only reported when |geometric| exceeds this many radians.
inline constexpr double kEtaThreshold = 1e-9;

/// Tolerance used when classifying eta as 0 or -1.
inline constexpr double kEtaClassTolerance = 1e-6;

/// A complex coherent-state amplitude alpha.
struct PhasePoint {
    double re = 0.0;
    double im = 0.0;

    PhasePoint() = default;
    PhasePoint(double re_, double im_);
    explicit PhasePoint(std::complex<double> z) : PhasePoint(z.real(), z.imag()) {}

    std::complex<double> value() const noexcept { return {re, im}; }
    friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Time-stamped samples of alpha(t). Times are strictly increasing and there
/// are at least two samples.
class Trajectory {
public:
    Trajectory(std::vector<double> times, const std::vector<PhasePoint>& points,
               double closure_tolerance = 1e-9);
    Trajectory(std::vector<double> times, std::vector<double> re, std::vector<double> im,
               double closure_tolerance = 1e-9);

    std::size_t size() const noexcept { return times_.size(); }
    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> re() const noexcept { return re_; }
    std::span<const double> im() const noexcept { return im_; }
    PhasePoint point(std::size_t k) const { return {re_[k], im_[k]}; }
    std::vector<PhasePoint> points() const;

    double closure_tolerance() const noexcept { return closure_tolerance_; }
    double closure_residual() const;
    bool is_closed() const { return closure_residual() <= closure_tolerance_; }

private:
    void validate() const;

    std::vector<double> times_;
    std::vector<double> re_;
    std::vector<double> im_;
    double closure_tolerance_;
};

enum class PhaseClass {
    conventional_geometric,  // no dynamic contribution
    trivial,                 // dynamic cancels geometric; total vanishes
    unconventional,          // dynamic = eta * geometric with eta not in {0, -1}
    undefined,               // geometric phase too small for eta to mean anything
};

std::string_view phase_class_name(PhaseClass c);

struct PhaseDecomposition {
    double total = 0.0;
    double geometric = 0.0;
    double dynamic = 0.0;
    std::optional<double> eta;
    PhaseClass classification = PhaseClass::undefined;
};

/// Energy expectation H(alpha^*, alpha; t) in a coherent state.
using EnergyFunction = std::function<double(PhasePoint, double)>;

/// -integral Im(alpha^* d alpha) by the trapezoidal line rule over the samples.
/// Open paths are integrated the same way.
double geometric_phase(const Trajectory& traj);

/// -integral h(alpha(t), t) dt by the trapezoidal rule on the trajectory grid.
double dynamic_phase(const Trajectory& traj, const EnergyFunction& energy);

/// Noncyclic geometric phase defined as total minus dynamic.
inline double noncyclic_geometric_phase(double total, double dynamic) { return total - dynamic; }

/// Builds the decomposition with total = geometric + dynamic and classifies it.
PhaseDecomposition decompose(double geometric, double dynamic);

/// alpha(t) = i (Omega_D/delta) (e^{-i delta t} - 1) e^{i phi_L}, the path of a
/// constant detuned drive starting from the vacuum.
Trajectory analytic_trajectory(double omega_over_delta, double delta, double phi_l,
                               std::span<const double> t_grid);

/// Total (Magnus) phase (Omega_D/delta)^2 [sin(delta t) - delta t].
double analytic_total_phase(double omega_over_delta, double delta, double t);

/// Closed-form dynamic phase -integral_0^t 2 (Omega_D^2/delta)(1 - cos delta t') dt'.
double analytic_dynamic_phase(double omega_over_delta, double delta, double t);

/// Coherent-state energy 2 (Omega_D^2/delta)(1 - cos delta t) along the constant-drive path.
double constant_drive_energy(double omega_over_delta, double delta, double t);

/// `samples` equally spaced times covering [t0, t1] inclusive.
std::vector<double> uniform_grid(double t0, double t1, int samples);

}  // namespace geophase
