#include "geophase/phasespace.hpp"

#include <cmath>
#include <string>

#include "geophase/error.hpp"
#include "geophase/kernels.hpp"

namespace geophase {

PhasePoint::PhasePoint(double re_, double im_) : re(re_), im(im_) {
    if (!std::isfinite(re) || !std::isfinite(im)) {
        throw ValidationError("phase-space point must have finite components");
    }
}

Trajectory::Trajectory(std::vector<double> times, const std::vector<PhasePoint>& points,
                       double closure_tolerance)
    : times_(std::move(times)), closure_tolerance_(closure_tolerance) {
    if (points.size() != times_.size()) {
        throw InvalidTrajectoryError("trajectory has " + std::to_string(times_.size()) +
                                     " times but " + std::to_string(points.size()) + " points");
    }
    re_.reserve(points.size());
    im_.reserve(points.size());
    for (const auto& p : points) {
        re_.push_back(p.re);
        im_.push_back(p.im);
    }
    validate();
}

Trajectory::Trajectory(std::vector<double> times, std::vector<double> re, std::vector<double> im,
                       double closure_tolerance)
    : times_(std::move(times)), re_(std::move(re)), im_(std::move(im)),
      closure_tolerance_(closure_tolerance) {
    if (re_.size() != times_.size() || im_.size() != times_.size()) {
        throw InvalidTrajectoryError("trajectory components have mismatched lengths");
    }
    validate();
}

void Trajectory::validate() const {
    if (times_.size() < 2) {
        throw InvalidTrajectoryError("trajectory needs at least 2 samples, got " +
                                     std::to_string(times_.size()));
    }
    if (!(closure_tolerance_ >= 0.0)) {
        throw InvalidTrajectoryError("closure tolerance must be nonnegative");
    }
    for (std::size_t k = 0; k < times_.size(); ++k) {
        if (!std::isfinite(times_[k]) || !std::isfinite(re_[k]) || !std::isfinite(im_[k])) {
            throw InvalidTrajectoryError("trajectory sample " + std::to_string(k) + " is not finite");
        }
        if (k > 0 && !(times_[k] > times_[k - 1])) {
            throw InvalidTrajectoryError("trajectory times must be strictly increasing (index " +
                                         std::to_string(k) + ")");
        }
    }
}

std::vector<PhasePoint> Trajectory::points() const {
    std::vector<PhasePoint> out;
    out.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) out.push_back(point(k));
    return out;
}

double Trajectory::closure_residual() const {
    return std::hypot(re_.back() - re_.front(), im_.back() - im_.front());
}

std::string_view phase_class_name(PhaseClass c) {
    switch (c) {
        case PhaseClass::conventional_geometric: return "conventional-geometric";
        case PhaseClass::trivial: return "trivial";
        case PhaseClass::unconventional: return "unconventional";
        case PhaseClass::undefined: return "undefined";
    }
    return "undefined";
}

double geometric_phase(const Trajectory& traj) {
    return -kernels::shoelace_sum(traj.re(), traj.im());
}

double dynamic_phase(const Trajectory& traj, const EnergyFunction& energy) {
    std::vector<double> h(traj.size());
    const auto t = traj.times();
    for (std::size_t k = 0; k < traj.size(); ++k) h[k] = energy(traj.point(k), t[k]);
    return -kernels::trapezoid(t, h);
}

PhaseDecomposition decompose(double geometric, double dynamic) {
    PhaseDecomposition d;
    d.geometric = geometric;
    d.dynamic = dynamic;
    d.total = geometric + dynamic;
    if (std::abs(geometric) <= kEtaThreshold) {
        d.classification = PhaseClass::undefined;
        return d;
    }
    const double eta = dynamic / geometric;
    d.eta = eta;
    if (std::abs(eta) <= kEtaClassTolerance) {
        d.classification = PhaseClass::conventional_geometric;
    } else if (std::abs(eta + 1.0) <= kEtaClassTolerance) {
        d.classification = PhaseClass::trivial;
    } else {
        d.classification = PhaseClass::unconventional;
    }
    return d;
}

namespace {

void require_detuning(double delta) {
    if (delta == 0.0 || !std::isfinite(delta)) {
        throw SingularDetuningError("detuning delta must be finite and nonzero");
    }
}

}  // namespace

Trajectory analytic_trajectory(double omega_over_delta, double delta, double phi_l,
                               std::span<const double> t_grid) {
    require_detuning(delta);
    const std::complex<double> prefactor =
        std::complex<double>(0.0, omega_over_delta) * std::polar(1.0, phi_l);
    std::vector<double> re(t_grid.size());
    std::vector<double> im(t_grid.size());
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        // e^{-i x} - 1 = -2 sin(x/2)^2 - i sin(x), which keeps alpha(0) exactly zero
        const double x = delta * t_grid[k];
        const double s = std::sin(0.5 * x);
        const std::complex<double> bracket(-2.0 * s * s, -std::sin(x));
        const std::complex<double> alpha = prefactor * bracket;
        re[k] = alpha.real();
        im[k] = alpha.imag();
    }
    return Trajectory(std::vector<double>(t_grid.begin(), t_grid.end()), std::move(re), std::move(im));
}

double analytic_total_phase(double omega_over_delta, double delta, double t) {
    require_detuning(delta);
    const double x = delta * t;
    return omega_over_delta * omega_over_delta * (std::sin(x) - x);
}

double analytic_dynamic_phase(double omega_over_delta, double delta, double t) {
    return 2.0 * analytic_total_phase(omega_over_delta, delta, t);
}

double constant_drive_energy(double omega_over_delta, double delta, double t) {
    require_detuning(delta);
    return 2.0 * omega_over_delta * omega_over_delta * delta * (1.0 - std::cos(delta * t));
}

std::vector<double> uniform_grid(double t0, double t1, int samples) {
    if (samples < 2) throw ValidationError("a time grid needs at least 2 samples");
    if (!(t1 > t0)) throw ValidationError("time grid end must exceed its start");
    std::vector<double> t(static_cast<std::size_t>(samples));
    const double h = (t1 - t0) / (samples - 1);
    for (int k = 0; k < samples; ++k) t[static_cast<std::size_t>(k)] = t0 + h * k;
    t.back() = t1;
    return t;
}

}  // namespace geophase
