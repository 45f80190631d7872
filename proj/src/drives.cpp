#include "geophase/drives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geophase/error.hpp"
#include "geophase/kernels.hpp"

namespace geophase {

namespace {

constexpr double kTimeSlack = 1e-12;

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
constexpr int kGlPanels = 64;

std::complex<double> integrate_segment(const DriveSegment& seg, double a, double b) {
    if (b <= a) return {0.0, 0.0};
    if (seg.kind == DriveSegment::Kind::exponential) {
        const double w = seg.frequency;
        const std::complex<double> phase = std::polar(1.0, -w * a);
        return seg.amplitude * phase * (b - a) * expm1_over(std::complex<double>(0.0, -w * (b - a)));
    }
    const double h = (b - a) / kGlPanels;
    std::complex<double> sum{0.0, 0.0};
    for (int p = 0; p < kGlPanels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
            sum += kGlWeights[k] * seg.custom(mid + 0.5 * h * kGlNodes[k]);
        }
    }
    return 0.5 * h * sum;
}

double clamp_time(const DriveProfile& drive, double t) {
    const double total = drive.total_duration();
    const double slack = kTimeSlack * std::max(1.0, total);
    if (!std::isfinite(t) || t < -slack || t > total + slack) {
        throw OutOfRangeError("time " + std::to_string(t) + " outside drive range [0, " +
                              std::to_string(total) + "]");
    }
    return std::clamp(t, 0.0, total);
}

}  // namespace

ConstantDriveParams::ConstantDriveParams(double omega_d_, double delta_, double phi_l_)
    : omega_d(omega_d_), delta(delta_), phi_l(phi_l_) {
    if (!std::isfinite(omega_d) || !std::isfinite(phi_l)) {
        throw ValidationError("drive parameters must be finite");
    }
    if (delta == 0.0 || !std::isfinite(delta)) {
        throw SingularDetuningError("detuning delta must be finite and nonzero");
    }
}

ConstantDriveParams ConstantDriveParams::from_ratio(double omega_over_delta, double delta, double phi_l) {
    return ConstantDriveParams(omega_over_delta * delta, delta, phi_l);
}

double ConstantDriveParams::period() const { return 2.0 * kPi / std::abs(delta); }

DriveSegment DriveSegment::constant(double duration, std::complex<double> amplitude) {
    return exponential(duration, amplitude, 0.0);
}

DriveSegment DriveSegment::exponential(double duration, std::complex<double> amplitude, double frequency) {
    DriveSegment s;
    s.kind = Kind::exponential;
    s.duration = duration;
    s.amplitude = amplitude;
    s.frequency = frequency;
    return s;
}

DriveSegment DriveSegment::from_function(double duration, std::function<std::complex<double>(double)> f) {
    if (!f) throw ValidationError("custom drive segment needs a callable");
    DriveSegment s;
    s.kind = Kind::custom;
    s.duration = duration;
    s.custom = std::move(f);
    return s;
}

std::complex<double> DriveSegment::value(double t) const {
    if (kind == Kind::custom) return custom(t);
    return amplitude * std::polar(1.0, -frequency * t);
}

DriveProfile::DriveProfile(std::vector<DriveSegment> segments, SpinConditioner conditioner)
    : segments_(std::move(segments)), conditioner_(conditioner) {
    if (segments_.empty()) throw ValidationError("a drive profile needs at least one segment");
    starts_.reserve(segments_.size());
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
            throw ValidationError("segment " + std::to_string(i) + " has non-positive duration");
        }
        if (s.kind == DriveSegment::Kind::exponential &&
            (!std::isfinite(s.amplitude.real()) || !std::isfinite(s.amplitude.imag()) ||
             !std::isfinite(s.frequency))) {
            throw ValidationError("segment " + std::to_string(i) + " has non-finite parameters");
        }
        starts_.push_back(total_duration_);
        total_duration_ += s.duration;
    }
}

DriveProfile DriveProfile::constant(const ConstantDriveParams& params, double duration,
                                    SpinConditioner conditioner) {
    const std::complex<double> amp = -params.omega_d * std::polar(1.0, params.phi_l);
    return DriveProfile({DriveSegment::exponential(duration, amp, params.delta)}, conditioner);
}

DriveProfile DriveProfile::zero(double duration, SpinConditioner conditioner) {
    return DriveProfile({DriveSegment::constant(duration, 0.0)}, conditioner);
}

std::size_t DriveProfile::segment_at(double t) const {
    const auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
    if (it == starts_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(starts_.begin(), it)) - 1;
}

std::complex<double> DriveProfile::f(double t) const {
    const double tc = clamp_time(*this, t);
    return segments_[segment_at(tc)].value(tc);
}

bool DriveProfile::is_closed_form() const {
    return std::all_of(segments_.begin(), segments_.end(),
                       [](const DriveSegment& s) { return s.kind == DriveSegment::Kind::exponential; });
}

DriveProfile DriveProfile::with_conditioner(SpinConditioner conditioner) const {
    return DriveProfile(segments_, conditioner);
}

PhasePoint alpha_of_t(const DriveProfile& drive, double t) {
    const double tc = clamp_time(drive, t);
    std::complex<double> integral{0.0, 0.0};
    const auto& segs = drive.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const double a = drive.segment_start(i);
        if (a >= tc) break;
        const double b = std::min(tc, a + segs[i].duration);
        integral += integrate_segment(segs[i], a, b);
    }
    return PhasePoint(-integral);
}

double closure_residual(const DriveProfile& drive, double tau) {
    const auto end = alpha_of_t(drive, tau).value();
    const auto start = alpha_of_t(drive, 0.0).value();
    return std::abs(end - start);
}

std::vector<SegmentGrid> segment_grids(const DriveProfile& drive, double tau, int samples) {
    const double end = clamp_time(drive, tau);
    if (samples < 2) throw ValidationError("sample count must be at least 2");
    std::vector<SegmentGrid> grids;
    if (end <= 0.0) return grids;
    const auto& segs = drive.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const double a = drive.segment_start(i);
        if (a >= end) break;
        const double b = std::min(end, a + segs[i].duration);
        if (b - a <= kTimeSlack * std::max(1.0, end)) continue;
        const int n = std::max(2, static_cast<int>(std::lround(samples * (b - a) / end)));
        grids.push_back({i, uniform_grid(a, b, n)});
    }
    return grids;
}

std::vector<double> drive_time_grid(const DriveProfile& drive, double tau, int samples) {
    std::vector<double> grid;
    for (const auto& g : segment_grids(drive, tau, samples)) {
        const auto first = grid.empty() ? g.times.begin() : g.times.begin() + 1;
        grid.insert(grid.end(), first, g.times.end());
    }
    return grid;
}

Trajectory sample_trajectory(const DriveProfile& drive, std::span<const double> times, double beta) {
    std::vector<double> re(times.size());
    std::vector<double> im(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto a = beta * alpha_of_t(drive, times[k]).value();
        re[k] = a.real();
        im[k] = a.imag();
    }
    return Trajectory(std::vector<double>(times.begin(), times.end()), std::move(re), std::move(im));
}

EnergyFunction coherent_energy(const DriveProfile& drive, double beta, std::size_t segment) {
    const DriveSegment seg = drive.segments().at(segment);
    return [seg, beta](PhasePoint p, double t) {
        return 2.0 * beta * std::imag(seg.value(t) * std::conj(p.value()));
    };
}

double gamma0(const DriveProfile& drive, double tau, int samples) {
    double total = 0.0;
    for (const auto& g : segment_grids(drive, tau, samples)) {
        const auto& seg = drive.segments()[g.segment];
        std::vector<double> integrand(g.times.size());
        for (std::size_t k = 0; k < g.times.size(); ++k) {
            const auto alpha = alpha_of_t(drive, g.times[k]).value();
            const auto f = seg.value(g.times[k]);
            const std::complex<double> bracket = std::conj(alpha) * f - alpha * std::conj(f);
            if (std::abs(bracket.real()) > 1e-12 * (1.0 + std::abs(alpha) * std::abs(f))) {
                throw ConsistencyError("gamma0 integrand is not purely imaginary");
            }
            // (i/2) * bracket is real: -Im(alpha^* f)
            integrand[k] = -0.5 * bracket.imag();
        }
        total += kernels::trapezoid(g.times, integrand);
    }
    return total;
}

ConstantDriveParams design_constant_drive(double target_phase, double delta, double phi_l) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw SingularDetuningError("design requires a positive finite detuning");
    }
    if (!(target_phase < 0.0)) {
        throw UnreachablePhaseError(
            "target phase must be negative: a constant drive over one period reaches only "
            "-2 pi (Omega_D/delta)^2 < 0");
    }
    if (-target_phase > kMaxDesignPhase) {
        throw UnreachablePhaseError("target phase magnitude exceeds the design cap of 8 pi");
    }
    const double ratio = std::sqrt(-target_phase / (2.0 * kPi));
    return ConstantDriveParams::from_ratio(ratio, delta, phi_l);
}

DriveProfile four_pulse_sequence(const std::array<std::complex<double>, 4>& amplitudes,
                                 const std::array<double, 4>& durations, SpinConditioner conditioner) {
    std::vector<DriveSegment> segs;
    for (std::size_t i = 0; i < 4; ++i) segs.push_back(DriveSegment::constant(durations[i], amplitudes[i]));
    return DriveProfile(std::move(segs), conditioner);
}

LoopCheck check_loop(const DriveProfile& drive, double tau, int samples, double tolerance) {
    LoopCheck check;
    check.residual = closure_residual(drive, tau);
    check.closed = check.residual <= tolerance;
    check.gamma0 = gamma0(drive, tau, samples);
    return check;
}

PhaseDecomposition drive_phases(const DriveProfile& drive, double tau, int samples, double beta) {
    const auto grids = segment_grids(drive, tau, samples);
    if (grids.empty()) return decompose(0.0, 0.0);
    const auto grid = drive_time_grid(drive, tau, samples);
    const double geometric = geometric_phase(sample_trajectory(drive, grid, beta));
    double dynamic = 0.0;
    for (const auto& g : grids) {
        dynamic += dynamic_phase(sample_trajectory(drive, g.times, beta),
                                 coherent_energy(drive, beta, g.segment));
    }
    return decompose(geometric, dynamic);
}

}  // namespace geophase
