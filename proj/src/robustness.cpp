#include "geophase/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geophase/error.hpp"
#include "geophase/gates.hpp"

namespace geophase {

namespace {

constexpr double kMaxScanPeriods = 8.0;

void add_common_metadata(SweepReport& report) {
    report.metadata.emplace_back("schema_version", std::to_string(kReportSchemaVersion));
    report.metadata.emplace_back("generator", "geophase");
    report.metadata.emplace_back("kind", report.kind);
    report.metadata.emplace_back("parameter", std::string(sweep_parameter_name(report.parameter)));
    report.metadata.emplace_back("randomness", "none");
}

void require_grid(std::span<const double> grid) {
    if (grid.empty()) throw ValidationError("sweep grid is empty");
    for (double v : grid) {
        if (!std::isfinite(v)) throw ValidationError("sweep grid contains a non-finite value");
    }
}

int scaled_steps(int steps_per_period, double t, double period) {
    return std::max(10, static_cast<int>(std::lround(steps_per_period * t / period)));
}

// Phases of the |du> sector (conditioner eigenvalue 1) from the vacuum.
struct OracleSample {
    double total = 0.0;
    double dynamic = 0.0;
    std::complex<double> overlap{1.0, 0.0};
};

OracleSample run_oracle(const ConstantDriveParams& params, double t, const OracleSettings& settings) {
    if (t <= 0.0) return {};
    const auto drive = DriveProfile::constant(params, t);
    const auto space = choose_fock_space(drive, t, settings);
    PropagateOptions options;
    options.columns = 1;
    const auto prop = propagate(drive, t, space, scaled_steps(settings.steps, t, params.period()), options);
    OracleSample s;
    s.total = extract_total_phase(prop, 1);
    s.dynamic = prop.dynamic_phase(1, prop.times.size() - 1);
    s.overlap = prop.overlap(1, prop.times.size() - 1);
    return s;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

std::string_view sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::time: return "time";
        case SweepParameter::timing_error: return "timing_error";
        case SweepParameter::omega_over_delta: return "omega_over_delta";
        case SweepParameter::phi_l: return "phi_l";
        case SweepParameter::delta: return "delta";
        case SweepParameter::loop_shape: return "loop_shape";
    }
    return "";
}

SweepParameter sweep_parameter_from_name(std::string_view name) {
    for (auto p : {SweepParameter::time, SweepParameter::timing_error, SweepParameter::omega_over_delta,
                   SweepParameter::phi_l, SweepParameter::delta, SweepParameter::loop_shape}) {
        if (sweep_parameter_name(p) == name) return p;
    }
    throw ValidationError("unknown sweep parameter '" + std::string(name) + "'");
}

std::optional<double> SweepReport::summary_value(std::string_view name) const {
    for (const auto& [key, value] : summary) {
        if (key == name) return value;
    }
    return std::nullopt;
}

SweepReport noncyclic_scan(const ConstantDriveParams& drive, std::span<const double> times,
                           const std::optional<OracleSettings>& oracle, int analytic_samples) {
    require_grid(times);
    if (analytic_samples < 2) throw ValidationError("analytic sample count must be at least 2");
    const double period = drive.period();
    const double ratio = drive.omega_over_delta();
    for (double t : times) {
        if (t < 0.0 || t > kMaxScanPeriods * period) {
            throw ValidationError("noncyclic scan times must lie in [0, 8 periods]");
        }
    }

    SweepReport report;
    report.kind = "noncyclic";
    report.parameter = SweepParameter::time;
    std::vector<double> analytic_dev;
    std::vector<double> oracle_dev;
    for (double t : times) {
        SweepRow row;
        row.value = t;
        row.reference = analytic_total_phase(ratio, drive.delta, t);
        if (t > 0.0) {
            const int n = std::max(2, static_cast<int>(std::lround(analytic_samples * t / period)) + 1);
            const auto grid = uniform_grid(0.0, t, n);
            const auto traj = analytic_trajectory(ratio, drive.delta, drive.phi_l, grid);
            const double delta = drive.delta;
            const auto d = decompose(geometric_phase(traj), dynamic_phase(traj, [&](PhasePoint, double s) {
                                         return constant_drive_energy(ratio, delta, s);
                                     }));
            row.total = d.total;
            row.geometric = d.geometric;
            row.dynamic = d.dynamic;
            row.eta = d.eta;
        }
        analytic_dev.push_back(row.dynamic - 2.0 * *row.reference);
        analytic_dev.push_back(row.geometric + *row.reference);
        if (oracle) {
            const auto s = run_oracle(drive, t, *oracle);
            row.oracle_total = s.total;
            row.oracle_dynamic = s.dynamic;
            row.oracle_geometric = s.total - s.dynamic;
            if (std::abs(*row.oracle_geometric) > kEtaThreshold) row.oracle_eta = s.dynamic / *row.oracle_geometric;
            row.oracle_deviation = std::abs(s.total - *row.reference);
            oracle_dev.push_back(s.dynamic - 2.0 * *row.reference);
            oracle_dev.push_back(*row.oracle_deviation);
        }
        report.rows.push_back(row);
    }
    report.summary.emplace_back("max_analytic_relation_deviation", max_abs(analytic_dev));
    if (oracle) report.summary.emplace_back("max_oracle_relation_deviation", max_abs(oracle_dev));
    add_common_metadata(report);
    report.metadata.emplace_back("omega_over_delta", std::to_string(ratio));
    report.metadata.emplace_back("analytic_samples_per_period", std::to_string(analytic_samples));
    return report;
}

SweepReport timing_error_sweep(const ConstantDriveParams& base, std::span<const double> epsilons,
                               const std::optional<OracleSettings>& oracle) {
    require_grid(epsilons);
    for (double e : epsilons) {
        if (!(std::abs(e) < 0.5)) throw ValidationError("timing errors must satisfy |eps| < 0.5");
    }
    const double period = base.period();
    const double ratio = base.omega_over_delta();
    const double ideal_phase = analytic_total_phase(ratio, base.delta, period);
    const auto ideal = phase_gate(ideal_phase);

    SweepReport report;
    report.kind = "timing";
    report.parameter = SweepParameter::timing_error;
    std::vector<double> slope_x;
    std::vector<double> slope_y;
    std::vector<double> oracle_dev;
    for (double eps : epsilons) {
        const double t = period * (1.0 + eps);
        SweepRow row;
        row.value = eps;
        const double phase = analytic_total_phase(ratio, base.delta, t);
        const auto d = decompose(noncyclic_geometric_phase(phase, 2.0 * phase), 2.0 * phase);
        row.total = d.total;
        row.geometric = d.geometric;
        row.dynamic = d.dynamic;
        row.eta = d.eta;
        row.reference = phase;
        row.phase_error = phase - ideal_phase;

        const double grid[] = {0.0, t};
        const auto alpha = analytic_trajectory(ratio, base.delta, base.phi_l, grid).point(1).value();
        const std::complex<double> odd = std::polar(std::exp(-0.5 * std::norm(alpha)), phase);
        const Vector4c vacuum_map(1.0, odd, odd, 1.0);
        row.fidelity = std::abs(ideal.matrix().diagonal().dot(vacuum_map)) / 4.0;

        if (oracle) {
            const auto s = run_oracle(base, t, *oracle);
            row.oracle_total = s.total;
            row.oracle_dynamic = s.dynamic;
            row.oracle_geometric = s.total - s.dynamic;
            row.oracle_deviation = std::abs(s.total - phase);
            oracle_dev.push_back(*row.oracle_deviation);
        }
        if (eps >= 1e-3 * (1.0 - 1e-12) && eps <= 1e-2 * (1.0 + 1e-12)) {
            slope_x.push_back(eps);
            slope_y.push_back(*row.phase_error);
        }
        report.rows.push_back(row);
    }
    if (slope_x.size() >= 2) report.summary.emplace_back("loglog_slope", loglog_slope(slope_x, slope_y));
    if (oracle) report.summary.emplace_back("max_oracle_deviation", max_abs(oracle_dev));
    add_common_metadata(report);
    report.metadata.emplace_back("omega_over_delta", std::to_string(ratio));
    return report;
}

SweepReport eta_invariance_sweep(const SweepSpec& spec) {
    require_grid(spec.grid);
    if (spec.parameter != SweepParameter::omega_over_delta && spec.parameter != SweepParameter::phi_l &&
        spec.parameter != SweepParameter::delta) {
        throw ValidationError("eta sweeps vary omega_over_delta, phi_l or delta");
    }
    SweepReport report;
    report.kind = "eta";
    report.parameter = spec.parameter;
    std::vector<double> eta_dev;
    std::vector<double> relation_dev;
    std::vector<double> oracle_eta_dev;
    for (double v : spec.grid) {
        double ratio = spec.base.omega_over_delta();
        double delta = spec.base.delta;
        double phi = spec.base.phi_l;
        switch (spec.parameter) {
            case SweepParameter::omega_over_delta: ratio = v; break;
            case SweepParameter::phi_l: phi = v; break;
            default: delta = v; break;
        }
        const auto params = ConstantDriveParams::from_ratio(ratio, delta, phi);
        const double period = params.period();
        const auto drive = DriveProfile::constant(params, period);
        const auto d = drive_phases(drive, period, spec.samples_per_period, 1.0);

        SweepRow row;
        row.value = v;
        row.total = d.total;
        row.geometric = d.geometric;
        row.dynamic = d.dynamic;
        row.eta = d.eta;
        row.reference = analytic_total_phase(ratio, delta, period);
        if (d.eta) eta_dev.push_back(*d.eta + 2.0);
        relation_dev.push_back(d.dynamic + 2.0 * d.geometric);
        if (spec.oracle) {
            const auto s = run_oracle(params, period, *spec.oracle);
            row.oracle_total = s.total;
            row.oracle_dynamic = s.dynamic;
            row.oracle_geometric = s.total - s.dynamic;
            row.oracle_deviation = std::abs(s.total - *row.reference);
            if (std::abs(*row.oracle_geometric) > kEtaThreshold) {
                row.oracle_eta = s.dynamic / *row.oracle_geometric;
                oracle_eta_dev.push_back(*row.oracle_eta + 2.0);
            }
        }
        report.rows.push_back(row);
    }
    report.summary.emplace_back("max_abs_eta_plus_2", max_abs(eta_dev));
    report.summary.emplace_back("max_abs_dynamic_plus_2_geometric", max_abs(relation_dev));
    if (spec.oracle) report.summary.emplace_back("max_abs_oracle_eta_plus_2", max_abs(oracle_eta_dev));
    add_common_metadata(report);
    report.metadata.emplace_back("samples_per_period", std::to_string(spec.samples_per_period));
    return report;
}

SweepReport area_invariance_study(const std::vector<DriveProfile>& loops, int samples, double closure_tolerance) {
    if (loops.empty()) throw ValidationError("area study needs at least one loop");
    SweepReport report;
    report.kind = "area";
    report.parameter = SweepParameter::loop_shape;
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < loops.size(); ++i) {
        const auto& loop = loops[i];
        const double tau = loop.total_duration();
        const double residual = closure_residual(loop, tau);
        if (residual > closure_tolerance) {
            throw NotClosedError("loop " + std::to_string(i) + " is open (residual " + std::to_string(residual) + ")",
                                 residual);
        }
        const auto d = drive_phases(loop, tau, samples, 1.0);
        SweepRow row;
        row.value = static_cast<double>(i);
        row.total = d.total;
        row.geometric = d.geometric;
        row.dynamic = d.dynamic;
        row.eta = d.eta;
        lo = i == 0 ? d.geometric : std::min(lo, d.geometric);
        hi = i == 0 ? d.geometric : std::max(hi, d.geometric);
        report.rows.push_back(row);
    }
    report.summary.emplace_back("spread", hi - lo);
    add_common_metadata(report);
    report.metadata.emplace_back("samples", std::to_string(samples));
    return report;
}

DriveProfile equal_area_rectangle(const ConstantDriveParams& params, double aspect) {
    if (!(aspect > 0.0) || !std::isfinite(aspect)) throw ValidationError("aspect ratio must be positive");
    const double r = std::abs(params.omega_over_delta());
    if (r == 0.0) throw ValidationError("a zero-amplitude drive encloses no area");
    const double area = kPi * r * r;
    const double width = std::sqrt(area * aspect);
    const double height = std::sqrt(area / aspect);
    const double period = params.period();
    const double speed = 2.0 * (width + height) / period;
    // Clockwise: down, left, up, right (alpha' = -f). A negative detuning
    // runs the circle counterclockwise, so mirror the rectangle.
    const double orient = params.delta > 0.0 ? 1.0 : -1.0;
    const std::complex<double> down(0.0, speed * orient);
    return four_pulse_sequence({down, speed, -down, -speed},
                               {height / speed, width / speed, height / speed, width / speed});
}

std::vector<DriveProfile> equal_area_loops(const ConstantDriveParams& params, std::span<const double> aspects) {
    std::vector<DriveProfile> loops;
    loops.push_back(DriveProfile::constant(params, params.period()));
    const ConstantDriveParams slow(params.omega_d / 2.0, params.delta / 2.0, params.phi_l);
    loops.push_back(DriveProfile::constant(slow, slow.period()));
    for (double a : aspects) loops.push_back(equal_area_rectangle(params, a));
    return loops;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope fit needs at least 2 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(std::abs(x[i]) > 0.0) || !(std::abs(y[i]) > 0.0)) {
            throw ValidationError("log-log fit needs nonzero values");
        }
        const double lx = std::log(std::abs(x[i]));
        const double ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw ValidationError("log_spaced needs 0 < lo < hi and n >= 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace geophase
