#pragma once

// Parameter studies around the constant-drive gate: validity of the phase
// relations at arbitrary (noncyclic) times, sensitivity to the gate time,
// parameter independence of eta, and dependence on loop area only.
//
// Every row keeps total == geometric + dynamic exactly; reference values and
// oracle numbers are carried in separate columns.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geophase/drives.hpp"
#include "geophase/oracle.hpp"
#include "geophase/phasespace.hpp"

namespace geophase {

inline constexpr int kReportSchemaVersion = 1;

enum class SweepParameter { time, timing_error, omega_over_delta, phi_l, delta, loop_shape };

std::string_view sweep_parameter_name(SweepParameter p);
SweepParameter sweep_parameter_from_name(std::string_view name);

struct SweepSpec {
    SweepParameter parameter = SweepParameter::omega_over_delta;
    std::vector<double> grid;
    ConstantDriveParams base = ConstantDriveParams::from_ratio(0.5, 1.0, 0.0);
    /// Absent: analytic only.
    std::optional<OracleSettings> oracle;
    int samples_per_period = kDefaultSamplesPerPeriod;
};

struct SweepRow {
    double value = 0.0;
    double total = 0.0;
    double geometric = 0.0;
    double dynamic = 0.0;
    std::optional<double> eta;
    std::optional<double> reference;        // closed-form total phase where one exists
    std::optional<double> phase_error;      // timing sweeps: Phi(T(1+eps)) - Phi(T)
    std::optional<double> fidelity;         // against the ideal gate
    std::optional<double> oracle_total;
    std::optional<double> oracle_dynamic;
    std::optional<double> oracle_geometric;
    std::optional<double> oracle_eta;
    std::optional<double> oracle_deviation;  // |oracle_total - reference|
};

struct SweepReport {
    std::string kind;
    SweepParameter parameter = SweepParameter::time;
    std::vector<SweepRow> rows;
    /// Ordered summary statistics (name, value).
    std::vector<std::pair<std::string, double>> summary;
    /// Ordered metadata (name, value) echoed into serialized reports.
    std::vector<std::pair<std::string, std::string>> metadata;

    std::optional<double> summary_value(std::string_view name) const;
};

/// Phases at each time in `times` for the constant drive started from the
/// vacuum. Analytic rows integrate the exact path with `analytic_samples`
/// points per full period; oracle columns come from one propagation per time.
SweepReport noncyclic_scan(const ConstantDriveParams& drive, std::span<const double> times,
                           const std::optional<OracleSettings>& oracle = std::nullopt,
                           int analytic_samples = 1 << 18);

/// Gate time T (1 + eps) instead of T = 2 pi / delta, for each eps (|eps| < 0.5).
/// Fidelity compares the vacuum-projected two-qubit map
///   M = diag(<0|U_dd|0>, <0|U_du|0>, <0|U_ud|0>, <0|U_uu|0>)
/// with the ideal gate: |tr(U_ideal^dagger M)| / 4. Residual motion lowers
/// |<0|U|0>| = exp(-|alpha|^2/2) and so lowers the fidelity.
/// Summary "loglog_slope": fitted slope of log|phase_error| against log eps
/// over the rows with 1e-3 <= eps <= 1e-2.
SweepReport timing_error_sweep(const ConstantDriveParams& base, std::span<const double> epsilons,
                               const std::optional<OracleSettings>& oracle = std::nullopt);

/// eta at the closed-loop endpoint for each grid value of omega_over_delta,
/// phi_l or delta (others taken from spec.base; for delta sweeps the ratio
/// Omega_D/delta is held fixed). Summary "max_abs_eta_plus_2" and, with an
/// oracle, "max_abs_oracle_eta_plus_2".
SweepReport eta_invariance_sweep(const SweepSpec& spec);

/// Geometric phase of each closed loop; rejects open loops. Summary "spread":
/// largest pairwise difference of the geometric phases.
SweepReport area_invariance_study(const std::vector<DriveProfile>& loops, int samples = 100000,
                                  double closure_tolerance = 1e-9);

/// Rectangle with aspect ratio `aspect` traversed clockwise by four constant
/// pulses, enclosing the same area as the constant-drive circle of `params`
/// and taking one period in total.
DriveProfile equal_area_rectangle(const ConstantDriveParams& params, double aspect);

/// The circle of `params`, a copy traversed at half speed (period 2T), and
/// one rectangle per aspect ratio.
std::vector<DriveProfile> equal_area_loops(const ConstantDriveParams& params, std::span<const double> aspects);

/// Least-squares slope of log|y| against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// n logarithmically spaced values from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace geophase
