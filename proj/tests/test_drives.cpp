#include <doctest.h>

#include <cmath>
#include <complex>

#include "geophase/drives.hpp"
#include "geophase/error.hpp"

using namespace geophase;
using C = std::complex<double>;

namespace {

// Hand-written constant-drive path i r (e^{-i delta t} - 1) e^{i phi}.
C path(double r, double delta, double phi, double t) {
    return C(0.0, r) * (std::exp(C(0.0, -delta * t)) - 1.0) * std::exp(C(0.0, phi));
}

C drive_value(double r, double delta, double phi, double t) {
    return -r * delta * std::exp(C(0.0, phi)) * std::exp(C(0.0, -delta * t));
}

// -integral Im(conj(alpha) f) dt by composite Simpson on the hand-written path.
double gamma0_reference(double r, double delta, double phi, double tau, int n = 20000) {
    const double h = tau / n;
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double t = k * h;
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += w * std::imag(std::conj(path(r, delta, phi, t)) * drive_value(r, delta, phi, t));
    }
    return -s * h / 3.0;
}

DriveProfile constant_drive(double r, double delta, double phi, double periods = 1.0) {
    const auto p = ConstantDriveParams::from_ratio(r, delta, phi);
    return DriveProfile::constant(p, periods * p.period());
}

}  // namespace

TEST_CASE("constant drive parameters") {
    const auto p = ConstantDriveParams::from_ratio(0.5, 2.0, 0.1);
    CHECK(p.omega_d == doctest::Approx(1.0));
    CHECK(p.omega_over_delta() == doctest::Approx(0.5));
    CHECK(p.period() == doctest::Approx(kPi));
    CHECK_THROWS_AS(ConstantDriveParams(1.0, 0.0, 0.0), SingularDetuningError);
    CHECK_THROWS_AS(ConstantDriveParams(std::nan(""), 1.0, 0.0), ValidationError);
}

TEST_CASE("alpha_of_t for the constant drive") {
    const auto drive = constant_drive(0.5, 1.0, 0.0);
    CHECK(std::abs(alpha_of_t(drive, 0.0).value()) == 0.0);
    CHECK(std::abs(alpha_of_t(drive, kPi).value() - C(0.0, -1.0)) < 1e-15);
    CHECK(std::abs(alpha_of_t(drive, 2.0 * kPi).value()) < 1e-15);
    for (double t : {0.3, 1.7, 4.0, 6.1}) {
        CHECK(std::abs(alpha_of_t(constant_drive(0.7, 1.3, 0.4, 2.0), t).value() - path(0.7, 1.3, 0.4, t)) < 1e-14);
    }
    CHECK_THROWS_AS(alpha_of_t(drive, 2.0 * kPi + 1e-3), OutOfRangeError);
    CHECK_THROWS_AS(alpha_of_t(drive, -1e-3), OutOfRangeError);
}

TEST_CASE("alpha_of_t for trivial drives") {
    const auto zero = DriveProfile::zero(3.0);
    for (double t : {0.0, 1.0, 3.0}) CHECK(std::abs(alpha_of_t(zero, t).value()) == 0.0);

    const C c(0.3, -1.2);
    const DriveProfile flat({DriveSegment::constant(2.0, c)}, SpinConditioner::odd_parity_projector());
    for (double t : {0.0, 0.5, 2.0}) CHECK(std::abs(alpha_of_t(flat, t).value() + c * t) < 1e-15);
}

TEST_CASE("custom segments integrate by quadrature") {
    const double r = 0.6, delta = 1.4, phi = -0.2;
    const auto custom = DriveProfile({DriveSegment::from_function(2.0 * kPi / delta,
                                                                  [&](double t) { return drive_value(r, delta, phi, t); })},
                                     SpinConditioner::odd_parity_projector());
    CHECK_FALSE(custom.is_closed_form());
    for (double t : {0.1, 1.0, 3.3, 2.0 * kPi / delta}) {
        CHECK(std::abs(alpha_of_t(custom, t).value() - path(r, delta, phi, t)) < 1e-12);
    }
}

TEST_CASE("segments use absolute time") {
    const double w = 0.9;
    const auto drive = DriveProfile({DriveSegment::exponential(1.0, C(1.0, 0.0), w),
                                     DriveSegment::exponential(2.0, C(0.0, 1.0), w)},
                                    SpinConditioner::odd_parity_projector());
    CHECK(drive.total_duration() == 3.0);
    CHECK(drive.segment_at(0.5) == 0);
    CHECK(drive.segment_at(1.5) == 1);
    CHECK(drive.segment_at(3.0) == 1);
    CHECK(std::abs(drive.f(2.0) - C(0.0, 1.0) * std::exp(C(0.0, -w * 2.0))) < 1e-15);
    // alpha(3) = -int_0^1 e^{-iwt} dt - i int_1^3 e^{-iwt} dt.
    auto prim = [&](double t) { return std::exp(C(0.0, -w * t)) / C(0.0, -w); };
    const C expected = -(prim(1.0) - prim(0.0)) - C(0.0, 1.0) * (prim(3.0) - prim(1.0));
    CHECK(std::abs(alpha_of_t(drive, 3.0).value() - expected) < 1e-14);
}

TEST_CASE("closure residual") {
    CHECK(closure_residual(constant_drive(0.5, 1.0, 0.0), 2.0 * kPi) < 1e-12);
    CHECK(closure_residual(constant_drive(0.5, 1.0, 0.0), kPi) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(closure_residual(DriveProfile::zero(1.0), 1.0) == 0.0);
}

TEST_CASE("gamma0 functional") {
    SUBCASE("half-amplitude loop against Simpson quadrature") {
        const double ref = gamma0_reference(0.5, 1.0, 0.0, 2.0 * kPi);
        CHECK(ref == doctest::Approx(-kPi / 2.0).epsilon(1e-10));
        CHECK(std::abs(gamma0(constant_drive(0.5, 1.0, 0.0), 2.0 * kPi, 10000) - ref) < 1e-10);
    }
    SUBCASE("noncyclic times and other parameters") {
        for (double tau : {0.4, 2.2, 5.0}) {
            const double ref = gamma0_reference(0.8, 1.6, 1.1, tau);
            CHECK(std::abs(gamma0(constant_drive(0.8, 1.6, 1.1, 2.0), tau, 200000) - ref) < 1e-9);
        }
    }
    SUBCASE("zero drive") { CHECK(gamma0(DriveProfile::zero(2.0), 2.0, 100) == 0.0); }
    SUBCASE("quadratic in the drive amplitude") {
        const double g1 = gamma0(constant_drive(0.3, 1.0, 0.0), 2.0 * kPi, 4000);
        const double g2 = gamma0(constant_drive(0.6, 1.0, 0.0), 2.0 * kPi, 4000);
        CHECK(g2 == doctest::Approx(4.0 * g1).epsilon(1e-12));
    }
    SUBCASE("laser phase drops out") {
        const double a = gamma0(constant_drive(0.45, 1.0, 0.0), 2.0 * kPi, 4000);
        const double b = gamma0(constant_drive(0.45, 1.0, 2.1), 2.0 * kPi, 4000);
        CHECK(a == doctest::Approx(b).epsilon(1e-13));
    }
}

TEST_CASE("inverse design") {
    CHECK(design_constant_drive(-kPi / 2.0, 1.0, 0.0).omega_over_delta() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(design_constant_drive(-2.0 * kPi, 1.0, 0.0).omega_over_delta() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(design_constant_drive(-1e-14, 1.0, 0.0).omega_d < 1e-7);
    for (double target : {-0.01, -0.7, -kPi / 2.0, -3.0, -20.0}) {
        for (double delta : {0.5, 1.0, 3.0}) {
            const auto p = design_constant_drive(target, delta, 0.3);
            CHECK(p.phi_l == 0.3);
            CHECK(std::abs(analytic_total_phase(p.omega_over_delta(), p.delta, p.period()) - target) < 1e-12);
        }
    }
    CHECK_THROWS_AS(design_constant_drive(0.0, 1.0, 0.0), UnreachablePhaseError);
    CHECK_THROWS_AS(design_constant_drive(0.5, 1.0, 0.0), UnreachablePhaseError);
    CHECK_THROWS_AS(design_constant_drive(-9.0 * kPi, 1.0, 0.0), UnreachablePhaseError);
    CHECK_THROWS_AS(design_constant_drive(-1.0, 0.0, 0.0), SingularDetuningError);
}

TEST_CASE("four-pulse sequences") {
    const C c(0.4, 0.0);
    const double d = 1.25;
    const double side = std::abs(c) * d;

    const auto square = four_pulse_sequence({c, C(0.0, 1.0) * c, -c, C(0.0, -1.0) * c}, {d, d, d, d});
    const auto loop = check_loop(square, 4.0 * d, 4000);
    CHECK(loop.residual < 1e-12);
    CHECK(loop.closed);
    // The path visits 0, -s, -s - is, -is: counterclockwise, area s^2, so gamma0 = 2 s^2.
    CHECK(loop.gamma0 == doctest::Approx(2.0 * side * side).epsilon(1e-12));
    const auto phases = drive_phases(square, 4.0 * d, 4000);
    CHECK(phases.geometric == doctest::Approx(-2.0 * side * side).epsilon(1e-12));
    CHECK(phases.dynamic == doctest::Approx(4.0 * side * side).epsilon(1e-12));

    const auto zero = four_pulse_sequence({C(), C(), C(), C()}, {d, d, d, d});
    const auto z = check_loop(zero, 4.0 * d, 100);
    CHECK(z.residual == 0.0);
    CHECK(z.gamma0 == 0.0);

    const auto open = four_pulse_sequence({c, C(), C(), C()}, {d, d, d, d});
    const auto o = check_loop(open, 4.0 * d, 100);
    CHECK(o.residual == doctest::Approx(side).epsilon(1e-14));
    CHECK_FALSE(o.closed);
}

TEST_CASE("time grids cover every segment boundary") {
    const auto drive = four_pulse_sequence({C(1, 0), C(0, 1), C(-1, 0), C(0, -1)}, {0.5, 1.0, 1.5, 1.0});
    const auto grids = segment_grids(drive, 4.0, 401);
    REQUIRE(grids.size() == 4);
    for (const auto& g : grids) {
        CHECK(g.times.size() >= 2);
        CHECK(g.times.front() == doctest::Approx(drive.segment_start(g.segment)));
    }
    CHECK(grids[2].times.size() > grids[0].times.size());

    const auto merged = drive_time_grid(drive, 4.0, 401);
    CHECK(merged.front() == 0.0);
    CHECK(merged.back() == 4.0);
    for (std::size_t k = 1; k < merged.size(); ++k) CHECK(merged[k] > merged[k - 1]);
    for (double b : {0.5, 1.5, 3.0}) {
        CHECK(std::count(merged.begin(), merged.end(), b) == 1);
    }

    // A partial window stops inside the second segment.
    const auto partial = segment_grids(drive, 1.2, 100);
    REQUIRE(partial.size() == 2);
    CHECK(partial.back().times.back() == doctest::Approx(1.2));
}

TEST_CASE("drive phases reproduce the closed-form constant-drive values") {
    const auto drive = constant_drive(0.5, 1.0, 0.7);
    const auto cyclic = drive_phases(drive, 2.0 * kPi, 1 << 18);
    CHECK(std::abs(cyclic.total + kPi / 2.0) < 1e-9);
    CHECK(std::abs(cyclic.geometric - kPi / 2.0) < 1e-9);
    CHECK(std::abs(cyclic.dynamic + kPi) < 1e-9);
    for (double t : {1.0, 3.0, 5.5}) {
        const auto d = drive_phases(drive, t, 1 << 18);
        CHECK(std::abs(d.dynamic - analytic_dynamic_phase(0.5, 1.0, t)) < 1e-9);
        CHECK(std::abs(d.geometric + analytic_total_phase(0.5, 1.0, t)) < 1e-9);
    }
    // beta scales every phase by beta^2.
    const auto b2 = drive_phases(drive, 2.0 * kPi, 1 << 18, 2.0);
    CHECK(b2.dynamic == doctest::Approx(4.0 * cyclic.dynamic).epsilon(1e-12));
}

TEST_CASE("profile validation") {
    CHECK_THROWS_AS(DriveProfile({}, SpinConditioner::odd_parity_projector()), ValidationError);
    CHECK_THROWS_AS(DriveProfile({DriveSegment::constant(0.0, C(1.0))}, SpinConditioner::jz()), ValidationError);
    CHECK_THROWS_AS(DriveProfile({DriveSegment::constant(-1.0, C(1.0))}, SpinConditioner::jz()), ValidationError);
    CHECK_THROWS_AS(DriveSegment::from_function(1.0, nullptr), ValidationError);
    const auto d = constant_drive(0.5, 1.0, 0.0).with_conditioner(SpinConditioner::jz());
    CHECK(d.conditioner() == SpinConditioner::jz());
    CHECK(d.is_closed_form());
}
