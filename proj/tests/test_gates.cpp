#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "geophase/error.hpp"
#include "geophase/gates.hpp"

using namespace geophase;
using C = std::complex<double>;

namespace {

Matrix4c diag4(C a, C b, C c, C d) {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return m;
}

// sigma_y (x) 1 + 1 (x) sigma_y in the (d, u) ordering, written out entry by entry.
Matrix4c jy_by_hand() {
    const C i(0.0, 1.0);
    Matrix4c m = Matrix4c::Zero();
    // sigma_y = [[0, i], [-i, 0]] on (|d>, |u>).
    m(0, 2) = i;  m(1, 3) = i;  m(2, 0) = -i; m(3, 1) = -i;  // qubit 1
    m(0, 1) += i; m(1, 0) += -i; m(2, 3) += i; m(3, 2) += -i;  // qubit 2
    return m;
}

double distance(const Matrix4c& a, const Matrix4c& b) { return (a - b).norm(); }

}  // namespace

TEST_CASE("phase gate values") {
    const C i(0.0, 1.0);
    CHECK(distance(phase_gate(-kPi / 2.0).matrix(), diag4(1.0, -i, -i, 1.0)) < 1e-15);
    CHECK(distance(phase_gate(0.0).matrix(), Matrix4c::Identity()) == 0.0);
    CHECK(distance(phase_gate(kPi).matrix(), diag4(1.0, -1.0, -1.0, 1.0)) < 1e-15);
    CHECK(distance(controlled_z().matrix(), diag4(1.0, 1.0, 1.0, -1.0)) < 1e-15);
}

TEST_CASE("wrap_phase maps into (-pi, pi]") {
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(kPi) == doctest::Approx(kPi));
    CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_phase(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));
    CHECK(wrap_phase(-7.0) == doctest::Approx(-7.0 + 2.0 * kPi));
}

TEST_CASE("two-qubit gate validation") {
    Matrix4c bad = Matrix4c::Identity();
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS(TwoQubitGate{bad}, ValidationError);
    CHECK_THROWS_AS(TwoQubitGate(Matrix4c::Identity(), std::array<double, 4>{0.0, 0.1, 0.0, 0.0}), ValidationError);
    const auto g = TwoQubitGate::diagonal({0.0, 4.0, -4.0, 7.0});
    REQUIRE(g.phases());
    CHECK((*g.phases())[1] == doctest::Approx(4.0 - 2.0 * kPi));
    CHECK(g.is_diagonal());
}

TEST_CASE("collective gates from gamma0") {
    for (double g : {0.3, -1.1, 2.0}) {
        const auto jz = collective_gate_from_gamma0(SpinConditioner::jz(), g);
        const auto p = jz.gate.diagonal_phases();
        CHECK(p[0] == doctest::Approx(wrap_phase(4.0 * g)).epsilon(1e-12));
        CHECK(p[1] == 0.0);
        CHECK(p[2] == 0.0);
        CHECK(p[3] == doctest::Approx(wrap_phase(4.0 * g)).epsilon(1e-12));
        CHECK(jz.per_state[0].dynamic == doctest::Approx(8.0 * g));
        CHECK(jz.per_state[0].geometric == doctest::Approx(-4.0 * g));
    }
    CHECK(distance(collective_gate_from_gamma0(SpinConditioner::jz(), 0.0).gate.matrix(), Matrix4c::Identity()) == 0.0);
    const auto parity = collective_gate_from_gamma0(SpinConditioner::odd_parity_projector(), -kPi / 2.0);
    CHECK(gate_fidelity(parity.gate, phase_gate(-kPi / 2.0)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("collective gates from drives") {
    const auto p = ConstantDriveParams::from_ratio(0.5, 1.0, 0.0);
    const auto drive = DriveProfile::constant(p, p.period());

    const auto parity = collective_gate(drive, p.period(), SpinConditioner::odd_parity_projector());
    CHECK(distance(parity.gate.matrix(), phase_gate(-kPi / 2.0).matrix()) < 1e-12);
    CHECK(parity.closure_residual < 1e-12);

    const auto jz = collective_gate(drive, p.period(), SpinConditioner::jz());
    const auto phases = jz.gate.diagonal_phases();
    CHECK(std::abs(phases[0] - wrap_phase(4.0 * (-kPi / 2.0))) < 1e-9);
    CHECK(std::abs(phases[3] - phases[0]) < 1e-12);
    CHECK(std::abs(phases[1]) < 1e-12);

    CHECK_THROWS_AS(collective_gate(drive, p.period(), SpinConditioner::jy()), UnsupportedError);
    try {
        collective_gate(drive, p.period() / 2.0, SpinConditioner::odd_parity_projector());
        FAIL("open loop accepted");
    } catch (const NotClosedError& e) {
        CHECK(e.residual() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("Jy squared gate") {
    CHECK(distance(SpinConditioner::jy().matrix(), jy_by_hand()) < 1e-15);
    const Matrix4c jy2 = jy_by_hand() * jy_by_hand();
    CHECK(distance(jy_squared_gate(0.0).matrix(), Matrix4c::Identity()) < 1e-14);
    for (double g : {kPi / 2.0, 0.37, -1.9}) {
        const Matrix4c ref = (Matrix4c(C(0.0, -g) * jy2)).exp();
        const auto u = jy_squared_gate(g);
        CAPTURE(g);
        CHECK(distance(u.matrix(), ref) < 1e-10);
        CHECK(unitarity_defect(MatrixXc(u.matrix())) < 1e-13);
        CHECK(distance(u.matrix() * jy_by_hand(), jy_by_hand() * u.matrix()) < 1e-13);
    }
    CHECK(distance(jy_squared_gate(2.0 * kPi).matrix(), Matrix4c::Identity()) < 1e-13);
    CHECK_FALSE(jy_squared_gate(0.4).is_diagonal());
}

TEST_CASE("nontriviality predicate") {
    CHECK(is_nontrivial(phase_gate(-kPi / 2.0)));
    CHECK_FALSE(is_nontrivial(TwoQubitGate::identity()));
    CHECK_FALSE(is_nontrivial(phase_gate(kPi)));
    CHECK_FALSE(is_nontrivial(phase_gate(-kPi)));
    for (int k = -4; k <= 4; ++k) {
        CHECK_FALSE(is_nontrivial(phase_gate(k * kPi)));
        CHECK(is_nontrivial(phase_gate(k * kPi + 0.25)));
    }
    // Jz gates: the invariant is 8 gamma0.
    CHECK_FALSE(is_nontrivial(collective_gate_from_gamma0(SpinConditioner::jz(), kPi / 4.0).gate));
    CHECK_FALSE(is_nontrivial(collective_gate_from_gamma0(SpinConditioner::jz(), -kPi / 2.0).gate));
    CHECK(is_nontrivial(collective_gate_from_gamma0(SpinConditioner::jz(), kPi / 8.0).gate));
    CHECK(is_nontrivial(controlled_z()));
    CHECK_THROWS_AS(is_nontrivial(jy_squared_gate(0.3)), UnsupportedError);
}

TEST_CASE("local phase correction") {
    const auto cz = apply_local_phase_correction(phase_gate(-kPi / 2.0), kPi / 2.0);
    CHECK(distance(cz.matrix(), controlled_z().matrix()) < 1e-15);
    CHECK(gate_fidelity(cz, controlled_z()) > 1.0 - 1e-15);

    const auto g = phase_gate(0.7);
    CHECK(distance(apply_local_phase_correction(g, 0.0).matrix(), g.matrix()) == 0.0);

    const double theta = 0.9;
    const C e = std::polar(1.0, theta);
    CHECK(distance(apply_local_phase_correction(TwoQubitGate::identity(), theta).matrix(), diag4(1.0, e, e, e * e)) <
          1e-15);

    // Matrices without stored phases go through the product path.
    const auto raw = apply_local_phase_correction(TwoQubitGate(phase_gate(-kPi / 2.0).matrix()), kPi / 2.0);
    CHECK(distance(raw.matrix(), controlled_z().matrix()) < 1e-15);
}

TEST_CASE("gate fidelity") {
    const auto u = jy_squared_gate(0.8);
    CHECK(gate_fidelity(u, u) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gate_fidelity(TwoQubitGate::identity(), controlled_z()) == doctest::Approx(0.5).epsilon(1e-15));
    for (double eps : {1e-3, 1e-2, 0.3}) {
        const double expected = std::abs(2.0 + 2.0 * std::polar(1.0, eps)) / 4.0;
        CHECK(gate_fidelity(phase_gate(0.4), phase_gate(0.4 + eps)) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(expected == doctest::Approx(1.0 - eps * eps / 8.0).epsilon(eps * eps * eps * eps));
    }
    Matrix4c scaled = Matrix4c::Identity() * 1.01;
    CHECK_THROWS_AS(gate_fidelity(scaled, Matrix4c::Identity()), ValidationError);
}
