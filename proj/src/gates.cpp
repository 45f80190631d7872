#include "geophase/gates.hpp"

#include <cmath>
#include <sstream>

#include "geophase/error.hpp"

namespace geophase {

double wrap_phase(double angle) {
    double w = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

TwoQubitGate::TwoQubitGate(const Matrix4c& matrix, std::optional<std::array<double, 4>> phases)
    : matrix_(matrix), phases_(phases) {
    if (!matrix_.allFinite()) throw ValidationError("gate matrix has non-finite entries");
    const double defect = unitarity_defect(MatrixXc(matrix_));
    if (defect > kUnitarityTolerance) {
        std::ostringstream msg;
        msg << "gate matrix is not unitary (defect " << defect << ")";
        throw ValidationError(msg.str());
    }
    if (phases_) {
        for (std::size_t k = 0; k < 4; ++k) {
            (*phases_)[k] = wrap_phase((*phases_)[k]);
            const auto expected = std::polar(1.0, (*phases_)[k]);
            const int i = static_cast<int>(k);
            if (std::abs(matrix_(i, i) - expected) > 1e-10) {
                throw ValidationError("gate phases are inconsistent with its diagonal");
            }
        }
        if (!is_diagonal(1e-10)) throw ValidationError("gate with phases must be diagonal");
    }
}

TwoQubitGate TwoQubitGate::identity() { return diagonal({0.0, 0.0, 0.0, 0.0}); }

TwoQubitGate TwoQubitGate::diagonal(const std::array<double, 4>& phases) {
    Matrix4c m = Matrix4c::Zero();
    for (int k = 0; k < 4; ++k) m(k, k) = std::polar(1.0, phases[static_cast<std::size_t>(k)]);
    return TwoQubitGate(m, phases);
}

bool TwoQubitGate::is_diagonal(double tolerance) const {
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i != j && std::abs(matrix_(i, j)) > tolerance) return false;
        }
    }
    return true;
}

std::array<double, 4> TwoQubitGate::diagonal_phases() const {
    if (phases_) return *phases_;
    if (!is_diagonal(1e-10)) throw UnsupportedError("gate is not diagonal in the computational basis");
    std::array<double, 4> out{};
    for (int k = 0; k < 4; ++k) out[static_cast<std::size_t>(k)] = std::arg(matrix_(k, k));
    return out;
}

TwoQubitGate phase_gate(double gamma) { return TwoQubitGate::diagonal({0.0, gamma, gamma, 0.0}); }

TwoQubitGate controlled_z() { return TwoQubitGate::diagonal({0.0, 0.0, 0.0, kPi}); }

CollectiveGate collective_gate_from_gamma0(const SpinConditioner& conditioner, double gamma0) {
    const auto beta = conditioner.basis_eigenvalues();
    if (!beta) {
        throw UnsupportedError("collective gate needs a diagonal conditioner, got " +
                               std::string(conditioner.name()));
    }
    CollectiveGate out;
    out.gamma0 = gamma0;
    std::array<double, 4> phases{};
    for (std::size_t k = 0; k < 4; ++k) {
        const double b2 = (*beta)[k] * (*beta)[k];
        phases[k] = b2 * gamma0;
        out.per_state[k] = decompose(-b2 * gamma0, 2.0 * b2 * gamma0);
    }
    out.gate = TwoQubitGate::diagonal(phases);
    return out;
}

CollectiveGate collective_gate(const DriveProfile& drive, double tau, const SpinConditioner& conditioner,
                               int samples, double closure_tolerance) {
    if (!conditioner.is_diagonal()) {
        throw UnsupportedError("collective gate needs a diagonal conditioner, got " +
                               std::string(conditioner.name()));
    }
    const double residual = closure_residual(drive, tau);
    if (residual > closure_tolerance) {
        std::ostringstream msg;
        msg << "drive path is not closed at tau = " << tau << " (residual " << residual << ")";
        throw NotClosedError(msg.str(), residual);
    }
    auto out = collective_gate_from_gamma0(conditioner, gamma0(drive, tau, samples));
    out.closure_residual = residual;
    return out;
}

TwoQubitGate jy_squared_gate(double gamma) {
    const Matrix4c jy = SpinConditioner::jy().matrix();
    const Matrix4c jy2 = jy * jy;
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(jy2);
    Vector4c phases;
    for (int k = 0; k < 4; ++k) phases(k) = std::polar(1.0, -gamma * solver.eigenvalues()(k));
    const Matrix4c& v = solver.eigenvectors();
    return TwoQubitGate(v * phases.asDiagonal() * v.adjoint());
}

bool is_nontrivial(const TwoQubitGate& gate, double tolerance) {
    if (!gate.phases() && !gate.is_diagonal(1e-10)) {
        throw UnsupportedError("nontriviality is only defined for diagonal gates");
    }
    const auto p = gate.diagonal_phases();
    return std::abs(wrap_phase(p[0] + p[3] - p[1] - p[2])) > tolerance;
}

TwoQubitGate apply_local_phase_correction(const TwoQubitGate& gate, double theta) {
    const std::array<double, 4> local = {0.0, theta, theta, 2.0 * theta};
    Matrix4c r = Matrix4c::Zero();
    for (int k = 0; k < 4; ++k) r(k, k) = std::polar(1.0, local[static_cast<std::size_t>(k)]);
    if (gate.phases()) {
        auto phases = *gate.phases();
        for (std::size_t k = 0; k < 4; ++k) phases[k] += local[k];
        // Rebuild from exact phases so the diagonal is not a rounded product.
        return TwoQubitGate::diagonal(phases);
    }
    return TwoQubitGate(r * gate.matrix());
}

double gate_fidelity(const Matrix4c& u, const Matrix4c& v) {
    if (unitarity_defect(MatrixXc(u)) > kUnitarityTolerance ||
        unitarity_defect(MatrixXc(v)) > kUnitarityTolerance) {
        throw ValidationError("gate fidelity requires unitary inputs");
    }
    return std::abs((u.adjoint() * v).trace()) / 4.0;
}

double gate_fidelity(const TwoQubitGate& u, const TwoQubitGate& v) {
    return gate_fidelity(u.matrix(), v.matrix());
}

}  // namespace geophase
