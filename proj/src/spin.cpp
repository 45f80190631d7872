#include "geophase/spin.hpp"

#include <string>

#include "geophase/error.hpp"

namespace geophase {

Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd s;
    s << 0.0, I, -I, 0.0;
    return s;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd s;
    s << -1.0, 0.0, 0.0, 1.0;
    return s;
}

Matrix4c collective(const Eigen::Matrix2cd& sigma) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Matrix4c out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    out(2 * i + k, 2 * j + l) = sigma(i, j) * id(k, l) + id(i, j) * sigma(k, l);
                }
            }
        }
    }
    return out;
}

SpinConditioner::SpinConditioner(ConditionerKind kind) : kind_(kind) {
    switch (kind) {
        case ConditionerKind::odd_parity_projector:
            matrix_ = Matrix4c::Zero();
            matrix_(1, 1) = 1.0;
            matrix_(2, 2) = 1.0;
            break;
        case ConditionerKind::jz: matrix_ = collective(pauli_z()); break;
        case ConditionerKind::jy: matrix_ = collective(pauli_y()); break;
    }
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(matrix_);
    for (int k = 0; k < 4; ++k) eigenvalues_[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    eigenvectors_ = solver.eigenvectors();
}

SpinConditioner SpinConditioner::from_name(std::string_view name) {
    if (name == "odd-parity-projector" || name == "parity") return odd_parity_projector();
    if (name == "jz") return jz();
    if (name == "jy") return jy();
    throw ValidationError("unknown conditioner '" + std::string(name) +
                          "' (expected odd-parity-projector, jz or jy)");
}

std::string_view SpinConditioner::name() const noexcept {
    switch (kind_) {
        case ConditionerKind::odd_parity_projector: return "odd-parity-projector";
        case ConditionerKind::jz: return "jz";
        case ConditionerKind::jy: return "jy";
    }
    return "";
}

std::optional<std::array<double, 4>> SpinConditioner::basis_eigenvalues() const {
    if (!is_diagonal()) return std::nullopt;
    std::array<double, 4> beta{};
    for (int k = 0; k < 4; ++k) beta[static_cast<std::size_t>(k)] = matrix_(k, k).real();
    return beta;
}

}  // namespace geophase
