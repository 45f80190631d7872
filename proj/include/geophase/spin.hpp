#pragma once

// Two-qubit spin operators that multiply the oscillator drive.
//
// Computational basis order is fixed throughout the library as
//     0: |dd>, 1: |du>, 2: |ud>, 3: |uu>       (d = down, u = up)
// with qubit 1 the left tensor factor and sigma_z |u> = +|u>.

#include <array>
#include <optional>
#include <string_view>

#include "geophase/linalg.hpp"

namespace geophase {

inline constexpr std::array<std::string_view, 4> kBasisLabels = {"dd", "du", "ud", "uu"};

enum class ConditionerKind { odd_parity_projector, jz, jy };

class SpinConditioner {
public:
    explicit SpinConditioner(ConditionerKind kind);

    static SpinConditioner odd_parity_projector() { return SpinConditioner(ConditionerKind::odd_parity_projector); }
    static SpinConditioner jz() { return SpinConditioner(ConditionerKind::jz); }
    static SpinConditioner jy() { return SpinConditioner(ConditionerKind::jy); }

    /// Accepts "odd-parity-projector" (alias "parity"), "jz", "jy".
    static SpinConditioner from_name(std::string_view name);

    ConditionerKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept;
    const Matrix4c& matrix() const noexcept { return matrix_; }
    bool is_diagonal() const noexcept { return kind_ != ConditionerKind::jy; }

    /// beta_jl per computational basis state; empty for non-diagonal conditioners.
    std::optional<std::array<double, 4>> basis_eigenvalues() const;

    /// Real eigenvalues (ascending) and orthonormal eigenvectors as columns.
    const std::array<double, 4>& eigenvalues() const noexcept { return eigenvalues_; }
    const Matrix4c& eigenvectors() const noexcept { return eigenvectors_; }

    friend bool operator==(const SpinConditioner& a, const SpinConditioner& b) { return a.kind_ == b.kind_; }

private:
    ConditionerKind kind_;
    Matrix4c matrix_;
    std::array<double, 4> eigenvalues_{};
    Matrix4c eigenvectors_;
};

/// Single-qubit Pauli matrices in the (|d>, |u>) ordering.
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();

/// sigma^(1) + sigma^(2) for a single-qubit operator sigma.
Matrix4c collective(const Eigen::Matrix2cd& sigma);

}  // namespace geophase
