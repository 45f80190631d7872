#pragma once

#include <complex>

#include <Eigen/Dense>

namespace geophase {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using Vector4c = Eigen::Matrix<cplx, 4, 1>;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Dense matrix exponential by scaling and squaring with a diagonal [13/13]
/// Pade approximant (Higham 2005 theta values). Works for any square complex
/// matrix; accuracy is backward-stable to roughly machine precision.
MatrixXc expm(const MatrixXc& a);

/// Frobenius norm of U^dagger U - 1.
double unitarity_defect(const MatrixXc& u);

/// Frobenius norm of H - H^dagger.
double hermiticity_defect(const MatrixXc& h);

/// Truncated annihilation operator on span{|0>, ..., |n_max>}.
MatrixXc lowering_operator(int n_max);

/// (e^z - 1) / z, accurate for small |z|.
cplx expm1_over(cplx z);

}  // namespace geophase
