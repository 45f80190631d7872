#include "geophase/linalg.hpp"

#include <array>
#include <cmath>

namespace geophase {

namespace {

// Pade [13/13] coefficients.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

// Lower-degree approximants, used when the 1-norm is already small.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const MatrixXc& a) {
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

template <std::size_t N>
MatrixXc pade_low(const MatrixXc& a, const std::array<double, N>& b) {
    const Eigen::Index n = a.rows();
    const MatrixXc id = MatrixXc::Identity(n, n);
    const MatrixXc a2 = a * a;
    MatrixXc u_even = b[1] * id;
    MatrixXc v = b[0] * id;
    MatrixXc power = id;
    for (std::size_t k = 2; k < N; k += 2) {
        power = power * a2;
        u_even += b[k + 1] * power;
        v += b[k] * power;
    }
    const MatrixXc u = a * u_even;
    return (v - u).partialPivLu().solve(v + u);
}

MatrixXc pade13(const MatrixXc& a) {
    const auto& b = kPade13;
    const Eigen::Index n = a.rows();
    const MatrixXc id = MatrixXc::Identity(n, n);
    const MatrixXc a2 = a * a;
    const MatrixXc a4 = a2 * a2;
    const MatrixXc a6 = a4 * a2;
    const MatrixXc u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
    const MatrixXc u = a * (u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const MatrixXc v_inner = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
    const MatrixXc v = v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

MatrixXc expm(const MatrixXc& a) {
    if (a.size() == 0) return a;
    const double norm = one_norm(a);
    if (norm <= kTheta3) return pade_low(a, kPade3);
    if (norm <= kTheta5) return pade_low(a, kPade5);
    if (norm <= kTheta7) return pade_low(a, kPade7);
    if (norm <= kTheta9) return pade_low(a, kPade9);

    int squarings = 0;
    if (norm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    }
    MatrixXc result = pade13(a / std::ldexp(1.0, squarings));
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

double unitarity_defect(const MatrixXc& u) {
    return (u.adjoint() * u - MatrixXc::Identity(u.cols(), u.cols())).norm();
}

double hermiticity_defect(const MatrixXc& h) {
    return (h - h.adjoint()).norm();
}

MatrixXc lowering_operator(int n_max) {
    const int dim = n_max + 1;
    MatrixXc a = MatrixXc::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

cplx expm1_over(cplx z) {
    if (std::abs(z) < 1e-3) {
        // 1 + z/2 + z^2/6 + z^3/24 + z^4/120
        return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
    }
    // e^z - 1 without cancellation: expm1(x) cos y - 2 sin^2(y/2) + i e^x sin y.
    const double x = z.real(), y = z.imag();
    const double s = std::sin(0.5 * y);
    const cplx num(std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y));
    return num / z;
}

}  // namespace geophase
