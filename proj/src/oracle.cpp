#include "geophase/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geophase/error.hpp"
#include "geophase/kernels.hpp"

namespace geophase {

FockSpace::FockSpace(int n_max) : n_max_(n_max) {
    if (n_max < 2) throw ValidationError("Fock truncation n_max must be at least 2");
}

namespace {

constexpr double kBetaTolerance = 1e-12;
constexpr int kEscalationSamples = 512;

// Eigenvalues/eigenvectors of the conditioner, with the computational basis
// used directly for diagonal conditioners so sectors map onto basis states.
void spin_eigenbasis(const SpinConditioner& c, std::array<double, 4>& values, Matrix4c& vectors) {
    if (const auto beta = c.basis_eigenvalues()) {
        values = *beta;
        vectors = Matrix4c::Identity();
        return;
    }
    values = c.eigenvalues();
    vectors = c.eigenvectors();
}

MatrixXc oscillator_hamiltonian(std::complex<double> f, const FockSpace& space) {
    const MatrixXc a = lowering_operator(space.n_max());
    return -I * (f * a.adjoint() - std::conj(f) * a);
}

SectorPropagation propagate_sector(const DriveProfile& drive, double beta, double tau, int steps,
                                   int dim, int columns, int n0) {
    SectorPropagation out;
    out.beta = beta;
    out.overlap.assign(static_cast<std::size_t>(steps) + 1, {1.0, 0.0});
    out.dynamic.assign(static_cast<std::size_t>(steps) + 1, 0.0);

    kernels::ComplexBlock block(dim, columns);
    for (int c = 0; c < columns; ++c) block.set(c, c, 1.0);

    const double dt = tau / steps;
    const bool idle = std::abs(beta) <= kBetaTolerance || tau == 0.0;
    kernels::DisplaceWorkspace ws;
    const int stride = block.stride();
    for (int k = 0; k < steps && !idle; ++k) {
        const double t_mid = (k + 0.5) * dt;
        const std::complex<double> f = beta * drive.f(t_mid);

        // <a> on the tracked column; the energy of the midpoint Hamiltonian is
        // conserved across the step it generates.
        std::complex<double> a_mean{0.0, 0.0};
        for (int n = 0; n + 1 < dim; ++n) {
            const std::complex<double> lo(block.re()[n * stride + n0], block.im()[n * stride + n0]);
            const std::complex<double> hi(block.re()[(n + 1) * stride + n0],
                                          block.im()[(n + 1) * stride + n0]);
            a_mean += std::sqrt(static_cast<double>(n + 1)) * std::conj(lo) * hi;
        }
        const double energy = 2.0 * std::imag(f * std::conj(a_mean));

        kernels::displace_step(block, f * dt, ws);

        const auto idx = static_cast<std::size_t>(k) + 1;
        out.dynamic[idx] = out.dynamic[idx - 1] - dt * energy;
        out.overlap[idx] = block.at(n0, n0);
        const std::complex<double> top = block.at(dim - 1, n0);
        out.leakage = std::max(out.leakage, std::norm(top));
    }

    out.evolution = MatrixXc(dim, columns);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < columns; ++c) out.evolution(r, c) = block.at(r, c);
    }
    out.unitarity_defect =
        (out.evolution.adjoint() * out.evolution - MatrixXc::Identity(columns, columns)).norm();
    return out;
}

}  // namespace

FockSpace choose_fock_space(const DriveProfile& drive, double tau, const OracleSettings& settings) {
    FockSpace requested(settings.n_max);
    if (!settings.auto_escalate || tau <= 0.0) return requested;
    double beta_max = 0.0;
    for (double b : drive.conditioner().eigenvalues()) beta_max = std::max(beta_max, std::abs(b));
    double alpha2 = 0.0;
    for (int k = 0; k <= kEscalationSamples; ++k) {
        const double t = tau * k / kEscalationSamples;
        alpha2 = std::max(alpha2, std::norm(alpha_of_t(drive, t).value()));
    }
    alpha2 *= beta_max * beta_max;
    if (alpha2 <= settings.n_max / 4.0) return requested;
    return FockSpace(static_cast<int>(std::ceil(4.0 * alpha2)));
}

MatrixXc build_hamiltonian(const DriveProfile& drive, double t, const FockSpace& space) {
    const MatrixXc h = oscillator_hamiltonian(drive.f(t), space);
    const Matrix4c& c = drive.conditioner().matrix();
    const Eigen::Index dim = space.dimension();
    MatrixXc out = MatrixXc::Zero(4 * dim, 4 * dim);
    for (int s = 0; s < 4; ++s) {
        for (int r = 0; r < 4; ++r) {
            if (c(s, r) != 0.0) out.block(s * dim, r * dim, dim, dim) = c(s, r) * h;
        }
    }
    return out;
}

FockPropagation propagate(const DriveProfile& drive, double tau, const FockSpace& space, int steps,
                          const PropagateOptions& options) {
    if (steps < 10) throw ValidationError("propagation needs at least 10 steps");
    if (!(tau >= 0.0) || tau > drive.total_duration() * (1.0 + 1e-12)) {
        throw OutOfRangeError("propagation time outside the drive duration");
    }
    const int dim = space.dimension();
    const int columns = options.columns < 0 ? dim : options.columns;
    if (columns < 1 || columns > dim) throw ValidationError("column count outside [1, n_max + 1]");
    if (options.initial_fock < 0 || options.initial_fock >= columns) {
        throw ValidationError("initial Fock state must be one of the propagated columns");
    }

    FockPropagation prop;
    prop.space = space;
    prop.steps = steps;
    prop.tau = tau;
    prop.initial_fock = options.initial_fock;
    prop.times.resize(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) prop.times[static_cast<std::size_t>(k)] = tau * k / steps;

    spin_eigenbasis(drive.conditioner(), prop.eigenvalues, prop.eigenvectors);
    for (std::size_t k = 0; k < 4; ++k) {
        const double beta = prop.eigenvalues[k];
        const auto found = std::find_if(prop.sectors.begin(), prop.sectors.end(), [&](const auto& s) {
            return std::abs(s.beta - beta) <= kBetaTolerance;
        });
        if (found != prop.sectors.end()) {
            prop.sector_of[k] = static_cast<std::size_t>(std::distance(prop.sectors.begin(), found));
            continue;
        }
        prop.sector_of[k] = prop.sectors.size();
        prop.sectors.push_back(propagate_sector(drive, beta, tau, steps, dim, columns, options.initial_fock));
    }
    for (const auto& s : prop.sectors) {
        prop.leakage = std::max(prop.leakage, s.leakage);
        prop.unitarity_defect = std::max(prop.unitarity_defect, s.unitarity_defect);
    }
    if (prop.leakage > options.leakage_threshold) {
        std::ostringstream msg;
        msg << "Fock truncation n_max = " << space.n_max() << " is insufficient: population "
            << prop.leakage << " reached |n_max>; increase n_max";
        throw TruncationError(msg.str());
    }
    return prop;
}

MatrixXc FockPropagation::joint_evolution() const {
    const int dim = space.dimension();
    for (const auto& s : sectors) {
        if (s.evolution.cols() != dim) {
            throw UnsupportedError("joint evolution needs full-block propagation");
        }
    }
    MatrixXc out = MatrixXc::Zero(4 * dim, 4 * dim);
    for (std::size_t k = 0; k < 4; ++k) {
        const Vector4c v = eigenvectors.col(static_cast<Eigen::Index>(k));
        const Matrix4c projector = v * v.adjoint();
        const MatrixXc& u = sectors[sector_of[k]].evolution;
        for (int s = 0; s < 4; ++s) {
            for (int r = 0; r < 4; ++r) {
                if (std::abs(projector(s, r)) > 0.0) {
                    out.block(s * dim, r * dim, dim, dim) += projector(s, r) * u;
                }
            }
        }
    }
    return out;
}

std::complex<double> FockPropagation::overlap(int spin_state, std::size_t step) const {
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t k = 0; k < 4; ++k) {
        const double w = std::norm(eigenvectors(spin_state, static_cast<Eigen::Index>(k)));
        if (w == 0.0) continue;
        sum += w * sectors[sector_of[k]].overlap.at(step);
    }
    return sum;
}

double FockPropagation::dynamic_phase(int spin_state, std::size_t step) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const double w = std::norm(eigenvectors(spin_state, static_cast<Eigen::Index>(k)));
        if (w == 0.0) continue;
        sum += w * sectors[sector_of[k]].dynamic.at(step);
    }
    return sum;
}

std::vector<double> total_phase_series(const FockPropagation& prop, int spin_state) {
    if (spin_state < 0 || spin_state > 3) throw ValidationError("spin basis index must be in 0..3");
    std::vector<double> series(prop.times.size(), 0.0);
    std::complex<double> previous = prop.overlap(spin_state, 0);
    for (std::size_t k = 1; k < series.size(); ++k) {
        const std::complex<double> current = prop.overlap(spin_state, k);
        series[k] = series[k - 1] + std::arg(current * std::conj(previous));
        previous = current;
    }
    return series;
}

double extract_total_phase(const FockPropagation& prop, int spin_state, std::size_t step) {
    if (step >= prop.times.size()) throw OutOfRangeError("step index beyond the propagation grid");
    const double modulus = std::abs(prop.overlap(spin_state, step));
    if (modulus < kMinOverlap) {
        std::ostringstream msg;
        msg << "total phase undefined: overlap modulus " << modulus << " below " << kMinOverlap;
        throw UndefinedPhaseError(msg.str());
    }
    return total_phase_series(prop, spin_state)[step];
}

double extract_total_phase(const FockPropagation& prop, int spin_state) {
    return extract_total_phase(prop, spin_state, prop.times.size() - 1);
}

DisplacementMatrix displacement_matrix(PhasePoint alpha, const FockSpace& space) {
    const MatrixXc a = lowering_operator(space.n_max());
    const std::complex<double> z = alpha.value();
    DisplacementMatrix out;
    out.matrix = expm(z * a.adjoint() - std::conj(z) * a);
    if (std::norm(z) > space.n_max() / 4.0) {
        out.within_validity = false;
        std::ostringstream msg;
        msg << "|alpha|^2 = " << std::norm(z) << " exceeds n_max/4 = " << space.n_max() / 4.0
            << "; truncated displacement is unreliable";
        out.warning = msg.str();
    }
    return out;
}

MagnusCheck verify_magnus_form(const DriveProfile& drive, double tau, const FockSpace& space, int steps) {
    const auto& segs = drive.segments();
    if (segs.size() != 1 || segs[0].kind != DriveSegment::Kind::exponential || segs[0].frequency == 0.0) {
        throw UnsupportedError("Magnus check expects a single constant-amplitude detuned segment");
    }
    // amplitude = -Omega_D e^{i phi_L}, frequency = delta
    const double delta = segs[0].frequency;
    const double omega_d = std::abs(segs[0].amplitude);
    const double phi_l = std::arg(-segs[0].amplitude);
    const double ratio = omega_d / delta;

    MagnusCheck check;
    check.block_size = space.n_max() / 2 + 1;
    check.phase = analytic_total_phase(ratio, delta, tau);
    const double grid[] = {0.0, tau > 0.0 ? tau : 1.0};
    check.alpha = tau > 0.0 ? analytic_trajectory(ratio, delta, phi_l, grid).point(1) : PhasePoint{};

    PropagateOptions options;
    options.columns = check.block_size;
    const auto prop = propagate(drive.with_conditioner(SpinConditioner::odd_parity_projector()), tau, space,
                                steps, options);
    const auto& sector = prop.sectors[prop.sector_of[1]];
    check.leakage = prop.leakage;

    const MatrixXc expected =
        std::polar(1.0, check.phase) * displacement_matrix(check.alpha, space).matrix;
    const int b = check.block_size;
    check.deviation = (sector.evolution.topRows(b) - expected.topLeftCorner(b, b)).norm();
    return check;
}

OraclePhases oracle_phases(const FockPropagation& prop) {
    OraclePhases out;
    const std::size_t last = prop.times.size() - 1;
    for (int s = 0; s < 4; ++s) {
        const auto k = static_cast<std::size_t>(s);
        out.total[k] = extract_total_phase(prop, s);
        out.dynamic[k] = prop.dynamic_phase(s, last);
        out.geometric[k] = out.total[k] - out.dynamic[k];
    }
    return out;
}

}  // namespace geophase
