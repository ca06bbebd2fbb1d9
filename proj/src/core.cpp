#include "vzeno/core.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace vzeno {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Mat3 two_level_unitary(double omega2, double duration) {
    if (duration < 0.0)
        throw std::invalid_argument("two_level_unitary: negative duration");
    const double half = 0.5 * omega2 * duration;
    const double c = std::cos(half);
    const double s = std::sin(half);
    Mat3 u = Mat3::Identity();
    u(0, 0) = c;
    u(1, 1) = c;
    u(0, 1) = -kI * s;
    u(1, 0) = -kI * s;
    return u;
}

Mat3 conditional_hamiltonian(const VSystemParams& params, bool probe_on) {
    params.validate();
    Mat3 h = Mat3::Zero();
    h(0, 1) = h(1, 0) = 0.5 * params.omega2;
    if (probe_on) h(0, 2) = h(2, 0) = 0.5 * params.omega3;
    h(2, 2) = -0.5 * kI * params.a3;
    return h;
}

Mat3 expm_dense(const Mat3& m) {
    if (!m.allFinite()) throw NumericsError("expm_dense: non-finite matrix entries");
    // Scale so the norm is < 1/2, then 12-term Taylor and repeated squaring.
    const double norm = m.cwiseAbs().maxCoeff() * 3.0;
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    const Mat3 a = m * scale;
    Mat3 term = Mat3::Identity();
    Mat3 sum = Mat3::Identity();
    for (int k = 1; k <= 12; ++k) {
        term = (term * a) / static_cast<double>(k);
        sum += term;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

Propagator::Propagator(const Mat3& h) : h_(h) {
    if (!h.allFinite()) throw NumericsError("Propagator: non-finite matrix entries");
    Eigen::ComplexEigenSolver<Mat3> solver(-kI * h, /*computeEigenvectors=*/true);
    if (solver.info() == Eigen::Success) {
        lambda_ = solver.eigenvalues();
        v_ = solver.eigenvectors();
        const double det = std::abs(v_.determinant());
        if (det > 1e-8) {
            vinv_ = v_.inverse();
            // Degenerate (Jordan-like) spectra leave the eigenbasis nearly
            // singular; accept it only if it reproduces the generator.
            const Mat3 recon = v_ * lambda_.asDiagonal() * vinv_;
            const double err = (recon + kI * h).cwiseAbs().maxCoeff();
            const double ref = h.cwiseAbs().maxCoeff() + 1.0;
            spectral_ = err <= 1e-10 * ref;
        }
    }
}

State Propagator::apply(const State& psi, double t) const {
    if (t == 0.0) return psi;
    if (spectral_) return from_coefficients(vinv_ * psi, t);
    return expm_dense(-kI * t * h_) * psi;
}

State Propagator::from_coefficients(const Eigen::Vector3cd& coeff, double t) const {
    Eigen::Vector3cd d;
    for (int k = 0; k < 3; ++k) d(k) = coeff(k) * std::exp(lambda_(k) * t);
    return v_ * d;
}

Mat3 Propagator::matrix(double t) const {
    if (!spectral_) return expm_dense(-kI * t * h_);
    Eigen::Vector3cd phase;
    for (int k = 0; k < 3; ++k) phase(k) = std::exp(lambda_(k) * t);
    return v_ * phase.asDiagonal() * vinv_;
}

State conditional_propagate(const State& state, const Mat3& h_cond, double duration) {
    if (duration < 0.0)
        throw std::invalid_argument("conditional_propagate: negative duration");
    Propagator prop(h_cond);
    return prop.apply(state, duration);
}

}  // namespace vzeno
