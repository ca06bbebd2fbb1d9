#pragma once

#include "vzeno/types.hpp"

namespace vzeno {

/// Resonant rotating-frame propagator of the rf-driven 1-2 transition over
/// `duration`, embedded as the identity on level 3:
///   cos(omega2 t / 2) on the 1-2 diagonal, -i sin(omega2 t / 2) off it.
Mat3 two_level_unitary(double omega2, double duration);

/// Non-Hermitian Hamiltonian generating the no-emission evolution of the
/// quantum jump unraveling:
///   (omega2/2)(|1><2| + |2><1|) + probe_on (omega3/2)(|1><3| + |3><1|)
///   - (i/2) a3 |3><3|.
/// The rf field is on permanently; the probe only during pulses.
Mat3 conditional_hamiltonian(const VSystemParams& params, bool probe_on);

/// exp(-i H t) for a fixed conditional Hamiltonian, precomputed once via
/// eigendecomposition so repeated evaluations at arbitrary t are cheap.
/// Falls back to dense scaling-and-squaring when the spectrum is too
/// degenerate for a well-conditioned eigenbasis.
class Propagator {
  public:
    explicit Propagator(const Mat3& h);

    /// exp(-i H t) psi, unnormalized.
    State apply(const State& psi, double t) const;

    Mat3 matrix(double t) const;

    bool spectral() const { return spectral_; }

    /// Eigenvalues of -iH (evolution factors are exp(lambda t)); only
    /// meaningful on the spectral path.
    const Eigen::Vector3cd& log_eigenvalues() const { return lambda_; }

    /// Coordinates of psi in the eigenbasis, for samplers that evaluate
    /// many times from one initial state.
    Eigen::Vector3cd coefficients(const State& psi) const { return vinv_ * psi; }

    State from_coefficients(const Eigen::Vector3cd& coeff, double t) const;

  private:
    Mat3 h_;
    bool spectral_ = false;
    Eigen::Vector3cd lambda_;  // eigenvalues of -iH
    Mat3 v_;                   // eigenvectors as columns
    Mat3 vinv_;
};

/// Dense matrix exponential by scaling and squaring with a truncated Taylor
/// series; reference path for degenerate spectra and for cross-checks.
Mat3 expm_dense(const Mat3& m);

/// No-emission evolution of `state` over `duration`: exp(-i h_cond t) state.
/// The result is unnormalized; its squared norm is the probability of no
/// photon emission over [0, duration] given the (normalized) input.
State conditional_propagate(const State& state, const Mat3& h_cond, double duration);

}  // namespace vzeno
