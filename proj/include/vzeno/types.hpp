#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vzeno {

using Complex = std::complex<double>;
using State = Eigen::Vector3cd;   // amplitudes on levels |1>, |2>, |3>
using Mat3 = Eigen::Matrix3cd;

constexpr double kPi = 3.14159265358979323846;

inline State basis_state(int level) {
    State s = State::Zero();
    s(level - 1) = 1.0;
    return s;
}

inline State ground() { return basis_state(1); }
inline State shelf() { return basis_state(2); }
inline State excited() { return basis_state(3); }

/// Small parameters controlling how closely a probe pulse approximates an
/// ideal level measurement: eps_p = Omega2*A3/Omega3^2, eps_r = Omega2/Omega3,
/// eps_a = Omega2/A3.
struct Epsilons {
    double eps_p;
    double eps_r;
    double eps_a;

    double max() const { return std::max(eps_p, std::max(eps_r, eps_a)); }
};

/// Physical constants of the V system: weak rf drive on 1-2 (Rabi frequency
/// omega2), strong probe drive on 1-3 (Rabi frequency omega3), spontaneous
/// decay 3->1 with Einstein coefficient a3. Units hbar = 1; angular
/// frequencies and inverse times share one time unit.
struct VSystemParams {
    double omega2;
    double omega3;
    double a3;

    Epsilons epsilons() const {
        return {omega2 * a3 / (omega3 * omega3), omega2 / omega3, omega2 / a3};
    }

    void validate() const {
        if (!(omega2 > 0.0) || !(omega3 > 0.0) || !(a3 > 0.0))
            throw std::invalid_argument("VSystemParams: omega2, omega3, a3 must be positive");
    }
};

// Error types the CLI maps onto distinct exit codes.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested mean period diverges (measured state is effectively an
/// eigenstate of the stroboscopic evolution).
struct DivergentPeriodError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical machinery fault (eigensolver, root finding, integrator
/// invariant violation). Indicates a bug or pathological input, not a
/// statistical fluctuation.
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace vzeno
