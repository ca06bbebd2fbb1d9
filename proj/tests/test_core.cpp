#include <doctest.h>

#include <cmath>

#include "vzeno/core.hpp"
#include "vzeno/rng.hpp"

using namespace vzeno;

namespace {

State random_state(Rng& rng) {
    State psi;
    for (int k = 0; k < 3; ++k)
        psi(k) = Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    psi.normalize();
    return psi;
}

/// Reference no-emission evolution: RK4 on dpsi/dt = -i H psi at a step far
/// below any physical timescale. Independent of the eigendecomposition path.
State rk4_propagate(const State& psi0, const Mat3& h, double t, int steps) {
    const Complex mi{0.0, -1.0};
    State psi = psi0;
    const double dt = t / steps;
    for (int i = 0; i < steps; ++i) {
        const State k1 = mi * (h * psi);
        const State k2 = mi * (h * (psi + 0.5 * dt * k1));
        const State k3 = mi * (h * (psi + 0.5 * dt * k2));
        const State k4 = mi * (h * (psi + dt * k3));
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

}  // namespace

TEST_CASE("two_level_unitary basics") {
    const Mat3 id = two_level_unitary(1.0, 0.0);
    CHECK((id - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);

    // A pi pulse takes |1> to -i|2>.
    const State out = two_level_unitary(1.0, kPi) * ground();
    CHECK(std::abs(out(0)) < 1e-15);
    CHECK(std::abs(out(1) - Complex(0.0, -1.0)) < 1e-15);
    CHECK(std::abs(out(2)) < 1e-15);

    // Half-way transfer at omega2 t = pi/2.
    const double p = std::norm(shelf().dot(two_level_unitary(1.0, kPi / 2.0) * ground()));
    CHECK(p == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(two_level_unitary(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("two_level_unitary algebra on random inputs") {
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        const double omega = 0.05 + 6.0 * rng.uniform();
        const double t1 = 12.0 * rng.uniform();
        const double t2 = 12.0 * rng.uniform();
        const Mat3 u1 = two_level_unitary(omega, t1);
        REQUIRE((u1 * u1.adjoint() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE((u1 * two_level_unitary(omega, t2) - two_level_unitary(omega, t1 + t2))
                    .cwiseAbs()
                    .maxCoeff() < 1e-12);
        const double s2 = std::pow(std::sin(0.5 * omega * t1), 2);
        REQUIRE(std::abs(std::norm(shelf().dot(u1 * ground())) - s2) < 1e-12);
        REQUIRE(std::abs(std::norm(ground().dot(u1 * shelf())) - s2) < 1e-12);
    }
}

TEST_CASE("conditional_hamiltonian structure") {
    const VSystemParams params{1.0, 40.0, 20.0};
    const Mat3 h_off = conditional_hamiltonian(params, false);
    CHECK(h_off(0, 1) == Complex(0.5, 0.0));
    CHECK(h_off(1, 0) == Complex(0.5, 0.0));
    CHECK(h_off(0, 2) == Complex(0.0, 0.0));
    CHECK(h_off(2, 2) == Complex(0.0, -10.0));

    const Mat3 h_on = conditional_hamiltonian(params, true);
    CHECK(h_on(0, 2) == Complex(20.0, 0.0));
    CHECK(h_on(2, 0) == Complex(20.0, 0.0));

    // Anti-Hermitian part is -(i/2) a3 |3><3| exactly.
    const Mat3 anti = 0.5 * (h_on - h_on.adjoint());
    Mat3 expected = Mat3::Zero();
    expected(2, 2) = Complex(0.0, -0.5 * params.a3);
    CHECK((anti - expected).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(conditional_hamiltonian({0.0, 1.0, 1.0}, true), std::invalid_argument);
}

TEST_CASE("conditional_propagate closed forms") {
    const VSystemParams params{1.0, 40.0, 20.0};
    const Mat3 h_on = conditional_hamiltonian(params, true);

    const State same = conditional_propagate(shelf(), h_on, 0.0);
    CHECK((same - shelf()).cwiseAbs().maxCoeff() == 0.0);

    // Decoupled decay: bare -(i/2) a3 |3><3| empties |3> as exp(-a3 t / 2).
    Mat3 h_decay = Mat3::Zero();
    h_decay(2, 2) = Complex(0.0, -0.5 * params.a3);
    const State decayed = conditional_propagate(excited(), h_decay, 0.1);
    CHECK(std::abs(decayed(2)) == doctest::Approx(std::exp(-0.5 * params.a3 * 0.1)).epsilon(1e-12));
    CHECK(decayed.squaredNorm() == doctest::Approx(std::exp(-params.a3 * 0.1)).epsilon(1e-12));

    CHECK_THROWS_AS(conditional_propagate(ground(), h_on, -1.0), std::invalid_argument);
    Mat3 bad = h_on;
    bad(0, 0) = Complex(std::nan(""), 0.0);
    CHECK_THROWS_AS(conditional_propagate(ground(), bad, 1.0), NumericsError);
}

TEST_CASE("conditional_propagate vs RK4 oracle, norm monotone") {
    const VSystemParams params{1.0, 40.0, 20.0};
    const Mat3 h_on = conditional_hamiltonian(params, true);
    const Propagator prop(h_on);
    REQUIRE(prop.spectral());
    Rng rng(71);
    for (int i = 0; i < 1000; ++i) {
        const State psi = random_state(rng);
        const double t = 0.3 * rng.uniform();
        const State fast = prop.apply(psi, t);
        const State slow = rk4_propagate(psi, h_on, t, 2000);
        REQUIRE((fast - slow).cwiseAbs().maxCoeff() < 1e-8);
        // Norm can only shrink, and only through the decay channel.
        double prev = 1.0;
        for (int k = 1; k <= 8; ++k) {
            const double n2 = prop.apply(psi, t * k / 8.0).squaredNorm();
            REQUIRE(n2 <= prev + 1e-12);
            prev = n2;
        }
    }
}

TEST_CASE("no-emission norm factorizes over sub-intervals") {
    const VSystemParams params{1.0, 40.0, 20.0};
    const Propagator prop(conditional_hamiltonian(params, true));
    Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        const State psi = random_state(rng);
        const double t1 = 0.4 * rng.uniform();
        const double t2 = 0.4 * rng.uniform();
        const double whole = prop.apply(psi, t1 + t2).squaredNorm();
        State mid = prop.apply(psi, t1);
        const double n1 = mid.squaredNorm();
        mid.normalize();
        REQUIRE(std::abs(whole - n1 * prop.apply(mid, t2).squaredNorm()) < 1e-10);
    }
}

TEST_CASE("propagator falls back cleanly on a defective spectrum") {
    // omega3 = a3/2 makes the driven 1-3 block a Jordan block (critical
    // damping), where no eigenbasis exists.
    const VSystemParams params{1e-9, 10.0, 20.0};
    const Mat3 h = conditional_hamiltonian(params, true);
    const Propagator prop(h);
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        const State psi = random_state(rng);
        const double t = 0.5 * rng.uniform();
        const State via_prop = prop.apply(psi, t);
        const State via_rk4 = rk4_propagate(psi, h, t, 4000);
        REQUIRE((via_prop - via_rk4).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("expm_dense agrees with the spectral propagator") {
    const VSystemParams params{1.0, 40.0, 20.0};
    const Mat3 h = conditional_hamiltonian(params, true);
    const Propagator prop(h);
    const Complex mi{0.0, -1.0};
    for (double t : {0.01, 0.3, 1.0, 2.5}) {
        const Mat3 dense = expm_dense(mi * t * h);
        REQUIRE((dense - prop.matrix(t)).cwiseAbs().maxCoeff() < 1e-11);
    }
}
