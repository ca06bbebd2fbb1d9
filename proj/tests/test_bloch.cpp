#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "vzeno/bloch.hpp"
#include "vzeno/rng.hpp"

using namespace vzeno;

namespace {

const VSystemParams kRegime{1.0, 40.0, 20.0};

Mat3 random_hermitian(Rng& rng) {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            m(r, c) = Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    return 0.5 * (m + m.adjoint());
}

}  // namespace

TEST_CASE("lindblad_rhs: decay feeding, trace and hermiticity") {
    const Mat3 d = bloch::lindblad_rhs(excited() * excited().adjoint(), kRegime, false);
    CHECK(d(2, 2).real() == doctest::Approx(-kRegime.a3).epsilon(1e-14));
    CHECK(d(0, 0).real() == doctest::Approx(kRegime.a3).epsilon(1e-14));

    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const Mat3 rho = random_hermitian(rng);
        const Mat3 out = bloch::lindblad_rhs(rho, kRegime, i % 2 == 0);
        REQUIRE(std::abs(out.trace()) < 1e-12);
        REQUIRE((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("integrate_master: resonance-fluorescence steady state") {
    // Negligible rf leaves the driven, decaying 1-3 pair; its stationary
    // excited population is omega3^2 / (a3^2 + 2 omega3^2).
    const VSystemParams pair{1e-9, 40.0, 20.0};
    Mat3 rho0 = Mat3::Zero();
    rho0(0, 0) = 1.0;
    const std::vector<double> grid{8.0};
    const std::vector<bloch::Segment> segs{{8.0, true}};
    const auto out = bloch::integrate_master(rho0, pair, segs, grid);
    const double expect =
        pair.omega3 * pair.omega3 / (pair.a3 * pair.a3 + 2.0 * pair.omega3 * pair.omega3);
    CHECK(out[0].rho(2, 2).real() == doctest::Approx(expect).epsilon(1e-6));
    CHECK(out[0].rho(1, 1).real() < 1e-6);
}

TEST_CASE("integrate_master: fourth-order step convergence") {
    Mat3 rho0 = Mat3::Zero();
    rho0(0, 0) = 1.0;
    const std::vector<double> grid{2.0};
    const std::vector<bloch::Segment> segs{{2.0, true}};
    const double h =
        std::min({1.0 / kRegime.a3, 1.0 / kRegime.omega3, 2.0 * kPi / kRegime.omega2}) / 200.0;
    const auto coarse = bloch::integrate_master(rho0, kRegime, segs, grid);
    const auto fine = bloch::integrate_master(rho0, kRegime, segs, grid, 0.5 * h);
    CHECK((coarse[0].rho - fine[0].rho).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("integrate_master: positivity and trace on a pulsed schedule") {
    Mat3 rho0 = Mat3::Zero();
    rho0(0, 0) = 1.0;
    std::vector<double> grid;
    for (int i = 1; i <= 30; ++i) grid.push_back(0.2 * i);
    // Invariants are checked internally at every sample; a throw fails here.
    const auto samples = bloch::integrate_schedule(rho0, kRegime, 1.0, 1.0, grid);
    REQUIRE(samples.size() == grid.size());
    for (const auto& s : samples) {
        Eigen::SelfAdjointEigenSolver<Mat3> es(s.rho);
        REQUIRE(es.eigenvalues().minCoeff() > -1e-8);
        REQUIRE(std::abs(s.rho.trace().real() - 1.0) < 1e-10);
    }
    // Sample times are honored exactly.
    CHECK(samples.front().t == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(samples.back().t == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("integrate_master rejects a broken state") {
    Mat3 rho0 = Mat3::Zero();
    rho0(0, 0) = 1.4;  // trace > 1
    const std::vector<double> grid{1.0};
    const std::vector<bloch::Segment> segs{{1.0, true}};
    CHECK_THROWS_AS(bloch::integrate_master(rho0, kRegime, segs, grid), NumericsError);
}

TEST_CASE("compare_unraveling bookkeeping") {
    std::vector<bloch::MasterState> master(3);
    std::vector<Mat3> avg(3);
    for (int i = 0; i < 3; ++i) {
        master[i].rho = Mat3::Identity() / 3.0;
        master[i].t = i;
        avg[i] = Mat3::Identity() / 3.0;
    }
    avg[1](0, 0) += 0.01;
    const auto cmp = bloch::compare_unraveling(avg, master, 10000);
    CHECK(cmp.max_deviation == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(cmp.bound == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(cmp.within_bound());

    // A single trajectory is far from the ensemble; the bound reflects it.
    const auto single = bloch::compare_unraveling(avg, master, 1);
    CHECK(single.bound == doctest::Approx(5.0));
    CHECK(single.within_bound());

    std::vector<Mat3> wrong(2);
    CHECK_THROWS_AS(bloch::compare_unraveling(wrong, master, 10), std::invalid_argument);
}
