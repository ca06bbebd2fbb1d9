#include <doctest.h>

#include <cmath>

#include "vzeno/analytics.hpp"

using namespace vzeno;
using namespace vzeno::analytics;

namespace {

// Effectively vanishing epsilons: eps_p = 1e-12, eps_r = 1e-12, eps_a = 1e-9.
const VSystemParams kTinyEps{1e-9, 1000.0, 1.0};
const VSystemParams kRegime{1.0, 40.0, 20.0};

}  // namespace

TEST_CASE("transition probabilities reduce to the projection result at small eps") {
    // omega2 dt = pi/2 gives c = 0 and p = q = 1/2.
    const double dt = 0.5 * kPi / kTinyEps.omega2;
    const auto probs = transition_probs(kTinyEps, dt, 1.0);
    CHECK(probs.p == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(probs.q == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(probs.p + probs.q == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_FALSE(probs.clamped);
}

TEST_CASE("small-gap quadratic law") {
    // p -> (omega2 dt)^2 / 4 as eps -> 0, up to the quartic rotation term
    // (1 - cos x)/2 - x^2/4 = -x^4/48 + ...
    const double dt = 0.2 / kTinyEps.omega2;
    const auto probs = transition_probs(kTinyEps, dt, 1.0);
    CHECK(std::abs(probs.p - 0.01) < 5e-5);

    // At finite eps the deviation is O(eps).
    const auto regime = transition_probs(kRegime, 0.2, 1.0);
    CHECK(std::abs(regime.p - 0.01) < 2.0 * kRegime.epsilons().max());
}

TEST_CASE("transition probabilities at the regime parameters") {
    // Frozen from an independent high-precision evaluation.
    const auto probs = transition_probs(kRegime, 1.0, 1.0);
    CHECK(probs.p == doctest::Approx(0.23006357574911148).epsilon(1e-13));
    CHECK(probs.q == doctest::Approx(0.73948748890219657).epsilon(1e-13));
    // Leading term (1 - cos 1)/2 = 0.2298...; the eps terms shift it upward.
    CHECK(std::abs(probs.p - 0.5 * (1.0 - std::cos(1.0))) < 2.0e-3);
    // q deviates from 1 - p at first order in the epsilons.
    const double asym = std::abs(probs.p + probs.q - 1.0);
    CHECK(asym > 1e-3);
    CHECK(asym < 5.0 * kRegime.epsilons().max());
}

TEST_CASE("corrected probabilities: residue term and limits") {
    const auto plain = transition_probs(kRegime, 1.0, 1.0);
    const auto corr = transition_probs_corrected(kRegime, 1.0, 1.0);
    CHECK(corr.q == plain.q);  // q is unchanged by the incomplete-decay term
    CHECK(corr.p == doctest::Approx(0.23006315127440473).epsilon(1e-13));

    // Large gap: the residue dies as exp(-a3 dt / 2).
    const auto far = transition_probs_corrected(kRegime, 10.0 / kRegime.a3, 1.0);
    const auto far_plain = transition_probs(kRegime, 10.0 / kRegime.a3, 1.0);
    CHECK(std::abs(far.p - far_plain.p) < 2.0 * kRegime.epsilons().eps_r * std::exp(-5.0));

    // s = 0 (omega2 dt = pi): the correction vanishes identically.
    const auto at_pi = transition_probs_corrected(kRegime, kPi, 1.0);
    const auto at_pi_plain = transition_probs(kRegime, kPi, 1.0);
    CHECK(at_pi.p == at_pi_plain.p);

    // gap -> 0 limits: p~ -> eps_p omega2 dtp a3^2/(a3^2 + 2 omega3^2),
    //                  q~ -> 1 - eps_p omega2 dtp.
    const auto zero = transition_probs_corrected(kRegime, 1e-13, 1.0);
    const auto eps = kRegime.epsilons();
    const double denom = kRegime.a3 * kRegime.a3 + 2.0 * kRegime.omega3 * kRegime.omega3;
    CHECK(zero.p ==
          doctest::Approx(eps.eps_p * 1.0 * kRegime.a3 * kRegime.a3 / denom).epsilon(1e-9));
    CHECK(zero.q == doctest::Approx(1.0 - eps.eps_p).epsilon(1e-9));
}

TEST_CASE("mean periods from the geometric run-length law") {
    const auto corr = transition_probs_corrected(kRegime, 1.0, 1.0);
    const auto periods = mean_periods(corr, 1.0, 1.0);
    CHECK(periods.t_light == doctest::Approx(8.6932652574793553).epsilon(1e-12));
    CHECK(periods.t_dark == doctest::Approx(7.6771744726269442).epsilon(1e-12));
    // T_L / T_D = (1 - q) / p.
    CHECK(periods.t_light / periods.t_dark ==
          doctest::Approx((1.0 - corr.q) / corr.p).epsilon(1e-12));

    // Closed forms equal their defining series.
    double series_light = 0.0, series_dark = 0.0;
    for (int n = 1; n <= 200; ++n) {
        series_light += 2.0 * n * std::pow(1.0 - corr.p, n - 1) * corr.p;
        series_dark += 2.0 * n * std::pow(corr.q, n - 1) * (1.0 - corr.q);
    }
    CHECK(std::abs(series_light - periods.t_light) < 1e-10);
    CHECK(std::abs(series_dark - periods.t_dark) < 1e-10);

    CHECK_THROWS_AS(mean_periods({0.0, 0.5, false, false}, 1.0, 1.0), DivergentPeriodError);
    CHECK_THROWS_AS(mean_periods({0.5, 1.0, false, false}, 1.0, 1.0), DivergentPeriodError);
}

TEST_CASE("short gaps reproduce the ideal 4/(omega2^2 dt) period") {
    // dtp << dt and tiny eps: the probe-pulse machinery drops out.
    const double dt = 0.05 / kTinyEps.omega2;
    const double dtp = dt / 100.0;
    const auto periods = mean_periods(transition_probs(kTinyEps, dt, dtp), dt, dtp);
    const double ideal = 4.0 / (kTinyEps.omega2 * kTinyEps.omega2 * dt);
    CHECK(periods.t_light == doctest::Approx(ideal).epsilon(0.02));
    CHECK(periods.t_dark == doctest::Approx(ideal).epsilon(0.02));
}

TEST_CASE("continuous-limit periods") {
    const auto lim = continuous_limit_periods(kRegime);
    CHECK(lim.t_light == doctest::Approx(720.0).epsilon(1e-12));
    CHECK(lim.t_dark == doctest::Approx(80.0).epsilon(1e-12));

    const auto lim2 = continuous_limit_periods({1.0, 200.0, 100.0});
    CHECK(lim2.t_light == doctest::Approx(3600.0).epsilon(1e-12));
    CHECK(lim2.t_dark == doctest::Approx(400.0).epsilon(1e-12));

    // T_L / T_D = 1 + 2 (omega3 / a3)^2.
    const double ratio = 1.0 + 2.0 * std::pow(kRegime.omega3 / kRegime.a3, 2);
    CHECK(lim.t_light / lim.t_dark == doctest::Approx(ratio).epsilon(1e-12));
}

TEST_CASE("pulsed periods converge to the continuous limit as the gap closes") {
    const auto lim = continuous_limit_periods(kRegime);
    const double rel_bound = kRegime.epsilons().max() / (kRegime.omega2 * 1.0);
    double prev_light = 0.0;
    for (double dt : {0.5, 0.1, 0.02, 1e-4, 1e-9}) {
        const auto periods = mean_periods(transition_probs_corrected(kRegime, dt, 1.0), dt, 1.0);
        if (dt <= 1e-4) {
            CHECK(std::abs(periods.t_light - lim.t_light) / lim.t_light < rel_bound);
            CHECK(std::abs(periods.t_dark - lim.t_dark) / lim.t_dark < rel_bound);
        }
        CHECK(periods.t_light > 0.9 * prev_light);  // plateau, no 1/dt divergence
        prev_light = periods.t_light;
    }
    CHECK(prev_light < 1.01 * lim.t_light);
}

TEST_CASE("quadratic approximation constant stays modest") {
    // |p - (omega2 dt)^2/4| <= K ((omega2 dt)^4 + eps) on omega2 dt <= 0.3.
    double k_fit = 0.0;
    const double eps = kRegime.epsilons().max();
    for (double rot = 0.02; rot <= 0.3; rot += 0.02) {
        const double dt = rot / kRegime.omega2;
        const auto probs = transition_probs(kRegime, dt, 1.0);
        const double lhs = std::abs(probs.p - 0.25 * rot * rot);
        k_fit = std::max(k_fit, lhs / (rot * rot * rot * rot + eps));
    }
    MESSAGE("fitted K for the small-gap expansion: ", k_fit);
    CHECK(k_fit < 1.0);
}

TEST_CASE("clamping fires outside the perturbative regime and is flagged") {
    // Large pulse angle makes the first-order formula go negative.
    const VSystemParams rough{5.0, 12.0, 6.0};
    const auto probs = transition_probs(rough, 1e-4, 40.0);
    CHECK(probs.clamped);
    CHECK(probs.p >= 0.0);
    CHECK(probs.q <= 1.0);
}
