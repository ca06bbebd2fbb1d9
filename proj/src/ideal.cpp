#include "vzeno/ideal.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace vzeno::ideal {

MeasureResult measure_projective(const State& state, const State& axis, Rng& rng) {
    const Complex overlap = axis.dot(state);  // <axis|state>
    const double p_a = std::norm(overlap);
    // Perp collapse is undefined when the state is the axis up to phase;
    // that branch has probability zero, so take A deterministically.
    if (p_a >= 1.0 - 1e-14) return {Outcome::A, axis};
    if (rng.uniform() < p_a) return {Outcome::A, axis};
    State rest = state - overlap * axis;
    rest.normalize();
    return {Outcome::Perp, rest};
}

OutcomeSequence run_ideal_sequence(const State& psi0, double omega2, double dt,
                                   std::size_t n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("run_ideal_sequence: n must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("run_ideal_sequence: dt must be positive");
    const Mat3 u = two_level_unitary(omega2, dt);
    const State axis = ground();
    OutcomeSequence seq;
    seq.dt = dt;
    seq.outcomes.reserve(n);
    State psi = psi0.normalized();
    for (std::size_t i = 0; i < n; ++i) {
        psi = u * psi;
        auto [outcome, collapsed] = measure_projective(psi, axis, rng);
        seq.outcomes.push_back(outcome);
        psi = collapsed;
    }
    return seq;
}

double sequence_probability(const OutcomeSequence& seq, const State& psi0, double omega2) {
    if (seq.outcomes.empty())
        throw std::invalid_argument("sequence_probability: empty sequence");
    const Mat3 u = two_level_unitary(omega2, seq.dt);
    const State axis = ground();
    State psi = psi0.normalized();
    for (Outcome o : seq.outcomes) {
        psi = u * psi;
        const Complex overlap = axis.dot(psi);
        if (o == Outcome::A)
            psi = overlap * axis;
        else
            psi -= overlap * axis;
    }
    return psi.squaredNorm();
}

double survival_probability(double omega2, double dt, std::size_t n) {
    if (n < 1) throw std::invalid_argument("survival_probability: n must be >= 1");
    const double c2 = std::pow(std::cos(0.5 * omega2 * dt), 2);
    return std::pow(c2, static_cast<double>(n));
}

double mean_period_exact(double omega2, double dt) {
    const double s2 = std::pow(std::sin(0.5 * omega2 * dt), 2);
    if (s2 < 1e-14)
        throw DivergentPeriodError(
            "mean_period_exact: omega2*dt is a multiple of 2 pi; the measured state is an "
            "eigenvector of the stroboscopic map and the period diverges");
    return dt / s2;
}

State initial_perp_state(const Mat3& h, const State& a, double dt) {
    const State evolved = conditional_propagate(a.normalized(), h, dt);
    State perp = evolved - a.dot(evolved) * a;
    const double n = perp.norm();
    if (n < 1e-14)
        throw DivergentPeriodError("initial_perp_state: a is an eigenvector of the propagator");
    return perp / n;
}

std::pair<double, double> mean_period_general(const Mat3& h, const State& a,
                                              const State& phi_perp, double dt) {
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("mean_period_general: h must be Hermitian");
    const State an = a.normalized();
    const double h_mean = an.dot(h * an).real();
    const double h2_mean = (h * an).squaredNorm();
    const double var = h2_mean - h_mean * h_mean;
    const double scale = h.cwiseAbs().maxCoeff();
    if (var <= 1e-12 * scale * scale)
        throw DivergentPeriodError("mean_period_general: a is an eigenvector of h");
    const double t_a = 1.0 / (dt * var);

    const Mat3 p_perp = Mat3::Identity() - an * an.adjoint();
    const Mat3 php = p_perp * h * p_perp;
    const Mat3 m = p_perp * h * h * p_perp - php * php;
    // m is Hermitian and positive semidefinite on range(P); pseudo-invert
    // there, dropping the null directions (the a direction itself, plus any
    // embedding dimensions h never mixes in).
    Eigen::SelfAdjointEigenSolver<Mat3> es(m);
    if (es.info() != Eigen::Success)
        throw NumericsError("mean_period_general: eigensolver failed");
    const double cutoff = 1e-12 * std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
    const Eigen::Vector3cd y = es.eigenvectors().adjoint() * phi_perp.normalized();
    double quad = 0.0;
    double dropped = 0.0;
    for (int k = 0; k < 3; ++k) {
        if (es.eigenvalues()(k) > cutoff)
            quad += std::norm(y(k)) / es.eigenvalues()(k);
        else
            dropped += std::norm(y(k));
    }
    if (dropped > 1e-8)
        throw DivergentPeriodError(
            "mean_period_general: phi_perp overlaps the null space; period diverges");
    return {t_a, quad / dt};
}

IdealPeriodStats period_stats(const OutcomeSequence& seq) {
    // Collect interior (complete) run lengths; first and last runs have an
    // unobserved boundary and are dropped.
    std::vector<std::size_t> run_len;
    std::vector<Outcome> run_kind;
    for (std::size_t i = 0; i < seq.outcomes.size(); ++i) {
        if (run_kind.empty() || seq.outcomes[i] != run_kind.back()) {
            run_kind.push_back(seq.outcomes[i]);
            run_len.push_back(1);
        } else {
            ++run_len.back();
        }
    }
    IdealPeriodStats stats;
    if (run_len.size() < 3) return stats;
    double sum_a = 0.0, sum2_a = 0.0, sum_p = 0.0, sum2_p = 0.0;
    for (std::size_t i = 1; i + 1 < run_len.size(); ++i) {
        const double d = static_cast<double>(run_len[i]) * seq.dt;
        if (run_kind[i] == Outcome::A) {
            sum_a += d;
            sum2_a += d * d;
            ++stats.count_a;
        } else {
            sum_p += d;
            sum2_p += d * d;
            ++stats.count_perp;
        }
    }
    if (stats.count_a > 0) {
        stats.mean_a = sum_a / static_cast<double>(stats.count_a);
        if (stats.count_a > 1) {
            const double var =
                (sum2_a - sum_a * stats.mean_a) / static_cast<double>(stats.count_a - 1);
            stats.se_a = std::sqrt(std::max(var, 0.0) / static_cast<double>(stats.count_a));
        }
    }
    if (stats.count_perp > 0) {
        stats.mean_perp = sum_p / static_cast<double>(stats.count_perp);
        if (stats.count_perp > 1) {
            const double var =
                (sum2_p - sum_p * stats.mean_perp) / static_cast<double>(stats.count_perp - 1);
            stats.se_perp = std::sqrt(std::max(var, 0.0) / static_cast<double>(stats.count_perp));
        }
    }
    return stats;
}

}  // namespace vzeno::ideal
