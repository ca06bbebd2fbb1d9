#include "vzeno/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace vzeno::bloch {

Mat3 lindblad_rhs(const Mat3& rho, const VSystemParams& params, bool probe_on) {
    const Mat3 h_cond = conditional_hamiltonian(params, probe_on);
    const Mat3 h = 0.5 * (h_cond + h_cond.adjoint());  // Hermitian (driving) part
    const Complex i{0.0, 1.0};
    Mat3 out = -i * (h * rho - rho * h);
    const double a3 = params.a3;
    // Jump operator sqrt(a3) |1><3|: feeding of rho11 plus damping of the
    // excited population and its coherences.
    out(0, 0) += a3 * rho(2, 2);
    out(0, 2) -= 0.5 * a3 * rho(0, 2);
    out(2, 0) -= 0.5 * a3 * rho(2, 0);
    out(1, 2) -= 0.5 * a3 * rho(1, 2);
    out(2, 1) -= 0.5 * a3 * rho(2, 1);
    out(2, 2) -= a3 * rho(2, 2);
    return out;
}

namespace {

void check_invariants(const Mat3& rho, double t) {
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    const double trace_err = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (rho + rho.adjoint()));
    const double min_eig = es.eigenvalues().minCoeff();
    if (herm > 1e-10 || trace_err > 1e-10 || min_eig < -1e-8) {
        std::ostringstream msg;
        msg << "integrate_master: invariant violation at t = " << t << " (hermiticity "
            << herm << ", trace error " << trace_err << ", min eigenvalue " << min_eig << ")";
        throw NumericsError(msg.str());
    }
}

Mat3 rk4_step(const Mat3& rho, const VSystemParams& params, bool probe_on, double h) {
    const Mat3 k1 = lindblad_rhs(rho, params, probe_on);
    const Mat3 k2 = lindblad_rhs(rho + 0.5 * h * k1, params, probe_on);
    const Mat3 k3 = lindblad_rhs(rho + 0.5 * h * k2, params, probe_on);
    const Mat3 k4 = lindblad_rhs(rho + h * k3, params, probe_on);
    return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integrate over [0, span] with uniform sub-steps no larger than h_max.
Mat3 advance(Mat3 rho, const VSystemParams& params, bool probe_on, double span, double h_max) {
    if (span <= 0.0) return rho;
    const auto n = static_cast<std::size_t>(std::ceil(span / h_max - 1e-12));
    const double h = span / static_cast<double>(std::max<std::size_t>(n, 1));
    for (std::size_t i = 0; i < std::max<std::size_t>(n, 1); ++i)
        rho = rk4_step(rho, params, probe_on, h);
    return rho;
}

}  // namespace

std::vector<MasterState> integrate_master(const Mat3& rho0, const VSystemParams& params,
                                          std::span<const Segment> segments,
                                          std::span<const double> sample_times,
                                          double max_step) {
    params.validate();
    check_invariants(rho0, 0.0);
    const double h_max =
        max_step > 0.0
            ? max_step
            : std::min({1.0 / params.a3, 1.0 / params.omega3, 2.0 * kPi / params.omega2}) / 200.0;

    std::vector<MasterState> samples;
    samples.reserve(sample_times.size());
    Mat3 rho = rho0;
    double t = 0.0;
    std::size_t next_sample = 0;
    const double slack = 1e-12;

    auto emit_samples_up_to = [&](double t_end, const VSystemParams& p, bool on) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t_end + slack) {
            const double ts = sample_times[next_sample];
            rho = advance(rho, p, on, ts - t, h_max);
            t = ts;
            check_invariants(rho, t);
            samples.push_back({rho, t});
            ++next_sample;
        }
        rho = advance(rho, p, on, t_end - t, h_max);
        t = t_end;
    };

    for (const auto& seg : segments) emit_samples_up_to(t + seg.duration, params, seg.probe_on);
    return samples;
}

std::vector<MasterState> integrate_schedule(const Mat3& rho0, const VSystemParams& params,
                                            double pulse_duration, double gap,
                                            std::span<const double> sample_times) {
    const double t_last = sample_times.empty() ? 0.0 : sample_times.back();
    std::vector<Segment> segments;
    if (gap <= 0.0) {
        segments.push_back({t_last, true});
    } else {
        double t = 0.0;
        while (t <= t_last * (1.0 + 1e-12)) {
            segments.push_back({pulse_duration, true});
            segments.push_back({gap, false});
            t += pulse_duration + gap;
        }
    }
    return integrate_master(rho0, params, segments, sample_times);
}

UnravelingComparison compare_unraveling(std::span<const Mat3> ensemble_avg,
                                        std::span<const MasterState> master,
                                        std::size_t n_trajectories) {
    if (ensemble_avg.size() != master.size())
        throw std::invalid_argument("compare_unraveling: grid size mismatch");
    double max_dev = 0.0;
    for (std::size_t i = 0; i < master.size(); ++i)
        max_dev = std::max(max_dev, (ensemble_avg[i] - master[i].rho).cwiseAbs().maxCoeff());
    return {max_dev, 5.0 / std::sqrt(static_cast<double>(n_trajectories)), n_trajectories};
}

}  // namespace vzeno::bloch
