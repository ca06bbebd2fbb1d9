#pragma once

#include <span>
#include <utility>
#include <vector>

#include "vzeno/core.hpp"

namespace vzeno::bloch {

struct MasterState {
    Mat3 rho;
    double t = 0.0;
};

struct Segment {
    double duration;
    bool probe_on;
};

/// Right-hand side of the V-system master equation:
///   drho/dt = -i [H, rho] + a3 ( |1><3| rho |3><1| - {|3><3|, rho}/2 )
/// with H the Hermitian part of the conditional Hamiltonian. This is the
/// ensemble-level dual of the quantum-jump unraveling with jump operator
/// sqrt(a3) |1><3|.
Mat3 lindblad_rhs(const Mat3& rho, const VSystemParams& params, bool probe_on);

/// Fixed-step RK4 integration across the given segments, sampled at the
/// (sorted, ascending) times in `sample_times`. Step
/// h = min(1/a3, 1/omega3, 2 pi/omega2)/200 unless `max_step` overrides it;
/// steps subdivide so segment boundaries and sample times are hit exactly.
/// Hermiticity, unit trace and positivity are checked at every sample; a
/// violation beyond tolerance aborts with diagnostics.
std::vector<MasterState> integrate_master(const Mat3& rho0, const VSystemParams& params,
                                          std::span<const Segment> segments,
                                          std::span<const double> sample_times,
                                          double max_step = 0.0);

/// Convenience: the sampled master-equation trajectory of a pulse schedule
/// (probe on during pulses, off in the gaps; always on in continuous mode).
std::vector<MasterState> integrate_schedule(const Mat3& rho0, const VSystemParams& params,
                                            double pulse_duration, double gap,
                                            std::span<const double> sample_times);

struct UnravelingComparison {
    double max_deviation;   // elementwise, over grid and matrix entries
    double bound;           // 5 / sqrt(N)
    std::size_t n_trajectories;
    bool within_bound() const { return max_deviation <= bound; }
};

/// Elementwise maximum deviation between a trajectory-ensemble average
/// (already divided by N) and the master-equation states on the same grid.
UnravelingComparison compare_unraveling(std::span<const Mat3> ensemble_avg,
                                        std::span<const MasterState> master,
                                        std::size_t n_trajectories);

}  // namespace vzeno::bloch
