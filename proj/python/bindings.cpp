#include <pybind11/pybind11.h>

#include <pybind11/eigen.h>
#include <pybind11/stl.h>

#include "vzeno/analytics.hpp"
#include "vzeno/bloch.hpp"
#include "vzeno/ideal.hpp"
#include "vzeno/io.hpp"
#include "vzeno/jump.hpp"
#include "vzeno/periods.hpp"
#include "vzeno/verify.hpp"

namespace py = pybind11;
using namespace vzeno;

namespace {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    return stream == 0 ? Rng(seed) : Rng::for_stream(seed, stream);
}

}  // namespace

PYBIND11_MODULE(vzeno, m) {
    m.doc() = "Light/dark-period statistics of a laser-driven three-level V atom: "
              "quantum-jump trajectories, projective-measurement sequences, and the "
              "closed-form period formulas.";

    py::register_exception<DivergentPeriodError>(m, "DivergentPeriodError");
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError");

    py::class_<VSystemParams>(m, "VSystemParams")
        .def(py::init<double, double, double>(), py::arg("omega2"), py::arg("omega3"),
             py::arg("a3"))
        .def_readwrite("omega2", &VSystemParams::omega2)
        .def_readwrite("omega3", &VSystemParams::omega3)
        .def_readwrite("a3", &VSystemParams::a3)
        .def("epsilons",
             [](const VSystemParams& p) {
                 const auto e = p.epsilons();
                 return py::make_tuple(e.eps_p, e.eps_r, e.eps_a);
             })
        .def("__repr__", [](const VSystemParams& p) {
            return "VSystemParams(omega2=" + std::to_string(p.omega2) +
                   ", omega3=" + std::to_string(p.omega3) + ", a3=" + std::to_string(p.a3) + ")";
        });

    py::class_<PulseSchedule>(m, "PulseSchedule")
        .def(py::init([](double pulse_duration, double gap, std::size_t n_pulses,
                         double total_duration) {
                 PulseSchedule s{pulse_duration, gap, n_pulses, total_duration};
                 s.validate();
                 return s;
             }),
             py::arg("pulse_duration") = 0.0, py::arg("gap") = 0.0, py::arg("n_pulses") = 0,
             py::arg("total_duration") = 0.0)
        .def_readwrite("pulse_duration", &PulseSchedule::pulse_duration)
        .def_readwrite("gap", &PulseSchedule::gap)
        .def_readwrite("n_pulses", &PulseSchedule::n_pulses)
        .def_readwrite("total_duration", &PulseSchedule::total_duration)
        .def("continuous", &PulseSchedule::continuous)
        .def("duration", &PulseSchedule::duration);

    py::class_<EmissionRecord>(m, "EmissionRecord")
        .def_readonly("jump_times", &EmissionRecord::jump_times)
        .def_readonly("pulse_index", &EmissionRecord::pulse_index)
        .def_readonly("seed", &EmissionRecord::seed)
        .def("to_csv", &io::record_to_csv);

    // Core operators.
    m.def("two_level_unitary", &two_level_unitary, py::arg("omega2"), py::arg("duration"));
    m.def("conditional_hamiltonian", &conditional_hamiltonian, py::arg("params"),
          py::arg("probe_on"));
    m.def(
        "conditional_propagate",
        [](const State& state, const Mat3& h, double t) { return conditional_propagate(state, h, t); },
        py::arg("state"), py::arg("h_cond"), py::arg("duration"));

    // Ideal projective measurements.
    m.def(
        "run_ideal_sequence",
        [](double omega2, double dt, std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            const auto seq = ideal::run_ideal_sequence(ground(), omega2, dt, n, rng);
            std::vector<int> out(seq.outcomes.size());
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = seq.outcomes[i] == ideal::Outcome::A ? 1 : 0;
            return out;
        },
        py::arg("omega2"), py::arg("dt"), py::arg("n"), py::arg("seed"),
        "Outcome string of repeated |1>-projections (1 = found in |1>).");
    m.def("survival_probability", &ideal::survival_probability, py::arg("omega2"), py::arg("dt"),
          py::arg("n"));
    m.def("mean_period_exact", &ideal::mean_period_exact, py::arg("omega2"), py::arg("dt"));

    // Quantum-jump runs.
    m.def(
        "run_trajectory",
        [](const VSystemParams& params, const PulseSchedule& schedule, std::uint64_t seed,
           std::uint64_t stream) {
            Rng rng = make_rng(seed, stream);
            auto record = JumpEngine(params).run_trajectory(schedule, rng);
            record.seed = seed;
            return record;
        },
        py::arg("params"), py::arg("schedule"), py::arg("seed"), py::arg("stream") = 0);
    m.def(
        "run_continuous",
        [](const VSystemParams& params, double total_duration, std::uint64_t seed,
           std::uint64_t stream) {
            Rng rng = make_rng(seed, stream);
            auto record = JumpEngine(params).run_continuous(total_duration, rng);
            record.seed = seed;
            return record;
        },
        py::arg("params"), py::arg("total_duration"), py::arg("seed"), py::arg("stream") = 0);

    m.def("effective_rho_no_emission", &effective_rho_no_emission, py::arg("params"));
    m.def("effective_rho_emission", &effective_rho_emission, py::arg("params"),
          py::arg("pulse_duration"));
    m.def("no_emission_probability", &no_emission_probability, py::arg("rho"), py::arg("params"),
          py::arg("pulse_duration"));

    // Closed-form theory.
    py::class_<analytics::TransitionProbs>(m, "TransitionProbs")
        .def_readonly("p", &analytics::TransitionProbs::p)
        .def_readonly("q", &analytics::TransitionProbs::q)
        .def_readonly("corrected", &analytics::TransitionProbs::corrected)
        .def_readonly("clamped", &analytics::TransitionProbs::clamped);
    py::class_<analytics::PeriodTheory>(m, "PeriodTheory")
        .def_readonly("t_light", &analytics::PeriodTheory::t_light)
        .def_readonly("t_dark", &analytics::PeriodTheory::t_dark);
    m.def("transition_probs", &analytics::transition_probs, py::arg("params"), py::arg("dt"),
          py::arg("pulse_duration"));
    m.def("transition_probs_corrected", &analytics::transition_probs_corrected, py::arg("params"),
          py::arg("dt"), py::arg("pulse_duration"));
    m.def("mean_periods", &analytics::mean_periods, py::arg("probs"), py::arg("dt"),
          py::arg("pulse_duration"));
    m.def("continuous_limit_periods", &analytics::continuous_limit_periods, py::arg("params"));

    // Master-equation oracle.
    m.def(
        "integrate_master",
        [](const Mat3& rho0, const VSystemParams& params, double pulse_duration, double gap,
           const std::vector<double>& times) {
            const auto samples = bloch::integrate_schedule(rho0, params, pulse_duration, gap, times);
            std::vector<Mat3> out;
            out.reserve(samples.size());
            for (const auto& s : samples) out.push_back(s.rho);
            return out;
        },
        py::arg("rho0"), py::arg("params"), py::arg("pulse_duration"), py::arg("gap"),
        py::arg("sample_times"),
        "Density matrices of the driven V system on the given sample grid (gap = 0 keeps the "
        "probe on throughout).");

    // Period statistics.
    py::class_<periods::PeriodSample>(m, "PeriodSample")
        .def_property_readonly("kind",
                               [](const periods::PeriodSample& s) {
                                   return s.kind == periods::Kind::Light ? "LIGHT" : "DARK";
                               })
        .def_readonly("duration", &periods::PeriodSample::duration)
        .def_readonly("pulse_count", &periods::PeriodSample::pulse_count);
    m.def(
        "classify_pulses",
        [](const EmissionRecord& record, const PulseSchedule& schedule) {
            return periods::classify_pulses(record, schedule);
        },
        py::arg("record"), py::arg("schedule"));
    m.def(
        "extract_periods",
        [](const std::vector<bool>& flags, const PulseSchedule& schedule) {
            return periods::extract_periods(flags, schedule).samples;
        },
        py::arg("flags"), py::arg("schedule"));
    m.def(
        "extract_periods_continuous",
        [](const EmissionRecord& record, double gap_threshold) {
            return periods::extract_periods_continuous(record, gap_threshold).samples;
        },
        py::arg("record"), py::arg("gap_threshold"));
    m.def("default_gap_threshold", &periods::default_gap_threshold, py::arg("params"));

    m.def(
        "validity_ratios",
        [](const VSystemParams& params, const PulseSchedule& schedule) {
            py::dict out;
            const auto report = validity_report(params, schedule);
            for (const auto& c : report.conditions) out[c.name.c_str()] = c.ratio;
            return out;
        },
        py::arg("params"), py::arg("schedule"));

    m.def(
        "verify",
        [](std::uint64_t seed) {
            verify::Options options;
            options.seed = seed;
            py::list out;
            for (const auto& r : verify::run_all(options))
                out.append(py::make_tuple(r.name, r.passed, r.detail));
            return out;
        },
        py::arg("seed") = 20260808, "Run the self-consistency battery; returns (name, ok, detail).");
}
