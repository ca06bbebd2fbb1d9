"""Smoke tests for the python module: import, theory values, a short
trajectory end to end, and the master-equation oracle."""

import math

import numpy as np

import vzeno


def test_params_and_theory():
    p = vzeno.VSystemParams(1.0, 40.0, 20.0)
    eps = p.epsilons()
    assert eps == (0.0125, 0.025, 0.05)

    lim = vzeno.continuous_limit_periods(p)
    assert abs(lim.t_light - 720.0) < 1e-9
    assert abs(lim.t_dark - 80.0) < 1e-9

    probs = vzeno.transition_probs_corrected(p, 1.0, 1.0)
    periods = vzeno.mean_periods(probs, 1.0, 1.0)
    assert abs(periods.t_light - 8.693265) < 1e-5
    assert abs(periods.t_dark - 7.677174) < 1e-5

    assert abs(vzeno.mean_period_exact(1.0, math.pi / 2) - math.pi) < 1e-12
    assert abs(vzeno.survival_probability(1.0, math.pi / 64, 64) - 0.96218) < 1e-5


def test_operators():
    u = vzeno.two_level_unitary(1.0, math.pi)
    assert abs(u[1, 0] + 1j) < 1e-12  # pi pulse: |1> -> -i|2>
    p = vzeno.VSystemParams(1.0, 40.0, 20.0)
    h = vzeno.conditional_hamiltonian(p, True)
    assert h[2, 2] == -10j
    psi = vzeno.conditional_propagate(np.array([1, 0, 0], complex), h, 0.1)
    assert np.linalg.norm(psi) < 1.0  # no-emission norm shrinks


def test_trajectory_round_trip():
    p = vzeno.VSystemParams(1.0, 40.0, 20.0)
    lim = vzeno.continuous_limit_periods(p)
    rec = vzeno.run_continuous(p, 60000.0, seed=12)
    assert rec.jump_times, "continuous run must fluoresce"
    samples = vzeno.extract_periods_continuous(rec, vzeno.default_gap_threshold(p))
    darks = [s.duration for s in samples if s.kind == "DARK"]
    lights = [s.duration for s in samples if s.kind == "LIGHT"]
    assert len(darks) > 30 and len(lights) > 30
    mean_dark = sum(darks) / len(darks)
    mean_light = sum(lights) / len(lights)
    assert abs(mean_dark - lim.t_dark) / lim.t_dark < 0.35
    assert abs(mean_light - lim.t_light) / lim.t_light < 0.35

    # Seeded runs are reproducible; other seeds differ.
    again = vzeno.run_continuous(p, 60000.0, seed=12)
    assert again.jump_times == rec.jump_times
    assert vzeno.run_continuous(p, 60000.0, seed=13).jump_times != rec.jump_times

    schedule = vzeno.PulseSchedule(pulse_duration=1.0, gap=1.0, n_pulses=500)
    pulsed = vzeno.run_trajectory(p, schedule, seed=5)
    flags = vzeno.classify_pulses(pulsed, schedule)
    assert 0.3 < sum(flags) / len(flags) < 0.7
    assert "jump_time,pulse_index" in pulsed.to_csv()


def test_master_equation():
    p = vzeno.VSystemParams(1.0, 40.0, 20.0)
    rho0 = np.zeros((3, 3), complex)
    rho0[0, 0] = 1.0
    rhos = vzeno.integrate_master(rho0, p, 0.0, 0.0, [0.5, 2.0])
    assert len(rhos) == 2
    for rho in rhos:
        assert abs(np.trace(rho) - 1.0) < 1e-9
        assert np.all(np.linalg.eigvalsh(rho) > -1e-8)


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok: {test.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    main()
