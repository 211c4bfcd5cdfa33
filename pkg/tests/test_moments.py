import numpy as np
import pytest

from ramanpairs.algebra import idx
from ramanpairs.atom import AtomConfig
from ramanpairs.errors import ConfigError
from ramanpairs.moments import (compute_moments, initial_pair_expectation, ladder,
                                pair_moment, single_moment)
from ramanpairs.noise import DiffusionTable, diffusion_table
from ramanpairs.propagator import build_propagator_grid
from ramanpairs.pulses import PulseSpec, off

from conftest import gauss_pulse, rho_symmetric


def test_initial_pair_expectation_examples():
    rho_c = np.diag([0.0, 0.0, 1.0, 0.0]).astype(complex)
    assert initial_pair_expectation(idx("c", "a"), idx("a", "c"), rho_c) == 1.0
    assert initial_pair_expectation(idx("c", "a"), idx("b", "c"), rho_c) == 0.0
    rho_no_d = rho_symmetric()
    assert initial_pair_expectation(idx("d", "b"), idx("b", "d"), rho_no_d) == 0.0


def test_ladder_table():
    assert ladder("a_k_dag").source_row == 14 and ladder("a_k_dag").phase == -1j
    assert ladder("a_k").source_row == 8 and ladder("a_k").phase == 1j
    assert ladder("a_q").source_row == 9 and ladder("a_q").phase == 1j
    assert ladder("a_q_dag").source_row == 3 and ladder("a_q_dag").phase == -1j
    with pytest.raises(ConfigError):
        ladder("b_k")


def _pipeline(atom, pump, control, t_end=1.0, n=150):
    grid = build_propagator_grid(atom, pump, control, t_end, n)
    diffusion = diffusion_table(grid, atom, pump, control)
    return grid, diffusion, compute_moments(atom, grid, diffusion)


def test_decoupled_modes_keep_initial_values():
    atom = AtomConfig(g_k=0.0, g_q=0.0, n_th_k=0.3, n_th_q=0.7, rho0=rho_symmetric())
    pump = PulseSpec(shape="cw", omega_peak=5.0)
    _, _, ms = _pipeline(atom, pump, pump)
    assert np.max(np.abs(ms.n_k.total - 0.3)) < 1e-14
    assert np.max(np.abs(ms.n_q.total - 0.7)) < 1e-14
    for split in (ms.pair, ms.cross, ms.square_k, ms.square_q):
        assert np.max(np.abs(split.total)) < 1e-14


def test_initial_time_values_are_thermal():
    atom = AtomConfig(n_th_k=0.2, n_th_q=0.05, rho0=rho_symmetric())
    pump = gauss_pulse(omega=8.0, center=0.4, width=0.1)
    _, _, ms = _pipeline(atom, pump, pump)
    assert ms.n_k.total[0] == pytest.approx(0.2, abs=1e-12)
    assert ms.n_q.total[0] == pytest.approx(0.05, abs=1e-12)
    assert abs(ms.pair.total[0]) < 1e-12
    assert abs(ms.cross.total[0]) < 1e-12


def test_coupling_scaling_is_exactly_quadratic():
    pump = gauss_pulse(omega=9.0, center=0.4, width=0.12, detuning=-1.0)
    control = PulseSpec(shape="cw", omega_peak=4.0, detuning=0.5, phase0=0.3)
    rho = rho_symmetric()
    rho[1, 2] = 0.25  # ground coherence links the two Raman branches
    rho[2, 1] = 0.25
    runs = {}
    for lam, g in (("g", 0.05), ("2g", 0.10)):
        atom = AtomConfig(g_k=g, g_q=g, rho0=rho)
        runs[lam] = _pipeline(atom, pump, control)[2]
    for attr in ("pair", "n_k", "n_q"):
        small = getattr(runs["g"], attr).total
        big = getattr(runs["2g"], attr).total
        scale = np.abs(small).max()
        assert scale > 0.0, attr
        assert np.max(np.abs(big - 4.0 * small)) < 1e-9 * scale
    # conversion and squeezing moments vanish by the loop selection rules
    # (the atom keeps a which-path record), at every coupling strength
    for run in runs.values():
        assert np.max(np.abs(run.cross.total)) < 1e-15
        assert np.max(np.abs(run.square_k.total)) < 1e-15
        assert np.max(np.abs(run.square_q.total)) < 1e-15


def test_hermiticity_pairing():
    rho = rho_symmetric()
    rho[1, 3] = 0.1 + 0.04j   # b-d coherence feeds the Stokes rows
    rho[3, 1] = np.conj(rho[1, 3])
    rho[1, 1] = 0.45
    rho[3, 3] = 0.05
    atom = AtomConfig(rho0=rho)
    pump = gauss_pulse(omega=6.0, center=0.4, width=0.15, detuning=-1.0, phase0=0.4)
    grid, diffusion, ms = _pipeline(atom, pump, PulseSpec(shape="cw", omega_peak=3.0))
    reversed_dagger = pair_moment(ladder("a_k_dag"), ladder("a_q_dag"), grid, diffusion, atom)
    assert np.max(np.abs(ms.pair.total - np.conj(reversed_dagger.total))) < 1e-10


def test_split_additivity_is_bitwise():
    atom = AtomConfig(n_th_k=0.1, rho0=rho_symmetric())
    pump = gauss_pulse(omega=7.0, center=0.3, width=0.1)
    _, _, ms = _pipeline(atom, pump, pump, t_end=0.8, n=100)
    split = ms.n_k
    reference = split.boundary + split.noise + split.backaction + split.initial
    assert np.array_equal(split.total, reference)


def test_photon_numbers_real_nonnegative():
    atom = AtomConfig(rho0=rho_symmetric())
    pump = gauss_pulse(omega=10.0, center=0.5, width=1.0 / 15.0)
    _, _, ms = _pipeline(atom, pump, pump, t_end=2.0, n=300)
    for split in (ms.n_k, ms.n_q):
        assert np.max(np.abs(split.total.imag)) < 1e-12
        assert split.total.real.min() > -1e-10
        assert split.boundary.real.min() > -1e-12
        assert split.noise.real.min() > -1e-12


def test_single_moment_zero_for_diagonal_initial_state():
    atom = AtomConfig(rho0=rho_symmetric())
    pump = gauss_pulse(omega=8.0, center=0.4, width=0.15)
    grid, _, ms = _pipeline(atom, pump, pump)
    assert np.max(np.abs(ms.mean_k)) < 1e-14
    assert np.max(np.abs(ms.mean_q)) < 1e-14


def test_single_moment_matches_decaying_coherence_integral():
    """Undriven b-d coherence: <a_k> = i g rho_db(0) (e^{lambda t} - 1)/lambda."""
    rho = np.diag([0.0, 0.5, 0.0, 0.5]).astype(complex)
    rho[1, 3] = 0.01
    rho[3, 1] = 0.01
    atom = AtomConfig(gamma_ab=0.6, gamma_ac=0.9, gamma_db=0.8, gamma_dc=1.2, rho0=rho)
    pump = PulseSpec(shape="cw", omega_peak=0.0, detuning=-3.0)
    grid, _, _ = _pipeline(atom, pump, off(), t_end=1.5, n=400)
    mean_k = single_moment(ladder("a_k"), grid, atom)
    # sigma_bd rotates at delta_b - delta_d = +Delta_p in this frame
    lam = -0.5 * (atom.gamma_db + atom.gamma_dc) + 1j * pump.detuning
    expected = 1j * atom.g_k * 0.01 * (np.exp(lam * grid.times) - 1.0) / lam
    assert np.max(np.abs(mean_k - expected)) < 1e-6


def test_noise_part_equals_direct_double_loop():
    atom = AtomConfig(rho0=rho_symmetric())
    pump = gauss_pulse(omega=6.0, center=0.3, width=0.12)
    grid, diffusion, ms = _pipeline(atom, pump, pump, t_end=0.6, n=80)
    c = ladder("a_k_dag").prefactor(atom) * ladder("a_k").prefactor(atom)
    h = grid.step
    for i in (25, 80):
        acc = 0.0 + 0.0j
        for j in range(i + 1):
            ka = grid.kernel_at(14, i, j)
            kb = grid.kernel_at(8, i, j)
            weight = 0.5 if j in (0, i) else 1.0
            acc += weight * (ka @ diffusion.matrices[j] @ kb)
        assert ms.n_k.noise[i] == pytest.approx(c * h * acc, rel=1e-12, abs=1e-18)


def test_backaction_vanishes_for_photon_numbers_in_vacuum():
    atom = AtomConfig(rho0=rho_symmetric())
    pump = gauss_pulse(omega=9.0, center=0.4, width=0.1)
    _, _, ms = _pipeline(atom, pump, pump)
    assert np.max(np.abs(ms.n_k.backaction)) < 1e-16
    assert np.max(np.abs(ms.n_q.backaction)) < 1e-16
    assert np.max(np.abs(ms.pair.backaction)) > 0.0  # the pair term is live


def test_grid_mismatch_rejected():
    atom = AtomConfig(rho0=rho_symmetric())
    pump = gauss_pulse(omega=5.0, center=0.3, width=0.1)
    grid, diffusion, _ = _pipeline(atom, pump, pump, t_end=0.6, n=80)
    other_grid = build_propagator_grid(atom, pump, pump, 0.6, 60)
    bad = DiffusionTable(times=other_grid.times,
                         matrices=np.zeros((61, 16, 16), dtype=complex))
    with pytest.raises(ConfigError):
        pair_moment(ladder("a_q"), ladder("a_k"), grid, bad, atom)
