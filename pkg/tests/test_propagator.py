import numpy as np
import pytest
from scipy.linalg import expm

from ramanpairs.algebra import SOURCE_ROWS, idx
from ramanpairs.atom import AtomConfig, DriftBuilder
from ramanpairs.errors import ConfigError
from ramanpairs.propagator import (KernelStore, build_propagator_grid, kernels,
                                   propagate_from)
from ramanpairs.pulses import PulseSpec, off

from conftest import gauss_pulse, rho_symmetric


def test_propagate_from_starts_at_identity():
    atom = AtomConfig(rho0=rho_symmetric())
    times = np.linspace(0.0, 1.0, 11)
    u = propagate_from(4, atom, off(), off(), times)
    assert np.allclose(u[0], np.eye(16))


def test_constant_drive_matches_matrix_exponential():
    atom = AtomConfig(rho0=rho_symmetric())
    pump = PulseSpec(shape="cw", omega_peak=6.0, detuning=2.0)
    control = PulseSpec(shape="cw", omega_peak=3.0, detuning=-1.0)
    times = np.linspace(0.0, 1.2, 25)
    u = propagate_from(0, atom, pump, control, times)
    m = DriftBuilder(atom, pump, control).entries(0.0)
    for i in (8, 16, 24):
        assert np.max(np.abs(u[i] - expm(m * times[i]))) < 1e-8
    # time-translation invariance of the cw flow
    u_mid = propagate_from(12, atom, pump, control, times)
    assert np.max(np.abs(u_mid[8] - u[8])) < 1e-8


def test_composition_residual_small():
    atom = AtomConfig(rho0=rho_symmetric())
    pump = gauss_pulse(omega=10.0, center=0.5, width=1.0 / 15.0)
    control = gauss_pulse(omega=10.0, center=0.5, width=1.0 / 15.0)
    times = np.linspace(0.0, 2.0, 81)
    u_full = propagate_from(0, atom, pump, control, times)
    rng = np.random.default_rng(3)
    for _ in range(4):
        j = int(rng.integers(5, 60))
        i = int(rng.integers(j + 5, 80))
        u_tail = propagate_from(j, atom, pump, control, times)
        residual = np.max(np.abs(u_full[i] - u_tail[i - j] @ u_full[j]))
        assert residual < 1e-8


def test_grid_build_invariants():
    atom = AtomConfig(rho0=rho_symmetric())
    pump = gauss_pulse(omega=8.0)
    control = gauss_pulse(omega=8.0)
    grid = build_propagator_grid(atom, pump, control, 1.5, 150)
    assert np.allclose(grid.u_from0[0], np.eye(16))
    # v_inverse really inverts the forward flow
    worst = max(np.max(np.abs(grid.v_inverse[j] @ grid.u_from0[j] - np.eye(16)))
                for j in (10, 75, 150))
    assert worst < 1e-7
    # kernels vanish on the diagonal
    for row in SOURCE_ROWS:
        for j in (0, 60, 150):
            assert np.max(np.abs(grid.kernel_at(row, j, j))) < 1e-12


def test_free_evolution_kernel_is_linear_in_time():
    atom = AtomConfig(gamma_ab=0, gamma_ac=0, gamma_db=0, gamma_dc=0)
    grid = build_propagator_grid(atom, off(), off(), 2.0, 100)
    row = idx("d", "b")
    for i, j in ((40, 10), (100, 0), (77, 77)):
        expected = np.zeros(16)
        expected[row - 1] = grid.times[i] - grid.times[j]
        assert np.allclose(grid.kernel_at(row, i, j), expected, atol=1e-12)


def test_kernels_match_direct_row_integration():
    """Group-property kernels equal direct trapezoids of a from-s_j solve."""
    atom = AtomConfig(rho0=rho_symmetric())
    pump = gauss_pulse(omega=9.0, center=0.4, width=0.12, detuning=-1.5)
    control = PulseSpec(shape="cw", omega_peak=5.0, detuning=0.7)
    n = 64
    grid = build_propagator_grid(atom, pump, control, 1.0, n)
    j = 20
    u_tail = propagate_from(j, atom, pump, control, grid.times)
    h = grid.step
    for row in SOURCE_ROWS:
        samples = u_tail[:, row - 1, :]
        direct = np.zeros((n + 1, 16), dtype=complex)
        acc = np.zeros(16, dtype=complex)
        for i in range(j + 1, n + 1):
            acc = acc + 0.5 * h * (samples[i - j] + samples[i - j - 1])
            direct[i] = acc
        fast = grid.kernel_rows(row, j)
        assert np.max(np.abs(fast[j:] - direct[j:])) < 1e-7


def test_kernel_conjugation_mirror():
    """Resonant real drives: the sigma_db kernel row is the conjugate of the
    sigma_bd row with dagger-permuted columns."""
    from ramanpairs.algebra import DAGGER0
    atom = AtomConfig(rho0=rho_symmetric())
    pump = gauss_pulse(omega=10.0, center=0.5, width=1.0 / 15.0)
    control = gauss_pulse(omega=10.0, center=0.5, width=1.0 / 15.0)
    grid = build_propagator_grid(atom, pump, control, 1.0, 80)
    for j in (0, 30):
        k_db = grid.kernel_rows(14, j)
        k_bd = grid.kernel_rows(8, j)
        assert np.max(np.abs(k_db[j:] - np.conj(k_bd[j:, DAGGER0]))) < 1e-10


def test_kernel_quadrature_richardson_ratio():
    atom = AtomConfig(rho0=rho_symmetric())
    pump = gauss_pulse(omega=10.0, center=0.5, width=1.0 / 15.0)
    control = gauss_pulse(omega=10.0, center=0.5, width=1.0 / 15.0)
    tight = dict(rtol=1e-11, atol=1e-14)
    ref = build_propagator_grid(atom, pump, control, 1.5, 960, **tight)
    errors = {}
    for n in (120, 240):
        grid = build_propagator_grid(atom, pump, control, 1.5, n, **tight)
        step = 960 // n
        worst = 0.0
        for row in SOURCE_ROWS:
            diff = np.abs(grid.row_cumint[row] - ref.row_cumint[row][::step])
            worst = max(worst, diff.max())
        errors[n] = worst
    ratio = errors[120] / errors[240]
    assert 2.7 < ratio < 5.5


def test_simpson_flag_improves_kernels():
    atom = AtomConfig(rho0=rho_symmetric())
    pump = gauss_pulse(omega=10.0, center=0.5, width=1.0 / 15.0)
    control = gauss_pulse(omega=10.0, center=0.5, width=1.0 / 15.0)
    tight = dict(rtol=1e-11, atol=1e-14)
    ref = build_propagator_grid(atom, pump, control, 1.5, 960, **tight)
    trap = build_propagator_grid(atom, pump, control, 1.5, 120, **tight)
    simp = build_propagator_grid(atom, pump, control, 1.5, 120,
                                 quadrature="simpson", **tight)
    row = 14
    err_trap = np.max(np.abs(trap.row_cumint[row] - ref.row_cumint[row][::8]))
    err_simp = np.max(np.abs(simp.row_cumint[row] - ref.row_cumint[row][::8]))
    assert err_simp < err_trap / 5


def test_kernel_store_views():
    atom = AtomConfig(rho0=rho_symmetric())
    grid = build_propagator_grid(atom, gauss_pulse(omega=4.0, center=0.3, width=0.1),
                                 off(), 0.6, 40)
    store = kernels(grid)
    assert isinstance(store, KernelStore)
    dense = store.dense(14)
    assert dense.shape == (41, 41, 16)
    assert np.allclose(dense[25, 10], store.at(14, 25, 10))
    assert np.max(np.abs(dense[10, 25])) == 0.0  # below the diagonal stays empty
    with pytest.raises(ValueError):
        store.at(14, 10, 25)


def test_build_validation():
    atom = AtomConfig()
    with pytest.raises(ConfigError):
        build_propagator_grid(atom, off(), off(), -1.0, 100)
    with pytest.raises(ConfigError):
        build_propagator_grid(atom, off(), off(), 1.0, 1)
    with pytest.raises(ConfigError):
        build_propagator_grid(atom, off(), off(), 1.0, 100, quadrature="gauss")
    with pytest.raises(ConfigError):
        propagate_from(200, atom, off(), off(), np.linspace(0, 1, 11))
