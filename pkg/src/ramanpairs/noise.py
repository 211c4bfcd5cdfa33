"""Diffusion coefficients of the atomic Langevin noise.

The noise operators are delta correlated, <F_m(t) F_n(t')> = 2D_mn(t) delta(t-t'),
and the generalized Einstein relation fixes the full ordered table from the
drift matrix and the instantaneous single-operator expectations:

    2D_mn = (M X)_{mn} - sum_r M_mr X_{rn} - sum_r M_nr X_{mr}

where X_{ij} is shorthand for <X_i X_j> = X at the contracted index (zero when
the operator product vanishes) and (M X)_{mn} reads the contracted component
of the drift velocity.  Normal and antinormal orderings are index views of
the one raw table, no separate storage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import CONTRACT0, DAGGER0
from .propagator import PropagatorGrid
from .atom import AtomConfig, DriftBuilder
from .pulses import PulseSpec


def diffusion_matrix(m_entries: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Raw ordered 16x16 diffusion table 2D_mn at one time."""
    x = np.asarray(x, dtype=complex)
    m = np.asarray(m_entries, dtype=complex)

    valid = CONTRACT0 >= 0
    # gather X at contracted indices, zero where the product vanishes
    x_contracted = np.where(valid, x[np.where(valid, CONTRACT0, 0)], 0.0)
    mx = m @ x
    drift_of_product = np.where(valid, mx[np.where(valid, CONTRACT0, 0)], 0.0)
    return drift_of_product - m @ x_contracted - x_contracted @ m.T


def normal_ordered(d2: np.ndarray) -> np.ndarray:
    """D^n_mn = <F_m^dag F_n> = (1/2) 2D at (dagger(m), n)."""
    return 0.5 * d2[DAGGER0, :]


def antinormal_ordered(d2: np.ndarray) -> np.ndarray:
    """D^an_mn = <F_m F_n^dag> = (1/2) 2D at (m, dagger(n))."""
    return 0.5 * d2[:, DAGGER0]


@dataclass
class DiffusionTable:
    """2D_mn(t_i) on the propagator grid."""

    times: np.ndarray
    matrices: np.ndarray  # (n_points, 16, 16) complex


def diffusion_table(grid: PropagatorGrid, atom: AtomConfig,
                    pump: PulseSpec, control: PulseSpec) -> DiffusionTable:
    """Evaluate the Einstein-relation table at every grid time."""
    builder = DriftBuilder(atom, pump, control)
    mats = np.empty((grid.n_points, 16, 16), dtype=complex)
    for i, t in enumerate(grid.times):
        mats[i] = diffusion_matrix(builder.entries(t), grid.state_traj[i])
    return DiffusionTable(times=grid.times, matrices=mats)
