"""Subsystem entropies and coin-walker mutual information.

All entropies are in nats.  The headline quantity is the mutual information
S(coin) + S(walker) - S(joint), which collapses to zero as the walk
decoheres: the long-time states carry no correlation between where the
walker sits and which way its coin points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import eig_hermitian
from .quantum import DensityMatrix
from .dynamics import Trajectory


def _joint_as_array(rho: DensityMatrix | np.ndarray, n: int) -> np.ndarray:
    mat = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if mat.shape != (2 * n, 2 * n):
        raise ValidationError(f"state shape {mat.shape} != ({2 * n}, {2 * n})")
    return mat.reshape(n, 2, n, 2)


def partial_trace_coin(rho: DensityMatrix | np.ndarray, n: int) -> DensityMatrix:
    """Coin marginal: sum the walker index out of a joint state."""
    return DensityMatrix.from_matrix(np.einsum("xixj->ij", _joint_as_array(rho, n)))


def partial_trace_walker(rho: DensityMatrix | np.ndarray, n: int) -> DensityMatrix:
    """Walker marginal: sum the coin index out of a joint state."""
    return DensityMatrix.from_matrix(np.einsum("xiyi->xy", _joint_as_array(rho, n)))


def von_neumann_entropy(rho: DensityMatrix | np.ndarray) -> float:
    """-Tr(rho ln rho) in nats, with 0 ln 0 = 0.

    Raw matrices are validated as density matrices first, so an eigenvalue
    below -1e-10 is a hard error rather than silently clipped; roundoff-sized
    negatives and values marginally above 1 are clipped into [0, 1].
    """
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix.from_matrix(rho)
    w, _ = eig_hermitian(rho.mat)
    w = np.clip(w, 0.0, 1.0)
    nz = w[w > 0.0]
    # + 0.0 turns the -0.0 produced for pure states into a plain zero
    return float(-(nz * np.log(nz)).sum()) + 0.0


@dataclass(frozen=True)
class EntanglementRecord:
    """All three subsystem entropies of one state, plus their combination."""

    t: int
    s_joint: float
    s_coin: float
    s_walker: float
    mutual_info: float


def mutual_information(rho: DensityMatrix | np.ndarray, n: int, t: int = 0) -> EntanglementRecord:
    """S(coin) + S(walker) - S(joint), floored at -1e-9 against roundoff."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix.from_matrix(rho)
    s_joint = von_neumann_entropy(rho)
    s_coin = von_neumann_entropy(partial_trace_coin(rho, n))
    s_walker = von_neumann_entropy(partial_trace_walker(rho, n))
    mi = max(s_coin + s_walker - s_joint, -1e-9)
    return EntanglementRecord(int(t), s_joint, s_coin, s_walker, mi)


def entanglement_trajectory(traj: Trajectory) -> list[EntanglementRecord]:
    """One entanglement record per trajectory step."""
    n = traj.spec.n
    return [mutual_information(state, n, t) for t, state in enumerate(traj.states)]
