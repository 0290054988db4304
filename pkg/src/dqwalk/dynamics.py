"""Time evolution of the walk channel and its convergence diagnostics.

For odd cycles the iterates approach the maximally mixed state whatever the
start.  For even cycles the alternating sign operator survives with
eigenvalue -1, so the iterates have no limit; instead the distance to a
t-dependent comparison state (mixed identity plus a flipping alternating
term) goes to zero, and all diagnostics here are phrased against that
comparison state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .linalg import hs_inner, hs_norm
from .quantum import DensityMatrix, apply_mixture
from .walk import WalkSpec, build_channel, parity_sign_operator

#: Default convergence threshold in Frobenius norm.
EPSILON_DEFAULT = 1e-6

#: Default hard cap on the number of steps when iterating to a threshold.
MAX_STEPS_DEFAULT = 100_000


@dataclass(eq=False)
class Trajectory:
    """A finite run of the walk with per-step diagnostics.

    ``states[t]`` is the state after t steps; ``distance_to_limit[t]`` the
    Frobenius distance to the comparison state at the same t;
    ``position_dist[t]`` the node marginal; ``parity_overlap[t]`` the inner
    product with the alternating sign operator (zero-filled on odd cycles,
    where no such conserved pattern exists).
    """

    spec: WalkSpec
    states: list[DensityMatrix]
    distance_to_limit: np.ndarray
    position_dist: np.ndarray
    parity_overlap: np.ndarray

    @property
    def steps(self) -> int:
        return len(self.states) - 1


def parity_overlap(rho: DensityMatrix | np.ndarray, n: int) -> float:
    """Overlap with the alternating sign operator; 0.0 on odd cycles.

    For Hermitian input the overlap is real; an imaginary residue above
    1e-12 means the input was not Hermitian and is reported loudly.
    """
    if n % 2 != 0:
        return 0.0
    mat = rho.mat if isinstance(rho, DensityMatrix) else rho
    val = hs_inner(parity_sign_operator(n), mat)
    if abs(val.imag) > 1e-12:
        raise NumericalError(
            f"parity overlap has imaginary part {val.imag:.3e}; input not Hermitian"
        )
    return float(val.real)


def limit_state(spec: WalkSpec, rho0: DensityMatrix, t: int) -> DensityMatrix:
    """The comparison state the iterates approach.

    Odd cycles: the maximally mixed state, independent of ``t`` and of the
    start.  Even cycles: maximally mixed plus the alternating sign operator
    weighted by the conserved initial overlap, flipping sign each step.
    """
    dim = spec.dim
    if rho0.dim != dim:
        raise ValidationError(f"initial state dim {rho0.dim} != walk dim {dim}")
    if spec.n % 2 != 0:
        return DensityMatrix.maximally_mixed(dim)
    c = parity_overlap(rho0, spec.n)
    mat = (np.eye(dim, dtype=complex)
           + ((-1.0) ** int(t)) * c * parity_sign_operator(spec.n)) / dim
    return DensityMatrix.from_matrix(mat)


def position_distribution(rho: DensityMatrix | np.ndarray, n: int) -> np.ndarray:
    """Node marginal P(x) = rho[(x,r),(x,r)] + rho[(x,l),(x,l)].

    Diagonal entries of a density matrix are real probabilities; imaginary
    residue above 1e-12, or a total off 1 by more than 1e-10, raises.
    """
    mat = rho.mat if isinstance(rho, DensityMatrix) else rho
    if mat.shape[0] != 2 * n:
        raise ValidationError(f"state dim {mat.shape[0]} != 2*{n}")
    diag = np.diagonal(mat)
    if np.max(np.abs(diag.imag)) > 1e-12:
        raise NumericalError(
            f"diagonal has imaginary residue {np.max(np.abs(diag.imag)):.3e}"
        )
    p = diag.real.reshape(n, 2).sum(axis=1)
    if abs(p.sum() - 1.0) > 1e-10:
        raise NumericalError(f"position distribution sums to {p.sum()!r}, not 1")
    return p


def evolve(
    spec: WalkSpec,
    rho0: DensityMatrix,
    steps: int,
    *,
    stop_below: float | None = None,
) -> Trajectory:
    """Iterate the channel ``steps`` times, collecting per-step diagnostics.

    Each iterate is revalidated as a density matrix, so numerical drift out
    of the state space fails immediately rather than contaminating later
    diagnostics.  With ``stop_below`` set, iteration ends early at the first
    step whose distance to the comparison state falls under the threshold.
    """
    if steps < 0:
        raise ValidationError(f"step count must be >= 0, got {steps}")
    if rho0.dim != spec.dim:
        raise ValidationError(f"initial state dim {rho0.dim} != walk dim {spec.dim}")
    channel = build_channel(spec)
    states = [rho0]
    dists = [hs_norm(rho0.mat - limit_state(spec, rho0, 0).mat)]
    positions = [position_distribution(rho0, spec.n)]
    overlaps = [parity_overlap(rho0, spec.n)]
    for t in range(1, steps + 1):
        nxt = DensityMatrix.from_matrix(apply_mixture(channel, states[-1].mat))
        states.append(nxt)
        dists.append(hs_norm(nxt.mat - limit_state(spec, rho0, t).mat))
        positions.append(position_distribution(nxt, spec.n))
        overlaps.append(parity_overlap(nxt, spec.n))
        if stop_below is not None and dists[-1] < stop_below:
            break
    return Trajectory(
        spec, states, np.array(dists), np.array(positions), np.array(overlaps)
    )


@dataclass(frozen=True)
class TailStats:
    """Convergence measurements over one subsequence of steps."""

    final_distance: float
    first_t_below: int | None
    tail_sup: float


@dataclass(frozen=True)
class ConvergenceSummary:
    """Threshold crossing and tail behavior, split by step parity on even cycles."""

    epsilon: float
    steps: int
    overall: TailStats
    even_steps: TailStats | None = None
    odd_steps: TailStats | None = None


def _tail_stats(ts: np.ndarray, ds: np.ndarray, epsilon: float) -> TailStats:
    below = np.nonzero(ds < epsilon)[0]
    if below.size:
        first = int(ts[below[0]])
        tail = ds[below[0]:]
    else:
        first = None
        tail = ds[-10:]
    return TailStats(float(ds[-1]), first, float(tail.max()))


def convergence_report(traj: Trajectory, epsilon: float = EPSILON_DEFAULT) -> ConvergenceSummary:
    """Summarize when and how tightly the trajectory settled.

    ``first_t_below`` is the first step whose distance drops under
    ``epsilon``; ``tail_sup`` is the largest distance seen from that step on
    (or over the last 10 steps when the threshold was never reached, so the
    report stays informative).  Even cycles get the same statistics restricted
    to even and to odd steps, since those subsequences approach different
    comparison states.
    """
    if not traj.states:
        raise ValidationError("trajectory has no states")
    if epsilon <= 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    ts = np.arange(len(traj.states))
    ds = traj.distance_to_limit
    overall = _tail_stats(ts, ds, epsilon)
    if traj.spec.n % 2 != 0:
        return ConvergenceSummary(epsilon, traj.steps, overall)
    return ConvergenceSummary(
        epsilon,
        traj.steps,
        overall,
        even_steps=_tail_stats(ts[0::2], ds[0::2], epsilon),
        odd_steps=_tail_stats(ts[1::2], ds[1::2], epsilon),
    )


def trajectory_csv(traj: Trajectory, records) -> str:
    """Delimited dump of a trajectory with its entanglement diagnostics.

    ``records`` supplies one entry per step with attributes ``s_joint``,
    ``s_coin``, ``s_walker``, ``mutual_info`` (see the entropy module).
    Columns: t, distance_to_limit, P_0..P_{N-1}, c_t, S_total, S_coin,
    S_walker, mutual_info.
    """
    if len(records) != len(traj.states):
        raise ValidationError(
            f"{len(records)} entropy records for {len(traj.states)} states"
        )
    n = traj.spec.n
    header = (
        ["t", "distance_to_limit"]
        + [f"P_{x}" for x in range(n)]
        + ["c_t", "S_total", "S_coin", "S_walker", "mutual_info"]
    )
    lines = [",".join(header)]
    for t in range(len(traj.states)):
        rec = records[t]
        cells = [str(t), "%.17g" % traj.distance_to_limit[t]]
        cells += ["%.17g" % p for p in traj.position_dist[t]]
        cells += [
            "%.17g" % traj.parity_overlap[t],
            "%.17g" % rec.s_joint,
            "%.17g" % rec.s_coin,
            "%.17g" % rec.s_walker,
            "%.17g" % rec.mutual_info,
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
