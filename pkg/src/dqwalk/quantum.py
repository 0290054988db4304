"""States, channels, and complete-positivity certification.

A channel is held in Kraus form.  The central composite type is
:class:`NoisyUnitaryMixture`: a convex combination of unitary conjugations
plus one residual weight spent on an arbitrary Kraus family that is both
trace-preserving and unital under its own weight.  The walk channel studied
elsewhere in this package is an instance, but nothing here knows about walks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .linalg import as_matrix, hs_norm, matrix_from_json, matrix_to_json

#: Relative tolerance for the trace-preserving / unital residual checks.
CHECK_TOL = 1e-10

#: Relative floor on the Choi spectrum below which CP certification fails.
CP_TOL = 1e-9


@dataclass(eq=False)
class DensityMatrix:
    """A validated density matrix: Hermitian, PSD, unit trace."""

    mat: np.ndarray

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def from_matrix(cls, mat, *, tol: float = 1e-10) -> "DensityMatrix":
        """Build from a nearly-valid matrix, repairing roundoff-scale defects.

        The Hermitian part is taken, eigenvalues below ``-tol`` are rejected,
        smaller negatives are clipped to zero, and the trace is renormalized.
        """
        mat = as_matrix(mat, square=True)
        herm = (mat + mat.conj().T) / 2
        if hs_norm(mat - herm) > tol * max(1.0, hs_norm(mat)):
            raise ValidationError("matrix is not Hermitian within tolerance")
        w, v = np.linalg.eigh(herm)
        if w.min() < -tol:
            raise ValidationError(
                f"matrix has a significantly negative eigenvalue {w.min():.3e}"
            )
        w = np.clip(w, 0.0, None)
        total = float(w.sum())
        if total <= 0.0:
            raise ValidationError("matrix has zero trace after clipping")
        w = w / total
        return cls((v * w) @ v.conj().T)

    @classmethod
    def pure(cls, vec) -> "DensityMatrix":
        """Rank-one projector onto a (normalized copy of a) state vector."""
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm < 1e-12:
            raise ValidationError("cannot normalize a zero vector")
        vec = vec / norm
        return cls(np.outer(vec, vec.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        if dim < 1:
            raise ValidationError("dimension must be positive")
        return cls(np.eye(dim, dtype=complex) / dim)


@dataclass(eq=False)
class QuantumOperation:
    """A channel given by its Kraus family ``X -> sum_k A_k X A_k†``."""

    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.kraus:
            raise ValidationError("Kraus family must be non-empty")
        mats = tuple(as_matrix(a, square=True) for a in self.kraus)
        dim = mats[0].shape[0]
        if any(a.shape[0] != dim for a in mats):
            raise ValidationError("all Kraus operators must share one dimension")
        object.__setattr__(self, "kraus", mats)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]


def apply(op: QuantumOperation, x) -> np.ndarray:
    """Evaluate ``sum_k A_k x A_k†`` on a square matrix of matching size."""
    x = as_matrix(x, square=True)
    if x.shape[0] != op.dim:
        raise ValidationError(f"operand dim {x.shape[0]} != channel dim {op.dim}")
    out = np.zeros_like(x)
    for a in op.kraus:
        out += a @ x @ a.conj().T
    return out


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a structural check: boolean verdict plus the residual."""

    passed: bool
    residual: float


def check_trace_preserving(op: QuantumOperation, *, tol: float = CHECK_TOL) -> CheckReport:
    """Residual ``||sum A†A - I||`` against ``tol * sqrt(dim)``."""
    acc = np.zeros((op.dim, op.dim), dtype=complex)
    for a in op.kraus:
        acc += a.conj().T @ a
    resid = hs_norm(acc - np.eye(op.dim))
    return CheckReport(resid <= tol * np.sqrt(op.dim), resid)


def check_unital(op: QuantumOperation, *, tol: float = CHECK_TOL) -> CheckReport:
    """Residual ``||sum A A† - I||`` against ``tol * sqrt(dim)``."""
    acc = np.zeros((op.dim, op.dim), dtype=complex)
    for a in op.kraus:
        acc += a @ a.conj().T
    resid = hs_norm(acc - np.eye(op.dim))
    return CheckReport(resid <= tol * np.sqrt(op.dim), resid)


def choi_matrix(op: QuantumOperation) -> np.ndarray:
    """Choi matrix ``sum_ab E_ab ⊗ Φ(E_ab)`` (unnormalized, dim²×dim²).

    Assembled as ``sum_k w_k w_k†`` with ``w_k`` the column-stacking of the
    k-th Kraus operator, which is algebraically identical and one pass.
    """
    n = op.dim
    j = np.zeros((n * n, n * n), dtype=complex)
    for a in op.kraus:
        w = a.reshape(-1, order="F")
        j += np.outer(w, w.conj())
    return j


def is_completely_positive(op: QuantumOperation, *, tol: float = CP_TOL) -> CheckReport:
    """Certify CP by the Choi spectrum: pass iff min eig >= -tol * ||J||."""
    j = choi_matrix(op)
    w = np.linalg.eigvalsh((j + j.conj().T) / 2)
    floor = float(w.min())
    return CheckReport(floor >= -tol * max(1.0, hs_norm(j)), floor)


@dataclass(eq=False)
class NoisyUnitaryMixture:
    """Convex mixture of unitary conjugations plus a weighted noise family.

    Acts as ``X -> sum_i p_i U_i X U_i† + q * sum_j A_j X A_j†`` where the
    ``p_i`` and ``q`` sum to one and the noise family alone satisfies
    ``sum A†A = sum A A† = I``.  Such a map is automatically a channel and
    automatically unital, which the constructor verifies once.
    """

    unitaries: tuple[tuple[float, np.ndarray], ...]
    q: float
    noise: tuple[np.ndarray, ...] = field(default=())

    def __post_init__(self):
        pairs = []
        for p, u in self.unitaries:
            p = float(p)
            u = as_matrix(u, square=True)
            if p < 0:
                raise ValidationError(f"mixture weight {p} is negative")
            pairs.append((p, u))
        if not pairs:
            raise ValidationError("mixture needs at least one unitary term")
        dim = pairs[0][1].shape[0]
        if any(u.shape[0] != dim for _, u in pairs):
            raise ValidationError("all unitaries must share one dimension")
        for p, u in pairs:
            dev = hs_norm(u.conj().T @ u - np.eye(dim))
            if dev > 1e-10 * np.sqrt(dim):
                raise ValidationError(f"mixture operator is not unitary (dev {dev:.3e})")
        q = float(self.q)
        if q < 0 or q > 1:
            raise ValidationError(f"noise weight q={q} outside [0, 1]")
        total = q + sum(p for p, _ in pairs)
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"weights must sum to 1, got {total!r}")
        noise = tuple(as_matrix(a, square=True) for a in self.noise)
        if q > 0:
            if not noise:
                raise ValidationError("q > 0 requires a noise family")
            if any(a.shape[0] != dim for a in noise):
                raise ValidationError("noise operators must match the mixture dimension")
            bare = QuantumOperation(noise)
            tp = check_trace_preserving(bare)
            un = check_unital(bare)
            if not tp.passed:
                raise ValidationError(
                    f"noise family is not trace-preserving (residual {tp.residual:.3e})"
                )
            if not un.passed:
                raise ValidationError(
                    f"noise family is not unital (residual {un.residual:.3e})"
                )
        object.__setattr__(self, "unitaries", tuple(pairs))
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "noise", noise)

    @property
    def dim(self) -> int:
        return self.unitaries[0][1].shape[0]

    def to_operation(self) -> QuantumOperation:
        """Flatten into one Kraus family ``{sqrt(p_i) U_i} ∪ {sqrt(q) A_j}``."""
        kraus = [np.sqrt(p) * u for p, u in self.unitaries if p > 0]
        if self.q > 0:
            kraus.extend(np.sqrt(self.q) * a for a in self.noise)
        return QuantumOperation(tuple(kraus))


def apply_mixture(g: NoisyUnitaryMixture, x) -> np.ndarray:
    """Evaluate the mixture on a square matrix without flattening it first."""
    x = as_matrix(x, square=True)
    if x.shape[0] != g.dim:
        raise ValidationError(f"operand dim {x.shape[0]} != mixture dim {g.dim}")
    out = np.zeros_like(x)
    for p, u in g.unitaries:
        out += p * (u @ x @ u.conj().T)
    if g.q > 0:
        for a in g.noise:
            out += g.q * (a @ x @ a.conj().T)
    return out


# --- JSON wire formats -------------------------------------------------------


def operation_to_json(op: QuantumOperation) -> dict:
    return {"dim": op.dim, "kraus": [matrix_to_json(a) for a in op.kraus]}


def operation_from_json(data: dict) -> QuantumOperation:
    try:
        dim = int(data["dim"])
        kraus = tuple(matrix_from_json(a) for a in data["kraus"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed channel JSON: {exc}") from exc
    op = QuantumOperation(kraus)
    if op.dim != dim:
        raise ValidationError(f"declared dim {dim} != Kraus dim {op.dim}")
    return op


def mixture_to_json(g: NoisyUnitaryMixture) -> dict:
    return {
        "unitaries": [{"p": p, "U": matrix_to_json(u)} for p, u in g.unitaries],
        "q": g.q,
        "noise": operation_to_json(QuantumOperation(g.noise)) if g.noise else None,
    }


def mixture_from_json(data: dict) -> NoisyUnitaryMixture:
    try:
        unitaries = tuple(
            (float(item["p"]), matrix_from_json(item["U"])) for item in data["unitaries"]
        )
        q = float(data["q"])
        noise_data = data.get("noise")
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed mixture JSON: {exc}") from exc
    noise = operation_from_json(noise_data).kraus if noise_data else ()
    return NoisyUnitaryMixture(unitaries, q, noise)
