"""Dense complex linear algebra primitives.

Matrices are plain ``numpy.ndarray`` objects with ``complex128`` entries in
the usual row-major logical layout.  Everything here is a pure function of
its inputs; the eigen-decompositions delegate to LAPACK (via numpy) and then
enforce explicit residual bounds so callers can rely on the advertised
accuracy rather than on backend folklore.
"""

from __future__ import annotations

import numpy as np

from .errors import EigenSolverError, NumericalError, ValidationError

#: Default relative tolerance for declaring a matrix Hermitian.
HERM_TOL = 1e-10

#: Residual bound (relative to ||M||) enforced on general eigenpairs.
EIG_RESIDUAL_TOL = 1e-8

#: Fixed float precision used by the text serialization formats.
FLOAT_FMT = "%.17g"


def as_matrix(data, *, square: bool = False) -> np.ndarray:
    """Coerce ``data`` to a finite 2-D complex array, validating shape."""
    mat = np.asarray(data, dtype=complex)
    if mat.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix, got ndim={mat.ndim}")
    if mat.size == 0:
        raise ValidationError("matrix must be non-empty")
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise ValidationError("matrix entries must be finite (no NaN/Inf)")
    if square and mat.shape[0] != mat.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {mat.shape}")
    return mat


def hs_inner(x, y) -> complex:
    """Hilbert-Schmidt inner product tr(x† y), conjugate-linear in ``x``."""
    x = as_matrix(x, square=True)
    y = as_matrix(y, square=True)
    if x.shape != y.shape:
        raise ValidationError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return complex(np.trace(x.conj().T @ y))


def hs_norm(x) -> float:
    """Frobenius (Schatten-2) norm; equals sqrt(hs_inner(x, x)) when square."""
    return float(np.linalg.norm(as_matrix(x)))


def kron(a, b) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(as_matrix(a), as_matrix(b))


def eig_hermitian(h, *, tol_herm: float = HERM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with real eigenvalues ``w`` in ascending order and a
    unitary ``v`` whose columns are the eigenvectors, so ``h = v diag(w) v†``.
    The input must be Hermitian up to ``tol_herm`` relative to its norm; the
    factorization is checked to satisfy ``||h v - v w|| <= 1e-10 ||h||`` and
    ``||v† v - I|| <= 1e-10``.
    """
    h = as_matrix(h, square=True)
    scale = float(np.linalg.norm(h))
    herm_dev = float(np.linalg.norm(h - h.conj().T))
    if herm_dev > tol_herm * scale:
        raise ValidationError(
            f"matrix is not Hermitian: ||H - H†|| = {herm_dev:.3e} exceeds "
            f"tol_herm * ||H|| = {tol_herm:.1e} * {scale:.3e}"
        )
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    resid = float(np.linalg.norm(h @ v - v * w))
    if resid > 1e-10 * scale:
        raise NumericalError(
            f"hermitian eigendecomposition residual {resid:.3e} exceeds 1e-10 * ||H||"
        )
    ortho = float(np.linalg.norm(v.conj().T @ v - np.eye(h.shape[0])))
    if ortho > 1e-10:
        raise NumericalError(
            f"eigenvector matrix not unitary: ||V†V - I|| = {ortho:.3e}"
        )
    return w, v


def eig_general(m, *, residual_tol: float = EIG_RESIDUAL_TOL) -> list[tuple[complex, np.ndarray]]:
    """Full eigenvalue multiset of a general square matrix.

    Returns a list of ``(eigenvalue, unit eigenvector)`` pairs covering every
    eigenvalue with its algebraic multiplicity.  Each pair satisfies
    ``||M v - lam v|| <= residual_tol * ||M||``; pairs violating the bound, or
    outright solver divergence, raise :class:`EigenSolverError` carrying the
    pairs that did pass.
    """
    m = as_matrix(m, square=True)
    try:
        w, v = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigendecomposition did not converge: {exc}") from exc
    scale = float(np.linalg.norm(m))
    good: list[tuple[complex, np.ndarray]] = []
    bad: list[float] = []
    for k in range(len(w)):
        lam = complex(w[k])
        vec = v[:, k]
        resid = float(np.linalg.norm(m @ vec - lam * vec))
        if resid > residual_tol * scale:
            bad.append(resid)
        else:
            good.append((lam, vec))
    if bad:
        raise EigenSolverError(
            f"{len(bad)} eigenpair(s) exceed the residual bound "
            f"{residual_tol:.1e} * ||M|| (worst {max(bad):.3e})",
            partial=good,
        )
    return good


# --- text serialization (debug dumps and the JSON wire format) ---------------


def format_complex(z: complex) -> str:
    """Render one entry as ``re(+/-)imj`` text, e.g. ``1.5+0.25j``."""
    return (FLOAT_FMT % z.real) + ("%+.17g" % z.imag) + "j"


def matrix_to_csv(mat) -> str:
    """Row-major CSV dump, one matrix row per line."""
    mat = as_matrix(mat)
    return "\n".join(
        ",".join(format_complex(complex(entry)) for entry in row) for row in mat
    ) + "\n"


def matrix_from_csv(text: str) -> np.ndarray:
    """Parse the CSV dump format back into a complex matrix."""
    rows = []
    for line in text.strip().splitlines():
        cells = [complex(cell.strip()) for cell in line.split(",")]
        rows.append(cells)
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValidationError("CSV matrix must be non-empty and rectangular")
    return as_matrix(rows)


def matrix_to_json(mat) -> list[list[list[float]]]:
    """Nested-array JSON form: each entry as an ``[re, im]`` pair."""
    mat = as_matrix(mat)
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def matrix_from_json(data) -> np.ndarray:
    """Parse the nested ``[re, im]`` JSON form into a complex matrix."""
    try:
        rows = [[complex(entry[0], entry[1]) for entry in row] for row in data]
    except (TypeError, IndexError) as exc:
        raise ValidationError(f"malformed matrix JSON: {exc}") from exc
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValidationError("JSON matrix must be non-empty and rectangular")
    return as_matrix(rows)
