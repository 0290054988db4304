"""Superoperator matricization and peripheral spectrum analysis.

The channel acting on n×n matrices becomes an n²×n² matrix under the
column-stacking convention vec(AXB) = (Bᵀ ⊗ A) vec(X).  Its eigenvalues on
the unit circle (the peripheral spectrum) decide what survives repeated
application; everything strictly inside the disk decays geometrically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .linalg import as_matrix, eig_general, hs_inner, hs_norm, matrix_to_json
from .quantum import NoisyUnitaryMixture, QuantumOperation, apply, apply_mixture
from .walk import WalkSpec, build_channel, parity_sign_operator

#: Default modulus cut separating peripheral from interior eigenvalues.
TOL_PERI = 1e-6

#: Enforced bound on ||Phi(X) - lam X|| for unit-norm peripheral eigenmatrices.
PERIPHERAL_RESIDUAL_TOL = 1e-7


def vec(x) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return as_matrix(x).reshape(-1, order="F")


def unvec(v, n: int) -> np.ndarray:
    """Inverse of :func:`vec` for an n×n matrix."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != n * n:
        raise ValidationError(f"vector of length {v.size} is not {n}x{n}")
    return v.reshape((n, n), order="F")


@dataclass(eq=False)
class Superoperator:
    """Matricized channel: ``mat @ vec(X) == vec(channel(X))``."""

    dim: int
    mat: np.ndarray


def matricize(g: NoisyUnitaryMixture) -> Superoperator:
    """Matricize a mixture channel under the column-stacking convention.

    ``vec(U X U†) = (conj(U) ⊗ U) vec(X)``, so the matrix is the weighted sum
    of those tensor squares over the unitary and noise families.  The result
    is cross-checked against direct application on the identity.
    """
    n = g.dim
    mat = np.zeros((n * n, n * n), dtype=complex)
    for p, u in g.unitaries:
        if p > 0:
            mat += p * np.kron(u.conj(), u)
    if g.q > 0:
        for a in g.noise:
            mat += g.q * np.kron(a.conj(), a)
    witness = float(
        np.linalg.norm(mat @ vec(np.eye(n)) - vec(apply_mixture(g, np.eye(n))))
    )
    if witness > 1e-12 * np.sqrt(n):
        raise NumericalError(
            f"matricization witness failed: |[Phi]vec(I) - vec(Phi(I))| = {witness:.3e}"
        )
    return Superoperator(n, mat)


def adjoint_channel(spec: WalkSpec) -> NoisyUnitaryMixture:
    """Adjoint of the walk channel with respect to the HS inner product.

    Each Kraus operator is replaced by its adjoint, giving
    ``(1-q) U†·U + q Σ U† P_k · P_k U``.  Because the walk channel is both
    trace-preserving and unital, the adjoint is again a valid mixture.
    """
    return adjoint_mixture(build_channel(spec))


def adjoint_mixture(g: NoisyUnitaryMixture) -> NoisyUnitaryMixture:
    """Adjoint of any mixture whose noise family is bistochastic."""
    unitaries = tuple((p, u.conj().T) for p, u in g.unitaries)
    noise = tuple(a.conj().T for a in g.noise)
    return NoisyUnitaryMixture(unitaries, g.q, noise)


@dataclass(eq=False)
class PeripheralMode:
    """One unit-circle eigenvalue with its matricized, phase-fixed eigenmatrix."""

    eigenvalue: complex
    eigenmatrix: np.ndarray
    residual: float


@dataclass(eq=False)
class SpectralReport:
    """Peripheral modes plus the largest interior eigenvalue modulus."""

    peripheral: list[PeripheralMode]
    interior_max_modulus: float
    tol_peri: float

    def distinct_eigenvalues(self, *, tol: float = 1e-8) -> list[complex]:
        """Peripheral eigenvalues with near-duplicates collapsed."""
        out: list[complex] = []
        for mode in self.peripheral:
            if all(abs(mode.eigenvalue - lam) > tol for lam in out):
                out.append(mode.eigenvalue)
        return out

    def to_json(self) -> dict:
        return {
            "peripheral": [
                {
                    "re": float(m.eigenvalue.real),
                    "im": float(m.eigenvalue.imag),
                    "residual": float(m.residual),
                    "eigenmatrix": matrix_to_json(m.eigenmatrix),
                }
                for m in self.peripheral
            ],
            "interior_max_modulus": float(self.interior_max_modulus),
            "tol": float(self.tol_peri),
        }


def _fix_phase(x: np.ndarray) -> np.ndarray:
    """Rotate a unit-norm matrix so its leading diagonal entry is real positive.

    "Leading" means the first diagonal entry of non-negligible modulus; if the
    whole diagonal vanishes the first such entry anywhere is used instead.
    """
    pivot = None
    for d in np.diagonal(x):
        if abs(d) > 1e-12:
            pivot = d
            break
    if pivot is None:
        flat = x.reshape(-1)
        idx = np.argmax(np.abs(flat))
        if abs(flat[idx]) <= 1e-12:
            raise NumericalError("cannot phase-fix a numerically zero eigenmatrix")
        pivot = flat[idx]
    return x * (abs(pivot) / pivot)


def peripheral_spectrum(s: Superoperator, tol_peri: float = TOL_PERI) -> SpectralReport:
    """Split the superoperator spectrum at modulus ``1 - tol_peri``.

    Eigenvectors above the cut are matricized back to n×n eigenmatrices,
    orthonormalized within any repeated eigenvalue (the eigensolver basis of
    a degenerate eigenspace is arbitrary), normalized to unit HS norm, and
    phase-fixed.  Each reported mode satisfies the forward residual bound
    ``||Phi(X) - lam X|| <= 1e-7``; interior eigenvalues contribute only their
    largest modulus.
    """
    if not 0 < tol_peri < 1:
        raise ValidationError(f"tol_peri={tol_peri} must lie in (0, 1)")
    pairs = eig_general(s.mat)
    cut = 1.0 - tol_peri
    peri = [(lam, v) for lam, v in pairs if abs(lam) >= cut]
    interior = [abs(lam) for lam, v in pairs if abs(lam) < cut]
    interior_max = max(interior) if interior else 0.0

    # Group eigenvalues that agree to 1e-8 so degenerate eigenspaces can be
    # re-orthonormalized before matricization.
    clusters: list[list[tuple[complex, np.ndarray]]] = []
    for lam, v in sorted(peri, key=lambda t: (-round(t[0].real, 8), round(t[0].imag, 8))):
        for cluster in clusters:
            if abs(cluster[0][0] - lam) <= 1e-8:
                cluster.append((lam, v))
                break
        else:
            clusters.append([(lam, v)])

    modes: list[PeripheralMode] = []
    for cluster in clusters:
        vecs = np.column_stack([v for _, v in cluster])
        basis, _ = np.linalg.qr(vecs)
        for k, (lam, _) in enumerate(cluster):
            x = unvec(basis[:, k], s.dim)
            x = _fix_phase(x / hs_norm(x))
            resid = float(np.linalg.norm(unvec(s.mat @ vec(x), s.dim) - lam * x))
            if resid > PERIPHERAL_RESIDUAL_TOL:
                raise NumericalError(
                    f"peripheral eigenmatrix for lam={lam:.6g} has residual "
                    f"{resid:.3e} above {PERIPHERAL_RESIDUAL_TOL:.1e}"
                )
            modes.append(PeripheralMode(lam, x, resid))
    return SpectralReport(modes, float(interior_max), float(tol_peri))


@dataclass(frozen=True)
class ModeMatch:
    """One peripheral mode scored against its predicted eigenmatrix."""

    eigenvalue: complex
    target: str
    deviation: float


@dataclass(frozen=True)
class StructureCheck:
    passed: bool
    matches: tuple[ModeMatch, ...]
    detail: str


def verify_eigenspace_structure(report: SpectralReport, n: int, *,
                                tol: float = 1e-7) -> StructureCheck:
    """Check a walk-channel report against the predicted attractor structure.

    Odd cycles must show exactly one peripheral eigenvalue, 1, with
    eigenmatrix proportional to the identity.  Even cycles must add a second
    eigenvalue, -1, with eigenmatrix proportional to the alternating sign
    operator.  Each mode is compared against its target by eigenvalue, so a
    surplus mode or a wrong multiplicity fails with an explicit message.
    """
    if n < 3:
        raise ValidationError(f"cycle length must be >= 3, got {n}")
    dim = 2 * n
    targets = {1.0: ("uniform", np.eye(dim, dtype=complex) / np.sqrt(dim))}
    if n % 2 == 0:
        targets[-1.0] = ("parity", parity_sign_operator(n) / np.sqrt(dim))
    expected_count = len(targets)

    if len(report.peripheral) != expected_count:
        return StructureCheck(
            False, (),
            f"expected {expected_count} peripheral mode(s) for n={n}, "
            f"found {len(report.peripheral)}",
        )

    matches = []
    problems = []
    seen: set[str] = set()
    for mode in report.peripheral:
        lam = mode.eigenvalue
        key = min(targets, key=lambda t: abs(lam - t))
        name, target = targets[key]
        if abs(lam - key) > tol:
            problems.append(f"eigenvalue {lam:.9g} is {abs(lam - key):.3e} from {key:g}")
        if name in seen:
            problems.append(f"target '{name}' matched twice (degenerate peripheral mode)")
        seen.add(name)
        dev = hs_norm(mode.eigenmatrix - target)
        matches.append(ModeMatch(lam, name, dev))
        if dev > tol:
            problems.append(f"eigenmatrix for {key:g} deviates from {name} by {dev:.3e}")
    if seen != {name for name, _ in targets.values()}:
        problems.append(f"matched targets {sorted(seen)} != expected")
    detail = "; ".join(problems) if problems else "structure as predicted"
    return StructureCheck(not problems, tuple(matches), detail)


@dataclass(frozen=True)
class ConditionReport:
    """Both directions of the unit-eigenoperator characterization.

    ``forward`` holds when every mixture unitary intertwines with the
    candidate (U X = lam X U) and its conjugation agrees with the noise
    action (U X U† = sum_j A_j X A_j†).  ``backward`` holds when the channel
    itself maps X to lam X.  The two verdicts agree for a correct channel.
    """

    forward_pass: bool
    backward_pass: bool
    intertwine_residuals: tuple[float, ...]
    noise_residuals: tuple[float, ...]
    eigen_residual: float

    @property
    def equivalent(self) -> bool:
        return self.forward_pass == self.backward_pass


def check_unit_eigenoperator_conditions(
    g: NoisyUnitaryMixture, x, lam: complex, *, tol: float = 1e-8
) -> ConditionReport:
    """Test the two-sided characterization of unit-circle eigenoperators."""
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-9:
        raise ValidationError(f"|lam| must be 1 within 1e-9, got |{lam}| = {abs(lam)}")
    x = as_matrix(x, square=True)
    if x.shape[0] != g.dim:
        raise ValidationError(f"candidate dim {x.shape[0]} != mixture dim {g.dim}")
    scale = hs_norm(x)
    if scale < 1e-14:
        raise ValidationError("candidate matrix is numerically zero")

    noise_applied = None
    if g.q > 0:
        noise_applied = apply(QuantumOperation(g.noise), x)
    intertwine = []
    noise_agree = []
    for _, u in g.unitaries:
        intertwine.append(float(np.linalg.norm(u @ x - lam * (x @ u))))
        if noise_applied is not None:
            noise_agree.append(float(np.linalg.norm(u @ x @ u.conj().T - noise_applied)))
    forward = all(r <= tol * scale for r in intertwine + noise_agree)
    eigen_resid = float(np.linalg.norm(apply_mixture(g, x) - lam * x))
    backward = eigen_resid <= tol * scale
    return ConditionReport(
        forward, backward, tuple(intertwine), tuple(noise_agree), eigen_resid
    )


@dataclass(frozen=True)
class OrthogonalityCheck:
    passed: bool
    max_overlap: float
    pairs_checked: int


def check_orthogonality(report: SpectralReport, *, tol: float = 1e-7) -> OrthogonalityCheck:
    """Peripheral eigenmatrices of distinct eigenvalues must be HS-orthogonal.

    Pairs whose eigenvalues coincide (within 1e-8) are skipped: inside one
    degenerate eigenspace orthogonality is a basis choice, not a guarantee.
    Fewer than two modes passes vacuously.
    """
    worst = 0.0
    pairs = 0
    modes = report.peripheral
    for i in range(len(modes)):
        for j in range(i + 1, len(modes)):
            if abs(modes[i].eigenvalue - modes[j].eigenvalue) <= 1e-8:
                continue
            pairs += 1
            worst = max(worst, abs(hs_inner(modes[i].eigenmatrix, modes[j].eigenmatrix)))
    return OrthogonalityCheck(worst <= tol, worst, pairs)
