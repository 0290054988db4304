"""Construction of the decoherent coined walk on the N-cycle.

State space is walker ⊗ coin with dimension 2N; basis index ``2x + b`` holds
node ``x`` with coin bit ``b`` (0 = right-mover, 1 = left-mover).  One step
applies the coin to every node, shifts conditionally around the cycle, and
then, with probability ``q``, a projective position-and-coin measurement
whose outcome is discarded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import as_matrix, hs_norm
from .quantum import DensityMatrix, NoisyUnitaryMixture, QuantumOperation

COIN_BITS = {"r": 0, "l": 1}


@dataclass(frozen=True)
class CoinOperator:
    """A 2x2 unitary coin with all four entries non-zero.

    Zero entries would let a walker move in only one direction from some
    coin state, which breaks the mixing argument the rest of the package
    relies on, so they are rejected up front.
    """

    u11: complex
    u12: complex
    u21: complex
    u22: complex

    def __post_init__(self):
        m = self.matrix
        dev = hs_norm(m.conj().T @ m - np.eye(2))
        if dev > 1e-12:
            raise ValidationError(f"coin is not unitary (deviation {dev:.3e})")
        if min(abs(self.u11), abs(self.u12), abs(self.u21), abs(self.u22)) <= 1e-12:
            raise ValidationError("coin must have all four entries non-zero")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.u11, self.u12], [self.u21, self.u22]], dtype=complex
        )

    @classmethod
    def hadamard(cls) -> "CoinOperator":
        s = 1.0 / np.sqrt(2.0)
        return cls(s, s, s, -s)

    @classmethod
    def from_angles(cls, theta: float, phi1: float = 0.0, phi2: float = 0.0) -> "CoinOperator":
        """Generic coin: diag phases on a real rotation by ``theta``.

        ``theta`` must lie strictly inside (0, pi/2) so that no entry
        vanishes; the phases are unconstrained.
        """
        theta = float(theta)
        if not 0.0 < theta < np.pi / 2:
            raise ValidationError(
                f"theta={theta} must lie strictly within (0, pi/2)"
            )
        c, s = np.cos(theta), np.sin(theta)
        e1, e2 = np.exp(1j * phi1), np.exp(1j * phi2)
        return cls(c * e1, s * e2, -s * np.conj(e2), c * np.conj(e1))

    @classmethod
    def from_matrix(cls, mat) -> "CoinOperator":
        mat = as_matrix(mat, square=True)
        if mat.shape != (2, 2):
            raise ValidationError(f"coin must be 2x2, got {mat.shape}")
        return cls(complex(mat[0, 0]), complex(mat[0, 1]),
                   complex(mat[1, 0]), complex(mat[1, 1]))


@dataclass(frozen=True)
class WalkSpec:
    """Cycle length, per-step measurement probability, and the coin."""

    n: int
    q: float
    coin: CoinOperator

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise ValidationError(f"cycle length must be an integer, got {self.n!r}")
        if self.n < 3:
            raise ValidationError(f"cycle length must be >= 3, got {self.n}")
        if not 0.0 < float(self.q) < 1.0:
            raise ValidationError(
                f"measurement probability q={self.q} must lie strictly in (0, 1)"
            )
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "q", float(self.q))

    @property
    def dim(self) -> int:
        return 2 * self.n


def build_shift(n: int) -> np.ndarray:
    """Conditional shift: right-movers to x+1, left-movers to x-1 (mod n)."""
    if n < 3:
        raise ValidationError(f"cycle length must be >= 3, got {n}")
    s = np.zeros((2 * n, 2 * n), dtype=complex)
    for x in range(n):
        s[2 * ((x + 1) % n), 2 * x] = 1.0
        s[2 * ((x - 1) % n) + 1, 2 * x + 1] = 1.0
    return s


def build_step_unitary(spec: WalkSpec) -> np.ndarray:
    """One coherent step: coin on every node, then the conditional shift."""
    return build_shift(spec.n) @ np.kron(np.eye(spec.n), spec.coin.matrix)


def build_projectors(n: int) -> QuantumOperation:
    """Full projective measurement in the node ⊗ coin basis (2n outcomes)."""
    if n < 3:
        raise ValidationError(f"cycle length must be >= 3, got {n}")
    dim = 2 * n
    kraus = []
    for k in range(dim):
        p = np.zeros((dim, dim), dtype=complex)
        p[k, k] = 1.0
        kraus.append(p)
    return QuantumOperation(tuple(kraus))


def build_channel(spec: WalkSpec) -> NoisyUnitaryMixture:
    """The one-step channel: coherent step, then measure with probability q.

    Returned as a mixture with a single unitary term of weight ``1 - q`` and
    noise family ``{P_k U}`` over all 2n projectors, carrying weight ``q``.
    """
    u = build_step_unitary(spec)
    noise = tuple(p @ u for p in build_projectors(spec.n).kraus)
    return NoisyUnitaryMixture(((1.0 - spec.q, u),), spec.q, noise)


def parity_sign_operator(n: int) -> np.ndarray:
    """Diagonal operator with sign ``(-1)^x`` on both coin states of node x.

    Defined for even cycles only: there the alternating sign pattern is
    consistent around the loop and commutes with every two-step motion, so
    it survives the dynamics that wash everything else out.
    """
    if n < 3:
        raise ValidationError(f"cycle length must be >= 3, got {n}")
    if n % 2 != 0:
        raise ValidationError(f"parity sign operator needs an even cycle, got n={n}")
    signs = np.repeat([(-1.0) ** x for x in range(n)], 2)
    return np.diag(signs).astype(complex)


def node_state(spec: WalkSpec, x: int, coin: str = "r") -> DensityMatrix:
    """State localized at node ``x``: coin bit 'r', 'l', or 'mixed'.

    'mixed' puts equal classical weight on both coin states of the node;
    the other two are pure.
    """
    x = int(x)
    if not 0 <= x < spec.n:
        raise ValidationError(f"node {x} outside cycle of length {spec.n}")
    if coin == "mixed":
        mat = np.zeros((spec.dim, spec.dim), dtype=complex)
        mat[2 * x, 2 * x] = 0.5
        mat[2 * x + 1, 2 * x + 1] = 0.5
        return DensityMatrix(mat)
    if coin not in COIN_BITS:
        raise ValidationError(f"coin must be 'r', 'l', or 'mixed', got {coin!r}")
    vec = np.zeros(spec.dim, dtype=complex)
    vec[2 * x + COIN_BITS[coin]] = 1.0
    return DensityMatrix.pure(vec)


def parity_balanced_state(spec: WalkSpec, x: int = 0, coin: str = "r") -> DensityMatrix:
    """Even mixture of two adjacent nodes, same coin bit.

    On an even cycle the two components sit on opposite parity classes, so
    the alternating-sign overlap vanishes and no period-two flicker survives
    in the long-time state.
    """
    if coin not in COIN_BITS:
        raise ValidationError(f"coin must be 'r' or 'l', got {coin!r}")
    x = int(x)
    if not 0 <= x < spec.n:
        raise ValidationError(f"node {x} outside cycle of length {spec.n}")
    b = COIN_BITS[coin]
    mat = np.zeros((spec.dim, spec.dim), dtype=complex)
    mat[2 * x + b, 2 * x + b] = 0.5
    y = (x + 1) % spec.n
    mat[2 * y + b, 2 * y + b] = 0.5
    return DensityMatrix(mat)


def initial_state(spec: WalkSpec, init: dict | None = None) -> DensityMatrix:
    """Resolve an initial-state description dict to a density matrix.

    ``{"kind": "node", "x": int, "coin": "r"|"l"}`` gives a localized pure
    state; ``{"kind": "parity-balanced", ...}`` the two-node mixture.  A
    missing dict defaults to node 0 with the right-moving coin.
    """
    if init is None:
        init = {"kind": "node"}
    kind = init.get("kind", "node")
    x = int(init.get("x", 0))
    coin = init.get("coin", "r")
    if kind == "node":
        return node_state(spec, x, coin)
    if kind == "parity-balanced":
        return parity_balanced_state(spec, x, coin)
    raise ValidationError(f"unknown initial state kind {kind!r}")


def walk_from_json(data: dict) -> tuple[WalkSpec, DensityMatrix]:
    """Parse a walk description dict into a spec and its initial state."""
    try:
        n = int(data["N"])
        q = float(data["q"])
        coin_data = data["coin"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed walk JSON: {exc}") from exc
    if isinstance(coin_data, dict) and coin_data.get("kind") == "hadamard":
        coin = CoinOperator.hadamard()
    elif isinstance(coin_data, dict) and "theta" in coin_data:
        coin = CoinOperator.from_angles(
            float(coin_data["theta"]),
            float(coin_data.get("phi1", 0.0)),
            float(coin_data.get("phi2", 0.0)),
        )
    else:
        raise ValidationError(f"unrecognized coin description {coin_data!r}")
    spec = WalkSpec(n, q, coin)
    return spec, initial_state(spec, data.get("initial"))


def walk_to_json(spec: WalkSpec, init: dict | None = None) -> dict:
    """Inverse of :func:`walk_from_json` for hadamard/angle coins."""
    coin = spec.coin
    if abs(coin.u11 - 1 / np.sqrt(2)) < 1e-15 and abs(coin.u22 + 1 / np.sqrt(2)) < 1e-15 \
            and abs(coin.u12 - 1 / np.sqrt(2)) < 1e-15 and abs(coin.u21 - 1 / np.sqrt(2)) < 1e-15:
        coin_data: dict = {"kind": "hadamard"}
    else:
        theta = float(np.arctan2(abs(coin.u12), abs(coin.u11)))
        coin_data = {
            "theta": theta,
            "phi1": float(np.angle(coin.u11)),
            "phi2": float(np.angle(coin.u12)),
        }
    out = {"N": spec.n, "q": spec.q, "coin": coin_data}
    if init is not None:
        out["initial"] = init
    return out
