"""CPTP maps in Kraus form: channel families, application, composition.

Channel equality is decided on Choi matrices because Kraus representations
are not unique.  The Markovian families use exponential decay rates, the
canonical semigroups satisfying the two-time composition law exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import PAULIS, SystemShape, dag, kron_all
from .states import DensityMatrix, RandomSpec

MARKOV_KINDS = ("amplitude-damping", "phase-damping")


@dataclass(frozen=True)
class KrausChannel:
    """CPTP map given by Kraus operators on a ``dim``-dimensional system."""

    kraus: tuple[np.ndarray, ...]
    dim: int

    def __init__(self, kraus: Sequence[np.ndarray], dim: int | None = None):
        ops = tuple(np.asarray(k, dtype=complex) for k in kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0] if dim is None else int(dim)
        for k in ops:
            if k.shape != (d, d):
                raise ValueError(f"Kraus operator shape {k.shape} != ({d}, {d})")
        total = sum(dag(k) @ k for k in ops)
        if np.linalg.norm(total - np.eye(d), 2) > 1e-10:
            raise ValueError("Kraus operators do not satisfy completeness")
        object.__setattr__(self, "kraus", ops)
        object.__setattr__(self, "dim", d)

    def apply_matrix(self, mat: np.ndarray) -> np.ndarray:
        """Raw action sum_k K mat K^dag on a ``dim x dim`` matrix."""
        mat = np.asarray(mat, dtype=complex)
        out = np.zeros_like(mat)
        for k in self.kraus:
            out += k @ mat @ dag(k)
        return out


@dataclass(frozen=True)
class PauliSpec:
    """Probability four-vector (p0, p1, p2, p3) of a single-qubit Pauli channel."""

    p: tuple[float, float, float, float]

    def __init__(self, p: Sequence[float]):
        p = tuple(float(x) for x in p)
        if len(p) != 4:
            raise ValueError(f"a Pauli spec needs 4 probabilities, got {len(p)}")
        if any(x < 0 for x in p):
            raise ValueError(f"negative probability in {p}")
        if abs(sum(p) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {sum(p)}, not 1")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class MarkovFamily:
    """Two-time Markovian family with exponential decay of the given rate."""

    kind: str
    rate: float

    def __post_init__(self):
        if self.kind not in MARKOV_KINDS:
            raise ValueError(f"unknown Markov family {self.kind!r}, pick from {MARKOV_KINDS}")
        if self.rate <= 0:
            raise ValueError(f"rate must be positive, got {self.rate}")


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel([np.eye(d, dtype=complex)], d)


def pauli_channel(spec: PauliSpec) -> KrausChannel:
    """Random-Pauli channel with Kraus operators sqrt(p_i) sigma_i."""
    ops = [math.sqrt(p) * s for p, s in zip(spec.p, PAULIS) if p > 0.0]
    return KrausChannel(ops, 2)


def phase_damping(p: float) -> KrausChannel:
    """Phase damping (1-p) rho + p Z rho Z, a Pauli channel special case."""
    if p < 0.0 or p > 1.0:
        raise ValueError(f"dephasing probability must lie in [0, 1], got {p}")
    return pauli_channel(PauliSpec((1.0 - p, 0.0, 0.0, p)))


def amplitude_damping(gamma: float) -> KrausChannel:
    """Single-qubit amplitude damping with damping parameter gamma."""
    if gamma < 0.0 or gamma > 1.0:
        raise ValueError(f"damping parameter must lie in [0, 1], got {gamma}")
    k1 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex)
    k2 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return KrausChannel([k1, k2], 2)


def weyl_unitaries(d: int) -> list[np.ndarray]:
    """Shift/clock unitaries U_{a,b} = X^a Z^b, flat index a*d + b."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    omega = np.exp(2j * np.pi / d)
    x = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    out = []
    for a in range(d):
        xa = np.linalg.matrix_power(x, a)
        for b in range(d):
            out.append(xa @ np.diag(omega ** (b * np.arange(d))))
    return out


def weyl_channel(d: int, probs: Sequence[float]) -> KrausChannel:
    """Weyl-covariant channel sum_i p_i U_i rho U_i^dag on dimension ``d``."""
    probs = [float(p) for p in probs]
    if len(probs) != d * d:
        raise ValueError(f"need {d * d} probabilities for dimension {d}, got {len(probs)}")
    if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-12:
        raise ValueError("probabilities must be a simplex vector")
    us = weyl_unitaries(d)
    ops = [math.sqrt(p) * u for p, u in zip(probs, us) if p > 0.0]
    return KrausChannel(ops, d)


def random_pauli_spec(spec: RandomSpec) -> PauliSpec:
    """Flat-Dirichlet random Pauli channel probabilities."""
    from .states import random_probs

    return PauliSpec(tuple(random_probs(4, spec)))


def random_channel(dim: int, n_kraus: int, seed: int) -> KrausChannel:
    """Haar-random CPTP channel from a random Stinespring isometry."""
    if n_kraus < 1:
        raise ValueError("need at least one Kraus operator")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim * n_kraus, dim)) + 1j * rng.standard_normal(
        (dim * n_kraus, dim)
    )
    q, _ = np.linalg.qr(g)
    return KrausChannel([q[i * dim : (i + 1) * dim, :] for i in range(n_kraus)], dim)


def _embed(op: np.ndarray, shape: SystemShape, target: int) -> np.ndarray:
    pre = math.prod(shape.dims[:target]) if target > 0 else 1
    post = math.prod(shape.dims[target + 1 :]) if target + 1 < len(shape) else 1
    return kron_all([np.eye(pre, dtype=complex), op, np.eye(post, dtype=complex)])


def apply_on(channel: KrausChannel, rho: DensityMatrix, target: int) -> DensityMatrix:
    """Apply ``channel`` to the subsystem at position ``target``."""
    target = int(target)
    if not 0 <= target < len(rho.shape):
        raise IndexError(f"target {target} out of range for shape {rho.shape.dims}")
    if channel.dim != rho.shape.dims[target]:
        raise ValueError(
            f"channel dimension {channel.dim} != subsystem dimension "
            f"{rho.shape.dims[target]}"
        )
    out = np.zeros_like(rho.mat)
    for k in channel.kraus:
        full = _embed(k, rho.shape, target)
        out += full @ rho.mat @ dag(full)
    return DensityMatrix(out, rho.shape)


def compose(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    """Composition a∘b (apply ``b`` first), Kraus set {A_i B_j}."""
    if a.dim != b.dim:
        raise ValueError(f"channel dimensions differ: {a.dim} vs {b.dim}")
    return KrausChannel([ka @ kb for ka in a.kraus for kb in b.kraus], a.dim)


def product_channel(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    """Tensor product channel acting on a composite of dimension a.dim*b.dim."""
    ops = [np.kron(ka, kb) for ka in a.kraus for kb in b.kraus]
    return KrausChannel(ops, a.dim * b.dim)


def markov_snapshot(fam: MarkovFamily, t1: float, t2: float) -> KrausChannel:
    """Two-time snapshot of a Markovian family on the interval [t1, t2]."""
    if t1 < 0 or t2 < t1:
        raise ValueError(f"need t2 >= t1 >= 0, got t1={t1}, t2={t2}")
    decay = 1.0 - math.exp(-fam.rate * (t2 - t1))
    if fam.kind == "amplitude-damping":
        return amplitude_damping(decay)
    return phase_damping(decay / 2.0)


def choi(channel: KrausChannel) -> np.ndarray:
    """Unnormalized Choi matrix sum_k (K ⊗ I)|Omega><Omega|(K ⊗ I)^dag."""
    d = channel.dim
    omega = np.zeros(d * d, dtype=complex)
    omega[:: d + 1] = 1.0
    j = np.zeros((d * d, d * d), dtype=complex)
    for k in channel.kraus:
        v = np.kron(k, np.eye(d, dtype=complex)) @ omega
        j += np.outer(v, v.conj())
    return j


def channels_equal(a: KrausChannel, b: KrausChannel, tol: float = 1e-10) -> bool:
    """True iff the Choi matrices agree entrywise within ``tol``."""
    if a.dim != b.dim:
        raise ValueError(f"channel dimensions differ: {a.dim} vs {b.dim}")
    return bool(np.max(np.abs(choi(a) - choi(b))) <= tol)
