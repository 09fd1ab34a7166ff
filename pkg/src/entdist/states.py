"""Constructors for the states used throughout the package.

Includes the specific named states that carry the worked examples plus
seeded random ensembles for inequality sweeps.  All constructors are pure:
a ``RandomSpec`` fully determines the output, there is no hidden global
generator state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import EIG_CLIP, SystemShape, dag, partial_trace

ENSEMBLES = ("haar-pure", "ginibre-mixed", "dirichlet-pauli")


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian PSD unit-trace matrix tagged with its subsystem shape."""

    mat: np.ndarray
    shape: SystemShape

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        if mat.shape != (self.shape.total, self.shape.total):
            raise ValueError(
                f"matrix shape {mat.shape} does not match system shape {self.shape.dims}"
            )
        if np.linalg.norm(mat - dag(mat)) > 1e-10 * (1.0 + np.linalg.norm(mat)):
            raise ValueError("density matrix is not Hermitian within tolerance")
        mat = (mat + dag(mat)) / 2.0
        if abs(np.trace(mat).real - 1.0) > 1e-10:
            raise ValueError(f"density matrix trace is {np.trace(mat).real}, not 1")
        w = np.linalg.eigvalsh(mat)
        if float(np.min(w)) < -EIG_CLIP:
            raise ValueError(f"density matrix has negative eigenvalue {np.min(w):.3e}")
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.shape.total

    def reduced(self, keep) -> "DensityMatrix":
        """Marginal on the subsystems in ``keep`` (order preserved)."""
        keep = self.shape.validate_indices(keep)
        sub = SystemShape(tuple(self.shape.dims[i] for i in keep))
        return DensityMatrix(partial_trace(self.mat, self.shape, keep), sub)


@dataclass(frozen=True)
class PureState:
    """Unit vector tagged with its subsystem shape."""

    vec: np.ndarray
    shape: SystemShape

    def __post_init__(self):
        vec = np.asarray(self.vec, dtype=complex).reshape(-1)
        if vec.shape[0] != self.shape.total:
            raise ValueError(
                f"vector length {vec.shape[0]} does not match shape {self.shape.dims}"
            )
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state vector has norm {norm}, not 1")
        object.__setattr__(self, "vec", vec)

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.vec, self.vec.conj()), self.shape)


@dataclass(frozen=True)
class RandomSpec:
    """Seeded draw specification; same spec always yields the same output."""

    seed: int
    ensemble: str = "ginibre-mixed"

    def __post_init__(self):
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"unknown ensemble {self.ensemble!r}, pick from {ENSEMBLES}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def seed_stream(master_seed: int, n: int) -> list[int]:
    """Derive ``n`` independent child seeds from a master seed."""
    children = np.random.SeedSequence(master_seed).spawn(n)
    return [int(c.generate_state(1)[0]) for c in children]


def max_entangled(d: int) -> PureState:
    """Maximally entangled state (1/sqrt(d)) sum_i |ii> on shape (d, d)."""
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d}")
    vec = np.zeros(d * d, dtype=complex)
    vec[:: d + 1] = 1.0 / math.sqrt(d)
    return PureState(vec, SystemShape((d, d)))


def alpha_state(alpha: float) -> PureState:
    """Two-qubit state sqrt(1-alpha)|00> + sqrt(alpha)|11>."""
    if alpha < 0.0 or alpha > 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    vec = np.zeros(4, dtype=complex)
    vec[0] = math.sqrt(1.0 - alpha)
    vec[3] = math.sqrt(alpha)
    return PureState(vec, SystemShape((2, 2)))


def ef_squared_witness_state() -> PureState:
    """The (4,2,2) state (|000> + |101> + |210> + |311>)/2, order (A, B, C)."""
    shape = SystemShape((4, 2, 2))
    vec = np.zeros(16, dtype=complex)
    for a, b, c in ((0, 0, 0), (1, 0, 1), (2, 1, 0), (3, 1, 1)):
        vec[a * 4 + b * 2 + c] = 0.5
    return PureState(vec, shape)


def random_pure(shape: SystemShape, spec: RandomSpec) -> PureState:
    """Haar-random pure state via a normalized complex Gaussian vector."""
    if spec.ensemble != "haar-pure":
        raise ValueError(f"random_pure needs the haar-pure ensemble, got {spec.ensemble}")
    rng = spec.rng()
    vec = rng.standard_normal(shape.total) + 1j * rng.standard_normal(shape.total)
    return PureState(vec / np.linalg.norm(vec), shape)


def random_mixed(shape: SystemShape, spec: RandomSpec) -> DensityMatrix:
    """Ginibre-ensemble mixed state G G^dag / Tr[G G^dag]."""
    if spec.ensemble != "ginibre-mixed":
        raise ValueError(
            f"random_mixed needs the ginibre-mixed ensemble, got {spec.ensemble}"
        )
    rng = spec.rng()
    d = shape.total
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ dag(g)
    return DensityMatrix(m / np.trace(m).real, shape)


def random_probs(n: int, spec: RandomSpec) -> np.ndarray:
    """Flat-Dirichlet probability vector of length ``n``."""
    if spec.ensemble != "dirichlet-pauli":
        raise ValueError(
            f"random_probs needs the dirichlet-pauli ensemble, got {spec.ensemble}"
        )
    return spec.rng().dirichlet(np.ones(n))
