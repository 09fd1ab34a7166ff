"""Dense complex linear algebra and multipartite index bookkeeping.

Everything downstream (states, channels, quantifiers) is expressed through
the primitives in this module.  The subsystem ordering convention is fixed
once and for all: the basis vector |i0 i1 ... i_{n-1}> of a system with
dimensions (d0, ..., d_{n-1}) has flat index

    sum_k i_k * prod_{j>k} d_j

which is exactly the ordering produced by ``numpy.kron``.  All logarithms
are base 2, so entropic quantities are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

#: hard cap on the total Hilbert-space dimension handled by this package
DIM_CAP = 64

#: eigenvalues in [-EIG_CLIP, 0] are treated as round-off and clipped to 0
EIG_CLIP = 1e-10

#: relative threshold for support detection (w.r.t. the largest eigenvalue)
SUPPORT_RTOL = 1e-10

_LN2 = math.log(2.0)

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True)
class SystemShape:
    """Ordered subsystem dimensions of a multipartite system.

    Subsystems are addressed by their position 0..n-1.  Every dimension
    must be at least 2 and the total dimension may not exceed ``DIM_CAP``.
    """

    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if not dims:
            raise ValueError("shape needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ValueError(f"every subsystem dimension must be >= 2, got {dims}")
        total = math.prod(dims)
        if total > DIM_CAP:
            raise ValueError(f"total dimension {total} exceeds the cap {DIM_CAP}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def validate_indices(self, indices: Iterable[int]) -> tuple[int, ...]:
        """Return ``indices`` as a sorted tuple, or raise ``IndexError``."""
        idx = tuple(sorted(int(i) for i in indices))
        if len(set(idx)) != len(idx):
            raise IndexError(f"repeated subsystem index in {idx}")
        for i in idx:
            if not 0 <= i < len(self.dims):
                raise IndexError(f"subsystem index {i} out of range for {self.dims}")
        return idx


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def dag(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def tensor(a, b) -> np.ndarray:
    """Kronecker product with the package-wide dimension cap enforced."""
    a = _as_matrix(a)
    b = _as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > DIM_CAP:
        raise ValueError(f"tensor result {rows}x{cols} exceeds the cap {DIM_CAP}")
    return np.kron(a, b)


def _check_square(m: np.ndarray, shape: SystemShape) -> None:
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got {m.shape}")
    if m.shape[0] != shape.total:
        raise ValueError(
            f"matrix dimension {m.shape[0]} does not match shape total {shape.total}"
        )


def partial_trace(m, shape: SystemShape, keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    The output acts on the kept subsystems in their original order.  With
    ``keep`` empty the result is the 1x1 matrix containing ``Tr(m)``.
    """
    m = _as_matrix(m)
    _check_square(m, shape)
    keep = shape.validate_indices(keep)
    n = len(shape)
    t = m.reshape(shape.dims * 2)
    row = list(range(n))
    col = [n + i if i in keep else i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    return np.einsum(t, row + col, out).reshape(
        math.prod(shape.dims[i] for i in keep) if keep else 1, -1
    )


def partial_transpose(m, shape: SystemShape, flip: Iterable[int]) -> np.ndarray:
    """Transpose the factors listed in ``flip``; an involution."""
    m = _as_matrix(m)
    _check_square(m, shape)
    flip = shape.validate_indices(flip)
    n = len(shape)
    t = m.reshape(shape.dims * 2)
    axes = list(range(2 * n))
    for i in flip:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return t.transpose(axes).reshape(shape.total, shape.total)


@dataclass(frozen=True)
class HermEig:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dag(v)


def _require_hermitian(m: np.ndarray, what: str = "matrix") -> np.ndarray:
    norm = np.linalg.norm(m, 2)
    if np.linalg.norm(m - dag(m), 2) > 1e-10 * (1.0 + norm):
        raise ValueError(f"{what} is not Hermitian within tolerance")
    return (m + dag(m)) / 2.0


def herm_eig(m) -> HermEig:
    """Eigendecomposition of a Hermitian matrix.

    Raises ``ValueError`` if the input fails the Hermiticity contract
    ``||m - m^dag||_2 <= 1e-10 (1 + ||m||_2)``.
    """
    m = _require_hermitian(_as_matrix(m))
    w, v = np.linalg.eigh(m)
    return HermEig(eigenvalues=w, eigenvectors=v)


def schatten_norm(m, p: float) -> float:
    """Schatten p-norm ``(sum_i s_i^p)^(1/p)`` over singular values.

    For Hermitian input the singular values are the absolute eigenvalues.
    Requires ``p >= 1``.
    """
    if p < 1:
        raise ValueError(f"Schatten norm needs p >= 1, got {p}")
    m = _as_matrix(m)
    if np.linalg.norm(m - dag(m)) <= 1e-12 * (1.0 + np.linalg.norm(m)):
        s = np.abs(np.linalg.eigvalsh((m + dag(m)) / 2.0))
    else:
        s = np.linalg.svd(m, compute_uv=False)
    if p == 1:
        return float(np.sum(s))
    if p == 2:
        return float(np.sqrt(np.sum(s * s)))
    smax = float(np.max(s)) if s.size else 0.0
    if smax == 0.0:
        return 0.0
    # factor out the largest singular value to avoid overflow for large p
    return smax * float(np.sum((s / smax) ** p)) ** (1.0 / p)


def trace_norm(m) -> float:
    return schatten_norm(m, 1)


def _clip_psd_eigs(w: np.ndarray, what: str = "matrix") -> np.ndarray:
    if np.min(w) < -EIG_CLIP:
        raise ValueError(f"{what} has negative eigenvalue {np.min(w):.3e}")
    return np.maximum(w, 0.0)


def matrix_log2(m) -> np.ndarray:
    """Base-2 matrix logarithm on the support of a Hermitian PSD matrix.

    Eigenvalues below the relative support threshold map to 0 on the
    log-matrix; callers handle support mismatch themselves (see
    ``rel_entropy``).  Eigenvalues below ``-EIG_CLIP`` are a contract error.
    """
    m = _require_hermitian(_as_matrix(m))
    w, v = np.linalg.eigh(m)
    w = _clip_psd_eigs(w)
    wmax = float(np.max(w)) if w.size else 0.0
    logw = np.zeros_like(w)
    support = w > SUPPORT_RTOL * wmax
    logw[support] = np.log2(w[support])
    return (v * logw) @ dag(v)


def _check_state(m: np.ndarray, what: str = "state") -> np.ndarray:
    m = _require_hermitian(_as_matrix(m), what)
    if abs(np.trace(m).real - 1.0) > 1e-10:
        raise ValueError(f"{what} does not have unit trace")
    return m


def entropy_bits(m) -> float:
    """Von Neumann entropy -Tr[rho log2 rho] of a density matrix."""
    w = _clip_psd_eigs(np.linalg.eigvalsh(_check_state(np.asarray(m, dtype=complex))))
    return entropy_of_spectrum(w)


def entropy_of_spectrum(w: np.ndarray) -> float:
    w = np.asarray(w, dtype=float)
    w = w[w > 0.0]
    if w.size == 0:
        return 0.0
    return float(-np.sum(w * np.log2(w)))


def rel_entropy(rho, sigma) -> float:
    """Quantum relative entropy S(rho||sigma) in bits.

    Returns ``math.inf`` when the support of ``rho`` is not contained in
    the support of ``sigma`` (eigenvalue threshold ``SUPPORT_RTOL``).
    Both inputs must be valid density matrices.
    """
    rho = _check_state(rho, "rho")
    sigma = _check_state(sigma, "sigma")
    if rho.shape != sigma.shape:
        raise ValueError("rho and sigma must have equal dimensions")

    r = _clip_psd_eigs(np.linalg.eigvalsh(rho), "rho")
    mu, v = np.linalg.eigh(sigma)
    mu = _clip_psd_eigs(mu, "sigma")

    support = mu > SUPPORT_RTOL * float(np.max(mu))
    weights = np.real(np.einsum("ij,jk,ki->i", dag(v), rho, v))
    weights = np.maximum(weights, 0.0)
    if float(np.sum(weights[~support])) > 1e-10:
        return math.inf

    value = -entropy_of_spectrum(r) - float(
        np.sum(weights[support] * np.log2(mu[support]))
    )
    # Klein inequality guarantees >= 0; clamp round-off noise at zero.
    return max(value, 0.0) if value > -1e-9 else value


def binary_entropy(p: float) -> float:
    """Binary entropy h2(p) in bits."""
    if p < 0.0 or p > 1.0:
        raise ValueError(f"probability out of range: {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p))


def kron_all(ops: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of a sequence of matrices, left to right."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, op)
    return out
