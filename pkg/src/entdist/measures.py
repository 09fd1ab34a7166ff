"""Entanglement and discord quantifiers.

Closed-form quantities (concurrence, entanglement of formation, negativity,
logarithmic negativity) are exact.  The distance-to-PPT quantifiers and the
measurement-minimized discords are variational: they return an
``OptimizerReport`` whose value is a certified *upper* bound obtained at a
feasible point, together with a stationarity proxy.

Optimizer layout, shared by the relative-entropy and Schatten quantifiers:
the feasible set is {unit-trace PSD} ∩ {PPT across the cut}; projections
onto the intersection use alternating projections with Dykstra's
correction.  The relative-entropy objective is minimized by projected
gradient descent with the gradient coming from the divided-difference
expansion of the matrix logarithm in the eigenbasis of the current
iterate.  Because the log objective is badly conditioned near the
boundary, the regularizer is annealed over a short stage schedule
(1e-3 -> 1e-9) with warm starts; each stage runs backtracking projected
gradient.  The final value is always evaluated at an exactly feasible
point, so every reported number is a true upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np
from scipy.optimize import minimize

from .linalg import (
    EIG_CLIP,
    SUPPORT_RTOL,
    PAULI_Y,
    SystemShape,
    binary_entropy,
    dag,
    entropy_of_spectrum,
    partial_trace,
    partial_transpose,
    trace_norm,
)
from .states import DensityMatrix, PureState

_LN2 = math.log(2.0)

#: regularizer mixed into sigma before the final log evaluation
_REG_EPS = 1e-9

#: annealing schedule (regularizer, iteration cap, stage tolerance,
#: projection tolerance); the last stage's tolerance is overridden by the
#: caller's OptConfig
_REE_STAGES = (
    (1e-3, 60, 1e-7, 1e-9),
    (1e-5, 60, 1e-8, 1e-10),
    (1e-7, 60, 1e-8, 1e-11),
    (1e-9, 50, 1e-9, 1e-12),
)

#: a variational report counts as converged when the stationarity proxy
#: (projected-gradient norm, or final simplex diameter for discord) is below
#: this threshold
STATIONARITY_TOL = 1e-3


@dataclass(frozen=True)
class Bipartition:
    """A split of subsystem positions into two disjoint groups X|Y."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __init__(self, left: Iterable[int], right: Iterable[int]):
        left = tuple(int(i) for i in left)
        right = tuple(int(i) for i in right)
        if not left or not right:
            raise ValueError("both sides of a bipartition must be nonempty")
        if set(left) & set(right):
            raise ValueError(f"bipartition sides overlap: {left} | {right}")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)


@dataclass(frozen=True)
class OptimizerReport:
    """Variational result: value plus a convergence certificate."""

    value: float
    iterations: int
    converged: bool
    residual: float
    method: str = ""


@dataclass(frozen=True)
class OptConfig:
    """Optimizer knobs shared by all variational quantifiers."""

    max_iters: int = 5000
    tol: float = 1e-9
    grid_theta: int = 64
    grid_phi: int = 32
    seed: int = 0


@dataclass(frozen=True)
class MeasurementBloch:
    """Bloch angles of a von Neumann measurement basis on a qubit."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")

    def basis(self) -> np.ndarray:
        """2x2 array whose rows are the two orthonormal basis vectors."""
        c, s = math.cos(self.theta / 2.0), math.sin(self.theta / 2.0)
        ph = complex(math.cos(self.phi), math.sin(self.phi))
        return np.array([[c, s * ph], [-s * np.conj(ph), c]], dtype=complex)


def _reduce_to_cut(rho: DensityMatrix, cut: Bipartition):
    """Trace out subsystems outside the cut; return (matrix, sub-shape, flip).

    ``flip`` is the positions of the cut's left group inside the reduced
    state, i.e. the axes to partially transpose.
    """
    keep = rho.shape.validate_indices(cut.left + cut.right)
    if len(keep) < len(rho.shape):
        mat = partial_trace(rho.mat, rho.shape, keep)
    else:
        mat = rho.mat
    sub = SystemShape(tuple(rho.shape.dims[i] for i in keep))
    flip = tuple(pos for pos, i in enumerate(keep) if i in set(cut.left))
    return mat, sub, flip


# ---------------------------------------------------------------------------
# closed-form quantifiers


def _pure_vector(rho: np.ndarray) -> np.ndarray | None:
    """Return the state vector if ``rho`` is rank one, else ``None``."""
    w, v = np.linalg.eigh(rho)
    if w[-1] >= 1.0 - 1e-9:
        return v[:, -1]
    return None


def _marginal_spectrum(vec: np.ndarray, sub: SystemShape, left: tuple[int, ...]):
    rho = np.outer(vec, vec.conj())
    red = partial_trace(rho, sub, left)
    return np.maximum(np.linalg.eigvalsh(red), 0.0)


def concurrence(state: DensityMatrix | PureState, cut: Bipartition | None = None) -> float:
    """Concurrence: Wootters formula for two qubits, sqrt(2(1 - Tr rho_X^2))
    for pure states of any bipartite dimensions."""
    if cut is None:
        cut = _default_cut(state.shape)
    mat, sub, flip = _reduce_to_cut(_as_density(state), cut)
    vec = _pure_vector(mat)
    if vec is not None:
        w = _marginal_spectrum(vec, sub, flip)
        return float(math.sqrt(max(0.0, 2.0 * (1.0 - np.sum(w * w)))))
    if sub.dims != (2, 2):
        raise ValueError(
            "concurrence of a mixed state needs a two-qubit cut, "
            f"got dimensions {sub.dims}"
        )
    return _wootters(mat)


def _wootters(rho: np.ndarray) -> float:
    yy = np.kron(PAULI_Y, PAULI_Y)
    flipped = yy @ rho.conj() @ yy
    w, v = np.linalg.eigh(rho)
    sq = (v * np.sqrt(np.maximum(w, 0.0))) @ dag(v)
    lam2 = np.linalg.eigvalsh(sq @ flipped @ sq)
    lam = np.sqrt(np.maximum(lam2, 0.0))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def eof(state: DensityMatrix | PureState, cut: Bipartition | None = None) -> float:
    """Entanglement of formation in bits.

    Pure states of any dimensions use the entropy of the reduced state;
    mixed two-qubit states use the concurrence closed form.  Mixed states
    beyond two qubits are unsupported (no closed form exists).
    """
    if cut is None:
        cut = _default_cut(state.shape)
    mat, sub, flip = _reduce_to_cut(_as_density(state), cut)
    vec = _pure_vector(mat)
    if vec is not None:
        return entropy_of_spectrum(_marginal_spectrum(vec, sub, flip))
    if sub.dims != (2, 2):
        raise ValueError(
            "entanglement of formation of a mixed state needs a two-qubit cut, "
            f"got dimensions {sub.dims}"
        )
    return eof_from_concurrence(_wootters(mat))


def eof_from_concurrence(c: float) -> float:
    """EoF of a two-qubit state with concurrence ``c``."""
    if not 0.0 <= c <= 1.0 + 1e-12:
        raise ValueError(f"concurrence out of range: {c}")
    c = min(c, 1.0)
    return binary_entropy((1.0 + math.sqrt(1.0 - c * c)) / 2.0)


def _default_cut(shape: SystemShape) -> Bipartition:
    if len(shape) < 2:
        raise ValueError("need at least two subsystems for a bipartite measure")
    return Bipartition((0,), tuple(range(1, len(shape))))


def _as_density(state: DensityMatrix | PureState) -> DensityMatrix:
    return state.to_density() if isinstance(state, PureState) else state


def negativity(state: DensityMatrix | PureState, cut: Bipartition | None = None) -> float:
    """Negativity ||rho^{T_X}||_1 - 1 across the cut."""
    rho = _as_density(state)
    if cut is None:
        cut = _default_cut(rho.shape)
    mat, sub, flip = _reduce_to_cut(rho, cut)
    pt = partial_transpose(mat, sub, flip)
    return max(0.0, float(np.sum(np.abs(np.linalg.eigvalsh(pt)))) - 1.0)


def log_negativity(
    state: DensityMatrix | PureState, cut: Bipartition | None = None
) -> float:
    """Logarithmic negativity log2 ||rho^{T_X}||_1 across the cut."""
    return math.log2(1.0 + negativity(state, cut))


# ---------------------------------------------------------------------------
# projections onto the PPT/density intersection


def _project_simplex(w: np.ndarray) -> np.ndarray:
    u = np.sort(w)[::-1]
    css = np.cumsum(u)
    ks = np.arange(1, w.size + 1)
    mask = u - (css - 1.0) / ks > 0
    k = int(ks[mask][-1])
    tau = (css[k - 1] - 1.0) / k
    return np.maximum(w - tau, 0.0)


def _project_density_set(x: np.ndarray) -> np.ndarray:
    x = (x + dag(x)) / 2.0
    w, v = np.linalg.eigh(x)
    return (v * _project_simplex(w)) @ dag(v)


def _project_psd(x: np.ndarray) -> np.ndarray:
    x = (x + dag(x)) / 2.0
    w, v = np.linalg.eigh(x)
    return (v * np.maximum(w, 0.0)) @ dag(v)


def _dykstra_to_ppt_states(x, pt, tol=1e-12, max_sweeps=300):
    """Frobenius projection onto {density matrices} ∩ {PPT across the cut}.

    Returns the density-set iterate: exactly unit-trace PSD, with PPT
    violation bounded by the final inter-projection gap (also returned).
    """
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    y = x
    gap = math.inf
    for sweep in range(max_sweeps):
        y = _project_density_set(x + p)
        p = x + p - y
        xn = pt(_project_psd(pt(y + q)))
        q = y + q - xn
        gap = float(np.linalg.norm(y - xn))
        x = xn
        if gap < tol:
            break
    return y, sweep + 1, gap


def _repair_ppt(y: np.ndarray, pt) -> np.ndarray:
    """Mix toward the maximally mixed state until exactly PPT."""
    d = y.shape[0]
    eye = np.eye(d) / d
    wmin = float(np.linalg.eigvalsh(pt(y))[0])
    if wmin >= 0.0:
        return y
    t = min(1.0, (-wmin * d) / (1.0 - wmin * d) + 1e-14)
    for _ in range(60):
        cand = (1.0 - t) * y + t * eye
        if float(np.linalg.eigvalsh(pt(cand))[0]) >= 0.0:
            return cand
        t = min(1.0, t * 2.0)
    return eye


def _is_ppt(mat: np.ndarray, sub: SystemShape, flip) -> bool:
    pt = partial_transpose(mat, sub, flip)
    return float(np.linalg.eigvalsh(pt)[0]) >= -1e-12


# ---------------------------------------------------------------------------
# relative entropy of entanglement over the PPT set


def _rel_entropy_terms(rho: np.ndarray, sigma: np.ndarray):
    """Cross term -Tr[rho log2 sigma_reg] plus the eigensystem used."""
    d = sigma.shape[0]
    sig = (1.0 - _REG_EPS) * sigma + (_REG_EPS / d) * np.eye(d)
    mu, v = np.linalg.eigh(sig)
    # floor shields gradient evaluations at infeasible extrapolation points
    mu = np.maximum(mu, _REG_EPS / (10.0 * d))
    rho_t = dag(v) @ rho @ v
    weights = np.maximum(np.real(np.diag(rho_t)), 0.0)
    cross = -float(np.sum(weights * np.log2(mu)))
    return cross, mu, v, rho_t


def _log_gradient(mu: np.ndarray, v: np.ndarray, rho_t: np.ndarray) -> np.ndarray:
    """Gradient of -Tr[rho log2 sigma] via divided differences of log2."""
    lm = np.log2(mu)
    dmu = mu[:, None] - mu[None, :]
    near = np.abs(dmu) < 1e-12 * float(np.max(mu))
    gam = (lm[:, None] - lm[None, :]) / np.where(near, 1.0, dmu)
    mid = (mu[:, None] + mu[None, :]) / 2.0
    gam = np.where(near, 1.0 / (mid * _LN2), gam)
    g = v @ (gam * rho_t) @ dag(v)
    return -(g + dag(g)) / 2.0


def ree_ppt(
    state: DensityMatrix | PureState,
    cut: Bipartition | None = None,
    cfg: OptConfig | None = None,
) -> OptimizerReport:
    """Relative entropy of entanglement over the PPT set, in bits.

    Upper-converging estimate of min_sigma S(rho||sigma) over PPT states;
    for 2x2 cuts the PPT set equals the separable set, so this is the
    relative entropy of entanglement proper.
    """
    cfg = cfg or OptConfig()
    rho = _as_density(state)
    if cut is None:
        cut = _default_cut(rho.shape)
    mat, sub, flip = _reduce_to_cut(rho, cut)

    def pt(x):
        return partial_transpose(x, sub, flip)

    if _is_ppt(mat, sub, flip):
        return OptimizerReport(0.0, 0, True, 0.0, "ppt-input")

    value, iters, residual, hit_cap = _minimize_ree(mat, pt, cfg)
    converged = (not hit_cap) and residual <= STATIONARITY_TOL
    return OptimizerReport(value, iters, converged, residual, "projected-gradient")


def _minimize_ree(rho_mat: np.ndarray, pt, cfg: OptConfig):
    d = rho_mat.shape[0]
    r = np.maximum(np.linalg.eigvalsh(rho_mat), 0.0)
    const = -entropy_of_spectrum(r)  # Tr[rho log2 rho]

    sigma, _, _ = _dykstra_to_ppt_states((rho_mat + np.eye(d) / d) / 2.0, pt)
    cross, mu, v, rho_t = _rel_entropy_terms(rho_mat, sigma)
    f = const + cross
    sig_prev = sigma.copy()
    tk = 1.0
    step = 1.0
    small_streak = 0
    it = 0
    hit_cap = True
    for it in range(cfg.max_iters):
        # momentum extrapolation with function-value restart
        tk1 = (1.0 + math.sqrt(1.0 + 4.0 * tk * tk)) / 2.0
        beta = (tk - 1.0) / tk1
        y = sigma + beta * (sigma - sig_prev)
        cross_y, mu_y, v_y, rho_ty = _rel_entropy_terms(rho_mat, y)
        g = _log_gradient(mu_y, v_y, rho_ty)
        f_y = const + cross_y
        accepted = False
        for _ in range(50):
            cand, _, _ = _dykstra_to_ppt_states(y - step * g, pt)
            cross_c, mu_c, v_c, rho_tc = _rel_entropy_terms(rho_mat, cand)
            f_c = const + cross_c
            move = float(np.linalg.norm(cand - y))
            if f_c <= f_y - (1e-4 / max(step, 1e-30)) * move * move:
                accepted = True
                break
            if move < 1e-14:
                break
            step *= 0.5
        if not accepted:
            if float(np.linalg.norm(sigma - sig_prev)) < 1e-15:
                hit_cap = False
                break
            sig_prev = sigma.copy()
            tk = 1.0
            continue
        if f_c > f:
            sig_prev = sigma.copy()
            tk = 1.0
            step = min(step * 2.0, 1e4)
            continue
        rel_dec = (f - f_c) / max(abs(f), 1e-30)
        sig_prev = sigma
        sigma, f, mu, v, rho_t = cand, f_c, mu_c, v_c, rho_tc
        tk = tk1
        step = min(step * 2.0, 1e4)
        if rel_dec < cfg.tol:
            small_streak += 1
            if small_streak >= 3:
                hit_cap = False
                break
        else:
            small_streak = 0

    sigma = _repair_ppt(sigma, pt)
    cross, mu, v, rho_t = _rel_entropy_terms(rho_mat, sigma)
    f = const + cross
    g = _log_gradient(mu, v, rho_t)
    scale = 1.0 + float(np.linalg.norm(g))
    probe, _, _ = _dykstra_to_ppt_states(sigma - g / scale, pt)
    residual = float(np.linalg.norm(probe - sigma)) * scale
    return max(f, 0.0), it + 1, residual, hit_cap


# ---------------------------------------------------------------------------
# Schatten-p distances to the PPT set


def ep_distance(
    state: DensityMatrix | PureState,
    cut: Bipartition | None = None,
    p: int = 2,
    cfg: OptConfig | None = None,
) -> OptimizerReport:
    """Minimal Schatten-p distance from the state to the PPT set.

    p=2 is the exact Frobenius projection (alternating projections with
    Dykstra correction); p=1 is a subgradient-descent upper bound.
    """
    if p not in (1, 2):
        raise ValueError(f"only p in {{1, 2}} is supported, got {p}")
    rho = _as_density(state)
    if cut is None:
        cut = _default_cut(rho.shape)
    mat, sub, flip = _reduce_to_cut(rho, cut)

    def pt(x):
        return partial_transpose(x, sub, flip)

    if _is_ppt(mat, sub, flip):
        method = "dykstra-projection" if p == 2 else "subgradient"
        return OptimizerReport(0.0, 0, True, 0.0, method)
    if p == 2:
        cfg = cfg or OptConfig()
        sigma, sweeps, gap = _dykstra_to_ppt_states(
            mat, pt, tol=1e-13, max_sweeps=max(cfg.max_iters, 2000)
        )
        sigma = _repair_ppt(sigma, pt)
        value = float(np.linalg.norm(mat - sigma))
        return OptimizerReport(value, sweeps, gap < 1e-10, gap, "dykstra-projection")
    return _minimize_e1(mat, pt, cfg or OptConfig(max_iters=2000))


def _minimize_e1(mat: np.ndarray, pt, cfg: OptConfig) -> OptimizerReport:
    sigma, _, _ = _dykstra_to_ppt_states(mat, pt)
    sigma = _repair_ppt(sigma, pt)
    best = trace_norm(mat - sigma)
    best_sigma = sigma
    step0 = max(best, 1e-6)
    last_improve = 0
    for k in range(cfg.max_iters):
        diff = mat - sigma
        w, v = np.linalg.eigh(diff)
        sub = -(v * np.sign(w)) @ dag(v)  # subgradient of ||mat - sigma||_1 in sigma
        sigma, _, _ = _dykstra_to_ppt_states(
            sigma - step0 / math.sqrt(k + 1.0) * sub, pt
        )
        val = trace_norm(mat - _repair_ppt(sigma, pt))
        if val < best - 1e-12:
            best = val
            best_sigma = sigma
            last_improve = k
    converged = cfg.max_iters - last_improve > cfg.max_iters // 4
    residual = step0 / math.sqrt(cfg.max_iters)
    return OptimizerReport(best, cfg.max_iters, converged, residual, "subgradient")


# ---------------------------------------------------------------------------
# measurement-based discord


def measured_state(
    rho: DensityMatrix, measured: int, basis: MeasurementBloch
) -> DensityMatrix:
    """Pinch ``rho`` with the projective measurement on the given qubit."""
    measured = int(measured)
    if not 0 <= measured < len(rho.shape):
        raise IndexError(f"measured index {measured} out of range")
    if rho.shape.dims[measured] != 2:
        raise ValueError("measured subsystem must be a qubit")
    b = basis.basis()
    pre = math.prod(rho.shape.dims[:measured]) if measured else 1
    post = (
        math.prod(rho.shape.dims[measured + 1 :])
        if measured + 1 < len(rho.shape)
        else 1
    )
    out = np.zeros_like(rho.mat)
    for x in range(2):
        proj = np.outer(b[x], b[x].conj())
        full = np.kron(np.kron(np.eye(pre), proj), np.eye(post))
        out += full @ rho.mat @ dag(full)
    return DensityMatrix(out, rho.shape)


def _discord_env(rho: DensityMatrix, measured: int, rest: tuple[int, ...]):
    """Permute so the measured qubit is first; flatten the rest."""
    keep = rho.shape.validate_indices((measured,) + tuple(rest))
    mat = (
        partial_trace(rho.mat, rho.shape, keep)
        if len(keep) < len(rho.shape)
        else rho.mat
    )
    sub_dims = tuple(rho.shape.dims[i] for i in keep)
    sub = SystemShape(sub_dims)
    pos = keep.index(measured)
    n = len(sub_dims)
    t = mat.reshape(sub_dims * 2)
    order = [pos] + [i for i in range(n) if i != pos]
    t = t.transpose(order + [n + i for i in order])
    d_rest = math.prod(sub_dims) // 2
    return t.reshape(2, d_rest, 2, d_rest)


def _bloch_bases(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """(n, 2, 2) array of basis rows for all (theta, phi) pairs."""
    t, p = np.meshgrid(thetas, phis, indexing="ij")
    t = t.ravel()
    p = p.ravel()
    c = np.cos(t / 2.0)
    s = np.sin(t / 2.0)
    ph = np.exp(1j * p)
    out = np.empty((t.size, 2, 2), dtype=complex)
    out[:, 0, 0] = c
    out[:, 0, 1] = s * ph
    out[:, 1, 0] = -s * np.conj(ph)
    out[:, 1, 1] = c
    return out


def _pinched_blocks(rho4: np.ndarray, bases: np.ndarray) -> np.ndarray:
    """(n, 2, d, d) conditional blocks <b_x| rho |b_x> for each basis."""
    return np.einsum("nxm,mrks,nxk->nxrs", bases.conj(), rho4, bases, optimize=True)


def discord(
    state: DensityMatrix | PureState,
    measured: int,
    rest: Iterable[int],
    distance: str = "relative-entropy",
    cfg: OptConfig | None = None,
) -> OptimizerReport:
    """Minimal distance between the state and its pinched version, over
    von Neumann measurements of the given qubit.

    ``distance`` selects relative entropy (bits) or a Schatten norm
    ("schatten-1", "schatten-2").  Optimization is a theta/phi grid followed
    by Nelder-Mead refinement; the returned value is an upper bound.
    """
    if distance not in ("relative-entropy", "schatten-1", "schatten-2"):
        raise ValueError(f"unknown distance {distance!r}")
    cfg = cfg or OptConfig()
    rho = _as_density(state)
    measured = int(measured)
    if not 0 <= measured < len(rho.shape):
        raise IndexError(f"measured index {measured} out of range")
    if rho.shape.dims[measured] != 2:
        raise ValueError("discord is implemented for qubit measurements only")
    rho4 = _discord_env(rho, measured, tuple(rest))
    d = rho4.shape[1]
    rho_flat = rho4.reshape(2 * d, 2 * d)

    s_rho = 0.0
    if distance == "relative-entropy":
        s_rho = entropy_of_spectrum(
            np.maximum(np.linalg.eigvalsh(rho_flat), 0.0)
        )

    def objective_many(bases: np.ndarray) -> np.ndarray:
        blocks = _pinched_blocks(rho4, bases)
        n = bases.shape[0]
        if distance == "relative-entropy":
            w = np.linalg.eigvalsh(blocks.reshape(n * 2, d, d)).reshape(n, 2 * d)
            w = np.maximum(w, 0.0)
            safe = np.where(w > 0.0, w, 1.0)
            return -(w * np.log2(safe)).sum(axis=1) - s_rho
        pinched = _assemble_pinched(bases, blocks)
        diff = pinched - rho_flat[None, :, :]
        if distance == "schatten-2":
            return np.linalg.norm(diff.reshape(n, -1), axis=1)
        w = np.linalg.eigvalsh(diff)
        return np.abs(w).sum(axis=1)

    thetas = np.linspace(0.0, math.pi, cfg.grid_theta)
    phis = np.linspace(0.0, 2.0 * math.pi, cfg.grid_phi, endpoint=False)
    bases = _bloch_bases(thetas, phis)
    vals = objective_many(bases)
    k = int(np.argmin(vals))
    best_grid = float(vals[k])
    t0, p0 = divmod(k, cfg.grid_phi)
    x0 = np.array([thetas[t0], phis[p0]])

    def objective_one(x: np.ndarray) -> float:
        # any real (theta, phi) yields an orthonormal pair, so the simplex
        # may wander freely outside the grid box
        b = _bloch_bases(np.atleast_1d(x[0]), np.atleast_1d(x[1]))
        return float(objective_many(b)[0])

    res = minimize(
        objective_one,
        x0,
        method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-12, "maxiter": 400},
    )
    value = min(best_grid, float(res.fun))
    simplex_diam = float(np.max(np.abs(res.final_simplex[0] - res.final_simplex[0][0])))
    return OptimizerReport(
        value=max(value, 0.0),
        iterations=int(bases.shape[0] + res.nfev),
        converged=bool(res.success) and simplex_diam <= STATIONARITY_TOL,
        residual=simplex_diam,
        method=f"grid+nelder-mead/{distance}",
    )


def _assemble_pinched(bases: np.ndarray, blocks: np.ndarray) -> np.ndarray:
    """Pinched states sum_x |b_x><b_x| ⊗ B_x in the permuted ordering."""
    n, _, d, _ = blocks.shape
    proj = np.einsum("nxi,nxj->nxij", bases, bases.conj())
    out = np.einsum("nxij,nxrs->nirjs", proj, blocks, optimize=True)
    return out.reshape(n, 2 * d, 2 * d)
