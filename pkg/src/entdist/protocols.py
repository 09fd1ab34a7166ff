"""Distribution-scenario evaluation, the teleportation reduction, and the
inequality checkers behind every theorem sweep.

Scenario convention: tripartite states carry subsystem order (A, B, C) with
the channel acting on C (position 2).  The quantity of interest is always
the distributed entanglement E^{A|BC}(rho_f) - E^{AC|B}(rho_i), bounded by
one of the discord expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .channels import (
    KrausChannel,
    MarkovFamily,
    PauliSpec,
    amplitude_damping,
    apply_on,
    channels_equal,
    compose,
    identity_channel,
    markov_snapshot,
    pauli_channel,
    weyl_unitaries,
)
from .linalg import SystemShape, dag
from .measures import (
    Bipartition,
    OptConfig,
    OptimizerReport,
    concurrence,
    discord,
    eof,
    ep_distance,
    log_negativity,
    negativity,
    ree_ppt,
)
from .states import DensityMatrix, PureState, RandomSpec, alpha_state, max_entangled, random_pure

CUT_A_BC = Bipartition((0,), (1, 2))
CUT_AC_B = Bipartition((0, 2), (1,))

#: entanglement measures with closed-form (exact) evaluation
EXACT_MEASURES = ("log-negativity", "negativity", "eof", "eof-squared")

#: variational measures carrying one-sided optimizer error
VARIATIONAL_MEASURES = ("relative-entropy", "schatten-2", "schatten-1")

DISCORD_DISTANCES = ("relative-entropy", "schatten-1", "schatten-2")


def entanglement_measure(
    name: str, cfg: OptConfig | None = None
) -> Callable[[DensityMatrix | PureState, Bipartition], tuple[float, OptimizerReport | None]]:
    """Evaluator ``(state, cut) -> (value, report)`` for a named measure."""
    if name == "log-negativity":
        return lambda s, cut: (log_negativity(s, cut), None)
    if name == "negativity":
        return lambda s, cut: (negativity(s, cut), None)
    if name == "eof":
        return lambda s, cut: (eof(s, cut), None)
    if name == "eof-squared":
        return lambda s, cut: (eof(s, cut) ** 2, None)
    if name == "relative-entropy":

        def _ree(s, cut):
            rep = ree_ppt(s, cut, cfg)
            return rep.value, rep

        return _ree
    if name in ("schatten-1", "schatten-2"):
        p = 1 if name == "schatten-1" else 2

        def _ep(s, cut):
            rep = ep_distance(s, cut, p, cfg)
            return rep.value, rep

        return _ep
    raise ValueError(f"unknown entanglement measure {name!r}")


def discord_measure(
    name: str, cfg: OptConfig | None = None
) -> Callable[[DensityMatrix | PureState, int, tuple[int, ...]], tuple[float, OptimizerReport]]:
    """Evaluator ``(state, measured, rest) -> (value, report)``."""
    if name not in DISCORD_DISTANCES:
        raise ValueError(f"unknown discord distance {name!r}")

    def _disc(s, measured, rest):
        rep = discord(s, measured, rest, name, cfg)
        return rep.value, rep

    return _disc


def pair_slack(measure: str, disc: str) -> float:
    """Default slack: exact pairs get 1e-9, variational 1e-3, trace-norm 1e-2."""
    if "schatten-1" in (measure, disc):
        return 1e-2
    if measure in EXACT_MEASURES and disc not in DISCORD_DISTANCES:
        return 1e-9
    if measure in EXACT_MEASURES:
        return 1e-3
    return 1e-3


@dataclass(frozen=True)
class DistributionScenario:
    """An initial (A,B,C) state plus the channel applied to C."""

    initial: DensityMatrix
    channel: KrausChannel
    measure: str = "log-negativity"
    discord: str = "relative-entropy"

    def __post_init__(self):
        if len(self.initial.shape) != 3:
            raise ValueError("scenario state must have exactly three subsystems (A, B, C)")
        if self.channel.dim != self.initial.shape.dims[2]:
            raise ValueError(
                f"channel dimension {self.channel.dim} does not match "
                f"subsystem C dimension {self.initial.shape.dims[2]}"
            )

    def final_state(self) -> DensityMatrix:
        return apply_on(self.channel, self.initial, 2)


@dataclass(frozen=True)
class IneqResult:
    """Outcome of one inequality check: ``holds`` iff lhs >= rhs - slack."""

    lhs: float
    rhs: float
    slack: float
    holds: bool
    reports: tuple[OptimizerReport, ...] = ()

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


def _make_result(lhs, rhs, slack, reports) -> IneqResult:
    reports = tuple(r for r in reports if r is not None)
    return IneqResult(lhs, rhs, slack, lhs >= rhs - slack, reports)


def distributed_entanglement(
    s: DistributionScenario, cfg: OptConfig | None = None
) -> tuple[float, float, float]:
    """(initial E^{AC|B}, final E^{A|BC}, difference) for the scenario."""
    ent = entanglement_measure(s.measure, cfg)
    rho_f = s.final_state()
    e_initial, _ = ent(s.initial, CUT_AC_B)
    e_final, _ = ent(rho_f, CUT_A_BC)
    return e_initial, e_final, e_final - e_initial


def check_main_inequality(
    rho: DensityMatrix,
    measure: str = "relative-entropy",
    disc: str = "relative-entropy",
    slack: float | None = None,
    cfg: OptConfig | None = None,
) -> IneqResult:
    """Noiseless bound: discord of C majorizes the distributed entanglement."""
    if len(rho.shape) != 3:
        raise ValueError("need a tripartite (A, B, C) state")
    ent = entanglement_measure(measure, cfg)
    dm = discord_measure(disc, cfg)
    if slack is None:
        slack = pair_slack(measure, disc)
    lhs, rep_d = dm(rho, 2, (0, 1))
    e_final, rep_f = ent(rho, CUT_A_BC)
    e_initial, rep_i = ent(rho, CUT_AC_B)
    return _make_result(lhs, e_final - e_initial, slack, [rep_d, rep_f, rep_i])


def check_noisy_bound(
    s: DistributionScenario,
    slack: float | None = None,
    cfg: OptConfig | None = None,
) -> IneqResult:
    """Noisy bound: min of initial/final discord majorizes the distribution."""
    ent = entanglement_measure(s.measure, cfg)
    dm = discord_measure(s.discord, cfg)
    if slack is None:
        slack = pair_slack(s.measure, s.discord)
    rho_f = s.final_state()
    d_i, rep_di = dm(s.initial, 2, (0, 1))
    d_f, rep_df = dm(rho_f, 2, (0, 1))
    e_final, rep_f = ent(rho_f, CUT_A_BC)
    e_initial, rep_i = ent(s.initial, CUT_AC_B)
    return _make_result(
        min(d_i, d_f), e_final - e_initial, slack, [rep_di, rep_df, rep_f, rep_i]
    )


def check_divisible_bound(
    s: DistributionScenario,
    split: tuple[KrausChannel, KrausChannel],
    slack: float | None = None,
    cfg: OptConfig | None = None,
) -> IneqResult:
    """Divisible-channel bound at the intermediate state.

    ``split`` is (first stage, second stage); their composition must equal
    the scenario channel.
    """
    first, second = split
    if not channels_equal(compose(second, first), s.channel, 1e-9):
        raise ValueError("split stages do not compose to the scenario channel")
    ent = entanglement_measure(s.measure, cfg)
    dm = discord_measure(s.discord, cfg)
    if slack is None:
        slack = pair_slack(s.measure, s.discord)
    rho_mid = apply_on(first, s.initial, 2)
    rho_f = apply_on(second, rho_mid, 2)
    d_mid, rep_d = dm(rho_mid, 2, (0, 1))
    e_final, rep_f = ent(rho_f, CUT_A_BC)
    e_initial, rep_i = ent(s.initial, CUT_AC_B)
    return _make_result(d_mid, e_final - e_initial, slack, [rep_d, rep_f, rep_i])


@dataclass(frozen=True)
class MarkovBoundResult:
    """Per-time inequality results plus the minimum-discord summary."""

    results: tuple[IneqResult, ...]
    min_discord: float
    holds: bool


def check_markov_bound(
    fam: MarkovFamily,
    rho_i: DensityMatrix,
    T: float,
    t_grid: Sequence[float],
    measure: str = "schatten-2",
    disc: str = "schatten-2",
    slack: float | None = None,
    cfg: OptConfig | None = None,
) -> MarkovBoundResult:
    """Markovian bound along a time grid: the discord of every intermediate
    state majorizes the total distributed entanglement."""
    if T < 0:
        raise ValueError("total time must be nonnegative")
    t_grid = [float(t) for t in t_grid]
    if any(t < 0 or t > T for t in t_grid):
        raise ValueError("every grid time must lie in [0, T]")
    ent = entanglement_measure(measure, cfg)
    dm = discord_measure(disc, cfg)
    if slack is None:
        slack = pair_slack(measure, disc)
    rho_f = apply_on(markov_snapshot(fam, 0.0, T), rho_i, 2)
    e_final, rep_f = ent(rho_f, CUT_A_BC)
    e_initial, rep_i = ent(rho_i, CUT_AC_B)
    rhs = e_final - e_initial
    results = []
    for t in t_grid:
        rho_t = apply_on(markov_snapshot(fam, 0.0, t), rho_i, 2)
        d_t, rep_d = dm(rho_t, 2, (0, 1))
        results.append(_make_result(d_t, rhs, slack, [rep_d, rep_f, rep_i]))
    min_discord = min(r.lhs for r in results)
    return MarkovBoundResult(tuple(results), min_discord, all(r.holds for r in results))


# ---------------------------------------------------------------------------
# teleportation reduction


def teleport_through(
    resource: DensityMatrix,
    rho: DensityMatrix,
    correction: Sequence[np.ndarray] | None = None,
) -> DensityMatrix:
    """Teleport the second subsystem of ``rho`` through ``resource``.

    A joint measurement in the basis U_i ⊗ 1 |phi+> is performed on the
    teleported subsystem R and the resource's first subsystem, followed by
    the conditional correction U_i on the resource's second subsystem; the
    outcome-averaged corrected state on (A, C) is returned.  With a
    channel's image of |phi+> as the resource this reproduces the channel
    acting directly on rho whenever the channel commutes with the
    corrections.
    """
    if len(rho.shape) != 2 or len(resource.shape) != 2:
        raise ValueError("teleport_through needs bipartite input and resource states")
    da, dr = rho.shape.dims
    drt, dc = resource.shape.dims
    if dr != drt or dr != dc:
        raise ValueError(
            f"dimension mismatch: input R={dr}, resource ({drt}, {dc})"
        )
    if correction is None:
        correction = weyl_unitaries(dr)
    if len(correction) != dr * dr:
        raise ValueError(f"need {dr * dr} correction unitaries, got {len(correction)}")

    rho4 = rho.mat.reshape(da, dr, da, dr)
    sig4 = resource.mat.reshape(dr, dc, dr, dc)
    out = np.zeros((da * dc, da * dc), dtype=complex)
    eye_a = np.eye(da, dtype=complex)
    for u in correction:
        psi = np.asarray(u, dtype=complex) / math.sqrt(dr)
        m = np.einsum(
            "rt,arbs,tcud,su->acbd", psi.conj(), rho4, sig4, psi, optimize=True
        ).reshape(da * dc, da * dc)
        full = np.kron(eye_a, np.asarray(u, dtype=complex))
        out += full @ m @ dag(full)
    return DensityMatrix(out, SystemShape((da, dc)))


# ---------------------------------------------------------------------------
# optimal-input results for specific channels


def check_pauli_optimality(
    spec: PauliSpec,
    measure: str = "log-negativity",
    trials: int = 500,
    seed: int = 0,
    cfg: OptConfig | None = None,
) -> IneqResult:
    """Maximally entangled input beats sampled inputs through a Pauli channel."""
    channel = pauli_channel(spec)
    ent = entanglement_measure(measure, cfg)
    cut = Bipartition((0,), (1,))
    bell = max_entangled(2).to_density()
    lhs, rep = ent(apply_on(channel, bell, 1), cut)
    shape = SystemShape((2, 2))
    best = -math.inf
    from .states import random_mixed

    n_each = max(trials // 3, 1)
    for k in range(n_each):
        rho = random_mixed(shape, RandomSpec(seed * 1000003 + k, "ginibre-mixed"))
        best = max(best, ent(apply_on(channel, rho, 1), cut)[0])
    for k in range(n_each):
        psi = random_pure(shape, RandomSpec(seed * 2000003 + k, "haar-pure"))
        best = max(best, ent(apply_on(channel, psi.to_density(), 1), cut)[0])
    for alpha in np.linspace(0.0, 1.0, trials - 2 * n_each):
        rho = alpha_state(float(alpha)).to_density()
        best = max(best, ent(apply_on(channel, rho, 1), cut)[0])
    slack = 1e-9 if measure in EXACT_MEASURES else 1e-3
    return _make_result(lhs, best, slack, [rep])


def check_subadditive_bound(
    spec: PauliSpec | tuple[PauliSpec, PauliSpec],
    rho_i: DensityMatrix,
    measure: str = "log-negativity",
    cfg: OptConfig | None = None,
) -> IneqResult:
    """Preshared correlations give no advantage through Pauli noise when the
    measure is subadditive; a pair of specs selects the two-qubit product
    channel variant."""
    if isinstance(spec, tuple):
        from .channels import product_channel

        channel = product_channel(pauli_channel(spec[0]), pauli_channel(spec[1]))
        d_c = 4
    else:
        channel = pauli_channel(spec)
        d_c = 2
    if rho_i.shape.dims[2] != d_c:
        raise ValueError(f"scenario C dimension {rho_i.shape.dims[2]} != channel {d_c}")
    ent = entanglement_measure(measure, cfg)
    bell = max_entangled(d_c).to_density()
    lhs, rep_b = ent(apply_on(channel, bell, 1), Bipartition((0,), (1,)))
    rho_f = apply_on(channel, rho_i, 2)
    e_final, rep_f = ent(rho_f, CUT_A_BC)
    e_initial, rep_i = ent(rho_i, CUT_AC_B)
    slack = 1e-9 if measure in EXACT_MEASURES else 1e-3
    return _make_result(lhs, e_final - e_initial, slack, [rep_b, rep_f, rep_i])


def bell_negativity_after_damping(gamma: float) -> float:
    """E_n of the amplitude-damped maximally entangled two-qubit state."""
    return log_negativity(
        apply_on(amplitude_damping(gamma), max_entangled(2).to_density(), 1)
    )


def alpha_negativity_after_damping(gamma: float, alpha: float) -> float:
    """E_n of the amplitude-damped |alpha> state."""
    return log_negativity(
        apply_on(amplitude_damping(gamma), alpha_state(alpha).to_density(), 1)
    )


@dataclass(frozen=True)
class AdvantageRow:
    alpha: float
    en_alpha: float
    en_bell: float
    advantage: bool


@dataclass(frozen=True)
class AdvantageTable:
    gamma: float
    alpha_tilde: float
    crossover_gap: float
    rows: tuple[AdvantageRow, ...]


def amplitude_damping_advantage(
    gamma: float, alpha_grid: Sequence[float]
) -> AdvantageTable:
    """Tabulate E_n of damped |alpha> states against the damped Bell state.

    Also evaluates the crossover point alpha-tilde = (1 - gamma)/2 where the
    two coincide.
    """
    if gamma < 0.0 or gamma > 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    en_bell = bell_negativity_after_damping(gamma)
    rows = []
    for alpha in alpha_grid:
        en_a = alpha_negativity_after_damping(gamma, float(alpha))
        rows.append(AdvantageRow(float(alpha), en_a, en_bell, en_a > en_bell))
    a_t = (1.0 - gamma) / 2.0
    gap = alpha_negativity_after_damping(gamma, a_t) - en_bell
    return AdvantageTable(gamma, a_t, gap, tuple(rows))


def alpha_max(gamma: float) -> float:
    """Input weight maximizing the damped-state log-negativity."""
    if gamma < 0.0 or gamma >= 1.0:
        raise ValueError(f"gamma must lie in [0, 1), got {gamma}")
    return 1.0 / (gamma / math.sqrt(1.0 - gamma) + 2.0)


def pure_alpha_negativity(alpha: float) -> float:
    """E_n of the undamped |alpha> state."""
    return math.log2(1.0 + 2.0 * math.sqrt(alpha * (1.0 - alpha)))


def little_entanglement_witness(
    epsilon: float,
) -> tuple[float, float, IneqResult]:
    """A barely entangled state that still beats the Bell state.

    Bisects for alpha_eps with 0 < E_n(|alpha_eps>) <= epsilon, picks the
    damping parameter as the midpoint of the admissible interval
    (1 - 2 alpha_eps, 1), and checks the strict advantage.
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    # stay strictly inside alpha < 1/2 even for epsilon >= 1
    target = min(epsilon, 1.0 - 1e-3)
    lo, hi = 1e-300, 0.5
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if pure_alpha_negativity(mid) > target:
            hi = mid
        else:
            lo = mid
    alpha_eps = lo
    gamma_eps = ((1.0 - 2.0 * alpha_eps) + 1.0) / 2.0
    lhs = alpha_negativity_after_damping(gamma_eps, alpha_eps)
    rhs = bell_negativity_after_damping(gamma_eps)
    result = IneqResult(lhs, rhs, 0.0, lhs > rhs, ())
    return alpha_eps, gamma_eps, result


def optimal_input_search(
    channel: KrausChannel,
    measure: str = "log-negativity",
    budget: int = 200,
    seed: int = 0,
    cfg: OptConfig | None = None,
) -> tuple[PureState, float]:
    """Best pure two-qubit input found for the channel on C.

    Scans the Schmidt-weight family |alpha>, a batch of Haar-random pure
    states, then refines the Schmidt weight with a golden-section polish.
    """
    if channel.dim != 2:
        raise ValueError("optimal input search is implemented for qubit channels")
    ent = entanglement_measure(measure, cfg)
    cut = Bipartition((0,), (1,))

    def value_of(state: PureState) -> float:
        return ent(apply_on(channel, state.to_density(), 1), cut)[0]

    n_grid = max(budget // 2, 8)
    best_state = max_entangled(2)
    best_value = value_of(best_state)
    grid = np.linspace(0.0, 0.5, n_grid)
    for alpha in grid:
        st = alpha_state(float(alpha))
        v = value_of(st)
        if v > best_value:
            best_state, best_value = st, v
    shape = SystemShape((2, 2))
    for k in range(budget - n_grid):
        st = random_pure(shape, RandomSpec(seed * 7000003 + k, "haar-pure"))
        v = value_of(st)
        if v > best_value:
            best_state, best_value = st, v
    # golden-section polish on the Schmidt weight around the best grid point
    lo, hi = 0.0, 0.5
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c1 = b - gr * (b - a)
    c2 = a + gr * (b - a)
    f1 = value_of(alpha_state(c1))
    f2 = value_of(alpha_state(c2))
    for _ in range(60):
        if f1 > f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - gr * (b - a)
            f1 = value_of(alpha_state(c1))
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + gr * (b - a)
            f2 = value_of(alpha_state(c2))
    alpha_best = (a + b) / 2.0
    st = alpha_state(alpha_best)
    v = value_of(st)
    if v > best_value:
        best_state, best_value = st, v
    return best_state, best_value


def thm10_search_lhs(
    channel: KrausChannel,
    disc: str = "relative-entropy",
    budget: int = 60,
    seed: int = 0,
    cfg: OptConfig | None = None,
) -> float:
    """Max over searched pure inputs of the C|A discord of the channel output."""
    if channel.dim != 2:
        raise ValueError("the search is implemented for qubit channels")
    dm = discord_measure(disc, cfg)

    def value_of(state: PureState) -> float:
        out = apply_on(channel, state.to_density(), 1)
        return dm(out, 1, (0,))[0]

    best = 0.0
    n_grid = max(budget // 2, 8)
    for alpha in np.linspace(0.0, 0.5, n_grid):
        best = max(best, value_of(alpha_state(float(alpha))))
    shape = SystemShape((2, 2))
    for k in range(budget - n_grid):
        best = max(
            best, value_of(random_pure(shape, RandomSpec(seed * 9000007 + k, "haar-pure")))
        )
    return best


def check_thm10_bound(
    channel: KrausChannel,
    rho_i: DensityMatrix,
    disc: str = "relative-entropy",
    measure: str = "relative-entropy",
    lhs: float | None = None,
    slack: float = 1e-3,
    seed: int = 0,
    cfg: OptConfig | None = None,
) -> IneqResult:
    """Optimal-pure-input discord bounds the distributed entanglement.

    The searched maximum is a lower bound on the true left-hand side, so a
    passing check is meaningful while a failure within slack is reported,
    not asserted.
    """
    if rho_i.shape.dims[2] != channel.dim:
        raise ValueError("channel dimension must match subsystem C")
    if lhs is None:
        lhs = thm10_search_lhs(channel, disc, seed=seed, cfg=cfg)
    ent = entanglement_measure(measure, cfg)
    rho_f = apply_on(channel, rho_i, 2)
    e_final, rep_f = ent(rho_f, CUT_A_BC)
    e_initial, rep_i = ent(rho_i, CUT_AC_B)
    return _make_result(lhs, e_final - e_initial, slack, [rep_f, rep_i])
