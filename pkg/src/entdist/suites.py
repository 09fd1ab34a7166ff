"""Named checker sweeps with a serializable JSON report.

Report schema (documented in the README):
    {"check": str, "seed": int, "n_trials": int, "worst_slack": float,
     "failures": [ ... ], "expected_violations": [ ... ], "notes": [str]}

``worst_slack`` is the most adverse margin (lhs - rhs) observed across the
sweep; a trial fails when its margin drops below -slack.  Expected
violations are produced only by the Markov suite's reversed-time injection
mode, where a deliberately mismatched intermediate state is supposed to
break the bound (a non-Markovianity witness), and they do not count as
failures.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .channels import (
    MarkovFamily,
    PauliSpec,
    amplitude_damping,
    apply_on,
    markov_snapshot,
    pauli_channel,
    phase_damping,
    random_channel,
    random_pauli_spec,
    weyl_channel,
)
from .linalg import SystemShape, schatten_norm, trace_norm
from .measures import Bipartition, OptConfig, ep_distance
from .protocols import (
    CUT_A_BC,
    CUT_AC_B,
    DistributionScenario,
    IneqResult,
    check_divisible_bound,
    check_main_inequality,
    check_markov_bound,
    check_noisy_bound,
    check_pauli_optimality,
    check_subadditive_bound,
    check_thm10_bound,
    teleport_through,
    thm10_search_lhs,
)
from .states import (
    DensityMatrix,
    PureState,
    RandomSpec,
    max_entangled,
    random_mixed,
    random_pure,
    seed_stream,
)

SUITES = (
    "main",
    "noisy",
    "divisible",
    "markov",
    "pauli-opt",
    "subadditive",
    "thm10",
    "teleport",
    "schatten",
)

#: default trial counts per suite
DEFAULT_TRIALS = {
    "main": 1000,
    "noisy": 300,
    "divisible": 300,
    "markov": 300,
    "pauli-opt": 20,
    "subadditive": 1000,
    "thm10": 60,
    "teleport": 200,
    "schatten": 1000,
}


@dataclass
class SuiteReport:
    check: str
    seed: int
    n_trials: int
    worst_slack: float = math.inf
    failures: list = field(default_factory=list)
    expected_violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def record(self, trial: int, result: IneqResult, extra: dict | None = None):
        self.worst_slack = min(self.worst_slack, result.margin)
        if not result.holds:
            entry = {
                "trial": trial,
                "lhs": result.lhs,
                "rhs": result.rhs,
                "margin": result.margin,
                "slack": result.slack,
            }
            if extra:
                entry.update(extra)
            self.failures.append(entry)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "seed": self.seed,
            "n_trials": self.n_trials,
            "worst_slack": None if math.isinf(self.worst_slack) else self.worst_slack,
            "failures": self.failures,
            "expected_violations": self.expected_violations,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def run_suite(
    name: str,
    seed: int = 0,
    n_trials: int | None = None,
    inject_reversed: bool = False,
    cfg: OptConfig | None = None,
) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    n = n_trials if n_trials is not None else DEFAULT_TRIALS[name]
    runner = {
        "main": _suite_main,
        "noisy": _suite_noisy,
        "divisible": _suite_divisible,
        "markov": _suite_markov,
        "pauli-opt": _suite_pauli_opt,
        "subadditive": _suite_subadditive,
        "thm10": _suite_thm10,
        "teleport": _suite_teleport,
        "schatten": _suite_schatten,
    }[name]
    if name == "markov":
        return runner(seed, n, cfg, inject_reversed)
    return runner(seed, n, cfg)


_SHAPE222 = SystemShape((2, 2, 2))


def _suite_main(seed, n, cfg):
    """Noiseless bound on random tripartite states, relative-entropy pair."""
    report = SuiteReport("main", seed, n)
    for trial, s in enumerate(seed_stream(seed, n)):
        rho = random_mixed(_SHAPE222, RandomSpec(s, "ginibre-mixed"))
        res = check_main_inequality(rho, "relative-entropy", "relative-entropy", cfg=cfg)
        report.record(trial, res, {"seed": s})
    return report


def _suite_schatten(seed, n, cfg):
    """Noiseless bound with the Hilbert-Schmidt pair, plus the norm
    factorization and dimension-scaling checks."""
    report = SuiteReport("schatten", seed, n)
    for trial, s in enumerate(seed_stream(seed, n)):
        rho = random_mixed(_SHAPE222, RandomSpec(s, "ginibre-mixed"))
        res = check_main_inequality(rho, "schatten-2", "schatten-2", cfg=cfg)
        report.record(trial, res, {"seed": s, "part": "theorem-sweep"})
    # ||M x I/2||_p = 2^(1/p-1) ||M||_p on random Hermitian matrices
    rng = np.random.default_rng(seed + 17)
    for trial in range(min(n, 100)):
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        m = (m + m.conj().T) / 2.0
        for p in (1.0, 1.5, 2.0, 3.0):
            lhs = schatten_norm(np.kron(m, np.eye(2) / 2.0), p)
            rhs = 2.0 ** (1.0 / p - 1.0) * schatten_norm(m, p)
            res = IneqResult(lhs, rhs, 1e-10, abs(lhs - rhs) <= 1e-10)
            report.record(trial, res, {"part": "norm-factorization", "p": p})
    # E2 cannot grow when a maximally mixed qubit is appended to Y
    n_scale = min(n, 100)
    kept = 0
    for s in seed_stream(seed + 31, 4 * n_scale):
        if kept >= n_scale:
            break
        rho = random_mixed(SystemShape((2, 2)), RandomSpec(s, "ginibre-mixed"))
        base = ep_distance(rho, Bipartition((0,), (1,)), 2, cfg)
        if base.value <= 1e-9:
            continue
        kept += 1
        ext = DensityMatrix(
            np.kron(rho.mat, np.eye(2) / 2.0), SystemShape((2, 2, 2))
        )
        extended = ep_distance(ext, CUT_A_BC, 2, cfg)
        lhs = 2.0 ** (-0.5) * base.value + 1e-6
        res = IneqResult(lhs, extended.value, 0.0, extended.value <= lhs)
        report.record(kept, res, {"part": "e2-scaling", "seed": s})
    if kept < n_scale:
        report.notes.append(f"e2-scaling: only {kept} NPT states found")
    return report


def _random_channel_mix(s: int):
    """A channel drawn from Pauli/amplitude/phase/CPTP families."""
    rng = np.random.default_rng(s)
    kind = rng.integers(0, 4)
    if kind == 0:
        return pauli_channel(random_pauli_spec(RandomSpec(s, "dirichlet-pauli")))
    if kind == 1:
        return amplitude_damping(float(rng.uniform(0.0, 1.0)))
    if kind == 2:
        return phase_damping(float(rng.uniform(0.0, 0.5)))
    return random_channel(2, int(rng.integers(2, 5)), s)


def _suite_noisy(seed, n, cfg):
    """Noisy bound (min of initial/final discord), Hilbert-Schmidt pair."""
    report = SuiteReport("noisy", seed, n)
    for trial, s in enumerate(seed_stream(seed, n)):
        rho = random_mixed(_SHAPE222, RandomSpec(s, "ginibre-mixed"))
        scenario = DistributionScenario(
            rho, _random_channel_mix(s ^ 0x9E3779B9), "schatten-2", "schatten-2"
        )
        res = check_noisy_bound(scenario, cfg=cfg)
        report.record(trial, res, {"seed": s})
    return report


def _suite_divisible(seed, n, cfg):
    """Divisible-channel bound at the intermediate state, relative-entropy pair."""
    report = SuiteReport("divisible", seed, n)
    for trial, s in enumerate(seed_stream(seed, n)):
        rng = np.random.default_rng(s)
        rho = random_mixed(_SHAPE222, RandomSpec(s, "ginibre-mixed"))
        if rng.integers(0, 2) == 0:
            g1 = float(rng.uniform(0.05, 0.6))
            g2 = float(rng.uniform(0.05, 0.6))
            total = 1.0 - (1.0 - g1) * (1.0 - g2)
            channel, first, second = (
                amplitude_damping(total),
                amplitude_damping(g1),
                amplitude_damping(g2),
            )
        else:
            p1 = float(rng.uniform(0.02, 0.4))
            p2 = float(rng.uniform(0.02, 0.4))
            total = p1 + p2 - 2.0 * p1 * p2
            channel, first, second = (
                phase_damping(total),
                phase_damping(p1),
                phase_damping(p2),
            )
        scenario = DistributionScenario(rho, channel, "relative-entropy", "relative-entropy")
        res = check_divisible_bound(scenario, (first, second), cfg=cfg)
        report.record(trial, res, {"seed": s})
    return report


def _suite_markov(seed, n, cfg, inject_reversed=False):
    """Markovian bound on an 11-point time grid, Hilbert-Schmidt pair."""
    report = SuiteReport("markov", seed, n)
    t_grid = np.linspace(0.0, 1.0, 11)
    for trial, s in enumerate(seed_stream(seed, n)):
        rng = np.random.default_rng(s)
        fam = MarkovFamily(
            kind="amplitude-damping" if rng.integers(0, 2) == 0 else "phase-damping",
            rate=float(rng.uniform(0.2, 2.0)),
        )
        rho = random_mixed(_SHAPE222, RandomSpec(s, "ginibre-mixed"))
        out = check_markov_bound(fam, rho, 1.0, t_grid, cfg=cfg)
        for res in out.results:
            report.record(trial, res, {"seed": s})
    if inject_reversed:
        _markov_witness(report, seed, cfg)
    return report


def _markov_witness(report: SuiteReport, seed: int, cfg):
    """Deliberately mismatched snapshot: the bound is expected to break."""
    from .measures import discord
    from .protocols import entanglement_measure

    fam = MarkovFamily("amplitude-damping", rate=0.35)  # gamma(T=1) ~ 0.3
    bell = max_entangled(2)
    # kron gives order (A, C, B); swap the last two to get (A, B, C)
    mat = _swap_last_two(np.kron(bell.to_density().mat, np.eye(2) / 2.0))
    rho_i = DensityMatrix(mat, SystemShape((2, 2, 2)))
    ent = entanglement_measure("schatten-2", cfg)
    rho_f = apply_on(markov_snapshot(fam, 0.0, 1.0), rho_i, 2)
    rhs = ent(rho_f, CUT_A_BC)[0] - ent(rho_i, CUT_AC_B)[0]
    # the claimed intermediate state is taken from far beyond the final time
    rho_bogus = apply_on(amplitude_damping(1.0 - 1e-9), rho_i, 2)
    lhs = discord(rho_bogus, 2, (0, 1), "schatten-2", cfg).value
    if lhs < rhs - 1e-6:
        report.expected_violations.append(
            {"lhs": lhs, "rhs": rhs, "margin": lhs - rhs, "kind": "reversed-time"}
        )
    else:
        report.failures.append(
            {"kind": "witness-not-triggered", "lhs": lhs, "rhs": rhs}
        )


def _swap_last_two(mat: np.ndarray) -> np.ndarray:
    t = mat.reshape(2, 2, 2, 2, 2, 2)
    return t.transpose(0, 2, 1, 3, 5, 4).reshape(8, 8)


def _suite_pauli_opt(seed, n, cfg):
    """Maximally entangled input is optimal through random Pauli channels."""
    report = SuiteReport("pauli-opt", seed, n)
    for trial, s in enumerate(seed_stream(seed, n)):
        spec = random_pauli_spec(RandomSpec(s, "dirichlet-pauli"))
        res = check_pauli_optimality(spec, "log-negativity", trials=300, seed=s, cfg=cfg)
        report.record(trial, res, {"seed": s, "measure": "log-negativity"})
        res = check_pauli_optimality(spec, "eof", trials=120, seed=s + 1, cfg=cfg)
        report.record(trial, res, {"seed": s, "measure": "eof"})
    return report


def _suite_subadditive(seed, n, cfg):
    """No preshared advantage for the (additive) log-negativity through
    Pauli noise; includes two-qubit product-channel witness runs."""
    report = SuiteReport("subadditive", seed, n)
    for trial, s in enumerate(seed_stream(seed, n)):
        spec = random_pauli_spec(RandomSpec(s, "dirichlet-pauli"))
        rho = random_mixed(_SHAPE222, RandomSpec(s ^ 0x5DEECE66D, "ginibre-mixed"))
        res = check_subadditive_bound(spec, rho, "log-negativity", cfg=cfg)
        report.record(trial, res, {"seed": s})
    shape424 = SystemShape((4, 2, 4))
    n_prod = max(min(n // 20, 50), 5)
    for trial, s in enumerate(seed_stream(seed + 101, n_prod)):
        pair = (
            random_pauli_spec(RandomSpec(s, "dirichlet-pauli")),
            random_pauli_spec(RandomSpec(s + 1, "dirichlet-pauli")),
        )
        rho = random_mixed(shape424, RandomSpec(s + 2, "ginibre-mixed"))
        res = check_subadditive_bound(pair, rho, "log-negativity", cfg=cfg)
        report.record(trial, res, {"seed": s, "part": "product-channel"})
    return report


def _suite_thm10(seed, n, cfg):
    """Optimal-input discord bound for phase damping, amplitude damping and
    the identity channel, relative-entropy quantities."""
    report = SuiteReport("thm10", seed, n)
    channels = [
        ("phase-damping-0.1", phase_damping(0.1)),
        ("phase-damping-0.3", phase_damping(0.3)),
        ("amplitude-damping-0.3", amplitude_damping(0.3)),
        ("identity", pauli_channel(PauliSpec((1.0, 0.0, 0.0, 0.0)))),
    ]
    per = max(n // len(channels), 1)
    for offset, (label, channel) in enumerate(channels):
        lhs = thm10_search_lhs(channel, "relative-entropy", seed=seed, cfg=cfg)
        for trial, s in enumerate(seed_stream(seed + 1000 * (offset + 1), per)):
            rho = random_mixed(_SHAPE222, RandomSpec(s, "ginibre-mixed"))
            res = check_thm10_bound(
                channel, rho, lhs=lhs, seed=s, cfg=cfg
            )
            report.record(trial, res, {"seed": s, "channel": label})
    report.notes.append(
        "lhs is a searched lower bound of the true optimal-input discord"
    )
    return report


def _suite_teleport(seed, n, cfg):
    """Teleportation reduction is exact for Pauli and Weyl-covariant noise."""
    report = SuiteReport("teleport", seed, n)
    shape22 = SystemShape((2, 2))
    for trial, s in enumerate(seed_stream(seed, n)):
        spec = random_pauli_spec(RandomSpec(s, "dirichlet-pauli"))
        channel = pauli_channel(spec)
        rho = random_mixed(shape22, RandomSpec(s + 7, "ginibre-mixed"))
        resource = apply_on(channel, max_entangled(2).to_density(), 1)
        tele = teleport_through(resource, rho)
        direct = apply_on(channel, rho, 1)
        err = trace_norm(tele.mat - direct.mat)
        res = IneqResult(1e-10, err, 0.0, err <= 1e-10)
        report.record(trial, res, {"seed": s, "kind": "pauli"})
    shape33 = SystemShape((3, 3))
    n_weyl = max(n // 10, 20)
    for trial, s in enumerate(seed_stream(seed + 13, n_weyl)):
        rng = np.random.default_rng(s)
        probs = rng.dirichlet(np.ones(9))
        channel = weyl_channel(3, probs)
        rho = random_mixed(shape33, RandomSpec(s + 3, "ginibre-mixed"))
        resource = apply_on(channel, max_entangled(3).to_density(), 1)
        tele = teleport_through(resource, rho)
        direct = apply_on(channel, rho, 1)
        err = trace_norm(tele.mat - direct.mat)
        res = IneqResult(1e-10, err, 0.0, err <= 1e-10)
        report.record(trial, res, {"seed": s, "kind": "weyl-3"})
    return report
