"""Transformation-feasibility deciders.

Each decider takes source and target spectral summaries and returns a
verdict carrying either a witness (realizing parameters and mode bounds) or
a description of the first violated constraint.

Single-mode deciders are exact (necessary and sufficient). The multi-mode
deciders are exact per branch (temperatures or asymmetries separately);
joint feasibility of both branches at once is reported as necessary only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ordering
from .errors import ModeCountMismatch, NegativeDelta
from .gaussian import SpectralSummary, summary_of

ZERO_ATOL = 1e-12
REL_TOL = 1e-9


@dataclass
class FeasibilityVerdict:
    feasible: bool
    witness: dict | None = None
    violation: str | None = None

    def __post_init__(self):
        if self.feasible and self.witness is None:
            self.witness = {}
        if not self.feasible and self.violation is None:
            self.violation = "infeasible"

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "witness": self.witness,
            "violation": self.violation,
        }


def _single_mode(summary) -> tuple[float, float]:
    summary = summary_of(summary)
    if summary.n_modes != 1:
        raise ModeCountMismatch(f"expected a single mode, got {summary.n_modes}")
    return float(summary.mu[0]), float(summary.alpha[0])


def _ratio(target: float, source: float, margin: float) -> float | None:
    """target/source if it lies in [0, 1] within tolerance, else None."""
    scale = max(abs(source), abs(target), 1.0)
    p = target / source
    if -REL_TOL - margin / scale <= p <= 1.0 + REL_TOL + margin / scale:
        return min(max(p, 0.0), 1.0)
    return None


def check_single_mode_gto(s, t, margin: float = 0.0) -> FeasibilityVerdict:
    """Single-mode feasibility with no catalyst (equivalently, with a strong
    catalyst): one p in [0, 1] with mu' = p mu and alpha' = p alpha.

    A vanishing source parameter forces the matching target to vanish and
    leaves p constrained only by the other equation.
    """
    mu_s, al_s = _single_mode(s)
    mu_t, al_t = _single_mode(t)
    zero_mu = abs(mu_s) <= ZERO_ATOL
    zero_al = abs(al_s) <= ZERO_ATOL

    if zero_mu and abs(mu_t) > ZERO_ATOL + margin:
        return FeasibilityVerdict(False, violation=f"mu'={mu_t} unreachable from mu=0")
    if zero_al and abs(al_t) > ZERO_ATOL + margin:
        return FeasibilityVerdict(False, violation=f"alpha'={al_t} unreachable from alpha=0")

    if zero_mu and zero_al:
        return FeasibilityVerdict(True, witness={"p": 1.0})
    if zero_mu:
        p = _ratio(al_t, al_s, margin)
        if p is None:
            return FeasibilityVerdict(False, violation=f"alpha'/alpha={al_t / al_s} outside [0, 1]")
        return FeasibilityVerdict(True, witness={"p": p})
    if zero_al:
        p = _ratio(mu_t, mu_s, margin)
        if p is None:
            return FeasibilityVerdict(False, violation=f"mu'/mu={mu_t / mu_s} outside [0, 1]")
        return FeasibilityVerdict(True, witness={"p": p})

    p = _ratio(mu_t, mu_s, margin)
    q = _ratio(al_t, al_s, margin)
    if p is None:
        return FeasibilityVerdict(False, violation=f"mu'/mu={mu_t / mu_s} outside [0, 1]")
    if q is None:
        return FeasibilityVerdict(False, violation=f"alpha'/alpha={al_t / al_s} outside [0, 1]")
    if abs(p - q) > REL_TOL + margin / max(abs(al_s), abs(mu_s)):
        return FeasibilityVerdict(
            False, violation=f"ratios disagree: mu'/mu={p}, alpha'/alpha={q}"
        )
    return FeasibilityVerdict(True, witness={"p": p})


def check_weak_single(s, t, margin: float = 0.0) -> FeasibilityVerdict:
    """Single-mode feasibility with a weak catalyst: p >= q in [0, 1] with
    mu' = p mu, alpha' = q alpha.

    A vanishing source parameter forces the matching target to vanish and
    leaves that ratio unconstrained.
    """
    mu_s, al_s = _single_mode(s)
    mu_t, al_t = _single_mode(t)
    zero_mu = abs(mu_s) <= ZERO_ATOL
    zero_al = abs(al_s) <= ZERO_ATOL

    if zero_mu and abs(mu_t) > ZERO_ATOL + margin:
        return FeasibilityVerdict(False, violation=f"mu'={mu_t} unreachable from mu=0")
    if zero_al and abs(al_t) > ZERO_ATOL + margin:
        return FeasibilityVerdict(False, violation=f"alpha'={al_t} unreachable from alpha=0")

    p = 1.0 if zero_mu else _ratio(mu_t, mu_s, margin)
    if p is None:
        return FeasibilityVerdict(False, violation=f"mu'/mu={mu_t / mu_s} outside [0, 1]")
    q = 0.0 if zero_al else _ratio(al_t, al_s, margin)
    if q is None:
        return FeasibilityVerdict(False, violation=f"alpha'/alpha={al_t / al_s} outside [0, 1]")
    slack = REL_TOL + margin / max(abs(al_s), 1e-300) if not zero_al else 0.0
    if q > p + slack:
        return FeasibilityVerdict(False, violation=f"alpha ratio q={q} exceeds mu ratio p={p}")
    return FeasibilityVerdict(True, witness={"p": p, "q": min(q, p)})


def check_no_catalyst(s, t, margin: float = 0.0) -> FeasibilityVerdict:
    """Multi-mode feasibility with no catalyst (or a strong catalyst):
    elementwise decrease of the super-thermal, sub-thermal, and asymmetry
    vectors.

    The branch conditions are individually exact; joint feasibility of both
    branches in one circuit is necessary only, and the witness says so.
    """
    s = summary_of(s)
    t = summary_of(t)
    sp, sm = ordering.split_thermal(s.mu)
    tp, tm = ordering.split_thermal(t.mu)
    atol = ordering.DEFAULT_ATOL + margin

    m_ok = ordering.elementwise_leq(tp, sp, atol) and ordering.elementwise_leq(tm, sm, atol)
    a_ok = ordering.elementwise_leq(t.alpha, s.alpha, atol)
    witness = {
        "m_feasible": bool(m_ok),
        "a_feasible": bool(a_ok),
        "joint": "necessary conditions only; branches are individually exact",
    }
    if m_ok and a_ok:
        return FeasibilityVerdict(True, witness=witness)
    if not m_ok:
        return FeasibilityVerdict(False, witness=witness, violation="temperature branch: some mu'± exceeds mu±")
    return FeasibilityVerdict(False, witness=witness, violation="asymmetry branch: some alpha' exceeds alpha")


def check_strong_approx(s, t, delta: float, margin: float = 0.0) -> FeasibilityVerdict:
    """Approximate transformation with a strong catalyst returned within a
    trace-norm budget delta.

    Temperature branch: total positive excess of mu'+ over mu+ plus that of
    mu'- over mu- must not exceed delta; asymmetry branch likewise for
    alpha. delta = 0 reduces exactly to :func:`check_no_catalyst`.
    """
    if delta < 0:
        raise NegativeDelta(f"delta must be >= 0, got {delta}")
    s = summary_of(s)
    t = summary_of(t)
    sp, sm = ordering.split_thermal(s.mu)
    tp, tm = ordering.split_thermal(t.mu)

    m_excess = ordering.positive_excess(tp, sp) + ordering.positive_excess(tm, sm)
    a_excess = ordering.positive_excess(t.alpha, s.alpha)
    atol = ordering.DEFAULT_ATOL + margin
    m_ok = m_excess <= delta + atol
    a_ok = a_excess <= delta + atol
    witness = {
        "m_excess": m_excess,
        "a_excess": a_excess,
        "delta": delta,
        "m_feasible": bool(m_ok),
        "a_feasible": bool(a_ok),
    }
    if m_ok and a_ok:
        return FeasibilityVerdict(True, witness=witness)
    branch = "temperature" if not m_ok else "asymmetry"
    excess = m_excess if not m_ok else a_excess
    return FeasibilityVerdict(
        False, witness=witness, violation=f"{branch} excess {excess:.3e} exceeds delta={delta}"
    )


def check_weak_M(s, t, with_bath: bool, margin: float = 0.0) -> FeasibilityVerdict:
    """Temperature-branch feasibility with a weak catalyst.

    Without a bath the full signed vector mu' must be majorized by mu; with
    a bath the super- and sub-thermal parts must each be weakly majorized.
    The witness carries the worst-case mode counts the construction needs.
    """
    s = summary_of(s)
    t = summary_of(t)
    n = max(s.n_modes, t.n_modes)
    atol = ordering.DEFAULT_ATOL + margin
    if not with_bath:
        ok = ordering.majorizes(s.mu, t.mu, atol)
        if ok:
            return FeasibilityVerdict(
                True, witness={"catalyst_modes_bound": max(n - 1, 0), "bath_modes_bound": 0}
            )
        return FeasibilityVerdict(
            False, violation="mu' is not majorized by mu (bath-free weak catalysis)"
        )
    sp, sm = ordering.split_thermal(s.mu)
    tp, tm = ordering.split_thermal(t.mu)
    plus_ok = ordering.weak_majorizes(sp, tp, atol)
    minus_ok = ordering.weak_majorizes(sm, tm, atol)
    if plus_ok and minus_ok:
        return FeasibilityVerdict(
            True, witness={"catalyst_modes_bound": max(n - 1, 0), "bath_modes_bound": n}
        )
    branch = "super-thermal" if not plus_ok else "sub-thermal"
    return FeasibilityVerdict(False, violation=f"{branch} part is not weakly majorized")


def check_weak_A(s, t, margin: float = 0.0) -> FeasibilityVerdict:
    """Asymmetry-branch feasibility with a weak catalyst: alpha' weakly
    majorized by alpha (a bath neither helps nor hurts this branch)."""
    s = summary_of(s)
    t = summary_of(t)
    n = max(s.n_modes, t.n_modes)
    atol = ordering.DEFAULT_ATOL + margin
    if ordering.weak_majorizes(s.alpha, t.alpha, atol):
        return FeasibilityVerdict(
            True,
            witness={
                "catalyst_modes_bound": max(2 * n - 1, 0),
                "catalyst_plus_bath_bound": {"catalyst": n, "bath": max(n - 1, 0)},
            },
        )
    return FeasibilityVerdict(False, violation="alpha' is not weakly majorized by alpha")
