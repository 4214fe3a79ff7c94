"""Constructive circuit builders.

For every feasible target the synthesizers emit an explicit circuit (with
catalyst preparation where one is needed) that forward simulation verifies:
the system reaches the target summary and every catalyst mode's local block
returns to its prepared value.

Elementary building blocks:

* lossy step: beam splitter of transmissivity r against a fresh thermal
  mode, scaling a mode's (mu, alpha) by r;
* asymmetry exchange: a beam-splitter-plus-phase coupling to a matched
  catalyst mode that lowers alpha at fixed mu and restores the catalyst;
* pair partial swap: a real orthogonal three-mode rotation against a
  catalyst whose value interlaces the targets, realizing a T-transform on
  two entries while the catalyst diagonal returns exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics, ordering
from .engine import (
    ApplyPassive,
    AttachBath,
    CircuitResult,
    GtoCircuit,
    TraceOut,
    run_circuit,
    trace_out,
)
from .errors import (
    ConstructionError,
    Infeasible,
    ModeCountMismatch,
    ParameterOutOfRange,
    RatioConflict,
    SolverFailure,
)
from .feasibility import check_weak_A, check_weak_M, check_weak_single
from .gaussian import (
    DEFAULT_CONTEXT,
    ModeDecomposition,
    SpectralSummary,
    ThermalContext,
    physicality_residual,
    reconstruct_cm,
    spectral_summary,
    state_from_decomposition,
    summary_of,
)

ZERO_ATOL = 1e-12


def beam_splitter(transmissivity: float) -> np.ndarray:
    """Two-mode beam splitter keeping fraction ``transmissivity`` in mode 0."""
    if not -1e-12 <= transmissivity <= 1 + 1e-12:
        raise ParameterOutOfRange(f"transmissivity {transmissivity} outside [0, 1]")
    r = min(max(transmissivity, 0.0), 1.0)
    c, s = np.sqrt(r), np.sqrt(1.0 - r)
    return np.array([[c, -s], [s, c]], dtype=complex)


def phase_unitary(theta: float) -> np.ndarray:
    return np.array([[np.exp(1j * theta)]], dtype=complex)


def asymmetry_exchange_unitary(a: float) -> np.ndarray:
    """Coupling that trades asymmetry with a matched catalyst mode.

    For a in [1/3, 1] this is a beam splitter of transmissivity a combined
    with a quarter-wave phase on the catalyst arm; applied to a pair with
    equal temperatures it leaves both temperatures fixed, lowers the system
    asymmetry, and returns the catalyst asymmetry exactly.
    """
    if not -1e-12 <= a <= 1 + 1e-12:
        raise ParameterOutOfRange(f"mixing parameter {a} outside [0, 1]")
    a = min(max(a, 0.0), 1.0)
    sa, sb = np.sqrt(a), np.sqrt(1.0 - a)
    return np.array([[sa, 1j * sb], [sb, -1j * sa]], dtype=complex)


def interlacing_unitary(values: tuple[float, float], targets: tuple[float, float], anchor: float) -> np.ndarray:
    """Real orthogonal 3x3 rotation realizing a pair partial swap.

    Conjugating diag(v1, v2, anchor) yields diagonal (t1, t2, anchor) with a
    vanishing (0, 1) entry, provided the interlacing v1 >= t1 >= anchor >=
    t2 >= v2 holds. Built in closed form as an arrow matrix with the
    prescribed spectrum.
    """
    v1, v2 = float(max(values)), float(min(values))
    d1, d2 = float(max(targets)), float(min(targets))
    d3 = float(anchor)
    scale = max(1.0, abs(v1), abs(v2))
    tol = 1e-9 * scale
    if not (v1 + tol >= d1 >= d3 - tol and d3 + tol >= d2 >= v2 - tol):
        raise ConstructionError(
            f"interlacing violated: need {v1} >= {d1} >= {d3} >= {d2} >= {v2}"
        )
    if abs((v1 + v2) - (d1 + d2)) > tol:
        raise ConstructionError("pair swap must preserve the two-mode total")

    # Work in anchor-shifted coordinates: with V = v - anchor, D = d - anchor
    # the arrow spectrum condition gives closed forms free of large-number
    # cancellation even when the whole triple is tightly pinched.
    V1, V2 = v1 - d3, v2 - d3
    D1, D2 = d1 - d3, d2 - d3
    numer = D1 * D2 - V1 * V2  # >= 0 by interlacing
    den = D1 - D2
    if den <= 1e-15 * scale:
        # d1 == d2 == anchor: single coupling with spectrum {0, ±V1}
        b, c = max(V1, 0.0), 0.0
    else:
        b = np.sqrt(max(D1 * numer / den, 0.0))
        c = np.sqrt(max(-D2 * numer / den, 0.0))
    arrow = np.array([[D1, 0.0, b], [0.0, D2, c], [b, c, 0.0]])

    w, vec = np.linalg.eigh(arrow)
    wanted = np.array([V1, V2, 0.0])

    # Near-degenerate spectra make single eigenvector assignments ambiguous;
    # try every column permutation and keep the best reconstruction.
    best_u, best_residual = None, np.inf
    for perm in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        u = vec[:, list(perm)]
        check = u @ np.diag(wanted) @ u.T
        residual = max(
            abs(check[0, 0] - D1),
            abs(check[1, 1] - D2),
            abs(check[2, 2]),
            abs(check[0, 1]),
        )
        if residual < best_residual:
            best_u, best_residual = u, residual
    if best_u is None or best_residual > 1e-8 * scale:
        raise SolverFailure(f"pair-swap rotation residual {best_residual:.3e}")
    return best_u


def embed_unitary(u_small: np.ndarray, modes: tuple[int, ...], n_total: int) -> np.ndarray:
    """Place a small unitary on the given modes of an identity."""
    u = np.eye(n_total, dtype=complex)
    idx = np.asarray(modes)
    u[np.ix_(idx, idx)] = u_small
    return u


@dataclass
class CatalystSpec:
    """Catalyst preparation: per-mode values in mode order."""

    n_modes: int
    mu: np.ndarray
    alpha: np.ndarray
    role: str = "weak"
    restores: tuple[str, ...] = ("mu", "alpha")

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=float).reshape(-1)
        self.alpha = np.asarray(self.alpha, dtype=float).reshape(-1)
        if self.mu.size != self.n_modes or self.alpha.size != self.n_modes:
            raise ModeCountMismatch("catalyst value lists must match n_modes")
        if self.role not in ("weak", "strong"):
            raise ParameterOutOfRange(f"catalyst role must be weak or strong, got {self.role!r}")

    @property
    def summary(self) -> SpectralSummary:
        return SpectralSummary(self.mu.copy(), self.alpha.copy())


@dataclass
class SynthesisPlan:
    """A verified-by-simulation recipe: prepared system + catalyst, circuit,
    and the summary the circuit is expected to reach."""

    source_mu: np.ndarray
    source_alpha: np.ndarray
    circuit: GtoCircuit
    catalyst: CatalystSpec | None = None
    expected_mu: np.ndarray | None = None
    expected_alpha: np.ndarray | None = None
    target_branch: str = "both"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.source_mu = np.asarray(self.source_mu, dtype=float).reshape(-1)
        self.source_alpha = np.asarray(self.source_alpha, dtype=float).reshape(-1)
        if self.expected_mu is not None:
            self.expected_mu = ordering.descending(self.expected_mu)
        if self.expected_alpha is not None:
            self.expected_alpha = ordering.descending(self.expected_alpha)

    @property
    def n_system(self) -> int:
        return self.source_mu.size

    @property
    def n_catalyst(self) -> int:
        return self.catalyst.n_modes if self.catalyst else 0

    def to_dict(self) -> dict:
        return {
            "system": {"mu": self.source_mu.tolist(), "alpha": self.source_alpha.tolist()},
            "catalyst": None
            if self.catalyst is None
            else {
                "mu": self.catalyst.mu.tolist(),
                "alpha": self.catalyst.alpha.tolist(),
                "role": self.catalyst.role,
                "restores": list(self.catalyst.restores),
            },
            "target": {
                "branch": self.target_branch,
                "mu": None if self.expected_mu is None else self.expected_mu.tolist(),
                "alpha": None if self.expected_alpha is None else self.expected_alpha.tolist(),
            },
            "circuit": self.circuit.to_dict(),
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SynthesisPlan":
        cat = doc.get("catalyst")
        catalyst = None
        if cat is not None:
            catalyst = CatalystSpec(
                n_modes=len(cat["mu"]),
                mu=np.asarray(cat["mu"], dtype=float),
                alpha=np.asarray(cat["alpha"], dtype=float),
                role=cat.get("role", "weak"),
                restores=tuple(cat.get("restores", ("mu", "alpha"))),
            )
        target = doc["target"]
        return cls(
            source_mu=np.asarray(doc["system"]["mu"], dtype=float),
            source_alpha=np.asarray(doc["system"]["alpha"], dtype=float),
            circuit=GtoCircuit.from_dict(doc["circuit"]),
            catalyst=catalyst,
            expected_mu=None if target.get("mu") is None else np.asarray(target["mu"], dtype=float),
            expected_alpha=None
            if target.get("alpha") is None
            else np.asarray(target["alpha"], dtype=float),
            target_branch=target.get("branch", "both"),
            meta=doc.get("meta", {}),
        )


class _PlanBuilder:
    """Collects abstract moves, allocates catalyst modes, and emits a circuit.

    Moves refer to system+catalyst mode indices; bath modes are transient
    (attached, mixed, traced within one lossy step), so their index is always
    the current total mode count.
    """

    def __init__(self, n_system: int):
        self.n_system = n_system
        self.cat_mu: list[float] = []
        self.cat_alpha: list[float] = []
        self.moves: list[tuple] = []
        self.t_steps = 0
        self.l_steps = 0

    def new_catalyst(self, mu: float, alpha: float) -> int:
        self.cat_mu.append(float(mu))
        self.cat_alpha.append(float(alpha))
        return self.n_system + len(self.cat_mu) - 1

    def unitary(self, u: np.ndarray, modes: tuple[int, ...]):
        self.moves.append(("unitary", u, tuple(modes)))

    def bath_mix(self, mode: int, r: float):
        self.l_steps += 1
        self.moves.append(("bath_mix", mode, float(r)))

    def pair_swap(self, modes: tuple[int, int], values, targets, cat_alpha_equal: bool = False):
        """T-transform two modes against a fresh interlacing catalyst."""
        t1, t2 = float(max(targets)), float(min(targets))
        anchor = 0.5 * (t1 + t2)
        cat = self.new_catalyst(anchor, anchor if cat_alpha_equal else 0.0)
        u = interlacing_unitary(values, targets, anchor)
        self.t_steps += 1
        v1_first = values[0] >= values[1]
        a, b = modes if v1_first else (modes[1], modes[0])
        self.unitary(u.astype(complex), (a, b, cat))

    def emit(self) -> GtoCircuit:
        n_total = self.n_system + len(self.cat_mu)
        steps = []
        for move in self.moves:
            if move[0] == "unitary":
                _, u, modes = move
                steps.append(ApplyPassive(embed_unitary(u, modes, n_total)))
            else:
                _, mode, r = move
                steps.append(AttachBath(1))
                steps.append(
                    ApplyPassive(embed_unitary(beam_splitter(r), (mode, n_total), n_total + 1))
                )
                steps.append(TraceOut((n_total,)))
        return GtoCircuit(steps)

    def catalyst_spec(self, restores: tuple[str, ...]) -> CatalystSpec | None:
        if not self.cat_mu:
            return None
        return CatalystSpec(
            n_modes=len(self.cat_mu),
            mu=np.asarray(self.cat_mu),
            alpha=np.asarray(self.cat_alpha),
            role="weak",
            restores=restores,
        )


def synth_single_mode(source, p: float, phase: float = 0.0) -> SynthesisPlan:
    """Phase rotation plus thermal mixing with transmissivity p: the exact
    single-mode operation, reaching (p mu, p alpha)."""
    if not -1e-12 <= p <= 1 + 1e-12:
        raise ParameterOutOfRange(f"transmissivity p={p} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    source = summary_of(source)
    if source.n_modes != 1:
        raise ModeCountMismatch(f"single-mode synthesis needs 1 mode, got {source.n_modes}")
    builder = _PlanBuilder(1)
    if phase:
        builder.unitary(phase_unitary(phase), (0,))
    if p < 1.0 - 1e-15:
        builder.bath_mix(0, p)
    mu, al = float(source.mu[0]), float(source.alpha[0])
    return SynthesisPlan(
        source_mu=source.mu.copy(),
        source_alpha=source.alpha.copy(),
        circuit=builder.emit(),
        catalyst=None,
        expected_mu=np.array([p * mu]),
        expected_alpha=np.array([p * al]),
        target_branch="both",
        meta={"p": p, "phase": phase, "l_steps": builder.l_steps},
    )


def _pad_summaries(s: SpectralSummary, t: SpectralSummary) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    n = max(s.n_modes, t.n_modes)

    def pad(v):
        return np.concatenate([v, np.zeros(n - v.size)])

    return pad(s.mu), pad(s.alpha), pad(t.mu), pad(t.alpha)


def synth_no_catalyst(source, target) -> SynthesisPlan:
    """One lossy step per mode with a common ratio r_i = mu'_i/mu_i =
    alpha'_i/alpha_i (modes paired by descending rank).

    Raises RatioConflict when the two branch ratios disagree on some mode,
    Infeasible when any required ratio leaves [0, 1].
    """
    s, t = summary_of(source), summary_of(target)
    mu_s, al_s, mu_t, al_t = _pad_summaries(s, t)
    n = mu_s.size
    ratios = np.ones(n)
    for i in range(n):
        zero_mu = abs(mu_s[i]) <= ZERO_ATOL
        zero_al = al_s[i] <= ZERO_ATOL
        if zero_mu and abs(mu_t[i]) > 1e-9:
            raise Infeasible(f"mode {i}: mu'={mu_t[i]} unreachable from mu=0")
        if zero_al and al_t[i] > 1e-9:
            raise Infeasible(f"mode {i}: alpha'={al_t[i]} unreachable from alpha=0")
        candidates = []
        if not zero_mu:
            candidates.append(mu_t[i] / mu_s[i])
        if not zero_al:
            candidates.append(al_t[i] / al_s[i])
        if not candidates:
            continue
        r = candidates[0]
        if len(candidates) == 2 and abs(candidates[0] - candidates[1]) > 1e-9:
            raise RatioConflict(
                f"mode {i}: mu ratio {candidates[0]} vs alpha ratio {candidates[1]}"
            )
        if not -1e-9 <= r <= 1 + 1e-9:
            raise Infeasible(f"mode {i}: ratio {r} outside [0, 1]")
        ratios[i] = min(max(r, 0.0), 1.0)

    builder = _PlanBuilder(n)
    for i, r in enumerate(ratios):
        if r < 1.0 - 1e-15:
            builder.bath_mix(i, r)
    return SynthesisPlan(
        source_mu=mu_s,
        source_alpha=al_s,
        circuit=builder.emit(),
        expected_mu=mu_t,
        expected_alpha=al_t,
        target_branch="both",
        meta={"ratios": ratios.tolist(), "l_steps": builder.l_steps},
    )


def synth_weak_single(source, target) -> SynthesisPlan:
    """Two-step weak-catalytic plan for a single mode.

    First an asymmetry exchange with a catalyst prepared at the system
    temperature lowers alpha to (p/q-scaled) its final value at fixed mu,
    then a thermal beam splitter of transmissivity p finishes both
    parameters. Degenerate sources fall back to the sub-plans that remain
    well defined.
    """
    s, t = summary_of(source), summary_of(target)
    verdict = check_weak_single(s, t)
    if not verdict.feasible:
        raise Infeasible(verdict.violation)
    p, q = verdict.witness["p"], verdict.witness["q"]
    mu_s, al_s = float(s.mu[0]), float(s.alpha[0])
    mu_t, al_t = float(t.mu[0]), float(t.alpha[0])

    if al_s <= ZERO_ATOL or abs(p - q) <= 1e-12:
        return synth_single_mode(s, p)
    if p <= ZERO_ATOL:
        return synth_single_mode(s, 0.0)

    if abs(mu_s) <= ZERO_ATOL:
        # Temperature already thermal: a single asymmetry exchange reaches
        # the target directly, no bath step needed.
        abar = al_t
        thermalize = None
    else:
        abar = (q / p) * al_s
        thermalize = p

    alpha_c = 0.5 * (al_s - abar)
    a = (al_s + abar) / (3.0 * al_s - abar)
    builder = _PlanBuilder(1)
    cat = builder.new_catalyst(mu_s, alpha_c)
    builder.unitary(asymmetry_exchange_unitary(a), (0, cat))
    if thermalize is not None and thermalize < 1.0 - 1e-15:
        builder.bath_mix(0, thermalize)
    return SynthesisPlan(
        source_mu=s.mu.copy(),
        source_alpha=s.alpha.copy(),
        circuit=builder.emit(),
        catalyst=builder.catalyst_spec(restores=("mu", "alpha")),
        expected_mu=np.array([mu_t]),
        expected_alpha=np.array([al_t]),
        target_branch="both",
        meta={"p": p, "q": q, "abar": abar, "mixing_a": a, "l_steps": builder.l_steps},
    )


def synth_pair_t_transform(mu_pair, target) -> SynthesisPlan:
    """A single partial swap of a two-mode temperature pair via one catalyst.

    Requires the target to preserve the pair total and interlace the source
    (t1 <= v1). The catalyst sits at the midpoint of the target interval.
    """
    v = ordering.descending(mu_pair)
    w = ordering.descending(target)
    if v.size != 2 or w.size != 2:
        raise ModeCountMismatch("pair swap needs exactly two values")
    scale = max(1.0, float(np.max(np.abs(v))))
    if abs(float(np.sum(v) - np.sum(w))) > 1e-9 * scale:
        raise Infeasible("pair swap must preserve the two-entry sum")
    if w[0] > v[0] + 1e-9 * scale:
        raise Infeasible(f"target head {w[0]} exceeds source head {v[0]}")

    builder = _PlanBuilder(2)
    if abs(w[0] - v[0]) > 1e-13 * scale:
        builder.pair_swap((0, 1), (float(v[0]), float(v[1])), (float(w[0]), float(w[1])))
    return SynthesisPlan(
        source_mu=v,
        source_alpha=np.zeros(2),
        circuit=builder.emit(),
        catalyst=builder.catalyst_spec(restores=("mu", "alpha")),
        expected_mu=w,
        expected_alpha=np.zeros(2),
        target_branch="both",
        meta={"t_steps": builder.t_steps},
    )


def _run_value_chain(builder: _PlanBuilder, chain, slot_values, slot_to_mode, *, sign: float, on_alpha: bool, use_bath: bool = True):
    """Replay an ordering chain as circuit moves.

    ``slot_values`` are the chain-level magnitudes (non-negative for weak
    chains); ``sign`` maps them onto physical values (-1 for the sub-thermal
    branch). For asymmetry chains (``on_alpha``) lossy steps may use the
    catalyst coupling instead of a bath.
    """
    work = np.asarray(slot_values, dtype=float).copy()
    for step in chain:
        if step.kind == "T":
            j, k = step.indices
            old = (sign * work[j], sign * work[k])
            work = ordering.apply_steps(work, [step])
            new = (sign * work[j], sign * work[k])
            builder.pair_swap(
                (slot_to_mode[j], slot_to_mode[k]), old, new, cat_alpha_equal=on_alpha
            )
        else:
            (i,) = step.indices
            current = work[i]
            work = ordering.apply_steps(work, [step])
            if use_bath:
                builder.bath_mix(slot_to_mode[i], step.parameter)
            else:
                abar = step.parameter * current
                alpha_c = 0.5 * (current - abar)
                a = (current + abar) / (3.0 * current - abar)
                cat = builder.new_catalyst(alpha_c, alpha_c)
                builder.unitary(asymmetry_exchange_unitary(a), (slot_to_mode[i], cat))
                builder.l_steps += 1
    return work


def synth_weak_M(source_mu, target_mu, with_bath: bool) -> SynthesisPlan:
    """Temperature-branch weak-catalytic plan.

    Without a bath: a T-transform chain (one interlacing catalyst per step)
    realizing the majorization mu -> mu'. With a bath: independent weak
    chains on the super- and sub-thermal parts, where modes shedding their
    sign are thermalized first so their slots can host newly created entries
    of the other sign.
    """
    mu_s = ordering.descending(source_mu)
    mu_t = ordering.descending(target_mu)
    n = max(mu_s.size, mu_t.size)
    mu_s = np.concatenate([mu_s, np.zeros(n - mu_s.size)])
    mu_t = np.concatenate([mu_t, np.zeros(n - mu_t.size)])
    mu_s, mu_t = ordering.descending(mu_s), ordering.descending(mu_t)

    verdict = check_weak_M(SpectralSummary(mu_s, np.zeros(n)), SpectralSummary(mu_t, np.zeros(n)), with_bath)
    if not verdict.feasible:
        raise Infeasible(verdict.violation)

    builder = _PlanBuilder(n)

    if not with_bath:
        chain = ordering.t_transform_chain(mu_s, mu_t)
        _run_value_chain(builder, chain, mu_s, list(range(n)), sign=1.0, on_alpha=False)
    else:
        sp, sm = ordering.split_thermal(mu_s)
        tp, tm = ordering.split_thermal(mu_t)
        n_pos, n_neg = sp.size, sm.size
        k_pos, k_neg = max(n_pos, tp.size), max(n_neg, tm.size)
        zero_pool = list(range(n_pos, n - n_neg))
        need_pos = k_pos - n_pos
        need_neg = k_neg - n_neg

        # Modes whose branch target is zero end at exactly 0, so a branch
        # that sheds entries can run first and donate those slots to the
        # other branch. Both branches needing extras at once fits inside
        # the initial zero pool (counting), so at most one side borrows.
        shed_neg = [n - 1 - j for j in range(tm.size, n_neg)]
        shed_pos = list(range(tp.size, n_pos))

        if need_pos + need_neg <= len(zero_pool):
            neg_extra = zero_pool[:need_neg]
            pos_extra = zero_pool[need_neg : need_neg + need_pos]
            order = ("neg", "pos")
        elif need_neg <= len(zero_pool):
            neg_extra = zero_pool[:need_neg]
            rest = zero_pool[need_neg:]
            pos_extra = rest + shed_neg[: need_pos - len(rest)]
            order = ("neg", "pos")
        else:
            pos_extra = zero_pool[:need_pos]
            rest = zero_pool[need_pos:]
            neg_extra = rest + shed_pos[: need_neg - len(rest)]
            order = ("pos", "neg")
        if len(pos_extra) != need_pos or len(neg_extra) != need_neg:
            raise ConstructionError("slot allocation failed; feasibility check is broken")

        pos_slots = list(range(n_pos)) + list(pos_extra)
        neg_slots = [n - 1 - j for j in range(n_neg)] + list(neg_extra)

        def pad_to(v, k):
            return np.concatenate([v, np.zeros(k - v.size)])

        phases = {
            "pos": (pad_to(sp, k_pos), pad_to(tp, k_pos), pos_slots, 1.0) if k_pos else None,
            "neg": (pad_to(sm, k_neg), pad_to(tm, k_neg), neg_slots, -1.0) if k_neg else None,
        }
        for name in order:
            if phases[name] is None:
                continue
            y, x, slots, sign = phases[name]
            chain = ordering.weak_majorization_chain(y, x)
            _run_value_chain(builder, chain, y, slots, sign=sign, on_alpha=False)

    return SynthesisPlan(
        source_mu=mu_s,
        source_alpha=np.zeros(n),
        circuit=builder.emit(),
        catalyst=builder.catalyst_spec(restores=("mu", "alpha")),
        expected_mu=mu_t,
        expected_alpha=np.zeros(n),
        target_branch="both",
        meta={
            "with_bath": with_bath,
            "t_steps": builder.t_steps,
            "l_steps": builder.l_steps,
            "catalyst_modes": len(builder.cat_mu),
        },
    )


def synth_weak_A(source_alpha, target_alpha, use_bath: bool = True) -> SynthesisPlan:
    """Asymmetry-branch weak-catalytic plan.

    A weak-majorization chain on alpha: partial swaps run through real
    orthogonal interlacing rotations; lossy steps use either thermal modes
    (``use_bath``) or catalyst couplings, making the whole plan bath-free.
    System temperatures are prepared equal to the asymmetries so every mode
    stays physical; the temperature branch is not targeted.
    """
    al_s = ordering.descending(source_alpha)
    al_t = ordering.descending(target_alpha)
    n = max(al_s.size, al_t.size)
    al_s = np.concatenate([al_s, np.zeros(n - al_s.size)])
    al_t = np.concatenate([al_t, np.zeros(n - al_t.size)])

    verdict = check_weak_A(
        SpectralSummary(np.zeros(n), al_s), SpectralSummary(np.zeros(n), al_t)
    )
    if not verdict.feasible:
        raise Infeasible(verdict.violation)
    if np.any(al_s < -ZERO_ATOL) or np.any(al_t < -ZERO_ATOL):
        raise ParameterOutOfRange("asymmetries must be non-negative")

    builder = _PlanBuilder(n)
    chain = ordering.weak_majorization_chain(al_s, al_t)
    _run_value_chain(
        builder, chain, al_s, list(range(n)), sign=1.0, on_alpha=True, use_bath=use_bath
    )
    return SynthesisPlan(
        source_mu=al_s.copy(),
        source_alpha=al_s.copy(),
        circuit=builder.emit(),
        catalyst=builder.catalyst_spec(restores=("alpha",)),
        expected_mu=None,
        expected_alpha=al_t,
        target_branch="alpha",
        meta={
            "use_bath": use_bath,
            "t_steps": builder.t_steps,
            "l_steps": builder.l_steps,
            "catalyst_modes": len(builder.cat_mu),
        },
    )


def simulate_plan(
    plan: SynthesisPlan,
    context: ThermalContext = DEFAULT_CONTEXT,
    tol: float = 1e-8,
) -> CircuitResult:
    """Forward-simulate a plan and verify its contracts.

    Checks the system reaches the expected summary on the targeted branches
    and that every catalyst mode's local block returns to its preparation on
    the branches the plan declares restored (strong catalysts additionally
    must decorrelate). Residuals land in ``diagnostics``.
    """
    ns, nc = plan.n_system, plan.n_catalyst
    mu = np.concatenate([plan.source_mu, plan.catalyst.mu if nc else np.zeros(0)])
    al = np.concatenate([plan.source_alpha, plan.catalyst.alpha if nc else np.zeros(0)])
    d = ModeDecomposition(np.diag(mu).astype(complex), np.diag(al).astype(complex), context)
    out = run_circuit(d, plan.circuit)
    if out.n_modes != ns + nc:
        raise ConstructionError(
            f"circuit left {out.n_modes} modes; expected {ns + nc} (system+catalyst)"
        )

    diagnostics: dict[str, float] = {}
    restored: bool | None = None
    if nc:
        m_block = out.M[ns:, ns:]
        a_block = out.A[ns:, ns:]
        checks = []
        # Catalyst modes are used one per step and each returns to its own
        # local state; correlations *between* catalyst modes are expected for
        # multi-step plans, so restoration is checked per mode.
        if "mu" in plan.catalyst.restores:
            diagnostics["catalyst_mu_residual"] = float(
                np.max(np.abs(np.diagonal(m_block) - plan.catalyst.mu))
            )
            checks.append(diagnostics["catalyst_mu_residual"] <= tol)
        if "alpha" in plan.catalyst.restores:
            diagnostics["catalyst_alpha_residual"] = float(
                np.max(np.abs(np.diagonal(a_block) - plan.catalyst.alpha))
            )
            checks.append(diagnostics["catalyst_alpha_residual"] <= tol)
        off_diag = 0.0
        if nc > 1:
            mask = ~np.eye(nc, dtype=bool)
            off_diag = max(
                float(np.max(np.abs(m_block[mask]))), float(np.max(np.abs(a_block[mask])))
            )
        diagnostics["inter_catalyst_correlation"] = off_diag
        sys_corr = max(
            float(np.max(np.abs(out.M[:ns, ns:]))), float(np.max(np.abs(out.A[:ns, ns:])))
        )
        diagnostics["system_catalyst_correlation"] = sys_corr
        if plan.catalyst.role == "strong":
            checks.append(sys_corr <= tol)
            checks.append(off_diag <= tol)
        restored = all(checks) if checks else True
        cat_prep = ModeDecomposition(
            np.diag(plan.catalyst.mu).astype(complex),
            np.diag(plan.catalyst.alpha).astype(complex),
            context,
        )
        diagnostics["catalyst_physicality"] = physicality_residual(reconstruct_cm(cat_prep))

    system = trace_out(out, range(ns, ns + nc)) if nc else out
    summary = spectral_summary(system)
    if plan.expected_mu is not None and plan.target_branch in ("both", "mu"):
        diagnostics["target_mu_residual"] = float(np.max(np.abs(summary.mu - plan.expected_mu)))
    if plan.expected_alpha is not None and plan.target_branch in ("both", "alpha"):
        diagnostics["target_alpha_residual"] = float(
            np.max(np.abs(summary.alpha - plan.expected_alpha))
        )

    final = state_from_decomposition(system)
    diagnostics["physicality_residual"] = physicality_residual(final.covariance)
    return CircuitResult(
        final_state=final, catalyst_block_restored=restored, diagnostics=diagnostics
    )
