"""Monte-Carlo verification campaigns.

Empirical necessity checks for the transformation laws, reachable-region
sampling for the single-mode weak-catalyst triangle, stability probes for
approximate strong catalysis, and Lorenz-curve data emission.

Sampling strategy for catalytic campaigns: a dilation drawn uniformly at
random returns the catalyst block only with vanishing probability, so pure
rejection at tight filter tolerances is hopeless. Campaigns instead draw
random *exactly catalytic* circuits (compositions of interlacing pair
swaps, asymmetry exchanges, lossy steps, and passive rotations) and then
perturb every unitary by exp(i*eps*H) with random Hermitian H. The
catalyst-return error is measured per run and used as the filter; the
decider margin is reported alongside it so that margin-versus-epsilon
scaling is visible in the report.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import numerics, ordering
from .engine import (
    ApplyPassive,
    AttachBath,
    GtoCircuit,
    TraceOut,
    perturbed_unitary,
    run_circuit,
    sample_random_gto,
)
from .errors import DegenerateInput, GtoError, ParameterOutOfRange
from .feasibility import check_no_catalyst, check_strong_approx, check_weak_A, check_weak_M
from .gaussian import (
    DEFAULT_CONTEXT,
    ModeDecomposition,
    SpectralSummary,
    ThermalContext,
)
from .synthesis import (
    asymmetry_exchange_unitary,
    beam_splitter,
    embed_unitary,
    interlacing_unitary,
    phase_unitary,
)

THEOREMS = ("no-catalyst", "strong-approx", "weak-M", "weak-M-bath", "weak-A")
MAX_STORED_FAILURES = 20


@dataclass
class CampaignDims:
    """Size ranges for sampled systems."""

    n_system_max: int = 3
    n_bath_max: int = 3
    n_catalyst_max: int = 2


@dataclass
class CampaignReport:
    theorem: str
    trials: int
    accepted: int
    max_violation: float
    failures: list = field(default_factory=list)
    runtime_seconds: float = 0.0
    info: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "trials": self.trials,
            "accepted": self.accepted,
            "max_violation": self.max_violation,
            "failures": [list(f) for f in self.failures],
            "runtime_seconds": self.runtime_seconds,
            "info": self.info,
        }


def trial_rng(master_seed: int, index: int) -> np.random.Generator:
    """Deterministic per-trial generator, independent of execution order."""
    return np.random.default_rng([int(master_seed), int(index)])


def _thread_count() -> int:
    raw = os.environ.get("GTO_KIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_trials(fn, trials: int):
    """Run trials (optionally threaded); results return in index order."""
    workers = _thread_count()
    if workers == 1 or trials < 2 * workers:
        return [fn(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))


def random_mode_pairs(
    rng: np.random.Generator, n: int, context: ThermalContext = DEFAULT_CONTEXT
) -> tuple[np.ndarray, np.ndarray]:
    """Per-mode (mu, alpha) pairs that are physical by construction.

    mu uniform in [-(nu - 1/2), 3 nu]; alpha uniform below the single-mode
    uncertainty bound sqrt((mu + nu)^2 - 1/4).
    """
    nu = context.nu
    mu = rng.uniform(-(nu - 0.5), 3.0 * nu, size=n)
    alpha = rng.uniform(0.0, np.sqrt((mu + nu) ** 2 - 0.25))
    return mu, alpha


def _refrigerator_violation(mu_src, mu_out) -> float:
    """How much the hottest / coldest principal temperature improved."""
    sp, sm = ordering.split_thermal(mu_src)
    tp, tm = ordering.split_thermal(mu_out)
    v = 0.0
    if tp.size:
        v = max(v, float(tp[0] - (sp[0] if sp.size else 0.0)))
    if tm.size:
        v = max(v, float(tm[0] - (sm[0] if sm.size else 0.0)))
    return v


def _summary_of_blocks(m: np.ndarray, a: np.ndarray) -> SpectralSummary:
    mu, _ = numerics.hermitian_eigendecomposition(m, tol=1e-8)
    alpha, _ = numerics.takagi_factorize(a, tol=1e-8)
    return SpectralSummary(mu, alpha)


def _max_elementwise_excess(target, source) -> float:
    t, s = ordering.pad_pair(target, source)
    if t.size == 0:
        return 0.0
    return float(np.max(t - s))


def _no_catalyst_trial(index: int, seed: int, dims: CampaignDims, context: ThermalContext):
    rng = trial_rng(seed, index)
    n_s = int(rng.integers(1, dims.n_system_max + 1))
    n_b = int(rng.integers(0, dims.n_bath_max + 1))
    mu, alpha = random_mode_pairs(rng, n_s, context)

    m_in = np.zeros((n_s + n_b, n_s + n_b), dtype=complex)
    a_in = np.zeros((n_s + n_b, n_s + n_b), dtype=complex)
    m_in[:n_s, :n_s] = np.diag(mu)
    a_in[:n_s, :n_s] = np.diag(alpha)
    u = numerics.haar_random_unitary(n_s + n_b, rng)
    m_out = u @ m_in @ u.conj().T
    a_out = u @ a_in @ u.T
    out = _summary_of_blocks(m_out[:n_s, :n_s], a_out[:n_s, :n_s])

    src = SpectralSummary(mu, alpha)
    sp, sm = ordering.split_thermal(mu)
    tp, tm = ordering.split_thermal(out.mu)
    viol = max(
        _max_elementwise_excess(tp, sp),
        _max_elementwise_excess(tm, sm),
        _max_elementwise_excess(out.alpha, src.alpha),
        0.0,
    )
    fridge = _refrigerator_violation(mu, out.mu)
    ok = check_no_catalyst(src, out, margin=1e-8).feasible
    return viol, fridge, 0.0, ok


def _strong_approx_trial(index: int, seed: int, dims: CampaignDims, context: ThermalContext):
    rng = trial_rng(seed, index)
    n_s = int(rng.integers(1, dims.n_system_max + 1))
    n_c = int(rng.integers(1, dims.n_catalyst_max + 1))
    n_b = int(rng.integers(0, dims.n_bath_max + 1))
    mu_s, al_s = random_mode_pairs(rng, n_s, context)
    mu_c, al_c = random_mode_pairs(rng, n_c, context)

    n = n_s + n_c + n_b
    m_in = np.zeros((n, n), dtype=complex)
    a_in = np.zeros((n, n), dtype=complex)
    m_in[: n_s + n_c, : n_s + n_c] = np.diag(np.concatenate([mu_s, mu_c]))
    a_in[: n_s + n_c, : n_s + n_c] = np.diag(np.concatenate([al_s, al_c]))
    u = numerics.haar_random_unitary(n, rng)
    m_out = (u @ m_in @ u.conj().T)[: n_s + n_c, : n_s + n_c]
    a_out = (u @ a_in @ u.T)[: n_s + n_c, : n_s + n_c]

    # Trace-norm distance of the realized output from "target system block
    # with the catalyst exactly restored and decorrelated".
    m_target = np.zeros_like(m_out)
    m_target[:n_s, :n_s] = m_out[:n_s, :n_s]
    m_target[n_s:, n_s:] = np.diag(mu_c)
    a_target = np.zeros_like(a_out)
    a_target[:n_s, :n_s] = a_out[:n_s, :n_s]
    a_target[n_s:, n_s:] = np.diag(al_c)
    delta_m = numerics.trace_norm(m_out - m_target)
    delta_a = numerics.trace_norm(a_out - a_target)

    out = _summary_of_blocks(m_out[:n_s, :n_s], a_out[:n_s, :n_s])
    src = SpectralSummary(mu_s, al_s)
    sp, sm = ordering.split_thermal(mu_s)
    tp, tm = ordering.split_thermal(out.mu)
    m_excess = ordering.positive_excess(tp, sp) + ordering.positive_excess(tm, sm)
    a_excess = ordering.positive_excess(out.alpha, al_s)
    viol = max(m_excess - delta_m, a_excess - delta_a, 0.0)
    fridge = max(_refrigerator_violation(mu_s, out.mu) - delta_m, 0.0)
    ok = check_strong_approx(src, out, delta=max(delta_m, delta_a), margin=1e-8).feasible
    return viol, fridge, max(delta_m, delta_a), ok


def _random_weak_circuit(
    rng: np.random.Generator,
    values_mu: np.ndarray,
    values_al: np.ndarray,
    *,
    branch: str,
    allow_bath: bool,
    perturb_scale: float,
):
    """Exactly catalytic random circuit on a diagonal system, then perturbed.

    Returns (circuit, cat_mu, cat_alpha) with catalyst preparations in mode
    order. ``branch`` chooses which vector the random moves target.
    """
    n = values_mu.size
    work_mu = values_mu.astype(float).copy()
    work_al = values_al.astype(float).copy()
    cat_mu: list[float] = []
    cat_al: list[float] = []
    moves: list[tuple] = []

    n_moves = int(rng.integers(1, 4))
    for _ in range(n_moves):
        choices = []
        if n >= 2:
            choices.append("T")
        if allow_bath:
            choices.append("L")
        if branch == "alpha":
            choices.append("X")  # asymmetry exchange with catalyst
        if not choices:
            break
        kind = rng.choice(choices)
        if kind == "T":
            j, k = map(int, rng.choice(n, size=2, replace=False))
            work = work_mu if branch == "mu" else work_al
            if abs(work[j] - work[k]) < 1e-6:
                continue
            if work[j] < work[k]:
                j, k = k, j
            t = rng.uniform(0.5, 1.0)
            new_j = t * work[j] + (1 - t) * work[k]
            new_k = (1 - t) * work[j] + t * work[k]
            # interior anchor keeps the rotation solve well conditioned
            anchor = new_k + rng.uniform(0.25, 0.75) * (new_j - new_k)
            u = interlacing_unitary((work[j], work[k]), (new_j, new_k), anchor)
            cat_mu.append(anchor)
            cat_al.append(0.0 if branch == "mu" else anchor)
            cat = n + len(cat_mu) - 1
            moves.append(("u", u.astype(complex), (j, k, cat)))
            work[j], work[k] = new_j, new_k
        elif kind == "L":
            i = int(rng.integers(0, n))
            r = rng.uniform(0.0, 1.0)
            moves.append(("bath", i, r))
            work_mu[i] *= r
            work_al[i] *= r
        elif kind == "X":
            i = int(rng.integers(0, n))
            if work_al[i] <= 1e-9:
                continue
            abar = rng.uniform(0.0, work_al[i])
            alpha_c = 0.5 * (work_al[i] - abar)
            a = (work_al[i] + abar) / (3.0 * work_al[i] - abar)
            cat_mu.append(alpha_c)
            cat_al.append(alpha_c)
            cat = n + len(cat_mu) - 1
            moves.append(("u", asymmetry_exchange_unitary(a), (i, cat)))
            work_al[i] = abar

    # Optional closing rotation: it scrambles the system basis (summaries
    # are invariant) but must come last, because the catalytic moves above
    # rely on the system block staying diagonal.
    if rng.uniform() < 0.5:
        moves.append(("u", numerics.haar_random_unitary(n, rng), tuple(range(n))))

    n_total = n + len(cat_mu)
    steps = []
    for move in moves:
        if move[0] == "u":
            _, u, mode_idx = move
            full = embed_unitary(u, mode_idx, n_total)
            if perturb_scale > 0:
                full = perturbed_unitary(full, rng, perturb_scale)
            steps.append(ApplyPassive(full))
        else:
            _, i, r = move
            full = embed_unitary(beam_splitter(r), (i, n_total), n_total + 1)
            if perturb_scale > 0:
                full = perturbed_unitary(full, rng, perturb_scale)
            steps.append(AttachBath(1))
            steps.append(ApplyPassive(full))
            steps.append(TraceOut((n_total,)))
    return GtoCircuit(steps), np.asarray(cat_mu), np.asarray(cat_al)


def _weak_trial(
    index: int,
    seed: int,
    dims: CampaignDims,
    context: ThermalContext,
    *,
    branch: str,
    allow_bath: bool,
    filter_eps: float,
    margin_coeff: float,
    base_atol: float,
):
    rng = trial_rng(seed, index)
    n_s = int(rng.integers(1, dims.n_system_max + 1))
    mu, alpha = random_mode_pairs(rng, n_s, context)
    mu = np.sort(mu)[::-1]
    alpha = np.sort(alpha)[::-1]
    if branch == "alpha":
        # temperatures prepared equal to the asymmetries keep every mode
        # physical; the temperature branch is not under test here
        mu = alpha.copy()
    else:
        # the temperature dynamics are independent of A, so the branch-mu
        # campaign carries a phase-symmetric system
        alpha = np.zeros(n_s)

    # Half the runs stay exact; the rest probe the approximate-return regime.
    perturb = 0.0 if index % 2 == 0 else 10.0 ** rng.uniform(-11.0, np.log10(filter_eps))
    circuit, cat_mu, cat_al = _random_weak_circuit(
        rng, mu, alpha, branch=branch, allow_bath=allow_bath, perturb_scale=perturb
    )
    nc = cat_mu.size
    d = ModeDecomposition(
        np.diag(np.concatenate([mu, cat_mu])).astype(complex),
        np.diag(np.concatenate([alpha, cat_al])).astype(complex),
        context,
    )
    out = run_circuit(d, circuit)
    # The catalytic condition constrains the branch under test only.
    if branch == "alpha":
        eps_actual = float(np.max(np.abs(np.diagonal(out.A)[n_s:] - cat_al))) if nc else 0.0
    else:
        eps_actual = float(np.max(np.abs(np.diagonal(out.M)[n_s:].real - cat_mu))) if nc else 0.0
    if eps_actual > filter_eps:
        return None  # rejected by the catalyst-return filter

    sys_summary = _summary_of_blocks(out.M[:n_s, :n_s], out.A[:n_s, :n_s])
    src = SpectralSummary(mu, alpha if branch == "alpha" else np.zeros(n_s))
    allow = margin_coeff * (n_s + nc) * eps_actual + base_atol
    if branch == "alpha":
        viol = _weak_majorization_violation(alpha, sys_summary.alpha)
        fridge = 0.0
        ok = check_weak_A(src, sys_summary, margin=allow).feasible
    else:
        if allow_bath:
            sp, sm = ordering.split_thermal(mu)
            tp, tm = ordering.split_thermal(sys_summary.mu)
            viol = max(
                _weak_majorization_violation(sp, tp), _weak_majorization_violation(sm, tm)
            )
        else:
            viol = _majorization_violation(mu, sys_summary.mu)
        fridge = _refrigerator_violation(mu, sys_summary.mu)
        ok = check_weak_M(src, sys_summary, allow_bath, margin=allow).feasible
    return max(viol - allow, 0.0), fridge, eps_actual, ok


def _weak_majorization_violation(y, x) -> float:
    """Largest partial-sum excess of x over y (0 when weakly majorized)."""
    x, y = ordering.pad_pair(x, y)
    if x.size == 0:
        return 0.0
    return max(float(np.max(np.cumsum(x) - np.cumsum(y))), 0.0)


def _majorization_violation(y, x) -> float:
    x, y = ordering.pad_pair(x, y)
    if x.size == 0:
        return 0.0
    partial = float(np.max(np.cumsum(x) - np.cumsum(y)))
    return max(partial, abs(float(np.sum(x) - np.sum(y))), 0.0)


def necessity_campaign(
    theorem: str,
    trials: int,
    seed: int,
    dims: CampaignDims | None = None,
    context: ThermalContext = DEFAULT_CONTEXT,
    filter_eps: float = 1e-8,
    margin_coeff: float = 4.0,
    base_atol: float = 1e-9,
) -> CampaignReport:
    """Sample random GTO runs and verify the relevant transformation law.

    For the catalytic theorems, runs are exactly-catalytic circuits with
    controlled perturbations; runs are accepted when the measured catalyst
    return error is below ``filter_eps`` and the decider must then hold
    within a margin linear in the measured error.
    """
    if theorem not in THEOREMS:
        raise ParameterOutOfRange(f"unknown theorem id {theorem!r}; choose from {THEOREMS}")
    if trials < 0:
        raise ParameterOutOfRange("trials must be >= 0")
    dims = dims or CampaignDims()
    start = time.perf_counter()

    def one(i: int):
        if theorem == "no-catalyst":
            return _no_catalyst_trial(i, seed, dims, context)
        if theorem == "strong-approx":
            return _strong_approx_trial(i, seed, dims, context)
        branch = "alpha" if theorem == "weak-A" else "mu"
        allow_bath = theorem in ("weak-M-bath", "weak-A")
        return _weak_trial(
            i,
            seed,
            dims,
            context,
            branch=branch,
            allow_bath=allow_bath,
            filter_eps=filter_eps,
            margin_coeff=margin_coeff,
            base_atol=base_atol,
        )

    results = _map_trials(one, trials)
    accepted = 0
    max_violation = 0.0
    max_fridge = 0.0
    max_eps = 0.0
    failures = []
    for i, res in enumerate(results):
        if res is None:
            continue
        viol, fridge, eps, ok = res
        accepted += 1
        max_violation = max(max_violation, viol)
        max_fridge = max(max_fridge, fridge)
        max_eps = max(max_eps, eps)
        if not ok and len(failures) < MAX_STORED_FAILURES:
            failures.append((i, f"violation {viol:.3e} beyond margin at eps {eps:.3e}"))
    return CampaignReport(
        theorem=theorem,
        trials=trials,
        accepted=accepted,
        max_violation=max_violation,
        failures=failures,
        runtime_seconds=time.perf_counter() - start,
        info={
            "seed": seed,
            "filter_eps": filter_eps,
            "margin_coeff": margin_coeff,
            "acceptance_rate": (accepted / trials) if trials else 0.0,
            "max_catalyst_return_error": max_eps,
            "refrigerator_violation": max_fridge,
            "dims": {
                "n_system_max": dims.n_system_max,
                "n_bath_max": dims.n_bath_max,
                "n_catalyst_max": dims.n_catalyst_max,
            },
        },
    )


@dataclass
class RegionSample:
    """Filtered point cloud of reachable (p, q) ratios for one source mode."""

    points: np.ndarray  # shape (k, 2): columns p = mu'/mu, q = alpha'/alpha
    catalytic: np.ndarray  # bool per point: used a catalyst
    return_errors: np.ndarray
    report: CampaignReport

    def rows(self):
        for (p, q), cat, eps in zip(self.points, self.catalytic, self.return_errors):
            yield p, q, bool(cat), eps


def reachable_region_single_mode(
    mu_s: float,
    alpha_s: float,
    trials: int,
    seed: int,
    context: ThermalContext = DEFAULT_CONTEXT,
    filter_eps: float = 1e-8,
) -> RegionSample:
    """Sample single-mode weak-catalytic runs and report (p, q) ratios.

    Mixes catalyst-free thermalization runs (populating the q = p diagonal)
    with asymmetry-exchange-plus-thermalization runs that fill the q < p
    triangle; perturbed variants probe the approximate-return neighborhood.
    """
    if mu_s <= 0 or alpha_s <= 0:
        raise DegenerateInput("region sampling needs mu_s > 0 and alpha_s > 0")
    start = time.perf_counter()

    def one(i: int):
        rng = trial_rng(seed, i)
        catalytic = i % 3 != 0  # every third run is catalyst-free
        perturb = 0.0 if (i % 2 == 0 or not catalytic) else 10.0 ** rng.uniform(-11.0, -8.7)
        theta = rng.uniform(0.0, 2 * np.pi)
        p_nom = rng.uniform(0.0, 1.0)

        cat_mu: list[float] = []
        cat_al: list[float] = []
        moves = []
        if catalytic:
            abar = rng.uniform(0.0, alpha_s)
            alpha_c = 0.5 * (alpha_s - abar)
            a = (alpha_s + abar) / (3.0 * alpha_s - abar)
            cat_mu.append(mu_s)
            cat_al.append(alpha_c)
            moves.append(("u", asymmetry_exchange_unitary(a), (0, 1)))
        # phase comes after the exchange: the exchange construction relies on
        # the system asymmetry entry being real non-negative
        moves.append(("u", phase_unitary(theta), (0,)))
        moves.append(("bath", 0, p_nom))

        n_total = 1 + len(cat_mu)
        steps = []
        for move in moves:
            if move[0] == "u":
                _, u, idx = move
                full = embed_unitary(u, idx, n_total)
                if perturb > 0:
                    full = perturbed_unitary(full, rng, perturb)
                steps.append(ApplyPassive(full))
            else:
                _, idx, r = move
                full = embed_unitary(beam_splitter(r), (idx, n_total), n_total + 1)
                if perturb > 0:
                    full = perturbed_unitary(full, rng, perturb)
                steps.append(AttachBath(1))
                steps.append(ApplyPassive(full))
                steps.append(TraceOut((n_total,)))

        d = ModeDecomposition(
            np.diag([mu_s] + cat_mu).astype(complex),
            np.diag([alpha_s] + cat_al).astype(complex),
            context,
        )
        out = run_circuit(d, GtoCircuit(steps))
        eps = 0.0
        if cat_mu:
            eps = max(
                float(abs(out.M[1, 1].real - cat_mu[0])), float(abs(out.A[1, 1] - cat_al[0]))
            )
            if eps > filter_eps:
                return None
        p = float(out.M[0, 0].real) / mu_s
        q = float(abs(out.A[0, 0])) / alpha_s
        return p, q, catalytic, eps

    results = _map_trials(one, trials)
    pts, cats, epss = [], [], []
    max_q_excess = 0.0
    for res in results:
        if res is None:
            continue
        p, q, catalytic, eps = res
        pts.append((p, q))
        cats.append(catalytic)
        epss.append(eps)
        max_q_excess = max(max_q_excess, q - p)
    points = np.asarray(pts) if pts else np.zeros((0, 2))
    report = CampaignReport(
        theorem="weak-single-region",
        trials=trials,
        accepted=len(pts),
        max_violation=max(max_q_excess, 0.0),
        failures=[],
        runtime_seconds=time.perf_counter() - start,
        info={
            "seed": seed,
            "filter_eps": filter_eps,
            "acceptance_rate": (len(pts) / trials) if trials else 0.0,
            "mu_s": mu_s,
            "alpha_s": alpha_s,
        },
    )
    return RegionSample(
        points=points,
        catalytic=np.asarray(cats, dtype=bool),
        return_errors=np.asarray(epss),
        report=report,
    )


def approx_catalyst_probe(
    source=None,
    target=None,
    delta_grid=(0.0, 0.05, 0.1, 0.2, 0.5),
    trials: int = 1000,
    seed: int = 0,
    max_len: int = 6,
) -> CampaignReport:
    """Probe the stability law behind approximate strong catalysis.

    Random mode: sample ordered triples (z, zt, z') with zt <= z and verify
    sum[z' - z]_+ <= ||zt - z'||_1 every time. With explicit source/target
    vectors the probe additionally brackets the decider's boundary: the
    smallest achievable ||zt - z'||_1 over zt <= z equals the decider's
    excess, so acceptance must flip across it on the delta grid.
    """
    start = time.perf_counter()
    max_violation = 0.0
    failures = []
    boundary_gap = None

    if source is None:
        for i in range(trials):
            rng = trial_rng(seed, i)
            n = int(rng.integers(1, max_len + 1))
            z = ordering.descending(rng.uniform(-2.0, 3.0, n))
            zt = ordering.descending(z - rng.uniform(0.0, 1.0, n))
            noise = rng.uniform(-0.5, 0.5, n)
            zp = ordering.descending(zt + noise)
            delta = float(np.sum(np.abs(zt - zp)))
            excess = ordering.positive_excess(zp, z)
            viol = excess - delta
            max_violation = max(max_violation, viol)
            if viol > 1e-12 and len(failures) < MAX_STORED_FAILURES:
                failures.append((i, f"excess {excess:.3e} exceeded budget {delta:.3e}"))
        accepted = trials
    else:
        z = ordering.descending(np.asarray(source, dtype=float))
        zp = ordering.descending(np.asarray(target, dtype=float))
        z, zp = ordering.pad_pair(z, zp)
        excess = ordering.positive_excess(zp, z)
        best = np.inf
        for i in range(trials):
            rng = trial_rng(seed, i)
            zt = ordering.descending(np.minimum(z, zp) - rng.uniform(0.0, 0.3, z.size) * (i % 4 != 0))
            if np.any(zt > z + 1e-12):
                continue
            dist = float(np.sum(np.abs(zt - zp)))
            best = min(best, dist)
            viol = ordering.positive_excess(zp, z) - dist if dist < excess - 1e-12 else 0.0
            max_violation = max(max_violation, viol)
        boundary_gap = abs(best - excess)
        for delta in delta_grid:
            decider_ok = excess <= delta + 1e-9
            empirical_ok = best <= delta + 1e-9
            if decider_ok != empirical_ok and len(failures) < MAX_STORED_FAILURES:
                failures.append(
                    (int(delta * 1e6), f"boundary mismatch at delta={delta}: decider {decider_ok}")
                )
        accepted = trials

    info = {"seed": seed, "delta_grid": list(delta_grid)}
    if boundary_gap is not None:
        info["boundary_gap"] = boundary_gap
    return CampaignReport(
        theorem="approx-catalyst-stability",
        trials=trials,
        accepted=accepted,
        max_violation=max(max_violation, 0.0),
        failures=failures,
        runtime_seconds=time.perf_counter() - start,
        info=info,
    )


def lorenz_rows(named_vectors: dict) -> list[tuple[str, int, float]]:
    """Rows (series, k, partial sum) for external plotting."""
    rows = []
    for name, vec in named_vectors.items():
        curve = ordering.lorenz_curve(vec)
        for k, value in enumerate(curve, start=1):
            rows.append((str(name), k, float(value)))
    return rows


def emit_lorenz_data(summaries) -> list[tuple[str, int, float]]:
    """Lorenz-curve rows for a sequence of spectral summaries (two series per
    summary: temperatures and asymmetries)."""
    named = {}
    for i, summary in enumerate(summaries):
        named[f"s{i}.mu"] = summary.mu
        named[f"s{i}.alpha"] = summary.alpha
    return lorenz_rows(named)


def lorenz_csv(rows) -> str:
    lines = ["series,k,partial_sum"]
    for series, k, value in rows:
        lines.append(f"{series},{k},{value!r}")
    return "\n".join(lines) + "\n"
