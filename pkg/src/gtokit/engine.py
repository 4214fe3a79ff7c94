"""Circuit representation and simulator for Gaussian thermal operations.

A circuit is an ordered list of three step kinds: attach background thermal
modes, apply a passive linear unitary, trace out modes. Simulation runs on
the (M, A) representation (where bath modes enter as zero blocks and passive
unitaries act by congruence), with first moments carried through the
symplectic lift. Covariance-level results are recomputed on demand for
cross-checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import numerics
from .errors import DimensionMismatch, GtoError, IndexOutOfRange, ParameterOutOfRange
from .gaussian import (
    GaussianState,
    ModeDecomposition,
    ThermalContext,
    decompose_cm,
    passive_to_symplectic,
    physicality_residual,
    state_from_decomposition,
)


@dataclass(frozen=True)
class AttachBath:
    """Append ``count`` uncorrelated background thermal modes."""

    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ParameterOutOfRange(f"bath mode count must be >= 1, got {self.count}")


@dataclass(frozen=True)
class ApplyPassive:
    """Apply an n x n passive unitary to all current modes."""

    unitary: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "unitary", numerics.require_unitary(self.unitary, tol=1e-8))


@dataclass(frozen=True)
class TraceOut:
    """Discard the modes at the given indices."""

    modes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(sorted(set(int(i) for i in self.modes))))


Step = AttachBath | ApplyPassive | TraceOut


@dataclass
class GtoCircuit:
    """Ordered steps of a Gaussian thermal operation."""

    steps: list[Step] = field(default_factory=list)
    context: ThermalContext | None = None

    def mode_counts(self, n_initial: int) -> list[int]:
        """Mode count after each step; raises if any step is inconsistent."""
        counts = [n_initial]
        n = n_initial
        for idx, step in enumerate(self.steps):
            if isinstance(step, AttachBath):
                n += step.count
            elif isinstance(step, ApplyPassive):
                if step.unitary.shape[0] != n:
                    raise DimensionMismatch(
                        f"step {idx}: unitary acts on {step.unitary.shape[0]} modes, "
                        f"circuit has {n}"
                    )
            elif isinstance(step, TraceOut):
                if not step.modes:
                    raise IndexOutOfRange(f"step {idx}: empty trace set")
                if step.modes[0] < 0 or step.modes[-1] >= n:
                    raise IndexOutOfRange(f"step {idx}: trace indices {step.modes} out of range")
                n -= len(step.modes)
                if n < 1:
                    raise IndexOutOfRange(f"step {idx}: tracing out every mode")
            else:
                raise GtoError(f"unknown step type {type(step)!r}")
            counts.append(n)
        return counts

    def to_dict(self) -> dict:
        steps = []
        for step in self.steps:
            if isinstance(step, AttachBath):
                steps.append({"type": "attach_bath", "modes": step.count})
            elif isinstance(step, ApplyPassive):
                steps.append(
                    {
                        "type": "passive",
                        "re": step.unitary.real.tolist(),
                        "im": step.unitary.imag.tolist(),
                    }
                )
            else:
                steps.append({"type": "trace_out", "modes": list(step.modes)})
        return {"steps": steps}

    @classmethod
    def from_dict(cls, doc: dict, context: ThermalContext | None = None) -> "GtoCircuit":
        steps: list[Step] = []
        for raw in doc["steps"]:
            kind = raw["type"]
            if kind == "attach_bath":
                steps.append(AttachBath(int(raw["modes"])))
            elif kind == "passive":
                u = np.asarray(raw["re"], dtype=float) + 1j * np.asarray(raw["im"], dtype=float)
                steps.append(ApplyPassive(u))
            elif kind == "trace_out":
                steps.append(TraceOut(tuple(raw["modes"])))
            else:
                raise GtoError(f"unknown circuit step type {kind!r}")
        return cls(steps, context)


@dataclass
class CircuitResult:
    """Final state of a simulation plus named residual diagnostics."""

    final_state: GaussianState
    catalyst_block_restored: bool | None = None
    diagnostics: dict = field(default_factory=dict)


def attach_bath(d: ModeDecomposition, k: int) -> ModeDecomposition:
    """Extend with k background thermal modes: zero blocks in M and A."""
    if k < 1:
        raise ParameterOutOfRange(f"bath mode count must be >= 1, got {k}")
    n = d.n_modes
    m = np.zeros((n + k, n + k), dtype=complex)
    a = np.zeros((n + k, n + k), dtype=complex)
    m[:n, :n] = d.M
    a[:n, :n] = d.A
    r = np.concatenate([d.first_moments, np.zeros(2 * k)])
    return ModeDecomposition(m, a, d.context, r)


def apply_passive(d: ModeDecomposition, u) -> ModeDecomposition:
    """M -> u M u†, A -> u A u^T; first moments by the symplectic lift."""
    u = numerics.require_unitary(u, tol=1e-8)
    if u.shape[0] != d.n_modes:
        raise DimensionMismatch(
            f"unitary acts on {u.shape[0]} modes, state has {d.n_modes}"
        )
    m = u @ d.M @ u.conj().T
    a = u @ d.A @ u.T
    r = passive_to_symplectic(u) @ d.first_moments
    return ModeDecomposition(0.5 * (m + m.conj().T), 0.5 * (a + a.T), d.context, r)


def trace_out(d: ModeDecomposition, modes) -> ModeDecomposition:
    """Keep the principal submatrices on the complement of ``modes``."""
    drop = sorted(set(int(i) for i in modes))
    if drop and (drop[0] < 0 or drop[-1] >= d.n_modes):
        raise IndexOutOfRange(f"trace indices {drop} out of range for {d.n_modes} modes")
    keep = [i for i in range(d.n_modes) if i not in drop]
    if not keep:
        raise IndexOutOfRange("cannot trace out every mode")
    idx = np.asarray(keep)
    r_idx = np.concatenate([[2 * i, 2 * i + 1] for i in keep])
    return ModeDecomposition(
        d.M[np.ix_(idx, idx)], d.A[np.ix_(idx, idx)], d.context, d.first_moments[r_idx]
    )


def run_circuit(d: ModeDecomposition, circuit: GtoCircuit) -> ModeDecomposition:
    """Fold the circuit steps over a decomposition."""
    circuit.mode_counts(d.n_modes)
    for step in circuit.steps:
        if isinstance(step, AttachBath):
            d = attach_bath(d, step.count)
        elif isinstance(step, ApplyPassive):
            d = apply_passive(d, step.unitary)
        else:
            d = trace_out(d, step.modes)
    return d


def apply_circuit(initial: GaussianState, circuit: GtoCircuit) -> CircuitResult:
    """Simulate a circuit on a Gaussian state.

    Steps run at the (M, A) level; the result carries the reconstructed
    covariance, and diagnostics report the physicality residual (smallest
    eigenvalue of sigma + (i/2) Omega, which should stay >= -1e-9).
    """
    d = decompose_cm(initial)
    d = run_circuit(d, circuit)
    final = state_from_decomposition(d)
    return CircuitResult(
        final_state=final,
        catalyst_block_restored=None,
        diagnostics={"physicality_residual": physicality_residual(final.covariance)},
    )


def sample_random_gto(n_system: int, n_bath: int, seed) -> GtoCircuit:
    """Random GTO dilation: attach bath, Haar unitary on all modes, trace bath.

    Deterministic per seed. ``n_bath = 0`` degenerates to a pure passive
    rotation of the system.
    """
    if n_system < 1 or n_bath < 0:
        raise ParameterOutOfRange(
            f"need n_system >= 1 and n_bath >= 0, got {n_system}, {n_bath}"
        )
    u = numerics.haar_random_unitary(n_system + n_bath, seed)
    steps: list[Step] = []
    if n_bath:
        steps.append(AttachBath(n_bath))
    steps.append(ApplyPassive(u))
    if n_bath:
        steps.append(TraceOut(tuple(range(n_system, n_system + n_bath))))
    return GtoCircuit(steps)


def perturbed_unitary(u: np.ndarray, rng: np.random.Generator, scale: float) -> np.ndarray:
    """Multiply by exp(i * scale * H) for a random unit-norm Hermitian H."""
    n = u.shape[0]
    h = numerics.random_hermitian(n, rng)
    h /= max(np.linalg.norm(h, 2), 1e-300)
    return u @ scipy.linalg.expm(1j * scale * h)


def circuit_to_json(circuit: GtoCircuit) -> str:
    return json.dumps(circuit.to_dict(), sort_keys=True)


def circuit_from_json(text: str) -> GtoCircuit:
    return GtoCircuit.from_dict(json.loads(text))
