"""Vector orderings and constructive transform chains.

Predicates (elementwise order, weak majorization, majorization) plus the
constructive side: decompose a majorization into at most n-1 partial swaps
(T-transforms), and a weak majorization over non-negative vectors into
T-transforms followed by per-entry lossy scalings (L-transforms).

All functions sort their inputs descending and zero-pad to a common length,
so callers may pass unsorted sequences of different lengths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstructionError,
    NegativeEntry,
    NotMajorized,
    NotWeaklyMajorized,
    ParameterOutOfRange,
)

DEFAULT_ATOL = 1e-9


def descending(values) -> np.ndarray:
    """Copy of ``values`` as a 1-D float array sorted non-increasing."""
    arr = np.sort(np.asarray(values, dtype=float).reshape(-1))[::-1]
    return np.ascontiguousarray(arr)


def pad_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    """Sort both vectors descending and zero-pad to a common length."""
    x = descending(x)
    y = descending(y)
    n = max(x.size, y.size)
    if x.size < n:
        x = np.concatenate([x, np.zeros(n - x.size)])
        x = descending(x)
    if y.size < n:
        y = np.concatenate([y, np.zeros(n - y.size)])
        y = descending(y)
    return x, y


def elementwise_leq(x, y, atol: float = DEFAULT_ATOL) -> bool:
    """x_i <= y_i for all i after descending sort and zero padding."""
    x, y = pad_pair(x, y)
    return bool(np.all(x <= y + atol))


def weak_majorizes(y, x, atol: float = DEFAULT_ATOL) -> bool:
    """Whether y weakly majorizes x: all partial sums of x bounded by y's."""
    x, y = pad_pair(x, y)
    return bool(np.all(np.cumsum(x) <= np.cumsum(y) + atol))


def majorizes(y, x, atol: float = DEFAULT_ATOL) -> bool:
    """Weak majorization plus equality of the total sums (within ``atol``)."""
    x, y = pad_pair(x, y)
    if abs(float(np.sum(x) - np.sum(y))) > atol:
        return False
    return bool(np.all(np.cumsum(x) <= np.cumsum(y) + atol))


def excess_above(values, threshold: float) -> float:
    """sum_i max(values_i - threshold, 0)."""
    arr = np.asarray(values, dtype=float)
    return float(np.sum(np.maximum(arr - threshold, 0.0)))


def weak_majorizes_by_excess(y, x, atol: float = DEFAULT_ATOL) -> bool:
    """Equivalent predicate via the threshold-excess characterization.

    y weakly majorizes x iff sum_i [x_i - a]_+ <= sum_i [y_i - a]_+ for every
    real a; piecewise linearity reduces the check to the entries of x and y.
    """
    x, y = pad_pair(x, y)
    for a in np.concatenate([x, y]):
        if excess_above(x, a) > excess_above(y, a) + atol:
            return False
    return True


def majorizes_by_excess(y, x, atol: float = DEFAULT_ATOL) -> bool:
    x, y = pad_pair(x, y)
    if abs(float(np.sum(x) - np.sum(y))) > atol:
        return False
    return weak_majorizes_by_excess(y, x, atol)


def split_thermal(mu) -> tuple[np.ndarray, np.ndarray]:
    """Split into super-thermal and sub-thermal magnitudes.

    Returns ``(plus, minus)``: the positive entries descending, and the
    absolute values of the negative entries descending. Zeros drop out.
    """
    arr = np.asarray(mu, dtype=float).reshape(-1)
    plus = descending(arr[arr > 0.0])
    minus = descending(-arr[arr < 0.0])
    return plus, minus


def positive_excess(xp, x) -> float:
    """sum_i [xp_i - x_i]_+ after descending sort and zero padding."""
    xp, x = pad_pair(xp, x)
    return float(np.sum(np.maximum(xp - x, 0.0)))


def lorenz_curve(x) -> np.ndarray:
    """Partial sums of the descending-sorted vector."""
    return np.cumsum(descending(x))


@dataclass(frozen=True)
class TransformStep:
    """One elementary step of a transform chain.

    kind "T": partial swap of entries ``indices=(j, k)`` with weight
    ``parameter = t``: (v_j, v_k) -> (t v_j + (1-t) v_k, (1-t) v_j + t v_k).
    kind "L": scale entry ``indices=(i,)`` by ``parameter = r`` in [0, 1].
    """

    kind: str
    indices: tuple[int, ...]
    parameter: float

    def __post_init__(self):
        if self.kind not in ("T", "L"):
            raise ParameterOutOfRange(f"unknown step kind {self.kind!r}")
        if not -1e-12 <= self.parameter <= 1 + 1e-12:
            raise ParameterOutOfRange(f"step parameter {self.parameter} outside [0, 1]")
        if self.kind == "T" and (len(self.indices) != 2 or self.indices[0] == self.indices[1]):
            raise ParameterOutOfRange("T step needs two distinct indices")
        if self.kind == "L" and len(self.indices) != 1:
            raise ParameterOutOfRange("L step needs exactly one index")


def apply_steps(values, steps) -> np.ndarray:
    """Apply a chain of steps to a vector (no sorting; index-literal)."""
    v = np.asarray(values, dtype=float).copy().reshape(-1)
    for step in steps:
        if step.kind == "T":
            j, k = step.indices
            t = step.parameter
            vj, vk = v[j], v[k]
            v[j] = t * vj + (1 - t) * vk
            v[k] = (1 - t) * vj + t * vk
        else:
            (i,) = step.indices
            v[i] = step.parameter * v[i]
    return v


def t_transform_chain(y, x, atol: float = DEFAULT_ATOL) -> list[TransformStep]:
    """Decompose a majorization y -> x into at most n-1 partial swaps.

    Repeatedly picks the last index j still above its target and the first
    later index k below it, transferring min(y_j - x_j, x_k - y_k); each
    step pins at least one entry, so the chain has at most n-1 steps and the
    intermediate vectors stay descending.
    """
    x, y = pad_pair(x, y)
    if not majorizes(y, x, atol):
        raise NotMajorized("chain requires the source to majorize the target")
    n = x.size
    scale = max(1.0, float(np.max(np.abs(y))) if n else 1.0)
    done_tol = 1e-12 * scale

    cur = y.copy()
    steps: list[TransformStep] = []
    for _ in range(max(n - 1, 0)):
        over = np.nonzero(cur - x > done_tol)[0]
        if over.size == 0:
            break
        j = int(over[-1])
        under = np.nonzero(x - cur > done_tol)[0]
        under = under[under > j]
        if under.size == 0:
            break
        k = int(under[0])
        delta = min(cur[j] - x[j], x[k] - cur[k])
        t = 1.0 - delta / (cur[j] - cur[k])
        steps.append(TransformStep("T", (j, k), float(t)))
        moved = apply_steps(cur, steps[-1:])
        cur = moved
    if np.max(np.abs(cur - x)) > max(1e-10, 10 * atol):
        raise ConstructionError("T-transform chain failed to reach the target")
    return steps


def majorized_intermediate(y, x) -> np.ndarray:
    """Greedy vector xt with x <= xt and xt majorized by y (equal sums).

    Distributes the total deficit onto x from the front. An addition at
    position i raises every later partial sum too, so the room at i is the
    suffix minimum of the partial-sum slack (minus what was already added),
    further capped by keeping xt descending.
    """
    x, y = pad_pair(x, y)
    n = x.size
    deficit = float(np.sum(y) - np.sum(x))
    slack = np.cumsum(y) - np.cumsum(x)
    suffix_min = np.minimum.accumulate(slack[::-1])[::-1]
    xt = x.copy()
    added = 0.0
    prev = np.inf
    for i in range(n):
        room = min(deficit - added, suffix_min[i] - added, prev - x[i])
        room = max(room, 0.0)
        xt[i] = x[i] + room
        added += room
        prev = xt[i]
    return xt


def weak_majorization_chain(y, x, atol: float = DEFAULT_ATOL) -> list[TransformStep]:
    """Decompose a weak majorization over non-negative vectors.

    Returns at most n-1 T-steps (mapping y onto an intermediate xt that
    majorizes-dominates x) followed by at most n L-steps scaling xt down to
    x. Both vectors must be non-negative.
    """
    x, y = pad_pair(x, y)
    if (x.size and x[-1] < -1e-12) or (y.size and y[-1] < -1e-12):
        raise NegativeEntry("weak chains require non-negative entries")
    x = np.maximum(x, 0.0)
    y = np.maximum(y, 0.0)
    if not weak_majorizes(y, x, atol):
        raise NotWeaklyMajorized("chain requires the source to weakly majorize the target")

    xt = majorized_intermediate(y, x)
    if not (np.all(x <= xt + 1e-12) and majorizes(y, xt, max(atol, 1e-10))):
        raise ConstructionError("greedy intermediate violated its invariants")

    steps = t_transform_chain(y, xt, atol=max(atol, 1e-10))
    for i in range(x.size):
        if xt[i] > 0.0:
            r = x[i] / xt[i]
            if r < 1.0 - 1e-14:
                steps.append(TransformStep("L", (i,), float(min(max(r, 0.0), 1.0))))
    return steps
