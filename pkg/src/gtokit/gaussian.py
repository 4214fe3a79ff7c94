"""Gaussian state model: covariance matrices, their decomposition into the
single-particle matrix M and anomalous-moment matrix A, principal mode
temperatures/asymmetries, physicality, and the symplectic lift of passive
unitaries.

Conventions: quadratures ordered ``(x1, p1, ..., xn, pn)`` with
``x = (a + a†)/sqrt(2)``, so the vacuum has variance 1/2 and a background
thermal mode has variance ``nu = nbar + 1/2``. The matrices are

    M_ij = <a_j† a_i> - delta_ij * nbar      (Hermitian)
    A_ij = <a_j a_i>                         (complex symmetric)

and a state is thermal at the background temperature exactly when M = A = 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import (
    DimensionMismatch,
    NonPositiveProduct,
    NotPhysical,
    NotSymmetric,
    ParameterOutOfRange,
    ShapeMismatch,
)

_OMEGA_BLOCK = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(n_modes: int) -> np.ndarray:
    """Direct sum of n copies of [[0, 1], [-1, 0]]."""
    return np.kron(np.eye(n_modes), _OMEGA_BLOCK)


def thermal_variance(beta: float, omega: float) -> float:
    """Quadrature variance ``1/(exp(beta*omega) - 1) + 1/2`` of a background
    thermal mode.

    Strictly decreasing in ``beta*omega`` and -> 1/2 (vacuum) as the product
    grows.
    """
    product = beta * omega
    if product <= 0:
        raise NonPositiveProduct(f"beta*omega must be positive, got {product}")
    return 1.0 / math.expm1(product) + 0.5


@dataclass(frozen=True)
class ThermalContext:
    """Background frequency and inverse temperature (hbar = kB = 1)."""

    omega: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.omega <= 0 or self.beta <= 0:
            raise ParameterOutOfRange(
                f"omega and beta must be positive, got omega={self.omega}, beta={self.beta}"
            )

    @property
    def nu(self) -> float:
        """Thermal quadrature variance at this context."""
        return thermal_variance(self.beta, self.omega)

    @property
    def nbar(self) -> float:
        """Mean thermal occupation number."""
        return self.nu - 0.5


DEFAULT_CONTEXT = ThermalContext(omega=1.0, beta=1.0)


@dataclass
class GaussianState:
    """First moments and covariance matrix of an n-mode Gaussian state."""

    context: ThermalContext
    n_modes: int
    first_moments: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        self.first_moments = np.asarray(self.first_moments, dtype=float).reshape(-1)
        self.covariance = np.asarray(self.covariance, dtype=float)
        d = 2 * self.n_modes
        if self.first_moments.shape != (d,):
            raise ShapeMismatch(
                f"first moments must have length {d}, got {self.first_moments.shape}"
            )
        if self.covariance.shape != (d, d):
            raise ShapeMismatch(
                f"covariance must be {d}x{d}, got {self.covariance.shape}"
            )
        if np.max(np.abs(self.covariance - self.covariance.T)) > 1e-9:
            raise NotSymmetric("covariance matrix must be symmetric")

    @classmethod
    def thermal(cls, context: ThermalContext, n_modes: int) -> "GaussianState":
        """Background thermal state: sigma = nu * identity, zero means."""
        return cls(context, n_modes, np.zeros(2 * n_modes), context.nu * np.eye(2 * n_modes))

    def to_dict(self) -> dict:
        return {
            "omega": self.context.omega,
            "beta": self.context.beta,
            "n_modes": self.n_modes,
            "first_moments": self.first_moments.tolist(),
            "covariance": self.covariance.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GaussianState":
        context = ThermalContext(omega=float(doc["omega"]), beta=float(doc["beta"]))
        return cls(
            context,
            int(doc["n_modes"]),
            np.asarray(doc["first_moments"], dtype=float),
            np.asarray(doc["covariance"], dtype=float),
        )


@dataclass
class ModeDecomposition:
    """The (M, A) pair equivalent to a covariance matrix, plus first moments.

    ``first_moments`` defaults to zeros; it rides along so that circuit
    simulation can track displacements under the symplectic lift.
    """

    M: np.ndarray
    A: np.ndarray
    context: ThermalContext
    first_moments: np.ndarray | None = None

    def __post_init__(self):
        self.M = numerics.require_hermitian(self.M)
        self.A = numerics.require_symmetric(self.A)
        if self.M.shape != self.A.shape:
            raise ShapeMismatch(f"M has shape {self.M.shape}, A has shape {self.A.shape}")
        n = self.M.shape[0]
        if self.first_moments is None:
            self.first_moments = np.zeros(2 * n)
        else:
            self.first_moments = np.asarray(self.first_moments, dtype=float).reshape(-1)
            if self.first_moments.shape != (2 * n,):
                raise ShapeMismatch(
                    f"first moments must have length {2 * n}, got {self.first_moments.shape}"
                )

    @property
    def n_modes(self) -> int:
        return self.M.shape[0]


def _descending(values) -> np.ndarray:
    out = np.sort(np.asarray(values, dtype=float).reshape(-1))[::-1]
    return np.ascontiguousarray(out)


@dataclass
class SpectralSummary:
    """Principal mode temperatures (mu) and asymmetries (alpha), descending.

    mu holds the eigenvalues of M (signed: super-thermal positive,
    sub-thermal negative); alpha the Takagi singular values of A.
    """

    mu: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        self.mu = _descending(self.mu)
        self.alpha = _descending(self.alpha)
        if self.mu.shape != self.alpha.shape:
            raise ShapeMismatch("mu and alpha must have equal length")
        if self.alpha.size and self.alpha[-1] < -1e-12:
            raise ParameterOutOfRange("asymmetries must be non-negative")
        self.alpha = np.maximum(self.alpha, 0.0)

    @property
    def n_modes(self) -> int:
        return self.mu.size

    def to_dict(self) -> dict:
        return {"mu": self.mu.tolist(), "alpha": self.alpha.tolist()}

    @classmethod
    def from_dict(cls, doc: dict) -> "SpectralSummary":
        return cls(np.asarray(doc["mu"], dtype=float), np.asarray(doc["alpha"], dtype=float))


def is_physical(covariance, context: ThermalContext | None = None, tol: float = 1e-9) -> bool:
    """Whether sigma + (i/2) Omega is positive semidefinite within tolerance."""
    sigma = np.asarray(covariance, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
        raise DimensionMismatch(f"covariance must be 2n x 2n, got {sigma.shape}")
    if np.max(np.abs(sigma - sigma.T)) > 1e-9:
        raise NotSymmetric("covariance matrix must be symmetric")
    n = sigma.shape[0] // 2
    uncertainty = sigma + 0.5j * symplectic_form(n)
    return numerics.min_eigenvalue_hermitian(uncertainty) >= -tol


def physicality_residual(covariance) -> float:
    """Smallest eigenvalue of sigma + (i/2) Omega; >= 0 for physical states."""
    sigma = np.asarray(covariance, dtype=float)
    n = sigma.shape[0] // 2
    return numerics.min_eigenvalue_hermitian(sigma + 0.5j * symplectic_form(n))


def decompose_cm(state: GaussianState, tol: float = 1e-9) -> ModeDecomposition:
    """Extract (M, A) from a physical Gaussian state.

    Inverse of :func:`reconstruct_cm`; the round trip is exact to machine
    precision since the map is a linear re-indexing.
    """
    if not is_physical(state.covariance, state.context, tol):
        raise NotPhysical("covariance matrix violates the uncertainty principle")
    sigma = state.covariance
    nu = state.context.nu
    sxx = sigma[0::2, 0::2]
    spp = sigma[1::2, 1::2]
    sxp = sigma[0::2, 1::2]
    spx = sigma[1::2, 0::2]
    n = sxx.shape[0]
    m = (sxx + spp) / 2.0 - nu * np.eye(n) + 0.5j * (spx - sxp)
    a = (sxx - spp) / 2.0 + 0.5j * (sxp + spx)
    m = 0.5 * (m + m.conj().T)
    a = 0.5 * (a + a.T)
    return ModeDecomposition(m, a, state.context, state.first_moments.copy())


def reconstruct_cm(d: ModeDecomposition) -> np.ndarray:
    """Covariance matrix of a decomposition, in (x1, p1, ...) ordering."""
    n = d.n_modes
    nu = d.context.nu
    sigma = np.zeros((2 * n, 2 * n))
    sigma[0::2, 0::2] = np.real(d.M + d.A) + nu * np.eye(n)
    sigma[1::2, 1::2] = np.real(d.M - d.A) + nu * np.eye(n)
    sigma[0::2, 1::2] = np.imag(d.A - d.M)
    sigma[1::2, 0::2] = np.imag(d.A + d.M)
    return 0.5 * (sigma + sigma.T)


def state_from_decomposition(d: ModeDecomposition) -> GaussianState:
    return GaussianState(d.context, d.n_modes, d.first_moments.copy(), reconstruct_cm(d))


def spectral_summary(d: ModeDecomposition) -> SpectralSummary:
    """Eigenvalues of M and Takagi singular values of A, both descending.

    Invariant under any passive unitary, applied at either the covariance
    level or the (M, A) level.
    """
    mu, _ = numerics.hermitian_eigendecomposition(d.M)
    alpha, _ = numerics.takagi_factorize(d.A)
    return SpectralSummary(mu, alpha)


def summary_to_decomposition(
    summary: SpectralSummary,
    context: ThermalContext = DEFAULT_CONTEXT,
    *,
    require_physical: bool = False,
) -> ModeDecomposition:
    """Diagonal representative state of a summary: M = diag(mu), A = diag(alpha).

    Pairs temperatures and asymmetries by descending rank, which is the
    least uncertainty-constrained pairing.
    """
    d = ModeDecomposition(
        np.diag(summary.mu).astype(complex), np.diag(summary.alpha).astype(complex), context
    )
    if require_physical and not is_physical(reconstruct_cm(d), context):
        raise NotPhysical("summary has no physical diagonal representative at this context")
    return d


def passive_to_symplectic(u) -> np.ndarray:
    """Lift an n x n unitary to its 2n x 2n symplectic-orthogonal action on
    quadratures: blocks [[Re u, -Im u], [Im u, Re u]]."""
    u = numerics.require_unitary(u)
    n = u.shape[0]
    s = np.zeros((2 * n, 2 * n))
    s[0::2, 0::2] = u.real
    s[0::2, 1::2] = -u.imag
    s[1::2, 0::2] = u.imag
    s[1::2, 1::2] = u.real
    return s


def is_decouplable(d: ModeDecomposition, tol: float = 1e-9) -> bool:
    """Whether a passive unitary can make all modes uncorrelated.

    Works in an eigenbasis of M: residual unitary freedom acts only inside
    degenerate eigenspaces, where any symmetric block of A can be congruence-
    diagonalized. Decouplability therefore reduces to A having no coupling
    between distinct eigenspaces of M.
    """
    mu, basis = numerics.hermitian_eigendecomposition(d.M)
    a_rot = basis.conj().T @ d.A @ basis.conj()
    n = d.n_modes
    scale = max(1.0, float(np.max(np.abs(mu))) if n else 1.0)
    group_tol = 1e-8 * scale

    # Group indices sharing an M eigenvalue, then null out intra-group entries;
    # whatever remains couples distinct eigenspaces and cannot be removed.
    mask = np.ones((n, n), dtype=bool)
    start = 0
    for stop in range(1, n + 1):
        if stop < n and mu[stop - 1] - mu[stop] <= group_tol:
            continue
        mask[start:stop, start:stop] = False
        start = stop
    off_block = np.where(mask, a_rot, 0.0)
    return bool(np.max(np.abs(off_block)) <= tol) if n else True


class GtoJsonError(ValueError):
    """Malformed input document."""


def load_state(doc: dict):
    """Parse a state document: either a covariance form or a spectral form.

    Returns a ``GaussianState`` or a ``SpectralSummary`` depending on the
    fields present.
    """
    if "covariance" in doc:
        return GaussianState.from_dict(doc)
    if "mu" in doc and "alpha" in doc:
        return SpectralSummary.from_dict(doc)
    raise GtoJsonError("state document needs either 'covariance' or 'mu'/'alpha' fields")


def load_state_file(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return load_state(json.load(fh))


def summary_of(state_or_summary) -> SpectralSummary:
    """Coerce a GaussianState or SpectralSummary to its summary."""
    if isinstance(state_or_summary, SpectralSummary):
        return state_or_summary
    if isinstance(state_or_summary, GaussianState):
        return spectral_summary(decompose_cm(state_or_summary))
    if isinstance(state_or_summary, ModeDecomposition):
        return spectral_summary(state_or_summary)
    raise TypeError(f"cannot summarize {type(state_or_summary)!r}")
