"""Linearized fluctuation dynamics: drift matrix, diffusion matrix, stability.

Quadrature ordering is ``u = (dx_m, dp_m, dI, dphi)``.  Stability is decided
by two independent routes: the closed-form quartic Routh-Hurwitz conditions
``s1``/``s2`` (written for ``beta = 0``) and the spectral abscissa of the
actual drift matrix, which includes ``beta`` and is the gating check for the
covariance solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import PhysicalParams
from .steadystate import SteadyState

__all__ = [
    "DriftMatrix",
    "DiffusionMatrix",
    "StabilityReport",
    "MARGINAL_ABSCISSA_FACTOR",
    "drift_matrix",
    "build_drift",
    "build_diffusion",
    "routh_conditions",
    "routh_hurwitz",
    "spectral_abscissa",
    "spectral_stability",
    "assess_stability",
    "coupling_threshold_blue",
    "coupling_threshold_red",
]

# Points with spectral abscissa in (-MARGINAL_ABSCISSA_FACTOR*kappa, 0) are
# flagged marginal and excluded from the covariance solve, where V diverges.
MARGINAL_ABSCISSA_FACTOR = 1e-6


@dataclass(frozen=True)
class DriftMatrix:
    """Drift matrix A of du/dt = A u + n."""

    a: np.ndarray


@dataclass(frozen=True)
class DiffusionMatrix:
    """Diagonal diffusion matrix D = diag(0, gamma_m*(2*n_th+1), kappa, kappa)."""

    d: np.ndarray


@dataclass(frozen=True)
class StabilityReport:
    """Stability verdicts; fields are None when the route was not evaluated.

    ``routh_stable`` iff s1 > 0 and s2 > 0; ``spectral_stable`` iff the
    spectral abscissa is strictly negative; ``marginal`` marks stable points
    too close to the boundary for a reliable covariance solve.  ``agree`` is
    set only for beta = 0, where the two routes are equivalent.
    """

    s1: float | None = None
    s2: float | None = None
    routh_stable: bool | None = None
    spectral_abscissa: float | None = None
    spectral_stable: bool | None = None
    marginal: bool | None = None
    agree: bool | None = None


def drift_matrix(
    omega_m: float,
    gamma_m: float,
    kappa: float,
    delta: float,
    g: float,
    beta: float = 0.0,
) -> np.ndarray:
    """Raw 4x4 drift matrix for the quadrature ordering (dx_m, dp_m, dI, dphi)."""
    if not beta < 1.0:
        raise ValueError(f"beta must be < 1, got {beta!r}")
    return np.array(
        [
            [0.0, omega_m, 0.0, 0.0],
            [omega_m * (beta - 1.0), -gamma_m, g, 0.0],
            [0.0, 0.0, -kappa / 2.0, -delta],
            [g, 0.0, delta, -kappa / 2.0],
        ]
    )


def build_drift(steady: SteadyState, params: PhysicalParams) -> DriftMatrix:
    """Drift matrix at one operating point."""
    return DriftMatrix(
        drift_matrix(
            params.omega_m,
            params.gamma_m,
            params.kappa,
            steady.delta_eff,
            steady.g_eff,
            steady.beta,
        )
    )


def build_diffusion(params: PhysicalParams, n_th: float) -> DiffusionMatrix:
    """Diffusion matrix for a mechanical bath with occupation n_th."""
    if n_th < 0:
        raise ValueError("n_th must be >= 0")
    return DiffusionMatrix(
        np.diag([0.0, params.gamma_m * (2.0 * n_th + 1.0), params.kappa, params.kappa])
    )


def routh_conditions(
    omega_m: float,
    gamma_m: float,
    kappa: float,
    delta: float,
    g: float,
) -> tuple[float, float]:
    """The two nontrivial Routh-Hurwitz conditions (s1, s2) for beta = 0.

    Stability requires s1 > 0 and s2 > 0.  The bracket pairing
    [kappa^2/4 + (omega_m - delta)^2] * [kappa^2/4 + (omega_m + delta)^2]
    is the standard quartic Hurwitz form for this system.
    """
    hk2 = kappa**2 / 4.0
    s1 = (
        gamma_m
        * kappa
        * (
            (hk2 + (omega_m - delta) ** 2) * (hk2 + (omega_m + delta) ** 2)
            + gamma_m * ((gamma_m + kappa) * (hk2 + delta**2) + kappa * omega_m**2)
        )
        - delta * omega_m * g**2 * (gamma_m + kappa) ** 2
    )
    s2 = omega_m * (delta**2 + hk2) + g**2 * delta
    return s1, s2


def routh_hurwitz(steady: SteadyState, params: PhysicalParams) -> StabilityReport:
    """Routh-Hurwitz verdict at one operating point (beta-free closed forms)."""
    s1, s2 = routh_conditions(
        params.omega_m, params.gamma_m, params.kappa, steady.delta_eff, steady.g_eff
    )
    return StabilityReport(s1=s1, s2=s2, routh_stable=bool(s1 > 0 and s2 > 0))


def spectral_abscissa(a: np.ndarray | DriftMatrix) -> float:
    """Largest real part of the eigenvalues of A."""
    mat = a.a if isinstance(a, DriftMatrix) else np.asarray(a, dtype=float)
    return float(np.max(np.linalg.eigvals(mat).real))


def spectral_stability(
    a: np.ndarray | DriftMatrix,
    marginal_tol: float = 0.0,
) -> StabilityReport:
    """Eigenvalue stability verdict; marginal when -marginal_tol < abscissa < 0."""
    abscissa = spectral_abscissa(a)
    stable = bool(abscissa < 0.0)
    return StabilityReport(
        spectral_abscissa=abscissa,
        spectral_stable=stable,
        marginal=bool(stable and abscissa > -marginal_tol),
    )


def assess_stability(steady: SteadyState, params: PhysicalParams) -> StabilityReport:
    """Both stability routes at one operating point.

    The spectral route uses the full drift matrix including beta and gates the
    covariance solve; the Routh-Hurwitz numbers are reported verbatim.
    ``agree`` compares the verdicts only at beta = 0 where both apply.
    """
    routh = routh_hurwitz(steady, params)
    spectral = spectral_stability(
        build_drift(steady, params),
        marginal_tol=MARGINAL_ABSCISSA_FACTOR * params.kappa,
    )
    agree = (
        bool(routh.routh_stable == spectral.spectral_stable)
        if steady.beta == 0.0
        else None
    )
    return StabilityReport(
        s1=routh.s1,
        s2=routh.s2,
        routh_stable=routh.routh_stable,
        spectral_abscissa=spectral.spectral_abscissa,
        spectral_stable=spectral.spectral_stable,
        marginal=spectral.marginal,
        agree=agree,
    )


def coupling_threshold_blue(params: PhysicalParams, delta: float | None = None) -> float:
    """Coupling where s2 crosses zero, G = sqrt(omega_m*(delta^2+kappa^2/4)/(-delta)).

    Defaults to the blue sideband delta = -omega_m.  Requires delta < 0; s2
    never crosses zero on the red side.
    """
    if delta is None:
        delta = -params.omega_m
    if not delta < 0:
        raise ValueError("s2 threshold exists only for delta < 0")
    return float(np.sqrt(params.omega_m * (delta**2 + params.kappa**2 / 4.0) / (-delta)))


def coupling_threshold_red(params: PhysicalParams, delta: float | None = None) -> float:
    """Coupling where s1 crosses zero; defaults to the red sideband delta = +omega_m."""
    if delta is None:
        delta = params.omega_m
    if not delta > 0:
        raise ValueError("s1 threshold exists only for delta > 0")
    omega_m, gamma_m, kappa = params.omega_m, params.gamma_m, params.kappa
    hk2 = kappa**2 / 4.0
    bracket = (hk2 + (omega_m - delta) ** 2) * (hk2 + (omega_m + delta) ** 2) + gamma_m * (
        (gamma_m + kappa) * (hk2 + delta**2) + kappa * omega_m**2
    )
    return float(
        np.sqrt(gamma_m * kappa * bracket / (delta * omega_m * (gamma_m + kappa) ** 2))
    )
