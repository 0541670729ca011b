"""Classical operating point of the driven cavity.

The steady state is fixed by the photon-number balance
``|E0|^2 = n_s * (Delta^2 + kappa^2/4)`` together with
``x_s = 2*(g_m/omega_m)*n_s``, ``p_s = 0`` and the radiation-pressure shift
``Delta = Delta0 + 2*(g_m^2/omega_m)*n_s`` relating bare and effective
detuning.  Sweeps are parameterized by the effective detuning; the bare
detuning route solves the cubic and exposes bistability.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .params import DerivedParams, PhysicalParams, derive

__all__ = [
    "SteadyState",
    "DegenerateRootsWarning",
    "from_effective_detuning",
    "from_bare_detuning",
    "nonlinearity_from_betaprime",
    "monic_cubic_roots",
]

_ROOT_RESIDUAL_TOL = 1e-9
_IMAG_TOL = 1e-8
_DEGENERATE_TOL = 1e-6


class DegenerateRootsWarning(UserWarning):
    """Two photon-number roots coincide within relative 1e-6 (fold point)."""


@dataclass(frozen=True)
class SteadyState:
    """One classical operating point.

    ``n_s`` is the intracavity photon number, ``alpha_s = sqrt(n_s)`` the field
    amplitude, ``x_s``/``p_s`` the dimensionless mirror displacement/momentum,
    ``g_eff = g_m*alpha_s`` the linearized coupling and ``beta`` the
    dimensionless nonlinearity at this point.
    """

    n_s: float
    alpha_s: float
    x_s: float
    p_s: float
    delta_eff: float
    delta_bare: float
    g_eff: float
    beta: float


def _build(n_s: float, delta_eff: float, delta_bare: float, params: PhysicalParams) -> SteadyState:
    alpha_s = math.sqrt(n_s)
    return SteadyState(
        n_s=n_s,
        alpha_s=alpha_s,
        x_s=2.0 * (params.g_m / params.omega_m) * n_s,
        p_s=0.0,
        delta_eff=delta_eff,
        delta_bare=delta_bare,
        g_eff=params.g_m * alpha_s,
        beta=params.beta,
    )


def from_effective_detuning(
    delta_eff: float,
    params: PhysicalParams,
    derived: DerivedParams | None = None,
) -> SteadyState:
    """Operating point at a prescribed effective detuning (canonical sweep path).

    ``n_s = |E0|^2/(delta_eff^2 + kappa^2/4)`` and the bare detuning is
    back-computed from the radiation-pressure shift.
    """
    if derived is None:
        derived = derive(params)
    n_s = derived.e0**2 / (delta_eff**2 + params.kappa**2 / 4.0)
    delta_bare = delta_eff - 2.0 * (params.g_m**2 / params.omega_m) * n_s
    return _build(n_s, delta_eff, delta_bare, params)


def monic_cubic_roots(a2: float, a1: float, a0: float) -> np.ndarray:
    """All roots of x^3 + a2*x^2 + a1*x + a0 via companion-matrix eigenvalues.

    Each eigenvalue is polished with one Newton step, which keeps residuals
    checkable even for nearly degenerate roots.
    """
    companion = np.array(
        [
            [0.0, 0.0, -a0],
            [1.0, 0.0, -a1],
            [0.0, 1.0, -a2],
        ]
    )
    roots = np.linalg.eigvals(companion)
    poly = ((roots + a2) * roots + a1) * roots + a0
    dpoly = (3.0 * roots + 2.0 * a2) * roots + a1
    safe = np.abs(dpoly) > 0
    roots = np.where(safe, roots - poly / np.where(safe, dpoly, 1.0), roots)
    return roots


def from_bare_detuning(
    delta_bare: float,
    params: PhysicalParams,
    derived: DerivedParams | None = None,
) -> list[SteadyState]:
    """All physical operating points at a prescribed bare detuning.

    Solves the cubic ``|E0|^2 = n*((delta_bare + 2*(g_m^2/omega_m)*n)^2 +
    kappa^2/4)`` for the photon number.  Real non-negative roots are returned
    sorted ascending by ``n_s``; complex or negative roots are discarded, not
    clamped.  A :class:`DegenerateRootsWarning` is issued when two roots
    coincide within relative 1e-6.
    """
    if derived is None:
        derived = derive(params)
    e0_sq = derived.e0**2
    shift = 2.0 * params.g_m**2 / params.omega_m  # detuning shift per photon
    half_kappa_sq = params.kappa**2 / 4.0

    if shift == 0.0:
        candidates = np.array([e0_sq / (delta_bare**2 + half_kappa_sq)])
    else:
        # shift^2 n^3 + 2 d0 shift n^2 + (d0^2 + kappa^2/4) n - E0^2 = 0, made monic
        a2 = 2.0 * delta_bare / shift
        a1 = (delta_bare**2 + half_kappa_sq) / shift**2
        a0 = -e0_sq / shift**2
        roots = monic_cubic_roots(a2, a1, a0)
        scale = np.max(np.abs(roots)) + 1.0
        real = roots[np.abs(roots.imag) <= _IMAG_TOL * (np.abs(roots.real) + scale)].real
        candidates = np.sort(real[real >= 0.0])

    states = []
    for n_s in candidates:
        residual = abs(n_s * ((delta_bare + shift * n_s) ** 2 + half_kappa_sq) - e0_sq)
        if residual > _ROOT_RESIDUAL_TOL * max(e0_sq, 1.0):
            raise ArithmeticError(
                f"cubic root residual {residual:.3e} exceeds tolerance at n_s={n_s!r}"
            )
        states.append(_build(float(n_s), delta_bare + shift * n_s, delta_bare, params))

    for low, high in zip(states, states[1:]):
        if high.n_s - low.n_s <= _DEGENERATE_TOL * max(high.n_s, 1e-300):
            warnings.warn(
                f"degenerate photon-number roots near n_s={high.n_s:.6e}",
                DegenerateRootsWarning,
                stacklevel=2,
            )
    return states


def nonlinearity_from_betaprime(
    beta_prime: float,
    x_zpf: float | None,
    x_s: float,
    omega_m: float,
) -> float:
    """Dimensionless nonlinearity beta = 3*beta_prime*x_s^2/omega_m^2.

    ``x_zpf`` is accepted for conventions that fold the zero-point length into
    ``beta_prime``; it does not enter the quoted composition.
    """
    if not omega_m > 0:
        raise ValueError("omega_m must be > 0")
    return 3.0 * beta_prime * x_s**2 / omega_m**2
