"""Entanglement measures of the bipartite Gaussian steady state.

All formulas act on a covariance matrix in the standard convention where the
vacuum has variance 1/2 per quadrature.  The covariance matrix solved from
the quantum Langevin diffusion uses vacuum variance 1, so the pipeline
rescales it by :data:`CM_SCALE` before calling into this module; the factor
``f`` in ``E_N = max(0, -ln(f*eta))`` then keeps its textbook value 2 and the
separability threshold reads ``eta < 1/2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lyapunov import CovarianceMatrix

__all__ = [
    "NegativeRadicandError",
    "EntanglementReport",
    "CM_SCALE",
    "sigma",
    "symplectic_eta",
    "eta_spectrum",
    "log_negativity",
    "two_mode_squeezed_cm",
]

# Rescaling applied to Langevin-convention covariance matrices (vacuum
# variance 1) to reach the standard convention (vacuum variance 1/2).
CM_SCALE = 0.5

_RADICAND_TOL = 1e-10
_ROUTE_AGREEMENT_TOL = 1e-9

# Symplectic form for two modes in (x1, p1, x2, p2) ordering.
_OMEGA = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)
# Partial transpose of the second mode flips its momentum.
_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])


class NegativeRadicandError(ArithmeticError):
    """sigma(V)^2 - 4 det V is negative beyond roundoff: non-physical CM upstream."""


@dataclass(frozen=True)
class EntanglementReport:
    """Entanglement figures of one covariance matrix."""

    sigma_v: float
    det_v: float
    eta: float
    log_negativity: float
    entangled: bool


def _as_cm(v) -> np.ndarray:
    if isinstance(v, CovarianceMatrix):
        return v.v
    return np.asarray(v, dtype=float)


def sigma(v) -> float:
    """Block combination sigma(V) = det V_m + det V_cav - 2 det V_corr."""
    m = _as_cm(v)
    return float(
        np.linalg.det(m[:2, :2]) + np.linalg.det(m[2:, 2:]) - 2.0 * np.linalg.det(m[:2, 2:])
    )


def eta_spectrum(v) -> float:
    """Lowest symplectic eigenvalue of the partial transpose, via the spectrum
    of Omega * V_tilde (independent of the closed-form route)."""
    m = _as_cm(v)
    flipped = _FLIP @ m @ _FLIP
    eigenvalues = np.linalg.eigvals(_OMEGA @ flipped)
    return float(np.min(np.abs(eigenvalues)))


def symplectic_eta(v) -> float:
    """Lowest symplectic eigenvalue of the partially transposed CM.

    Evaluates the closed form eta = sqrt((sigma - sqrt(sigma^2 - 4 det V))/2)
    and cross-checks it against the symplectic spectrum of the partial
    transpose; the two routes must agree to 1e-9 relative.  Radicands below
    -1e-10 * max(1, sigma^2) raise :class:`NegativeRadicandError`; smaller
    negative values are clamped to zero.
    """
    m = _as_cm(v)
    sig = sigma(m)
    det_v = float(np.linalg.det(m))
    radicand = sig * sig - 4.0 * det_v
    if radicand < -_RADICAND_TOL * max(1.0, sig * sig):
        raise NegativeRadicandError(
            f"sigma^2 - 4 det V = {radicand:.3e} is negative beyond tolerance"
        )
    radicand = max(radicand, 0.0)
    inner = (sig - np.sqrt(radicand)) / 2.0
    eta = float(np.sqrt(max(inner, 0.0)))

    eta_alt = eta_spectrum(m)
    # the closed form carries an irreducible O(sqrt(eps)*sigma/eta) error when
    # the two symplectic eigenvalues are nearly degenerate (radicand ~ 0)
    conditioning = np.sqrt(np.finfo(float).eps) * abs(sig) / max(eta, np.finfo(float).tiny)
    tolerance = _ROUTE_AGREEMENT_TOL * max(eta, np.finfo(float).tiny) + conditioning
    if abs(eta - eta_alt) > tolerance:
        raise ArithmeticError(
            f"symplectic eigenvalue routes disagree: {eta!r} vs {eta_alt!r}"
        )
    return eta


def log_negativity(v, f: float = 2.0) -> EntanglementReport:
    """Full entanglement report, E_N = max(0, -ln(f*eta)).

    The state is entangled iff f*eta < 1 (for f = 2: eta < 1/2).
    """
    m = _as_cm(v)
    eta = symplectic_eta(m)
    value = max(0.0, -np.log(f * eta))
    return EntanglementReport(
        sigma_v=sigma(m),
        det_v=float(np.linalg.det(m)),
        eta=eta,
        log_negativity=float(value),
        entangled=bool(f * eta < 1.0),
    )


def two_mode_squeezed_cm(r: float) -> np.ndarray:
    """Two-mode squeezed vacuum CM in the standard (vacuum = 1/2) convention.

    Diagonal blocks cosh(2r)/2 * I, correlations sinh(2r)/2 * diag(1, -1);
    eta = exp(-2r)/2 and E_N = 2r in closed form.  r = 0 gives the vacuum.
    """
    c = np.cosh(2.0 * r) / 2.0
    s = np.sinh(2.0 * r) / 2.0
    return np.array(
        [
            [c, 0.0, s, 0.0],
            [0.0, c, 0.0, -s],
            [s, 0.0, c, 0.0],
            [0.0, -s, 0.0, c],
        ]
    )
