"""Stationary covariance matrix from A V + V A^T = -D, with a quadrature oracle.

The solver vectorizes the symmetric 4x4 problem into 10 unknowns and solves a
dense 10x10 linear system; exact, tiny and directly residual-checkable.  The
oracle integrates V = int_0^inf exp(A s) D exp(A^T s) ds by adaptive Simpson
quadrature with an explicit tail bound, so the two routes share no code path.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .linmodel import DiffusionMatrix, DriftMatrix, spectral_abscissa

__all__ = [
    "CovarianceMatrix",
    "UnstableDriftError",
    "HorizonTooShortError",
    "IllConditionedWarning",
    "solve_lyapunov",
    "lyapunov_oracle",
    "residual",
    "matrix_exponential",
]

CONDITION_LIMIT = 1e12
_MIN_HORIZON_DECAY = 10.0  # horizon must cover at least 10 decay times


class UnstableDriftError(ValueError):
    """The drift matrix has a non-negative spectral abscissa."""


class HorizonTooShortError(ValueError):
    """The quadrature horizon leaves a tail estimate above tolerance."""


class IllConditionedWarning(RuntimeWarning):
    """The 10x10 Lyapunov system is ill conditioned; result returned, flagged."""


@dataclass
class CovarianceMatrix:
    """Symmetric 4x4 stationary covariance matrix with solver diagnostics."""

    v: np.ndarray
    residual: float | None = None
    condition: float | None = None
    ill_conditioned: bool = False
    tail_bound: float | None = field(default=None)

    @property
    def v_m(self) -> np.ndarray:
        """Mechanical 2x2 block."""
        return self.v[:2, :2]

    @property
    def v_cav(self) -> np.ndarray:
        """Optical 2x2 block."""
        return self.v[2:, 2:]

    @property
    def v_corr(self) -> np.ndarray:
        """Cross-correlation 2x2 block."""
        return self.v[:2, 2:]


def _as_matrix(m) -> np.ndarray:
    if isinstance(m, DriftMatrix):
        return m.a
    if isinstance(m, DiffusionMatrix):
        return m.d
    if isinstance(m, CovarianceMatrix):
        return m.v
    return np.asarray(m, dtype=float)


# Index pairs of the upper triangle of a symmetric 4x4 matrix.
_UT = [(i, j) for i in range(4) for j in range(i, 4)]


def solve_lyapunov(a, d) -> CovarianceMatrix:
    """Solve A V + V A^T = -D for symmetric V.

    Raises :class:`UnstableDriftError` unless the spectral abscissa of A is
    strictly negative.  When the condition estimate of the 10x10 system
    exceeds 1e12 an :class:`IllConditionedWarning` is issued and the result is
    flagged but still returned.
    """
    a = _as_matrix(a)
    d = _as_matrix(d)
    if spectral_abscissa(a) >= 0.0:
        raise UnstableDriftError("drift matrix is not strictly stable")

    system = np.empty((10, 10))
    for col, (i, j) in enumerate(_UT):
        basis = np.zeros((4, 4))
        basis[i, j] = 1.0
        basis[j, i] = 1.0
        image = a @ basis + basis @ a.T
        system[:, col] = [image[r, c] for r, c in _UT]
    rhs = np.array([-d[r, c] for r, c in _UT])

    condition = float(np.linalg.cond(system))
    solution = np.linalg.solve(system, rhs)
    v = np.zeros((4, 4))
    for value, (i, j) in zip(solution, _UT):
        v[i, j] = value
        v[j, i] = value
    v = (v + v.T) / 2.0

    ill = condition > CONDITION_LIMIT
    if ill:
        warnings.warn(
            f"Lyapunov system condition estimate {condition:.3e} exceeds {CONDITION_LIMIT:.0e}",
            IllConditionedWarning,
            stacklevel=2,
        )
    return CovarianceMatrix(
        v=v,
        residual=residual(a, v, d),
        condition=condition,
        ill_conditioned=ill,
    )


def residual(a, v, d) -> float:
    """Relative Lyapunov residual ||A V + V A^T + D||_F / max(||D||_F, tiny)."""
    a = _as_matrix(a)
    v = _as_matrix(v)
    d = _as_matrix(d)
    num = np.linalg.norm(a @ v + v @ a.T + d)
    return float(num / max(np.linalg.norm(d), np.finfo(float).tiny))


# Scaling-and-squaring matrix exponential with a fixed [13/13] Pade
# approximant (theta_13 = 5.372), kept self-contained so the oracle shares
# nothing with the linear-solve route.
_PADE13_B = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def matrix_exponential(m: np.ndarray) -> np.ndarray:
    """exp(M) by scaling-and-squaring with the order-13 Pade approximant."""
    m = np.asarray(m, dtype=float)
    norm = np.linalg.norm(m, 1)
    squarings = max(0, int(np.ceil(np.log2(norm / _THETA13)))) if norm > _THETA13 else 0
    scaled = m / (2.0**squarings)

    b = _PADE13_B
    eye = np.eye(m.shape[0])
    m2 = scaled @ scaled
    m4 = m2 @ m2
    m6 = m4 @ m2
    u = scaled @ (
        m6 @ (b[13] * m6 + b[11] * m4 + b[9] * m2)
        + b[7] * m6
        + b[5] * m4
        + b[3] * m2
        + b[1] * eye
    )
    v = (
        m6 @ (b[12] * m6 + b[10] * m4 + b[8] * m2)
        + b[6] * m6
        + b[4] * m4
        + b[2] * m2
        + b[0] * eye
    )
    result = np.linalg.solve(v - u, v + u)
    for _ in range(squarings):
        result = result @ result
    return result


def _decay_envelope(a: np.ndarray, abscissa: float, horizon: float) -> float:
    """Prefactor C with ||exp(A t)||_F <= C * exp(abscissa * t), fit on samples."""
    times = np.linspace(0.0, horizon, 9)
    c = 1.0
    for t in times:
        growth = np.linalg.norm(matrix_exponential(a * t)) * np.exp(-abscissa * t)
        c = max(c, float(growth))
    return c


def _tail_bound(c: float, d_norm: float, abscissa: float, horizon: float) -> float:
    """Bound on ||int_T^inf exp(A s) D exp(A^T s) ds||_F from the decay fit."""
    return c * c * d_norm * np.exp(2.0 * abscissa * horizon) / (2.0 * abs(abscissa))


def _adaptive_simpson(f, lo: float, hi: float, abs_tol: float, max_depth: int = 48) -> np.ndarray:
    """Matrix-valued adaptive Simpson with Frobenius-norm error control."""

    def simpson(fa, fm, fb, width):
        return width / 6.0 * (fa + 4.0 * fm + fb)

    total = np.zeros_like(f(lo))
    mid = (lo + hi) / 2.0
    stack = [(lo, mid, hi, f(lo), f(mid), f(hi), 0)]
    while stack:
        x0, x1, x2, f0, f1, f2, depth = stack.pop()
        width = x2 - x0
        coarse = simpson(f0, f1, f2, width)
        xl, xr = (x0 + x1) / 2.0, (x1 + x2) / 2.0
        fl, fr = f(xl), f(xr)
        fine = simpson(f0, fl, f1, width / 2.0) + simpson(f1, fr, f2, width / 2.0)
        err = np.linalg.norm(fine - coarse) / 15.0
        if err <= abs_tol * width / (hi - lo) or depth >= max_depth:
            if depth >= max_depth and err > abs_tol * width / (hi - lo):
                raise ArithmeticError("adaptive Simpson failed to converge")
            total = total + fine + (fine - coarse) / 15.0
        else:
            stack.append((x0, xl, x1, f0, fl, f1, depth + 1))
            stack.append((x1, xr, x2, f1, fr, f2, depth + 1))
    return total


def lyapunov_oracle(a, d, horizon: float | None = None, tol: float = 1e-8) -> CovarianceMatrix:
    """Stationary covariance by direct quadrature of exp(A s) D exp(A^T s).

    Parameters
    ----------
    a, d : array-like or wrapper
        Drift and diffusion matrices; A must be strictly stable.
    horizon : float, optional
        Upper integration limit (s).  Must cover at least 10 decay times of
        the slowest mode; when omitted it is extended automatically until the
        estimated truncation tail drops below `tol` relative to the result.
    tol : float
        Relative Frobenius tolerance for both quadrature and tail.

    Raises
    ------
    UnstableDriftError
        If the spectral abscissa of A is non-negative.
    HorizonTooShortError
        If an explicit horizon leaves the tail estimate above `tol`.
    """
    a = _as_matrix(a)
    d = _as_matrix(d)
    abscissa = spectral_abscissa(a)
    if abscissa >= 0.0:
        raise UnstableDriftError("drift matrix is not strictly stable")

    d_norm = float(np.linalg.norm(d))
    decay_time = 1.0 / abs(abscissa)
    min_horizon = _MIN_HORIZON_DECAY * decay_time
    auto = horizon is None
    if auto:
        envelope = _decay_envelope(a, abscissa, min_horizon)
        # size the horizon so the a-priori tail sits well under tolerance
        target = tol / 10.0 * d_norm * decay_time / 2.0
        horizon = max(
            min_horizon,
            float(np.log(max(_tail_bound(envelope, d_norm, abscissa, 0.0) / target, 1.0)))
            * decay_time
            / 2.0,
        )
    elif horizon < min_horizon:
        raise HorizonTooShortError(
            f"horizon {horizon:.3e} s is below {_MIN_HORIZON_DECAY} decay times "
            f"({min_horizon:.3e} s)"
        )
    else:
        envelope = _decay_envelope(a, abscissa, min_horizon)

    def integrand(t: float) -> np.ndarray:
        m = matrix_exponential(a * t)
        return m @ d @ m.T

    for attempt in range(4):
        # first a coarse pass to scale the absolute tolerance, then the real one
        rough = _adaptive_simpson(integrand, 0.0, horizon, 1e-3 * d_norm * decay_time)
        abs_tol = tol * max(float(np.linalg.norm(rough)), np.finfo(float).tiny)
        v = _adaptive_simpson(integrand, 0.0, horizon, abs_tol)
        v = (v + v.T) / 2.0
        v_norm = max(float(np.linalg.norm(v)), np.finfo(float).tiny)
        tail = _tail_bound(envelope, d_norm, abscissa, horizon)
        if tail <= tol * v_norm:
            break
        if not auto:
            raise HorizonTooShortError(
                f"tail estimate {tail:.3e} exceeds tol*||V|| = {tol * v_norm:.3e}"
            )
        horizon *= 2.0
    else:
        raise HorizonTooShortError("tail estimate did not converge under horizon doubling")

    return CovarianceMatrix(
        v=v,
        residual=residual(a, v, d),
        condition=None,
        ill_conditioned=False,
        tail_bound=float(tail),
    )
