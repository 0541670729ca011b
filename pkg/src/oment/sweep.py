"""Parameter sweeps with stability gating, figure presets and flat-file output."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import gaussian
from .gaussian import EntanglementReport, NegativeRadicandError
from .linmodel import StabilityReport, assess_stability, build_diffusion, build_drift
from .lyapunov import CovarianceMatrix, solve_lyapunov
from .params import ConfigError, PhysicalParams, default_params, derive
from .steadystate import SteadyState, from_effective_detuning

__all__ = [
    "SweepSpec",
    "SweepRecord",
    "PointResult",
    "evaluate_point",
    "run_sweep",
    "figure_preset",
    "emit",
    "nth_entanglement_threshold",
    "CSV_HEADER",
    "FIGURE_NAMES",
]

AXES = ("delta_norm", "beta", "n_th", "power")
STATUS_OK = "ok"
STATUS_UNSTABLE = "unstable"
STATUS_MARGINAL = "marginal"
STATUS_ERROR = "error"

RESIDUAL_LIMIT = 1e-8

CSV_HEADER = "axis,curve,n_s,g_eff,s1,s2,routh_stable,spectral_stable,eta,log_negativity,status"


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a uniform grid on `axis`, optionally one curve per value of
    a second parameter.

    ``delta_norm`` fixes the operating detuning (in units of omega_m) when the
    axis is not the detuning itself; ``curve_delta_norms`` optionally
    overrides it per curve.  ``n_th`` overrides the bath occupation derived
    from the temperature (used by n_th sweeps).
    """

    axis: str
    start: float
    stop: float
    count: int
    fixed: PhysicalParams
    delta_norm: float = -1.0
    n_th: float | None = None
    curve_param: str = "beta"
    curves: tuple[float, ...] | None = None
    curve_delta_norms: tuple[float, ...] | None = None

    def validate(self) -> None:
        if self.axis not in AXES:
            raise ConfigError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not self.start < self.stop:
            raise ConfigError("start must be < stop")
        if self.count < 2:
            raise ConfigError("count must be >= 2")
        if self.curves is not None:
            if self.curve_param == self.axis:
                raise ConfigError("swept axis duplicated in curves")
            if self.curve_param not in AXES:
                raise ConfigError(f"curve parameter must be one of {AXES}")
            if self.curve_delta_norms is not None and len(self.curve_delta_norms) != len(
                self.curves
            ):
                raise ConfigError("curve_delta_norms must match curves in length")
        if self.axis == "beta" and self.stop >= 1.0:
            raise ConfigError("beta axis must stay below 1")
        if self.curves is not None and self.curve_param == "beta":
            for value in self.curves:
                if value >= 1.0:
                    raise ConfigError("beta curve values must stay below 1")
        if self.axis == "n_th" and self.start < 0:
            raise ConfigError("n_th axis must be >= 0")
        if self.axis == "power" and self.start < 0:
            raise ConfigError("power axis must be >= 0")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepRecord:
    """One row of figure data; `eta`/`log_negativity` present iff status ok."""

    axis_value: float
    curve_value: float | None
    n_s: float
    g_eff: float
    s1: float
    s2: float
    routh_stable: bool
    spectral_stable: bool
    eta: float | None
    log_negativity: float | None
    status: str


@dataclass(frozen=True)
class PointResult:
    """Full evaluation of one operating point."""

    params: PhysicalParams
    delta_norm: float
    n_th: float
    steady: SteadyState
    stability: StabilityReport
    covariance: CovarianceMatrix | None
    report: EntanglementReport | None
    report_raw: EntanglementReport | None
    status: str


def evaluate_point(
    params: PhysicalParams,
    delta_norm: float,
    n_th: float | None = None,
) -> PointResult:
    """Steady state -> stability -> covariance -> entanglement at one point.

    Unstable and marginal points carry a status instead of a report.  The
    `report` uses the standard-convention rescaling (:data:`gaussian.CM_SCALE`)
    with the configured eta factor; `report_raw` applies f = 2 to the
    unrescaled covariance matrix for comparison with the raw composition.
    """
    derived = derive(params)
    occupation = derived.n_th if n_th is None else float(n_th)
    if occupation < 0:
        raise ConfigError("n_th must be >= 0")
    steady = from_effective_detuning(delta_norm * params.omega_m, params, derived)
    stability = assess_stability(steady, params)

    covariance = None
    report = None
    report_raw = None
    if not stability.spectral_stable:
        status = STATUS_UNSTABLE
    elif stability.marginal:
        status = STATUS_MARGINAL
    else:
        drift = build_drift(steady, params)
        diffusion = build_diffusion(params, occupation)
        covariance = solve_lyapunov(drift, diffusion)
        if covariance.residual is not None and covariance.residual > RESIDUAL_LIMIT:
            status = STATUS_ERROR
        else:
            try:
                report = gaussian.log_negativity(
                    gaussian.CM_SCALE * covariance.v, f=params.convention_eta_factor
                )
                report_raw = gaussian.log_negativity(covariance.v, f=2.0)
                status = STATUS_OK
            except NegativeRadicandError:
                report = None
                report_raw = None
                status = STATUS_ERROR
    return PointResult(
        params=params,
        delta_norm=delta_norm,
        n_th=occupation,
        steady=steady,
        stability=stability,
        covariance=covariance,
        report=report,
        report_raw=report_raw,
        status=status,
    )


def _record(point: PointResult, axis_value: float, curve_value: float | None) -> SweepRecord:
    ok = point.status == STATUS_OK
    return SweepRecord(
        axis_value=float(axis_value),
        curve_value=None if curve_value is None else float(curve_value),
        n_s=point.steady.n_s,
        g_eff=point.steady.g_eff,
        s1=point.stability.s1,
        s2=point.stability.s2,
        routh_stable=point.stability.routh_stable,
        spectral_stable=point.stability.spectral_stable,
        eta=point.report.eta if ok else None,
        log_negativity=point.report.log_negativity if ok else None,
        status=point.status,
    )


def _job(spec: SweepSpec, axis_value: float, curve_value: float | None, curve_index: int):
    params = spec.fixed
    delta_norm = spec.delta_norm
    n_th = spec.n_th
    if spec.curve_delta_norms is not None and curve_value is not None:
        delta_norm = spec.curve_delta_norms[curve_index]

    def apply(name: str, value: float):
        nonlocal params, delta_norm, n_th
        if name == "delta_norm":
            delta_norm = value
        elif name == "beta":
            params = replace(params, beta=value)
        elif name == "power":
            params = replace(params, power=value)
        elif name == "n_th":
            n_th = value

    if curve_value is not None:
        apply(spec.curve_param, curve_value)
    apply(spec.axis, axis_value)
    return params, delta_norm, n_th


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRecord]:
    """Evaluate the full grid, curves outer, axis inner.

    Grid points are independent; `workers` only sets the thread count and
    never changes the emitted records.
    """
    spec.validate()
    grid = spec.grid()
    curves: list[float | None] = list(spec.curves) if spec.curves is not None else [None]
    jobs = [
        (axis_value, curve_value, curve_index)
        for curve_index, curve_value in enumerate(curves)
        for axis_value in grid
    ]

    def evaluate(job) -> SweepRecord:
        axis_value, curve_value, curve_index = job
        params, delta_norm, n_th = _job(spec, axis_value, curve_value, curve_index)
        point = evaluate_point(params, delta_norm, n_th)
        return _record(point, axis_value, curve_value)

    if workers <= 1:
        return [evaluate(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, jobs))


FIGURE_NAMES = ("fig1a", "fig1b", "fig2a", "fig2b", "fig3")


def figure_preset(name: str, base: PhysicalParams | None = None) -> SweepSpec:
    """Sweep specification reproducing one of the reference figures.

    fig1a/fig1b: detuning sweeps at 0.7 mW / 10 mW in the linear regime;
    fig2a: detuning sweep at 10 mW with nonlinearity curves; fig2b:
    nonlinearity sweep at the enhanced detuning -0.5; fig3: bath-occupation
    sweep at 10 mW, the linear curve at its optimum -1 and the nonlinear
    curves at theirs, -0.5.
    """
    params = base if base is not None else default_params()
    if name == "fig1a":
        return SweepSpec(
            axis="delta_norm",
            start=-2.0,
            stop=0.0,
            count=201,
            fixed=replace(params, power=0.7e-3, beta=0.0),
        )
    if name == "fig1b":
        return SweepSpec(
            axis="delta_norm",
            start=-2.0,
            stop=0.0,
            count=201,
            fixed=replace(params, power=10e-3, beta=0.0),
        )
    if name == "fig2a":
        return SweepSpec(
            axis="delta_norm",
            start=-2.0,
            stop=0.0,
            count=201,
            fixed=replace(params, power=10e-3),
            curves=(0.0, 0.2, 0.4, 0.6),
        )
    if name == "fig2b":
        return SweepSpec(
            axis="beta",
            start=0.0,
            stop=0.6,
            count=201,
            fixed=replace(params, power=10e-3),
            delta_norm=-0.5,
        )
    if name == "fig3":
        return SweepSpec(
            axis="n_th",
            start=0.0,
            stop=3000.0,
            count=201,
            fixed=replace(params, power=10e-3),
            curves=(0.0, 0.2, 0.4, 0.6),
            curve_delta_norms=(-1.0, -0.5, -0.5, -0.5),
        )
    raise ConfigError(f"unknown figure preset {name!r}; expected one of {FIGURE_NAMES}")


def _format_float(value: float | None) -> str:
    if value is None:
        return ""
    return f"{value:.17g}"


def _format_bool(value: bool) -> str:
    return "true" if value else "false"


def emit(records: list[SweepRecord], fmt: str = "csv") -> bytes:
    """Serialize records to CSV or JSONL bytes.

    Floats carry 17 significant digits and round-trip exactly; identical
    inputs produce byte-identical output.
    """
    if fmt == "csv":
        lines = [CSV_HEADER]
        for r in records:
            lines.append(
                ",".join(
                    (
                        _format_float(r.axis_value),
                        _format_float(r.curve_value),
                        _format_float(r.n_s),
                        _format_float(r.g_eff),
                        _format_float(r.s1),
                        _format_float(r.s2),
                        _format_bool(r.routh_stable),
                        _format_bool(r.spectral_stable),
                        _format_float(r.eta),
                        _format_float(r.log_negativity),
                        r.status,
                    )
                )
            )
        return ("\n".join(lines) + "\n").encode()
    if fmt == "jsonl":
        lines = []
        for r in records:
            lines.append(
                json.dumps(
                    {
                        "axis": r.axis_value,
                        "curve": r.curve_value,
                        "n_s": r.n_s,
                        "g_eff": r.g_eff,
                        "s1": r.s1,
                        "s2": r.s2,
                        "routh_stable": r.routh_stable,
                        "spectral_stable": r.spectral_stable,
                        "eta": r.eta,
                        "log_negativity": r.log_negativity,
                        "status": r.status,
                    },
                    separators=(",", ":"),
                )
            )
        return ("\n".join(lines) + "\n").encode() if lines else b""
    raise ConfigError(f"unknown output format {fmt!r}; expected 'csv' or 'jsonl'")


def nth_entanglement_threshold(
    params: PhysicalParams,
    delta_norm: float,
    n_hi: float = 8000.0,
    rel_tol: float = 1e-3,
) -> float:
    """Bath occupation where the log-negativity crosses zero, by bisection.

    Requires entanglement at n_th = 0 and none at `n_hi`; the threshold is
    located to relative axis precision `rel_tol`.
    """
    def entangled_at(n_th: float) -> bool:
        point = evaluate_point(params, delta_norm, n_th)
        return point.status == STATUS_OK and point.report.log_negativity > 0.0

    if not entangled_at(0.0):
        return 0.0
    if entangled_at(n_hi):
        raise ConfigError(f"still entangled at n_th = {n_hi}; raise n_hi")
    lo, hi = 0.0, n_hi
    while hi - lo > rel_tol * max(lo, 1.0):
        mid = (lo + hi) / 2.0
        if entangled_at(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0
