"""Grid evaluation engine and deterministic CSV output.

A sweep is a RunConfig (model, solver, base parameters, requested
quantities) plus a SweepSpec (one or two named axes). Rows are
computed in grid order into a preallocated buffer, optionally in
parallel; output never depends on worker count or completion order.

Unstable or invalid grid points are kept as rows with an explicit
stable=0 flag and empty quantity cells. Nothing is interpolated or
fabricated.

CSV format: comma separated, '.' decimal point, first line column
names, second line units, UTF-8 with LF line endings, every float
rendered with %.17g so a reread reproduces the binary value exactly.
Files are written to a temporary sibling and atomically renamed.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from warnings import catch_warnings

import numpy as np

from .closedform import backaction_1d, backaction_2d, bare_occupation, rwa_optimum
from .errors import (
    CorrelatedBathUnsupported,
    DegenerateState,
    FixedPointDivergence,
    InvalidParams,
    InvalidRegime,
    UncertaintyViolation,
    UndampedDarkMode,
    UnstableRegime,
    UnstableSystem,
)
from .gaussian import Cov1D, occupation_and_purity_1d, purity_2d_general
from .langevin import NoiseMode, build_1d, build_2d, build_rwa, steady_covariance
from .models import SystemParams1D, SystemParams2D, SystemParamsRWA
from .spectral import integrate_moments

__all__ = [
    "RunConfig",
    "Axis",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "MODELS",
    "SOLVERS",
    "available_quantities",
    "evaluate_point",
    "run_sweep",
    "write_csv",
    "sweep_to_csv",
    "with_param",
    "evaluate_config",
    "format_float",
    "UNITS",
]

MODELS = ("oneD", "twoD", "rwa")
SOLVERS = ("lyapunov", "spectral", "closed_form")

_PARAM_TYPES = {
    "oneD": SystemParams1D,
    "twoD": SystemParams2D,
    "rwa": SystemParamsRWA,
}

#: Unit strings for every quantity and parameter the CSV can contain,
#: in the hbar = m = 1 frame with frequencies in units of omega_ref.
UNITS = {
    "xx": "hbar/(m*omega_ref)",
    "pp": "hbar*m*omega_ref",
    "xp": "hbar",
    "xx_b": "hbar/(m*omega_ref)",
    "xx_d": "hbar/(m*omega_ref)",
    "pp_b": "hbar*m*omega_ref",
    "pp_d": "hbar*m*omega_ref",
    "x_b_x_d": "hbar/(m*omega_ref)",
    "p_b_p_d": "hbar*m*omega_ref",
    "n_bar": "dimensionless",
    "n_bar_0": "dimensionless",
    "purity": "dimensionless",
    "purity_2d": "dimensionless",
    "purity_product": "dimensionless",
    "N_plus": "dimensionless",
    "N_minus": "dimensionless",
    "n_b": "dimensionless",
    "n_d": "dimensionless",
    "M_Omega": "m*omega_ref",
    "n_min_weak": "dimensionless",
    "G_m_opt": "omega_ref",
    "purity_opt": "dimensionless",
    "omega_b": "omega_ref",
    "omega_d": "omega_ref",
    "omega_x": "omega_ref",
    "omega_y": "omega_ref",
    "gamma_b": "omega_ref",
    "gamma_d": "omega_ref",
    "gamma_x": "omega_ref",
    "gamma_y": "omega_ref",
    "kappa": "omega_ref",
    "delta": "omega_ref",
    "G_o": "omega_ref",
    "G_m": "omega_ref",
    "lambda_o": "(m*omega_ref^3/hbar)^(1/2)",
    "phi": "rad",
    "temperature": "hbar*omega_ref/k_B",
    "n_B_b": "dimensionless",
    "n_B_d": "dimensionless",
    "mass": "m",
    "hbar": "hbar",
    "stable": "flag",
    "warnings": "text",
}

#: Exceptions that mark a grid point unstable or out of regime rather
#: than aborting the whole sweep.
_POINT_ERRORS = (
    UnstableSystem,
    UnstableRegime,
    InvalidRegime,
    UndampedDarkMode,
    UncertaintyViolation,
    DegenerateState,
    CorrelatedBathUnsupported,
    FixedPointDivergence,
    InvalidParams,
)


def _noise_for(gamma: float) -> NoiseMode:
    return NoiseMode.MarkovianThermal if gamma > 0 else NoiseMode.VacuumOnly


def _eval_oneD_lyapunov(p: SystemParams1D) -> tuple[dict, tuple[str, ...]]:
    sys = build_1d(p, _noise_for(p.gamma_b))
    cov = steady_covariance(sys).mechanical_1d()
    n, mu = occupation_and_purity_1d(cov)
    out = {
        "xx": cov.xx, "pp": cov.pp, "xp": cov.xp,
        "n_bar": n, "purity": mu,
        "n_bar_0": bare_occupation(cov, p.omega_b, p.mass),
    }
    return out, sys.warnings


def _eval_oneD_spectral(p: SystemParams1D) -> tuple[dict, tuple[str, ...]]:
    cov = integrate_moments(p)
    n, mu = occupation_and_purity_1d(cov)
    out = {
        "xx": cov.xx, "pp": cov.pp, "xp": cov.xp,
        "n_bar": n, "purity": mu,
        "n_bar_0": bare_occupation(cov, p.omega_b, p.mass),
    }
    return out, ()


def _eval_oneD_closed_form(p: SystemParams1D) -> tuple[dict, tuple[str, ...]]:
    r = backaction_1d(p)
    cov = Cov1D(xx=r.xx, pp=r.pp, xp=0.0, hbar=p.hbar)
    out = {
        "xx": r.xx, "pp": r.pp, "xp": 0.0,
        "n_bar": r.n_bar, "purity": r.purity,
        "n_bar_0": bare_occupation(cov, p.omega_b, p.mass),
        "M_Omega": r.M_Omega, "n_min_weak": r.n_min_weak,
    }
    return out, ()


def _summary_2d(cov) -> dict:
    s = purity_2d_general(cov)
    return {
        "purity_2d": s.purity_2d,
        "purity_product": s.purity_product_1d,
        "N_plus": s.N_plus,
        "N_minus": s.N_minus,
    }


def _eval_twoD_lyapunov(p: SystemParams2D) -> tuple[dict, tuple[str, ...]]:
    sys = build_2d(p, _noise_for(max(p.gamma_x, p.gamma_y)))
    cov = steady_covariance(sys).mechanical_2d()
    V = cov.matrix
    out = {
        "xx_b": V[0, 0], "pp_b": V[1, 1], "xx_d": V[2, 2], "pp_d": V[3, 3],
        "x_b_x_d": V[0, 2], "p_b_p_d": V[1, 3],
    }
    out.update(_summary_2d(cov))
    return out, sys.warnings


def _eval_twoD_closed_form(p: SystemParams2D) -> tuple[dict, tuple[str, ...]]:
    r = backaction_2d(p)
    out = {
        "xx_b": r.xx_b, "pp_b": r.pp_b, "xx_d": r.xx_d, "pp_d": r.pp_d,
        "x_b_x_d": r.x_b_x_d, "p_b_p_d": r.p_b_p_d,
        "purity_2d": r.purity_2d, "purity_product": r.purity_product,
    }
    return out, ()


def _eval_rwa_lyapunov(p: SystemParamsRWA) -> tuple[dict, tuple[str, ...]]:
    sys = build_rwa(p)
    full = steady_covariance(sys)
    cov = full.mechanical_2d()
    V = full.matrix
    out = {
        "n_b": 0.5 * (V[2, 2] + V[3, 3] - 1.0),
        "n_d": 0.5 * (V[4, 4] + V[5, 5] - 1.0),
    }
    out.update(_summary_2d(cov))
    return out, sys.warnings


def _eval_rwa_closed_form(p: SystemParamsRWA) -> tuple[dict, tuple[str, ...]]:
    with catch_warnings(record=True) as caught:
        g_m_opt, mu = rwa_optimum(p)
    return {"G_m_opt": g_m_opt, "purity_opt": mu}, tuple(
        str(w.message) for w in caught
    )


_EVALUATORS = {
    ("oneD", "lyapunov"): _eval_oneD_lyapunov,
    ("oneD", "spectral"): _eval_oneD_spectral,
    ("oneD", "closed_form"): _eval_oneD_closed_form,
    ("twoD", "lyapunov"): _eval_twoD_lyapunov,
    ("twoD", "closed_form"): _eval_twoD_closed_form,
    ("rwa", "lyapunov"): _eval_rwa_lyapunov,
    ("rwa", "closed_form"): _eval_rwa_closed_form,
}

_QUANTITIES = {
    ("oneD", "lyapunov"): ("xx", "pp", "xp", "n_bar", "purity", "n_bar_0"),
    ("oneD", "spectral"): ("xx", "pp", "xp", "n_bar", "purity", "n_bar_0"),
    ("oneD", "closed_form"): (
        "xx", "pp", "xp", "n_bar", "purity", "n_bar_0", "M_Omega", "n_min_weak",
    ),
    ("twoD", "lyapunov"): (
        "xx_b", "pp_b", "xx_d", "pp_d", "x_b_x_d", "p_b_p_d",
        "purity_2d", "purity_product", "N_plus", "N_minus",
    ),
    ("twoD", "closed_form"): (
        "xx_b", "pp_b", "xx_d", "pp_d", "x_b_x_d", "p_b_p_d",
        "purity_2d", "purity_product",
    ),
    ("rwa", "lyapunov"): (
        "n_b", "n_d", "purity_2d", "purity_product", "N_plus", "N_minus",
    ),
    ("rwa", "closed_form"): ("G_m_opt", "purity_opt"),
}


def available_quantities(model: str, solver: str) -> tuple[str, ...]:
    """Quantity names a (model, solver) pair can produce."""
    try:
        return _QUANTITIES[(model, solver)]
    except KeyError:
        raise InvalidParams(
            f"no evaluator for model={model!r} solver={solver!r}"
        ) from None


@dataclass(frozen=True)
class RunConfig:
    """What to evaluate: model, solver, parameters and outputs."""

    model: str
    solver: str
    params: SystemParams1D | SystemParams2D | SystemParamsRWA
    outputs: tuple[str, ...] = ()
    unit_frame: str = "hbar = m = 1, frequencies in omega_ref"

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidParams(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.solver not in SOLVERS:
            raise InvalidParams(f"unknown solver {self.solver!r}; choose from {SOLVERS}")
        if not isinstance(self.params, _PARAM_TYPES[self.model]):
            raise InvalidParams(
                f"model {self.model!r} needs {_PARAM_TYPES[self.model].__name__}, "
                f"got {type(self.params).__name__}"
            )
        allowed = available_quantities(self.model, self.solver)
        if not self.outputs:
            object.__setattr__(self, "outputs", allowed)
        else:
            bad = [q for q in self.outputs if q not in allowed]
            if bad:
                raise InvalidParams(
                    f"quantities {bad} not available for "
                    f"model={self.model!r} solver={self.solver!r}; "
                    f"available: {list(allowed)}"
                )
            object.__setattr__(self, "outputs", tuple(self.outputs))


@dataclass(frozen=True)
class Axis:
    """One sweep axis over a named parameter."""

    name: str
    lo: float
    hi: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.count < 2:
            raise InvalidParams("axis count must be at least 2")
        if not (self.lo < self.hi):
            raise InvalidParams("axis needs lo < hi")
        if self.scale not in ("linear", "log"):
            raise InvalidParams("axis scale must be 'linear' or 'log'")
        if self.scale == "log" and self.lo <= 0:
            raise InvalidParams("log axis needs lo > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(math.log10(self.lo), math.log10(self.hi), self.count)
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """One or two axes; grid order is row-major, first axis outermost."""

    axes: tuple[Axis, ...]

    def __post_init__(self):
        if not (1 <= len(self.axes) <= 2):
            raise InvalidParams("a sweep takes one or two axes")

    def grid(self) -> list[tuple[float, ...]]:
        vals = [a.values() for a in self.axes]
        if len(vals) == 1:
            return [(float(v),) for v in vals[0]]
        return [(float(u), float(v)) for u in vals[0] for v in vals[1]]


@dataclass(frozen=True)
class SweepRow:
    """One evaluated grid point."""

    axis_values: tuple[float, ...]
    values: dict | None
    stable: bool
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class SweepResult:
    """All rows of a sweep in grid order, plus labeling metadata."""

    config: RunConfig
    spec: SweepSpec
    rows: tuple[SweepRow, ...]

    def header(self) -> tuple[list[str], list[str]]:
        names = [a.name for a in self.spec.axes]
        names += list(self.config.outputs) + ["stable", "warnings"]
        units = [UNITS.get(n, "unknown") for n in names]
        return names, units

    def csv_rows(self) -> list[list[str]]:
        out = []
        for row in self.rows:
            cells = [format_float(v) for v in row.axis_values]
            for q in self.config.outputs:
                if row.values is None:
                    cells.append("")
                else:
                    cells.append(format_float(row.values[q]))
            cells.append("1" if row.stable else "0")
            cells.append(_sanitize_warning(";".join(row.warnings)))
            out.append(cells)
        return out


def format_float(x: float) -> str:
    """Fixed %.17g rendering: round-trips any double exactly."""
    return f"{float(x):.17g}"


def _sanitize_warning(text: str) -> str:
    return text.replace(",", ";").replace("\n", " ")


def with_param(params, name: str, value: float):
    """Copy of a params record with one named parameter replaced.

    The 1D coupling is stored in both rate (G_o) and gradient
    (lambda_o) form; overriding either clears the other so the pair is
    rebuilt consistently.
    """
    if isinstance(params, SystemParams1D) and name in ("G_o", "lambda_o"):
        other = {"G_o": "lambda_o", "lambda_o": "G_o"}[name]
        return replace(params, **{name: value, other: None})
    if not hasattr(params, name):
        raise InvalidParams(
            f"{type(params).__name__} has no parameter {name!r}"
        )
    return replace(params, **{name: value})


def evaluate_config(config: RunConfig,
                    overrides: dict | None = None) -> tuple[dict, tuple[str, ...]]:
    """Evaluate one parameter point; raises on instability or bad input.

    Returns the requested quantities and any regime warnings the
    underlying solver attached.
    """
    p = config.params
    for name, value in (overrides or {}).items():
        p = with_param(p, name, value)
    with catch_warnings(record=True) as caught:
        values, warn = _EVALUATORS[(config.model, config.solver)](p)
    warn = warn + tuple(str(w.message) for w in caught)
    return {q: values[q] for q in config.outputs}, warn


def evaluate_point(config: RunConfig, overrides: dict | None = None) -> SweepRow:
    """Evaluate one parameter point, folding in optional overrides.

    Returns a flagged row instead of raising when the point is
    unstable, out of regime, or parametrically invalid.
    """
    axis_values = tuple(float(v) for v in (overrides or {}).values())
    try:
        values, warn = evaluate_config(config, overrides)
        return SweepRow(axis_values, values, True, warn)
    except _POINT_ERRORS as exc:
        return SweepRow(axis_values, None, False, (f"{type(exc).__name__}: {exc}",))


def _worker(task) -> SweepRow:
    config, names, point = task
    return evaluate_point(config, dict(zip(names, point)))


def run_sweep(config: RunConfig, spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """Evaluate the grid; row order is grid order regardless of jobs."""
    if jobs < 1:
        raise InvalidParams("jobs must be at least 1")
    names = [a.name for a in spec.axes]
    points = spec.grid()
    tasks = [(config, names, pt) for pt in points]
    rows: list[SweepRow | None] = [None] * len(points)
    if jobs == 1:
        for i, t in enumerate(tasks):
            rows[i] = _worker(t)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for i, row in enumerate(pool.map(_worker, tasks, chunksize=16)):
                rows[i] = row
    return SweepResult(config=config, spec=spec, rows=tuple(rows))


def write_csv(path: str | Path, names: list[str], units: list[str],
              rows: list[list[str]]) -> Path:
    """Write a two-header-line CSV atomically (write then rename)."""
    path = Path(path)
    if len(names) != len(units):
        raise InvalidParams("names and units rows must have equal length")
    for r in rows:
        if len(r) != len(names):
            raise InvalidParams("row length does not match header")
    tmp = path.with_name(path.name + ".tmp")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(names) + "\n")
        f.write(",".join(units) + "\n")
        for r in rows:
            f.write(",".join(r) + "\n")
    os.replace(tmp, path)
    return path


def sweep_to_csv(config: RunConfig, spec: SweepSpec, path: str | Path,
                 jobs: int = 1) -> Path:
    """Run a sweep and write its CSV; returns the final path."""
    result = run_sweep(config, spec, jobs=jobs)
    names, units = result.header()
    return write_csv(path, names, units, result.csv_rows())
