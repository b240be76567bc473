"""Cross-solver validation suite.

Every analytic result in :mod:`omsteady.closedform` has at least one
independent numerical route (Lyapunov steady state, adaptive spectral
quadrature, residue summation). This module runs the named agreement
checks between those routes and reports the worst scaled error per
check. The CLI `validate` subcommand prints the table and fails loudly
on any violation.

The checks are deliberately kept as separate named entries rather than
one big assertion, so a regression report points at the physics that
broke, not at a generic "validation failed".

``perturb_diffusion`` multiplies the diffusion matrix fed to the 1D
Lyapunov solve by (1 + eps). It exists so the harness itself can be
tested: a nonzero perturbation must make `lyapunov-vs-closed-form-1d`
fail and nothing else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .closedform import (
    backaction_1d,
    backaction_2d,
    bare_occupation,
    rwa_optimum,
    strong_coupling,
)
from .gaussian import Cov1D, decompose_1d, occupation_and_purity_1d, purity_2d_general
from .langevin import (
    LYAPUNOV_RESIDUAL_RTOL,
    LinearSystem,
    NoiseMode,
    build_1d,
    build_2d,
    build_rwa,
    steady_covariance,
)
from .models import (
    SystemParams1D,
    SystemParams2D,
    SystemParamsRWA,
    resonant_2d_design,
    temperature_for_occupation,
)
from .spectral import (
    FreqGrid,
    integrate_moments,
    integrate_moments_residue,
    position_psd,
    moment_integrals,
)

__all__ = ["CheckResult", "run_validation", "CHECK_NAMES"]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named invariant check."""

    name: str
    passed: bool
    worst: float
    tolerance: float
    detail: str = ""

    def __post_init__(self):
        # comparisons of numpy scalars leak numpy bool/float types
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "worst", float(self.worst))

    def row(self) -> str:
        flag = "pass" if self.passed else "FAIL"
        return f"{self.name:32s} {flag:4s} worst={self.worst:10.3e} tol={self.tolerance:8.1e} {self.detail}"


def _stability_bound(delta: float, kappa: float, omega_b: float = 1.0) -> float:
    """Drive strength G_o at which omega_b^2 = 2 g_o^2."""
    K = (kappa / 2.0) ** 2 + delta**2
    return omega_b * math.sqrt(K / (4.0 * delta * omega_b))


# Reference margin: G_o = 0.45 at delta = omega_b = 1, kappa = 0.2 sits at
# ~89.6% of the stability bound; the grid's strongest point keeps that
# margin at every (delta, kappa) so no grid point goes unstable.
_MARGIN = 0.45 / _stability_bound(1.0, 0.2)

_DELTAS = (0.5, 1.0, 2.0)
_KAPPAS = (0.1, 0.2, 1.0)
_G_FIXED = (0.01, 0.1, 0.3)


def _grid_1d():
    for delta in _DELTAS:
        for kappa in _KAPPAS:
            gs = _G_FIXED + (_MARGIN * _stability_bound(delta, kappa),)
            for g in gs:
                yield SystemParams1D(
                    omega_b=1.0, gamma_b=0.0, kappa=kappa, delta=delta, G_o=g
                )


def _perturbed(sys: LinearSystem, eps: float) -> LinearSystem:
    if eps == 0.0:
        return sys
    return replace(sys, diffusion=sys.diffusion * (1.0 + eps))


def _check_lyapunov_vs_closed_form_1d(perturb: float = 0.0) -> CheckResult:
    """Five steady-state quantities, exact formulas vs Lyapunov solve."""
    tol = 1e-10
    worst, where = 0.0, ""
    for p in _grid_1d():
        cf = backaction_1d(p)
        sys = _perturbed(build_1d(p, NoiseMode.VacuumOnly), perturb)
        cov = steady_covariance(sys).mechanical_1d()
        n_num, _ = occupation_and_purity_1d(cov)
        m_num = decompose_1d(cov).M_Omega
        scale_xp = math.sqrt(cov.xx * cov.pp)
        errs = (
            abs(cov.xx - cf.xx) / cf.xx,
            abs(cov.pp - cf.pp) / cf.pp,
            abs(cov.xp) / scale_xp,
            abs(n_num - cf.n_bar) / max(cf.n_bar, 1e-3),
            abs(m_num - cf.M_Omega) / cf.M_Omega,
        )
        e = max(errs)
        if e > worst:
            worst, where = e, f"delta={p.delta} kappa={p.kappa} G_o={p.G_o:.4g}"
    return CheckResult("lyapunov-vs-closed-form-1d", worst <= tol, worst, tol, where)


def _check_oracle_chain_1d() -> CheckResult:
    """Closed form, Lyapunov and spectral quadrature, pairwise on xx/pp."""
    tol = 1e-6
    worst, where = 0.0, ""
    for p in _grid_1d():
        cf = backaction_1d(p)
        ly = steady_covariance(build_1d(p, NoiseMode.VacuumOnly)).mechanical_1d()
        sp = integrate_moments(p)
        for name in ("xx", "pp"):
            a, b, c = getattr(cf, name), getattr(ly, name), getattr(sp, name)
            e = max(abs(a - b), abs(b - c), abs(a - c)) / abs(a)
            if e > worst:
                worst, where = e, f"{name} at delta={p.delta} kappa={p.kappa} G_o={p.G_o:.4g}"
    return CheckResult("oracle-chain-1d", worst <= tol, worst, tol, where)


_G_2D = (0.01, 0.05, 0.1, 0.2, 0.3)


def _grid_2d():
    for g in _G_2D:
        for g_m_ratio in (1.0 / math.sqrt(2.0), 0.35):
            yield resonant_2d_design(omega=1.0, G_o=g, G_m=g_m_ratio * g, kappa=0.2)


def _check_oracle_chain_2d() -> CheckResult:
    """Six exact two-mode moments vs the 6x6 Lyapunov solve."""
    tol = 1e-8
    worst, where = 0.0, ""
    for p in _grid_2d():
        cf = backaction_2d(p)
        V = steady_covariance(build_2d(p, NoiseMode.VacuumOnly)).mechanical_2d().matrix
        pairs = (
            ("xx_b", V[0, 0]), ("pp_b", V[1, 1]), ("xx_d", V[2, 2]),
            ("pp_d", V[3, 3]), ("x_b_x_d", V[0, 2]), ("p_b_p_d", V[1, 3]),
        )
        for name, num in pairs:
            exact = getattr(cf, name)
            e = abs(num - exact) / max(abs(exact), 1e-6)
            if e > worst:
                worst, where = e, f"{name} at G_o={p.G_o:.3g}"
    return CheckResult("oracle-chain-2d", worst <= tol, worst, tol, where)


def _check_structure_zeros_2d() -> CheckResult:
    """Position-momentum cross moments that must vanish at steady state."""
    tol = 1e-10
    worst, where = 0.0, ""
    for p in _grid_2d():
        V = steady_covariance(build_2d(p, NoiseMode.VacuumOnly)).mechanical_2d().matrix
        scale = math.sqrt(max(V[0, 0], V[2, 2]) * max(V[1, 1], V[3, 3]))
        zeros = (
            ("x_b p_b", V[0, 1]), ("x_d p_d", V[2, 3]),
            ("x_b p_d", V[0, 3]), ("x_d p_b", V[2, 1]),
        )
        for name, val in zeros:
            e = abs(val) / scale
            if e > worst:
                worst, where = e, name
    return CheckResult("steady-state-structure-2d", worst <= tol, worst, tol, where)


def _check_rwa_vs_full_model() -> CheckResult:
    """Rotating-wave 6x6 against the full two-mode model on purity."""
    tol = 1e-2
    kappa, g_o, gamma, n_b = 1e-3, 1e-2, 1e-8, 100.0
    temp = temperature_for_occupation(n_b, 1.0)
    p2 = resonant_2d_design(
        omega=1.0, G_o=g_o, G_m=g_o / math.sqrt(2.0), kappa=kappa,
        gamma=gamma, temperature=temp,
    )
    mu_full = purity_2d_general(
        steady_covariance(build_2d(p2, NoiseMode.MarkovianThermal)).mechanical_2d()
    ).purity_2d
    pr = SystemParamsRWA(
        omega_b=1.0, omega_d=1.0, gamma_b=gamma, gamma_d=gamma,
        kappa=kappa, delta=1.0, G_o=g_o, G_m=g_o / math.sqrt(2.0),
        n_B_b=n_b, n_B_d=n_b,
    )
    mu_rwa = purity_2d_general(
        steady_covariance(build_rwa(pr)).mechanical_2d()
    ).purity_2d
    worst = abs(mu_full - mu_rwa) / mu_full
    return CheckResult(
        "rwa-vs-full-model", worst <= tol, worst, tol,
        f"mu_full={mu_full:.6f} mu_rwa={mu_rwa:.6f}",
    )


def _check_bare_occupation_dominates() -> CheckResult:
    """n_bar_0 >= n_bar for the resonantly driven single mode.

    The gap must be nonnegative everywhere, vanish toward zero drive
    and open up at strong drive (the two occupations are genuinely
    different quantities there, not one curve with rounding noise).
    """
    gs = np.linspace(0.005, 0.45, 90)
    gaps = []
    for g in gs:
        p = SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0, G_o=float(g))
        cf = backaction_1d(p)
        ly = steady_covariance(build_1d(p, NoiseMode.VacuumOnly)).mechanical_1d()
        n0 = bare_occupation(ly, p.omega_b, p.mass)
        gaps.append(n0 - cf.n_bar)
    worst = -min(gaps)  # positive iff the ordering is violated somewhere
    passed = worst <= 0.0 and gaps[0] < 1e-4 and gaps[-1] > 1e-2
    return CheckResult(
        "bare-occupation-dominates", passed, max(worst, 0.0), 0.0,
        f"gap range [{min(gaps):.3e}, {max(gaps):.3e}]",
    )


def _check_strong_coupling_regime() -> CheckResult:
    """Normal-mode occupation converges to the exact result in its regime."""
    worst_ratio, where = 0.0, ""
    for kappa, g in ((0.02, 0.3), (0.01, 0.2), (0.002, 0.1), (0.02, 0.1)):
        p = SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=kappa, delta=1.0, G_o=g)
        sc = strong_coupling(p)
        exact = backaction_1d(p)
        rel = abs(sc.n_bar - exact.n_bar) / exact.n_bar
        bound = 10.0 * ((kappa / g) ** 2 + g**2)
        if rel / bound > worst_ratio:
            worst_ratio, where = rel / bound, f"kappa={kappa} G_o={g} rel={rel:.3e}"
    return CheckResult(
        "strong-coupling-regime", worst_ratio <= 1.0, worst_ratio, 1.0, where
    )


def _rwa_purity(kappa: float, g_o: float, g_m: float, gamma_tot: float,
                n_b: float) -> float:
    p = SystemParamsRWA(
        omega_b=1.0, omega_d=1.0, gamma_b=gamma_tot / 2.0, gamma_d=gamma_tot / 2.0,
        kappa=kappa, delta=1.0, G_o=g_o, G_m=g_m, n_B_b=n_b, n_B_d=n_b,
    )
    cov = steady_covariance(build_rwa(p)).mechanical_2d()
    return purity_2d_general(cov).purity_2d


def _check_rwa_optimum_location() -> CheckResult:
    """Grid maximization over G_m lands within 5% of the analytic optimum."""
    tol = 0.05
    kappa = 1e-3
    gamma_tot = 1e-9 * kappa
    n_b = 0.05 * kappa / gamma_tot
    worst, where = 0.0, ""
    for g_o_ratio in (2.0, 5.0):
        g_o = g_o_ratio * kappa
        target = g_o / math.sqrt(2.0)
        grid = np.linspace(0.3 * target, 2.0 * target, 120)
        purities = [_rwa_purity(kappa, g_o, float(g), gamma_tot, n_b) for g in grid]
        g_best = float(grid[int(np.argmax(purities))])
        e = abs(g_best - target) / target
        if e > worst:
            worst, where = e, f"G_o={g_o:.3g}: grid opt {g_best:.4g} vs {target:.4g}"
    formula_opt, _ = rwa_optimum(
        SystemParamsRWA(
            omega_b=1.0, omega_d=1.0, gamma_b=gamma_tot / 2.0,
            gamma_d=gamma_tot / 2.0, kappa=kappa, delta=1.0,
            G_o=2.0 * kappa, G_m=kappa, n_B_b=n_b, n_B_d=n_b,
        )
    )
    assert abs(formula_opt - 2.0 * kappa / math.sqrt(2.0)) < 1e-15
    return CheckResult("rwa-optimum-location", worst <= tol, worst, tol, where)


def _check_psd_nonnegative() -> CheckResult:
    """S_xx(omega) >= 0 everywhere on stable parameter sets."""
    worst = 0.0
    omegas = np.linspace(-8.0, 8.0, 4001)
    cases = (
        SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0, G_o=0.4),
        SystemParams1D(omega_b=1.0, gamma_b=1e-4, kappa=0.5, delta=0.7, G_o=0.1,
                       temperature=temperature_for_occupation(10.0, 1.0)),
        SystemParams1D(omega_b=1.0, gamma_b=1e-2, kappa=1.0, delta=2.0, G_o=0.3),
    )
    for p in cases:
        s = position_psd(omegas, p)
        worst = min(worst, float(np.min(s)))
    return CheckResult("psd-nonnegative", worst >= 0.0, abs(worst), 0.0, "")


def _check_residue_vs_quadrature() -> CheckResult:
    """Contour integration vs adaptive quadrature on undamped cases."""
    tol = 1e-8
    worst, where = 0.0, ""
    for p in (
        SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0, G_o=0.4),
        SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.1, delta=0.5, G_o=0.2),
        SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=1.0, delta=2.0, G_o=0.3),
    ):
        quad = integrate_moments(p)
        res = integrate_moments_residue(p)
        for name in ("xx", "pp"):
            e = abs(getattr(quad, name) - getattr(res, name)) / getattr(res, name)
            if e > worst:
                worst, where = e, f"{name} at kappa={p.kappa} delta={p.delta}"
    return CheckResult("residue-vs-quadrature", worst <= tol, worst, tol, where)


def _check_quadrature_convergence() -> CheckResult:
    """Halving rel_tol moves the result by less than the error estimate."""
    ok = True
    worst, where = 0.0, ""
    for p in (
        SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0, G_o=0.4),
        SystemParams1D(omega_b=1.0, gamma_b=1e-4, kappa=0.2, delta=1.0, G_o=0.05,
                       temperature=temperature_for_occupation(5.0, 1.0)),
    ):
        coarse = moment_integrals(p, FreqGrid(rel_tol=1e-9))
        fine = moment_integrals(p, FreqGrid(rel_tol=5e-10))
        for name in ("xx", "pp"):
            shift = abs(coarse[name] - fine[name])
            budget = coarse["err_" + name] + fine["err_" + name]
            ratio = shift / budget if budget > 0 else 0.0
            if ratio > worst:
                worst, where = ratio, name
            ok = ok and shift <= budget
    return CheckResult("quadrature-convergence", ok, worst, 1.0, where)


def _check_sideband_asymmetry() -> CheckResult:
    """At T=0 the spectrum at -omega_b is positive but strongly suppressed."""
    p = SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0, G_o=0.3)
    ratio = float(position_psd(-p.omega_b, p)) / float(position_psd(p.omega_b, p))
    passed = 0.0 < ratio < 1.0
    return CheckResult("sideband-asymmetry", passed, ratio, 1.0,
                       "S(-omega_b)/S(+omega_b)")


def _check_lyapunov_residual() -> CheckResult:
    """Residual of A V + V A^T + D = 0 stays within the solver's bound."""
    worst, where = 0.0, ""
    systems = [build_1d(p, NoiseMode.VacuumOnly) for p in _grid_1d()]
    systems += [build_2d(p, NoiseMode.VacuumOnly) for p in _grid_2d()]
    for sys in systems:
        V = steady_covariance(sys).matrix
        resid = float(np.abs(sys.drift @ V + V @ sys.drift.T + sys.diffusion).max())
        scaled = resid / np.abs(sys.diffusion).max()
        if scaled > worst:
            worst, where = scaled, f"dim={sys.dim}"
    return CheckResult(
        "lyapunov-residual", worst <= LYAPUNOV_RESIDUAL_RTOL, worst,
        LYAPUNOV_RESIDUAL_RTOL, where,
    )


_CHECKS = (
    ("lyapunov-vs-closed-form-1d", _check_lyapunov_vs_closed_form_1d),
    ("oracle-chain-1d", _check_oracle_chain_1d),
    ("oracle-chain-2d", _check_oracle_chain_2d),
    ("steady-state-structure-2d", _check_structure_zeros_2d),
    ("rwa-vs-full-model", _check_rwa_vs_full_model),
    ("bare-occupation-dominates", _check_bare_occupation_dominates),
    ("strong-coupling-regime", _check_strong_coupling_regime),
    ("rwa-optimum-location", _check_rwa_optimum_location),
    ("psd-nonnegative", _check_psd_nonnegative),
    ("residue-vs-quadrature", _check_residue_vs_quadrature),
    ("quadrature-convergence", _check_quadrature_convergence),
    ("sideband-asymmetry", _check_sideband_asymmetry),
    ("lyapunov-residual", _check_lyapunov_residual),
)

CHECK_NAMES = tuple(name for name, _ in _CHECKS)


def run_validation(perturb_diffusion: float = 0.0,
                   names: tuple[str, ...] | None = None) -> list[CheckResult]:
    """Run the named checks (all by default) and return their results.

    ``perturb_diffusion`` feeds a multiplicative error into the 1D
    Lyapunov check only; see the module docstring.
    """
    selected = set(names) if names is not None else set(CHECK_NAMES)
    unknown = selected - set(CHECK_NAMES)
    if unknown:
        raise ValueError(f"unknown validation checks: {sorted(unknown)}")
    results = []
    for name, fn in _CHECKS:
        if name not in selected:
            continue
        if name == "lyapunov-vs-closed-form-1d":
            results.append(fn(perturb_diffusion))
        else:
            results.append(fn())
    return results
