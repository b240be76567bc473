"""Frequency-domain solution of the single-mode model with colored noise.

The Lyapunov route (module :mod:`omsteady.langevin`) needs a white
approximation for the mechanical bath; this module keeps the exact
colored Brownian correlator and integrates the position spectral
density instead. Fourier convention: f[w] = int dt e^{i w t} f(t), so
equal-time variances are integrals of the spectrum over dw/2pi.

For a strictly Ohmic bath the momentum variance integral has a
logarithmic ultraviolet divergence whenever gamma_b > 0; physically
the bath has a cutoff well above any system resonance. We integrate
over a window extending ten times past the outermost response pole,
which plays the role of that cutoff. In the backaction limit
(gamma_b = 0) the integrand is rational, no cutoff is needed, and the
infinite tails are included, which is what makes the cross-check
against the Lyapunov solver meaningful at 1e-6 and below.
"""

from __future__ import annotations

import math
import warnings as _warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import InvalidParams, QuadratureFailure, UnstableSystem
from .gaussian import Cov1D
from .models import SystemParams1D

__all__ = [
    "FreqGrid",
    "cavity_susceptibility",
    "cavity_self_energy",
    "mechanical_response",
    "response_poles",
    "spectral_stability",
    "brownian_psd",
    "position_psd",
    "integrate_moments",
    "moment_integrals",
    "integrate_moments_residue",
]

#: Below |omega| < this fraction of the thermal frequency scale the
#: Brownian correlator switches to its series form around omega = 0.
_COTH_SERIES_THRESHOLD = 1e-6

_QUAD_LIMIT = 500


@dataclass(frozen=True)
class FreqGrid:
    """Integration control: segment list plus tolerances.

    ``segments`` may be empty, in which case the integrator builds its
    own window from the response poles (recommended). Explicit
    segments must be ordered and non-overlapping.
    """

    segments: tuple[tuple[float, float], ...] = ()
    rel_tol: float = 1e-10
    abs_tol: float = 0.0

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol < 0:
            raise InvalidParams("tolerances must be positive (abs_tol may be 0)")
        prev_hi = -math.inf
        for lo, hi in self.segments:
            if not (lo < hi) or lo < prev_hi:
                raise InvalidParams("segments must be ordered and non-overlapping")
            prev_hi = hi


def cavity_susceptibility(omega, kappa: float, delta: float):
    """Bare cavity response 1/(kappa/2 - i(omega - delta))."""
    if kappa <= 0:
        raise InvalidParams("cavity_susceptibility needs kappa > 0")
    return 1.0 / (kappa / 2.0 - 1j * (np.asarray(omega, dtype=float) - delta))


def cavity_self_energy(omega, params: SystemParams1D):
    """chi_c(omega) - chi_c*(-omega), the cavity-induced self energy factor."""
    chi = cavity_susceptibility(omega, params.kappa, params.delta)
    chi_neg = cavity_susceptibility(-np.asarray(omega, dtype=float), params.kappa, params.delta)
    return chi - np.conj(chi_neg)


def mechanical_response(omega, params: SystemParams1D):
    """Dressed mechanical response R_b(omega).

    1/R_b = -i m omega gamma_b + m(omega_b^2 - omega^2)
            - i hbar lambda_o^2 [chi_c(omega) - chi_c*(-omega)].
    """
    m = params.mass
    w = np.asarray(omega, dtype=float)
    inv = (
        -1j * m * w * params.gamma_b
        + m * (params.omega_b**2 - w**2)
        - 1j * params.hbar * params.lambda_o**2 * cavity_self_energy(w, params)
    )
    return 1.0 / inv


def _response_poly_coeffs(params: SystemParams1D) -> np.ndarray:
    """Coefficients (descending) of the quartic P(omega) = q(omega)/R_b(omega).

    q(omega) = (kappa/2 - i omega)^2 + delta^2 clears the self-energy
    denominator, leaving a polynomial whose roots are the poles of the
    dressed response.
    """
    m, g, k = params.mass, params.gamma_b, params.kappa
    c = (k / 2.0) ** 2 + params.delta**2
    wb2 = params.omega_b**2
    return np.array(
        [
            m,
            1j * m * (k + g),
            -m * (c + g * k + wb2),
            -1j * m * (g * c + k * wb2),
            m * wb2 * c - 2.0 * params.hbar * params.lambda_o**2 * params.delta,
        ],
        dtype=complex,
    )


def response_poles(params: SystemParams1D) -> np.ndarray:
    """The four poles of R_b(omega), via companion-matrix roots."""
    return np.roots(_response_poly_coeffs(params))


def spectral_stability(params: SystemParams1D) -> bool:
    """True iff every response pole lies in the lower half plane."""
    return bool(np.all(response_poles(params).imag < 0))


def brownian_psd(omega, gamma: float, temperature: float, m: float,
                 hbar: float = 1.0) -> np.ndarray:
    """Colored Brownian force spectrum hbar m gamma omega [coth(omega/2T) + 1].

    ``temperature`` is k_B*T/hbar in frequency units. At T = 0 this is
    2 hbar m gamma omega for omega > 0 and zero for omega < 0 (the
    bath can absorb but not emit). Near omega = 0 the coth is replaced
    by its Laurent series, giving the analytic limit 2 m gamma k_B T.
    """
    if gamma < 0:
        raise InvalidParams("gamma must be nonnegative")
    w = np.asarray(omega, dtype=float)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    out = np.empty_like(w)
    if temperature <= 0:
        out = np.where(w > 0, 2.0 * hbar * m * gamma * w, 0.0)
    else:
        y = w / (2.0 * temperature)
        small = np.abs(y) < _COTH_SERIES_THRESHOLD
        ys = np.where(small, 1.0, y)  # placeholder to avoid 0/0 warnings
        out = hbar * m * gamma * w * (1.0 / np.tanh(ys) + 1.0)
        # omega*coth(omega/2T) -> 2T (1 + y^2/3 + ...) as omega -> 0
        series = hbar * m * gamma * (2.0 * temperature * (1.0 + y**2 / 3.0) + w)
        out = np.where(small, series, out)
    return float(out[0]) if scalar else out


def position_psd(omega, params: SystemParams1D, check_stability: bool = True):
    """Position spectral density S_xx(omega) of the mechanical mode.

    S_xx = |R_b|^2 [S_N + kappa hbar^2 lambda_o^2 |chi_c|^2], the sum
    of the colored Brownian force noise and the cavity backaction
    (radiation pressure shot noise) filtered by the dressed response.
    """
    if check_stability and not spectral_stability(params):
        raise UnstableSystem("response poles not confined to the lower half plane")
    r = mechanical_response(omega, params)
    s_brown = brownian_psd(omega, params.gamma_b, params.temperature,
                           params.mass, params.hbar)
    chi = cavity_susceptibility(omega, params.kappa, params.delta)
    s_ba = params.kappa * params.hbar**2 * params.lambda_o**2 * np.abs(chi) ** 2
    return np.abs(r) ** 2 * (s_brown + s_ba)


def _quad_segment(f, lo: float, hi: float, grid: FreqGrid, points=None):
    kwargs = dict(epsabs=grid.abs_tol, epsrel=grid.rel_tol, limit=_QUAD_LIMIT)
    if points is not None and np.isfinite(lo) and np.isfinite(hi):
        inside = [p for p in points if lo < p < hi]
        if inside:
            kwargs["points"] = sorted(inside)
    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, lo, hi, **kwargs)
    return val, err


def _integration_window(params: SystemParams1D) -> tuple[float, list[float]]:
    """Window edge and quadrature breakpoints from the response poles.

    Weakly damped poles produce near-singular peaks many orders of
    magnitude narrower than the window; a geometric ladder of
    breakpoints around each pole center hands the adaptive rule an
    initial partition that already resolves the peak scale.
    """
    poles = response_poles(params)
    biggest = float(np.abs(poles).max())
    w_max = 10.0 * max(biggest, params.omega_b)
    points: set[float] = set()
    for p in poles:
        center, width = float(p.real), abs(float(p.imag))
        points.add(center)
        scale = width
        while 0.0 < scale < w_max:
            for candidate in (center - scale, center + scale):
                if abs(candidate) < w_max:
                    points.add(candidate)
            scale *= 30.0
    return w_max, sorted(points)


def moment_integrals(params: SystemParams1D, grid: FreqGrid | None = None) -> dict:
    """Raw spectral integrals with error estimates.

    Returns a dict with keys xx, pp, commutator and their quadrature
    error estimates (err_xx, err_pp, err_commutator). The commutator entry
    is m * int dw/2pi w S_xx, which must equal hbar/2 for a stationary
    state; integrate_moments uses it as a consistency gate.
    """
    if grid is None:
        grid = FreqGrid()
    if not spectral_stability(params):
        raise UnstableSystem("response poles not confined to the lower half plane")
    m = params.mass

    def sxx(w):
        return position_psd(w, params, check_stability=False)

    weights = {
        "xx": lambda w: sxx(w),
        "pp": lambda w: m**2 * w**2 * sxx(w),
        "commutator": lambda w: m * w * sxx(w),
    }

    if grid.segments:
        segs = [(lo, hi) for lo, hi in grid.segments]
        points: list[float] = []
        explicit = True
    else:
        w_max, points = _integration_window(params)
        segs = [(-w_max, w_max)]
        explicit = False
    out: dict[str, float] = {}
    for name, f in weights.items():
        # The xx and commutator integrands decay at least as 1/w^2 and
        # get their infinite tails. The pp integrand is only 1/w for an
        # Ohmic bath (gamma_b > 0); there the 10x-pole window is the
        # physical cutoff and tails are deliberately omitted.
        add_tails = not explicit and (name != "pp" or params.gamma_b == 0.0)
        total, tot_err = 0.0, 0.0
        for lo, hi in segs:
            val, err = _quad_segment(f, lo, hi, grid, points=points)
            total += val
            tot_err += err
        if add_tails:
            hi = segs[-1][1]
            lo = segs[0][0]
            for a, b in ((hi, np.inf), (-np.inf, lo)):
                val, err = _quad_segment(f, a, b, grid)
                total += val
                tot_err += err
        value = total / (2.0 * math.pi)
        err_val = tot_err / (2.0 * math.pi)
        tol = max(grid.abs_tol, 10.0 * grid.rel_tol * abs(value))
        if not math.isfinite(value) or (err_val > tol and name != "commutator"):
            raise QuadratureFailure(
                f"{name} integral error estimate {err_val:.3e} exceeds tolerance {tol:.3e}"
            )
        out[name] = value
        out["err_" + name] = err_val
    return out


#: Relative mismatch allowed between m*int w S_xx dw/2pi and hbar/2.
_COMMUTATOR_RTOL = 1e-6


def integrate_moments(params: SystemParams1D, grid: FreqGrid | None = None) -> Cov1D:
    """Steady-state (xx, pp) by adaptive quadrature of the spectrum.

    The symmetrized cross moment of a stationary process vanishes;
    rather than assuming that, the integrator checks the commutator
    sum rule m * int dw/2pi w S_xx = hbar/2 (the antisymmetric part of
    the same cross spectrum) and fails loudly if quadrature error or a
    truncated window broke it.
    """
    vals = moment_integrals(params, grid)
    comm_target = params.hbar / 2.0
    if abs(vals["commutator"] - comm_target) > _COMMUTATOR_RTOL * comm_target:
        raise QuadratureFailure(
            "stationarity cross-check failed: m*int w S_xx dw/2pi = "
            f"{vals['commutator']:.12g}, expected {comm_target:.12g}"
        )
    return Cov1D(xx=vals["xx"], pp=vals["pp"], xp=0.0, hbar=params.hbar)


def integrate_moments_residue(params: SystemParams1D) -> Cov1D:
    """Closed-contour evaluation of the gamma_b = 0 moments.

    With no mechanical damping the spectrum is rational,

        S_xx(w) = kappa hbar^2 lambda_o^2 [(kappa/2)^2 + (w+delta)^2]
                  / (P(w) conj(P)(w)),

    and the variance integrals follow from the residues at the roots
    of conj(P) in the upper half plane. Serves as an independent
    cross-check on the adaptive quadrature (no shared code path).
    """
    if params.gamma_b != 0.0:
        raise InvalidParams("residue route requires gamma_b = 0")
    if not spectral_stability(params):
        raise UnstableSystem("response poles not confined to the lower half plane")
    p_coeffs = _response_poly_coeffs(params)
    pbar_coeffs = np.conj(p_coeffs)
    pbar_roots = np.roots(pbar_coeffs)  # upper-half-plane mirror of the poles
    dpbar = np.polyder(pbar_coeffs)
    k2 = (params.kappa / 2.0) ** 2
    pref = params.kappa * params.hbar**2 * params.lambda_o**2
    m = params.mass

    def numerator(w, weight_power):
        return pref * (k2 + (w + params.delta) ** 2) * m**weight_power * w**weight_power

    out = {}
    for name, power in (("xx", 0), ("pp", 2)):
        total = 0.0 + 0.0j
        for r in pbar_roots:
            if r.imag <= 0:
                raise UnstableSystem("conjugate-polynomial root not in upper half plane")
            total += numerator(r, power) / (np.polyval(p_coeffs, r) * np.polyval(dpbar, r))
        out[name] = float((1j * total).real)
    return Cov1D(xx=out["xx"], pp=out["pp"], xp=0.0, hbar=params.hbar)
