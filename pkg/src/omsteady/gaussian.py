"""Characterization of Gaussian states from covariance data.

Pure functions only: nothing here knows about cavities or baths. A
state enters as second moments of position and momentum fluctuations
and leaves as purity, thermal occupation, squeezing decomposition
parameters, or position wavefunctions of the diagonalizing basis.

Conventions
-----------
The 1D covariance is (xx, pp, xp) with xp the symmetrized cross moment
<{dx, dp}>/2. The 2D covariance is a 4x4 symmetric matrix over the
ordering (x1, p1, x2, p2). hbar rides along as metadata so callers can
stay in SI or in a dimensionless frame; all internal checks compare
against hbar/2 in whatever frame was supplied.

A covariance below the Heisenberg bound by more than a relative
1e-9 is rejected with UncertaintyViolation. Violations inside that
tolerance are treated as solver rounding noise and clamped onto the
bound, so downstream occupations come out as exact zeros instead of
tiny complex numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AssumptionViolated,
    DegenerateState,
    UncertaintyViolation,
)

__all__ = [
    "Cov1D",
    "Cov2D",
    "Decomposition1D",
    "Summary2D",
    "occupation_and_purity_1d",
    "decompose_1d",
    "wavefunction",
    "purity_2d_general",
    "purity_2d_reduced",
    "symplectic_eigenvalues",
]

#: Relative slack on the Heisenberg bound before inputs are rejected.
UNCERTAINTY_RTOL = 1e-9

#: Relative tolerance used when pairing symplectic eigenvalues.
_PAIRING_RTOL = 1e-9


@dataclass(frozen=True)
class Cov1D:
    """Second moments of a single mode: xx, pp and symmetrized xp."""

    xx: float
    pp: float
    xp: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.hbar <= 0:
            raise UncertaintyViolation("hbar must be positive")
        if self.xx < 0 or self.pp < 0:
            raise UncertaintyViolation("diagonal variances must be nonnegative")

    @property
    def det(self) -> float:
        return self.xx * self.pp - self.xp**2


@dataclass(frozen=True)
class Cov2D:
    """4x4 covariance over (x1, p1, x2, p2) with unit metadata."""

    matrix: np.ndarray
    hbar: float = 1.0
    basis_label: str = "bright/dark"

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise DegenerateState("Cov2D expects a 4x4 matrix")
        scale = np.abs(m).max() or 1.0
        if np.abs(m - m.T).max() > 1e-12 * scale:
            raise DegenerateState("covariance matrix must be symmetric")
        object.__setattr__(self, "matrix", 0.5 * (m + m.T))
        if self.hbar <= 0:
            raise UncertaintyViolation("hbar must be positive")


@dataclass(frozen=True)
class Decomposition1D:
    """Thermal-oscillator decomposition of a 1D Gaussian state.

    The state is a thermal mixture (occupation ``n_bar``) of the
    eigenstates of a generalized oscillator whose complex mass times
    frequency parameter is ``M_Omega``. ``theta`` measures the
    position-momentum correlation, and the effective zero-point
    amplitudes satisfy x_zpf * p_zpf * cos(theta) = hbar/2.
    """

    n_bar: float
    purity: float
    theta: float
    x_zpf: float
    p_zpf: float
    M_Omega: complex
    lambda_re: float


@dataclass(frozen=True)
class Summary2D:
    """Two-mode purity and modal occupations.

    ``N_plus``/``N_minus`` are the thermal occupations attached to the
    two symplectic eigenvalues; ``purity_product_1d`` is the product
    of the two reduced single-mode purities, which differs from
    ``purity_2d`` exactly when the modes are correlated.
    """

    purity_2d: float
    N_plus: float
    N_minus: float
    purity_product_1d: float


def _clamped_det_ratio(det: float, hbar: float) -> float:
    """det / (hbar/2)^2 with sub-bound rounding noise clamped to 1."""
    bound = (hbar / 2.0) ** 2
    ratio = det / bound
    if ratio < 1.0:
        if ratio < 1.0 - UNCERTAINTY_RTOL:
            raise UncertaintyViolation(
                f"covariance determinant {det:.6g} below (hbar/2)^2 = {bound:.6g}"
            )
        ratio = 1.0
    return ratio


def occupation_and_purity_1d(cov: Cov1D) -> tuple[float, float]:
    """Thermal occupation and purity of a single-mode Gaussian state.

    2*n_bar + 1 = sqrt(4*xx*pp - (2*xp)^2) / hbar, purity = 1/(2*n_bar+1).
    """
    ratio = _clamped_det_ratio(cov.det, cov.hbar)
    two_n_plus_1 = math.sqrt(ratio)
    n_bar = 0.5 * (two_n_plus_1 - 1.0)
    return n_bar, 1.0 / two_n_plus_1


def decompose_1d(cov: Cov1D) -> Decomposition1D:
    """Split a 1D Gaussian state into occupation and oscillator shape.

    Any valid covariance is the thermal state, at occupation n_bar, of
    a generalized harmonic oscillator. This returns that occupation
    together with the oscillator parameters: correlation angle theta,
    effective zero point amplitudes, and the complex parameter
    M_Omega = exp(-i*theta) * p_zpf / x_zpf whose real part sets the
    Gaussian width of the eigenfunctions (lambda_re = Re(M_Omega)/hbar).

    The theta branch is arcsin into [-pi/2, pi/2], which keeps
    Re(M_Omega) > 0 and the eigenfunctions normalizable.
    """
    if cov.xx == 0.0 or cov.pp == 0.0:
        raise DegenerateState("decompose_1d needs nonzero xx and pp")
    ratio = _clamped_det_ratio(cov.det, cov.hbar)
    two_n_plus_1 = math.sqrt(ratio)
    n_bar = 0.5 * (two_n_plus_1 - 1.0)
    root_det = two_n_plus_1 * cov.hbar / 2.0  # sqrt(xx*pp - xp^2), clamped
    sin_theta = cov.xp / math.sqrt(cov.xx * cov.pp)
    sin_theta = max(-1.0, min(1.0, sin_theta))
    theta = math.asin(sin_theta)
    x_zpf = math.sqrt(cov.hbar * cov.xx / (2.0 * root_det))
    p_zpf = math.sqrt(cov.hbar * cov.pp / (2.0 * root_det))
    M_Omega = complex(math.cos(theta), -math.sin(theta)) * (p_zpf / x_zpf)
    return Decomposition1D(
        n_bar=n_bar,
        purity=1.0 / two_n_plus_1,
        theta=theta,
        x_zpf=x_zpf,
        p_zpf=p_zpf,
        M_Omega=M_Omega,
        lambda_re=M_Omega.real / cov.hbar,
    )


def _hermite(n: int, y: complex) -> complex:
    # Stable three-term recurrence; closed forms overflow past n ~ 20.
    if n == 0:
        return 1.0 + 0.0j
    h_prev, h = 1.0 + 0.0j, 2.0 * y
    for k in range(1, n):
        h_prev, h = h, 2.0 * y * h - 2.0 * k * h_prev
    return h


def wavefunction(n: int, dec: Decomposition1D, x0: float, x) -> complex:
    """Position eigenfunction psi_n of the decomposed oscillator.

    psi_n(x) = (lambda/pi)^(1/4) / sqrt(2^n n!) *
               exp(-M_Omega (x-x0)^2 / 2 hbar) * H_n(sqrt(lambda) (x-x0))

    with lambda = Re(M_Omega)/hbar. For complex M_Omega these are not
    the textbook Hermite functions but remain orthonormal. Accepts a
    scalar or an array for ``x``.
    """
    if n < 0 or n != int(n):
        raise AssumptionViolated("n must be a nonnegative integer")
    if dec.lambda_re <= 0:
        raise AssumptionViolated("wavefunction requires Re(M_Omega) > 0")
    hbar = dec.M_Omega.real / dec.lambda_re
    lam = dec.lambda_re
    norm = (lam / math.pi) ** 0.25 / math.sqrt(2.0**n * math.factorial(n))
    dx = np.asarray(x, dtype=float) - x0
    envelope = np.exp(-dec.M_Omega * dx**2 / (2.0 * hbar))
    y = math.sqrt(lam) * dx
    if np.ndim(y) == 0:
        return complex(norm * envelope * _hermite(n, complex(y)))
    herm = np.array([_hermite(n, complex(v)) for v in y.ravel()])
    return norm * envelope * herm.reshape(np.shape(y))


_OMEGA_4 = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)


def symplectic_eigenvalues(cov: Cov2D) -> tuple[float, float]:
    """The two symplectic eigenvalues of a 4x4 covariance matrix.

    Computed as the moduli of the eigenvalues of i*Omega*V, which come
    in pairs (+nu, -nu); the pairs are matched to relative tolerance
    1e-9 and the two distinct moduli returned in descending order.
    """
    ev = np.linalg.eigvals(1j * (_OMEGA_4 @ cov.matrix))
    mods = np.sort(np.abs(ev))
    # eigenvalues come in +-nu pairs, so the sorted moduli repeat:
    # (nu_lo, nu_lo, nu_hi, nu_hi)
    scale = max(mods[-1], 1e-300)
    if (mods[1] - mods[0]) > _PAIRING_RTOL * scale or (
        mods[3] - mods[2]
    ) > _PAIRING_RTOL * scale:
        raise DegenerateState(
            f"symplectic eigenvalues did not pair up: moduli {mods}"
        )
    nu_lo = 0.5 * (mods[0] + mods[1])
    nu_hi = 0.5 * (mods[2] + mods[3])
    return float(nu_hi), float(nu_lo)


def _clamped_modal_occupation(nu: float, hbar: float) -> float:
    half = hbar / 2.0
    if nu < half:
        if nu < half * (1.0 - UNCERTAINTY_RTOL):
            raise UncertaintyViolation(
                f"symplectic eigenvalue {nu:.6g} below hbar/2 = {half:.6g}"
            )
        nu = half
    return nu / hbar - 0.5


def purity_2d_general(cov: Cov2D) -> Summary2D:
    """Purity and modal occupations of a two-mode Gaussian state.

    purity_2d = (hbar/2)^2 / sqrt(det V). The modal occupations come
    from the symplectic eigenvalues, N = nu/hbar - 1/2, and satisfy
    purity_2d = 1/((2 N_plus + 1)(2 N_minus + 1)). The product of the
    two reduced single-mode purities is computed from the diagonal
    2x2 blocks for comparison.
    """
    nu_hi, nu_lo = symplectic_eigenvalues(cov)
    N_plus = _clamped_modal_occupation(nu_hi, cov.hbar)
    N_minus = _clamped_modal_occupation(nu_lo, cov.hbar)
    det_ratio = np.linalg.det(cov.matrix) / (cov.hbar / 2.0) ** 4
    if det_ratio < 1.0:
        if det_ratio < 1.0 - 4.0 * UNCERTAINTY_RTOL:
            raise UncertaintyViolation(
                f"4x4 covariance determinant ratio {det_ratio:.6g} below 1"
            )
        det_ratio = 1.0
    purity_2d = 1.0 / math.sqrt(det_ratio)

    m = cov.matrix
    prod = 1.0
    for sl in (slice(0, 2), slice(2, 4)):
        block = m[sl, sl]
        det = float(block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0])
        prod /= math.sqrt(_clamped_det_ratio(det, cov.hbar))
    return Summary2D(
        purity_2d=purity_2d,
        N_plus=N_plus,
        N_minus=N_minus,
        purity_product_1d=prod,
    )


def purity_2d_reduced(cov: Cov2D) -> float:
    """Two-mode purity from observable moment combinations.

    Shortcut valid when each mode carries no internal x-p correlation
    (<{x_i, p_i}> = 0) and the cross correlations are antisymmetric
    (<x2 p1> = -<x1 p2>). Under those conditions

        purity = (hbar/2)^2 / sqrt(A_xx A_pp - A_xp B_xp + B_xp^2)

    where A_xx, A_pp, A_xp aggregate the position, momentum and mixed
    second moments and B_xp = <x1 p2>^2. Raises AssumptionViolated if
    the structural conditions fail; use purity_2d_general then.
    """
    m = cov.matrix
    xx1, pp1 = m[0, 0], m[1, 1]
    xx2, pp2 = m[2, 2], m[3, 3]
    x1x2, p1p2 = m[0, 2], m[1, 3]
    x1p1, x2p2 = m[0, 1], m[2, 3]
    x1p2, x2p1 = m[0, 3], m[1, 2]

    scale = max(abs(xx1) * abs(pp1), abs(xx2) * abs(pp2), (cov.hbar / 2.0) ** 2)
    tol = 1e-8 * math.sqrt(scale)
    if abs(x1p1) > tol or abs(x2p2) > tol:
        raise AssumptionViolated("reduced purity formula needs <{x_i,p_i}> = 0")
    if abs(x2p1 + x1p2) > tol:
        raise AssumptionViolated("reduced purity formula needs <x2 p1> = -<x1 p2>")

    A_xx = xx1 * xx2 - x1x2**2
    A_pp = pp1 * pp2 - p1p2**2
    A_xp = xx1 * pp2 + xx2 * pp1 - 2.0 * x1x2 * p1p2
    B_xp = x1p2**2
    det = A_xx * A_pp - A_xp * B_xp + B_xp**2
    if det <= 0:
        raise UncertaintyViolation("reduced determinant combination not positive")
    return (cov.hbar / 2.0) ** 2 / math.sqrt(det)
