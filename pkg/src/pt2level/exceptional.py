"""Exceptional points of the open two-level Hamiltonian

    H_NH = [[omega1 - i gamma1, kappa], [kappa, omega2 - i gamma2]]

with eigenvalues ``(omega1 + omega2 - i(gamma1 + gamma2))/2 +- sqrt(Q)``. An EP
needs ``Q = 0`` *and* a nonzero coupling; the decoupled degenerate case
(``kappa = 0``, equal energies and widths) is a diabolic point and is
reported separately.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Union

import numpy as np
from scipy.optimize import brentq

from .algebra import csqrt
from .errors import ValidationError

EP_TOL = 1e-10


@dataclass(frozen=True)
class OpenSystemParams:
    omega1: float
    omega2: float
    gamma1: float
    gamma2: float
    kappa: float

    def __post_init__(self):
        for name in ("omega1", "omega2", "gamma1", "gamma2", "kappa"):
            value = getattr(self, name)
            if isinstance(value, complex) or not math.isfinite(value):
                raise ValidationError(f"{name} must be a finite real number, got {value!r}")

    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [complex(self.omega1, -self.gamma1), self.kappa],
                [self.kappa, complex(self.omega2, -self.gamma2)],
            ]
        )


# The four special families. Each carries the coupling kappa as well so it
# maps onto a full OpenSystemParams.


@dataclass(frozen=True)
class CaseI:
    """Equal energies, arbitrary widths."""

    omega0: float
    gamma1: float
    gamma2: float
    kappa: float

    def to_open(self) -> OpenSystemParams:
        return OpenSystemParams(self.omega0, self.omega0, self.gamma1, self.gamma2, self.kappa)


@dataclass(frozen=True)
class CaseII:
    """Passive PT: loss/gain ``+-gamma`` on top of a global decay ``chi``."""

    omega: float
    gamma: float
    chi: float
    kappa: float

    def to_open(self) -> OpenSystemParams:
        return OpenSystemParams(
            self.omega, self.omega, self.gamma + self.chi, -self.gamma + self.chi, self.kappa
        )


@dataclass(frozen=True)
class CaseIII:
    """Balanced loss and gain (case II with ``chi = 0``)."""

    omega: float
    gamma: float
    kappa: float

    def to_open(self) -> OpenSystemParams:
        return OpenSystemParams(self.omega, self.omega, self.gamma, -self.gamma, self.kappa)


@dataclass(frozen=True)
class CaseIV:
    """Loss on one level only."""

    omega_p: float
    gamma_p: float
    kappa: float

    def to_open(self) -> OpenSystemParams:
        return OpenSystemParams(self.omega_p, self.omega_p, self.gamma_p, 0.0, self.kappa)


EPCase = Union[CaseI, CaseII, CaseIII, CaseIV]


class Degeneracy(enum.Enum):
    NONE = "none"
    EXCEPTIONAL = "exceptional"
    DIABOLIC_NOT_EXCEPTIONAL = "diabolic"


def _open(p) -> OpenSystemParams:
    return p if isinstance(p, OpenSystemParams) else p.to_open()


def discriminant_q(p: OpenSystemParams | EPCase) -> complex:
    """``Q = kappa^2 + [(w1 - w2)^2 - (g1 - g2)^2]/4 - (i/2)(w1 - w2)(g1 - g2)``.

    Case objects use their reduced form in factored order, e.g.
    ``(kappa - gamma)(kappa + gamma)`` for cases ii and iii, so a constructed
    EP gives ``Q = 0`` exactly instead of the rounding left by forming
    ``gamma1 - gamma2`` from shifted widths.
    """
    if isinstance(p, (CaseII, CaseIII)):
        return complex((p.kappa - p.gamma) * (p.kappa + p.gamma))
    if isinstance(p, CaseIV):
        half = 0.5 * p.gamma_p
        return complex((p.kappa - half) * (p.kappa + half))
    if isinstance(p, CaseI):
        half = 0.5 * (p.gamma1 - p.gamma2)
        return complex((p.kappa - half) * (p.kappa + half))
    dw = p.omega1 - p.omega2
    dg = p.gamma1 - p.gamma2
    return complex(p.kappa**2 + 0.25 * (dw * dw - dg * dg), -0.5 * dw * dg)


def _center(p: OpenSystemParams | EPCase) -> complex:
    if isinstance(p, CaseII):
        return complex(p.omega, -p.chi)
    if isinstance(p, CaseIII):
        return complex(p.omega, 0.0)
    if isinstance(p, CaseIV):
        return complex(p.omega_p, -0.5 * p.gamma_p)
    if isinstance(p, CaseI):
        return complex(p.omega0, -0.5 * (p.gamma1 + p.gamma2))
    return 0.5 * complex(p.omega1 + p.omega2, -(p.gamma1 + p.gamma2))


def eigenvalues_open(p: OpenSystemParams | EPCase) -> tuple[complex, complex]:
    """``(lambda_+, lambda_-)`` with the principal root of ``Q`` on the + branch."""
    center = _center(p)
    root = csqrt(discriminant_q(p))
    return center + root, center - root


def degeneracy(p: OpenSystemParams | EPCase, tol: float = EP_TOL) -> Degeneracy:
    if abs(discriminant_q(p)) > tol * (p.kappa**2 + 1.0):
        return Degeneracy.NONE
    p = _open(p)
    if p.kappa == 0.0 and p.gamma1 == p.gamma2 and p.omega1 == p.omega2:
        return Degeneracy.DIABOLIC_NOT_EXCEPTIONAL
    return Degeneracy.EXCEPTIONAL


def is_ep(p: OpenSystemParams | EPCase, tol: float = EP_TOL) -> bool:
    return degeneracy(p, tol) is Degeneracy.EXCEPTIONAL


def ep_case_from_pt(rho: float, varphi: float, sigma: float) -> CaseIII:
    """Embed the PT Hamiltonian (phi = 0) as balanced loss/gain.

    ``rho e^{+-i varphi} = rho cos(varphi) +- i rho sin(varphi)``, so the
    'width' of level 1 is ``-rho sin(varphi)``: gain where sin(varphi) > 0.
    Only ``Q = sigma^2 - rho^2 sin^2(varphi)`` matters for the EP condition,
    which is blind to that sign.
    """
    return CaseIII(omega=rho * math.cos(varphi), gamma=-rho * math.sin(varphi), kappa=sigma)


def effective_ep_hamiltonian(case: CaseII) -> np.ndarray:
    """``diag(omega - i chi, omega - i chi)``: the case-II spectrum at its EPs."""
    value = complex(case.omega, -case.chi)
    return np.diag([value, value])


class EPPoint(NamedTuple):
    x: float
    params: OpenSystemParams
    eigenvalue: complex


def ep_locus_scan(
    family: Callable[[float], OpenSystemParams | EPCase],
    grid: Iterable[float],
    tol: float = EP_TOL,
    refine: bool = True,
) -> list[EPPoint]:
    """EPs of a one-parameter family sampled on ``grid``.

    Grid points passing :func:`is_ep` are reported as they are. With
    ``refine``, every sign change of a real ``Q`` between neighbours is
    bracketed and solved with Brent's method, so EPs that fall between grid
    points are found as well.
    """
    xs = [float(x) for x in grid]
    if not all(math.isfinite(x) for x in xs):
        raise ValidationError("grid must be finite")
    members = [family(x) for x in xs]
    qs = [discriminant_q(m) for m in members]
    hits = [is_ep(m, tol) for m in members]
    found: list[EPPoint] = []
    for i, (x, m) in enumerate(zip(xs, members)):
        if hits[i]:
            found.append(EPPoint(x, _open(m), eigenvalues_open(m)[0]))
        if not refine or i + 1 == len(xs) or hits[i] or hits[i + 1]:
            continue
        q0, q1 = qs[i], qs[i + 1]
        scale = max(abs(q0), abs(q1))
        if abs(q0.imag) > tol * scale or abs(q1.imag) > tol * scale:
            continue
        if q0.real * q1.real < 0:
            root = brentq(lambda s: discriminant_q(family(s)).real, x, xs[i + 1], xtol=1e-15)
            rm = family(root)
            if is_ep(rm, tol):
                found.append(EPPoint(root, _open(rm), eigenvalues_open(rm)[0]))
    found.sort(key=lambda pt: pt.x)
    return found


def fig1_family(xi: float) -> Callable[[float], CaseIII]:
    """PT Hamiltonian with ``rho/sigma = xi`` and ``sigma = 1`` as a function of sin(varphi).

    This is the family tabulated by the ``fig1`` CLI command; cos(varphi) >= 0.
    """

    def member(sin_varphi: float) -> CaseIII:
        cos_varphi = math.sqrt(max(0.0, 1.0 - sin_varphi * sin_varphi))
        return CaseIII(omega=xi * cos_varphi, gamma=xi * sin_varphi, kappa=1.0)

    return member


def fig1_ep_locus(xi: float, n_points: int = 401) -> list[EPPoint]:
    """EPs of :func:`fig1_family` on a uniform sin(varphi) grid over [-1, 1]."""
    return ep_locus_scan(fig1_family(xi), sin_grid(n_points))


def sin_grid(n_points: int) -> np.ndarray:
    """Uniform grid on [-1, 1], each point a single correctly rounded division.

    ``np.linspace`` accumulates ``start + k*step``; dividing integers keeps
    points such as 1/2 and 1/4 exact, which puts the xi = 2, 4 EPs on the grid.
    """
    if n_points < 2:
        raise ValidationError("need at least two grid points")
    k = np.arange(n_points)
    return (2 * k - (n_points - 1)) / (n_points - 1)


def ep_locus_curve(sin_varphi: float) -> float:
    """Trajectory of the :func:`fig1_family` EPs as xi varies.

    The EP of a given xi sits at ``|s| = 1/xi`` with ``lambda_0/sigma = sqrt(xi^2 - 1)``;
    eliminating xi gives ``sqrt(1 - s^2)/|s|``.
    """
    if sin_varphi == 0.0:
        return math.inf
    return math.sqrt(max(0.0, 1.0 - sin_varphi**2)) / abs(sin_varphi)


def track_branches(family: Callable[[float], OpenSystemParams | EPCase], grid: Iterable[float]) -> np.ndarray:
    """Eigenvalues along ``grid`` as an ``(n, 2)`` array with continuous columns.

    Point queries label the pair by the principal root of ``Q``, which can swap
    where ``Q`` crosses the branch cut. Here each step keeps whichever pairing
    is closer to the previous point.
    """
    out = []
    for x in grid:
        a, b = eigenvalues_open(family(float(x)))
        if out:
            pa, pb = out[-1]
            if abs(a - pb) + abs(b - pa) < abs(a - pa) + abs(b - pb):
                a, b = b, a
        out.append((a, b))
    return np.array(out, dtype=complex).reshape(-1, 2)
