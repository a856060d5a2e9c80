"""The four-parameter PT-symmetric two-level Hamiltonian.

    H = [[rho e^{+i varphi},  sigma e^{+i phi}],
         [sigma e^{-i phi},   rho e^{-i varphi}]]

PT symmetry (P = basis swap, T = complex conjugation) forces exactly this
shape: ``h00 = conj(h11)`` and ``h01 = conj(h10)``. The spectrum is governed
by the sign of ``rho**2 sin(varphi)**2 - sigma**2``:

* negative: PT-symmetric phase, two real eigenvalues, ``cos(alpha) = rho sin(varphi) / sigma``;
* positive: PT-broken phase, a complex-conjugate pair, ``cosh(alpha') = rho sin(varphi) / sigma``;
* zero: exceptional point, one doubly degenerate eigenvalue ``rho cos(varphi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import AlphaOutOfRange, NonDiagonalizablePath, NonzeroPhi, ValidationError

EP_TOL = 1e-9
PHI_TOL = 1e-12


@dataclass(frozen=True)
class PTParams:
    rho: float
    varphi: float
    sigma: float
    phi: float = 0.0

    def __post_init__(self):
        for name in ("rho", "varphi", "sigma", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.rho < 0 or self.sigma < 0:
            raise ValidationError("rho and sigma must be non-negative")
        for name in ("varphi", "phi"):
            angle = getattr(self, name)
            if not -math.pi < angle <= math.pi:
                raise ValidationError(f"{name}={angle} outside (-pi, pi]")

    @property
    def rho_sin(self) -> float:
        return self.rho * math.sin(self.varphi)

    @property
    def rho_cos(self) -> float:
        return self.rho * math.cos(self.varphi)


@dataclass(frozen=True)
class Symmetric:
    alpha: float


@dataclass(frozen=True)
class Broken:
    alpha_prime: float


@dataclass(frozen=True)
class ExceptionalPoint:
    pass


PhaseClass = Union[Symmetric, Broken, ExceptionalPoint]


def phase_tag(phase: PhaseClass) -> str:
    return {Symmetric: "symmetric", Broken: "broken", ExceptionalPoint: "exceptional"}[
        type(phase)
    ]


def build(p: PTParams) -> np.ndarray:
    diag = p.rho * complex(math.cos(p.varphi), math.sin(p.varphi))
    off = p.sigma * complex(math.cos(p.phi), math.sin(p.phi))
    return np.array([[diag, off], [off.conjugate(), diag.conjugate()]])


def is_pt_symmetric(h: np.ndarray, tol: float = 1e-12) -> bool:
    h = np.asarray(h)
    return bool(
        abs(h[0, 0] - np.conj(h[1, 1])) <= tol and abs(h[0, 1] - np.conj(h[1, 0])) <= tol
    )


def require_zero_phi(p: PTParams) -> None:
    """The eigenvector normalization only exists for phi = 0."""
    if abs(p.phi) > PHI_TOL:
        raise NonzeroPhi(f"phi={p.phi}: closed forms are derived for phi = 0 only")


def classify(p: PTParams, ep_tol: float = EP_TOL) -> PhaseClass:
    """Phase of ``p`` with its angle (symmetric) or rapidity (broken).

    The exceptional-point band is ``|rho^2 sin^2 varphi - sigma^2| <= ep_tol sigma^2``.
    In the broken phase ``alpha'`` is taken from ``|rho sin varphi|``; only
    ``sin(varphi) > 0`` is covered by the eigenvector formulas downstream.
    """
    if p.sigma == 0.0:
        raise NonDiagonalizablePath("sigma = 0: alpha / alpha' undefined")
    x = p.rho_sin
    gap = x * x - p.sigma**2
    if abs(gap) <= ep_tol * p.sigma**2:
        return ExceptionalPoint()
    if gap < 0:
        return Symmetric(math.acos(x / p.sigma))
    return Broken(math.asinh(_broken_gamma(abs(x), p.sigma) / p.sigma))


def _broken_gamma(x: float, sigma: float) -> float:
    # sqrt(x^2 - sigma^2) without the cancellation of the squared form
    return math.sqrt((x - sigma) * (x + sigma))


def eigenvalues(p: PTParams, ep_tol: float = EP_TOL) -> tuple[complex, complex]:
    """``(lambda_+, lambda_-)``; independent of phi.

    Symmetric phase: real pair, ``lambda_+`` the larger. Broken phase:
    conjugate pair, ``lambda_+`` with positive imaginary part. Exceptional
    point: ``rho cos(varphi)`` twice.
    """
    phase = classify(p, ep_tol)
    center = p.rho_cos
    x = abs(p.rho_sin)
    if isinstance(phase, Symmetric):
        root = math.sqrt((p.sigma - x) * (p.sigma + x))
        return complex(center + root, 0.0), complex(center - root, 0.0)
    if isinstance(phase, Broken):
        root = _broken_gamma(x, p.sigma)
        return complex(center, root), complex(center, -root)
    return complex(center, 0.0), complex(center, 0.0)


@dataclass(frozen=True)
class DerivedBrokenParams:
    """Broken-phase coordinates ``(omega, gamma, alpha')``.

    ``omega = rho cos(varphi)``, ``gamma = sqrt(rho^2 sin^2 varphi - sigma^2)``
    and ``cosh(alpha') = rho sin(varphi) / sigma``, so that
    ``E'_pm = omega +- i gamma`` and ``sigma = gamma / sinh(alpha')``.
    """

    omega: float
    gamma: float
    alpha_prime: float

    def __post_init__(self):
        if not (math.isfinite(self.omega) and math.isfinite(self.gamma)):
            raise ValidationError("omega and gamma must be finite")
        if not self.gamma > 0:
            raise ValidationError(f"gamma must be positive, got {self.gamma}")
        if not (math.isfinite(self.alpha_prime) and self.alpha_prime > 0):
            raise AlphaOutOfRange(f"alpha' must be positive, got {self.alpha_prime}")

    @classmethod
    def from_pt(cls, p: PTParams, ep_tol: float = EP_TOL) -> "DerivedBrokenParams":
        require_zero_phi(p)
        phase = classify(p, ep_tol)
        if not isinstance(phase, Broken):
            raise AlphaOutOfRange(f"parameters are in the {phase_tag(phase)} phase")
        if p.rho_sin <= 0:
            raise AlphaOutOfRange("broken-phase formulas need rho sin(varphi) > 0")
        gamma = _broken_gamma(p.rho_sin, p.sigma)
        return cls(p.rho_cos, gamma, phase.alpha_prime)

    def to_pt(self) -> PTParams:
        rho_sin = self.gamma / math.tanh(self.alpha_prime)
        rho = math.hypot(self.omega, rho_sin)
        # arccos(omega / rho), written as atan2 to stay accurate near 0 and pi
        varphi = math.atan2(rho_sin, self.omega)
        return PTParams(rho=rho, varphi=varphi, sigma=self.sigma)

    @property
    def sigma(self) -> float:
        return self.gamma / math.sinh(self.alpha_prime)

    @property
    def energies(self) -> tuple[complex, complex]:
        return complex(self.omega, self.gamma), complex(self.omega, -self.gamma)
