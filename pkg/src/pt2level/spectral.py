"""Normalized eigenvectors, metric and charge operators, bilinear forms.

Symmetric phase (``cos(alpha) = rho sin(varphi) / sigma``)::

    u_+ = (e^{+i pi/4} e^{-i alpha/2}, e^{-i pi/4} e^{+i alpha/2}) / sqrt(2 sin alpha)
    u_- = i (e^{+i pi/4} e^{+i alpha/2}, e^{-i pi/4} e^{-i alpha/2}) / sqrt(2 sin alpha)
    eta = [[csc, -i cot], [i cot, csc]],   C = [[i cot, csc], [csc, -i cot]]

Broken phase (``cosh(alpha') = rho sin(varphi) / sigma``)::

    u'_+ = (e^{+alpha'/2}, -i e^{-alpha'/2}) / sqrt(2 sinh alpha')
    u'_- = (+i e^{-alpha'/2}, e^{+alpha'/2}) / sqrt(2 sinh alpha')
    eta' = P,   C = 1

The broken-phase normalization is fixed by the PT form: ``<u'_s|u'_s>_PT = 0``
and ``<u'_s|u'_-s>_PT = 1``. Substituting ``alpha' = -i alpha`` into the
broken-phase formulas (principal square root) reproduces the symmetric ones
exactly, which is why :func:`eigvecs_broken` accepts complex rapidities.

All formulas assume ``phi = 0``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import algebra
from .algebra import IDENTITY, PARITY
from .errors import AlphaOutOfRange, EPHasNoMetric, NearEP
from .hamiltonian import (
    Broken,
    ExceptionalPoint,
    PhaseClass,
    PTParams,
    Symmetric,
    classify,
    eigenvalues,
    require_zero_phi,
)

NEAR_EP = 1e-8

_E_PI4 = cmath.exp(0.25j * math.pi)


class InnerProductKind(enum.Enum):
    ORDINARY = "ordinary"
    PT = "pt"
    ETA = "eta"
    CPT = "cpt"


def eigvecs_symmetric(alpha: float) -> tuple[np.ndarray, np.ndarray]:
    # alpha in (pi/2, pi) covers sin(varphi) < 0; the formulas hold unchanged
    if not 0.0 < alpha < math.pi:
        raise AlphaOutOfRange(f"alpha={alpha} outside (0, pi)")
    s = math.sin(alpha)
    if s < NEAR_EP:
        raise NearEP(f"sin(alpha)={s:.3g}: normalization diverges at the EP")
    norm = 1.0 / math.sqrt(2.0 * s)
    half = cmath.exp(0.5j * alpha)
    u_plus = norm * np.array([_E_PI4 / half, half / _E_PI4])
    u_minus = 1j * norm * np.array([_E_PI4 * half, 1.0 / (_E_PI4 * half)])
    return u_plus, u_minus


def eigvecs_broken(alpha_prime: complex) -> tuple[np.ndarray, np.ndarray]:
    """Broken-phase ``(u'_+, u'_-)``.

    A real ``alpha_prime`` must be positive. Complex values are accepted for
    the continuation ``alpha' -> -i alpha`` and only guarded against the
    divergence of ``1 / sqrt(2 sinh alpha')``.
    """
    if isinstance(alpha_prime, complex) and alpha_prime.imag != 0.0:
        a = alpha_prime
    else:
        a = float(getattr(alpha_prime, "real", alpha_prime))
        if not a > 0.0:
            raise AlphaOutOfRange(f"alpha'={a} must be positive in the broken phase")
    sh = cmath.sinh(a)
    if abs(sh) < NEAR_EP:
        raise NearEP(f"|sinh(alpha')|={abs(sh):.3g}: normalization diverges at the EP")
    norm = 1.0 / algebra.csqrt(2.0 * sh)
    up = cmath.exp(a / 2)
    down = cmath.exp(-a / 2)
    return norm * np.array([up, -1j * down]), norm * np.array([1j * down, up])


def energies_broken(center: float, sigma: float, alpha_prime: complex) -> tuple[complex, complex]:
    """``E'_pm = rho cos(varphi) +- i sigma sinh(alpha')``; complex alpha' allowed."""
    shift = 1j * sigma * cmath.sinh(alpha_prime)
    return complex(center + shift), complex(center - shift)


def ep_state() -> np.ndarray:
    """Degenerate eigenvector at the EP, unit ordinary norm."""
    return np.array([_E_PI4, 1.0 / _E_PI4]) / math.sqrt(2.0)


def metric(phase: PhaseClass) -> np.ndarray:
    if isinstance(phase, Symmetric):
        csc = 1.0 / math.sin(phase.alpha)
        cot = math.cos(phase.alpha) / math.sin(phase.alpha)
        return np.array([[csc, -1j * cot], [1j * cot, csc]])
    if isinstance(phase, Broken):
        return PARITY.copy()
    raise EPHasNoMetric("no metric operator is constructed at the exceptional point")


def charge_op(phase: PhaseClass) -> np.ndarray:
    if isinstance(phase, Symmetric):
        csc = 1.0 / math.sin(phase.alpha)
        cot = math.cos(phase.alpha) / math.sin(phase.alpha)
        return np.array([[1j * cot, csc], [csc, -1j * cot]])
    if isinstance(phase, Broken):
        return IDENTITY.copy()
    raise EPHasNoMetric("no charge operator is constructed at the exceptional point")


def inner(kind: InnerProductKind, phase: PhaseClass, psi, chi) -> complex:
    """Bilinear form ``psi^dagger . G . chi`` for the chosen kernel ``G``.

    ORDINARY uses ``G = 1``, PT uses ``P``, ETA the metric of ``phase`` and
    CPT uses ``P C``. In the broken phase the last three coincide; none of
    them is positive there.
    """
    psi = np.asarray(psi, dtype=complex)
    chi = np.asarray(chi, dtype=complex)
    if kind is InnerProductKind.ORDINARY:
        kernel = IDENTITY
    elif kind is InnerProductKind.PT:
        kernel = PARITY
    elif kind is InnerProductKind.ETA:
        kernel = metric(phase)
    else:
        kernel = PARITY @ charge_op(phase)
    return complex(np.conj(psi) @ kernel @ chi)


@dataclass(frozen=True)
class SpectralData:
    phase: PhaseClass
    e_plus: complex
    e_minus: complex
    u_plus: np.ndarray
    u_minus: np.ndarray
    #: left-eigenvector carriers, ``P u_pm``
    v_plus: np.ndarray
    v_minus: np.ndarray
    eta: np.ndarray
    c_op: np.ndarray


def spectral_data(p: PTParams, ep_tol: float | None = None) -> SpectralData:
    """Everything about ``build(p)`` in one bundle; ``phi`` must be 0.

    Raises ``EPHasNoMetric`` at the exceptional point and ``AlphaOutOfRange``
    for the broken phase with ``sin(varphi) < 0``.
    """
    require_zero_phi(p)
    phase = classify(p) if ep_tol is None else classify(p, ep_tol)
    if isinstance(phase, ExceptionalPoint):
        raise EPHasNoMetric("spectral data is not defined at the exceptional point")
    e_plus, e_minus = eigenvalues(p) if ep_tol is None else eigenvalues(p, ep_tol)
    if isinstance(phase, Symmetric):
        u_plus, u_minus = eigvecs_symmetric(phase.alpha)
    else:
        if p.rho_sin <= 0:
            raise AlphaOutOfRange("broken-phase eigenvectors need rho sin(varphi) > 0")
        u_plus, u_minus = eigvecs_broken(phase.alpha_prime)
    return SpectralData(
        phase=phase,
        e_plus=e_plus,
        e_minus=e_minus,
        u_plus=u_plus,
        u_minus=u_minus,
        v_plus=PARITY @ u_plus,
        v_minus=PARITY @ u_minus,
        eta=metric(phase),
        c_op=charge_op(phase),
    )
