"""Broken-phase time evolution and flavor transition probabilities.

Amplitudes follow the convention ``A_{xy} = <u_y | u_x(t)>_PT``: the first
index is the evolved initial flavor, the second the (un-evolved) projection
target. With ``omega = rho cos(varphi)``, ``gamma = sqrt(rho^2 sin^2 varphi - sigma^2)``
and the rapidity ``alpha'``::

    A_aa = A_bb = -i e^{-i omega t} sinh(gamma t) / sinh(alpha')
    A_ab        =    e^{-i omega t} sinh(alpha' + gamma t) / sinh(alpha')
    A_ba        =    e^{-i omega t} sinh(alpha' - gamma t) / sinh(alpha')

The probabilities ``|A|^2`` are neither bounded by one nor conserved and are
returned as they are.
"""

from __future__ import annotations

import cmath
import enum
import math
from typing import NamedTuple

import numpy as np

from .algebra import PARITY, expm_oracle
from .errors import NearEP, ValidationError
from .hamiltonian import DerivedBrokenParams
from .spectral import NEAR_EP, eigvecs_broken, ep_state

_SQRT_HALF = math.sqrt(0.5)


class FlavorState(enum.Enum):
    A = "a"
    B = "b"
    TILDE_A = "tilde_a"
    TILDE_B = "tilde_b"

    @property
    def vector(self) -> np.ndarray:
        return {
            FlavorState.A: np.array([1.0, 0.0], dtype=complex),
            FlavorState.B: np.array([0.0, 1.0], dtype=complex),
            FlavorState.TILDE_A: np.array([_SQRT_HALF, _SQRT_HALF], dtype=complex),
            FlavorState.TILDE_B: np.array([_SQRT_HALF, -_SQRT_HALF], dtype=complex),
        }[self]


class AmplitudeTable(NamedTuple):
    aa: complex
    ab: complex
    ba: complex
    bb: complex


class FlavorProbabilities(NamedTuple):
    aa: float
    ab: float
    ba: float
    bb: float


def _sinh_alpha(alpha_prime: float) -> float:
    sh = math.sinh(alpha_prime)
    if sh < NEAR_EP:
        raise NearEP(f"sinh(alpha')={sh:.3g}: too close to the exceptional point")
    return sh


def diagonalizer(alpha_prime: float) -> tuple[np.ndarray, np.ndarray]:
    """``(A', A'^-1)`` with ``A' H A'^-1 = diag(E'_+, E'_-)``.

    The columns of ``A'^-1`` are ``u'_+`` and ``u'_-``; ``A'^-1`` is the
    transpose of ``A'`` and ``A'`` is Hermitian.
    """
    norm = 1.0 / math.sqrt(2.0 * _sinh_alpha(alpha_prime))
    up = math.exp(alpha_prime / 2)
    down = math.exp(-alpha_prime / 2)
    a = norm * np.array([[up, -1j * down], [1j * down, up]])
    return a, a.T.copy()


def evolve_energy_state(sign: int, params: DerivedBrokenParams, t: float) -> np.ndarray:
    """``u'_pm(t) = exp(-i omega t +- gamma t) u'_pm(0)``; ``sign`` is +1 or -1."""
    if sign not in (1, -1):
        raise ValidationError(f"sign must be +1 or -1, got {sign}")
    _sinh_alpha(params.alpha_prime)
    u_plus, u_minus = eigvecs_broken(params.alpha_prime)
    phase = cmath.exp(complex(sign * params.gamma * t, -params.omega * t))
    return phase * (u_plus if sign == 1 else u_minus)


def evolve_flavor_state(state: FlavorState, params: DerivedBrokenParams, t: float) -> np.ndarray:
    """Evolve a flavor state through its energy-eigenstate expansion ``A'^-1``."""
    a, _ = diagonalizer(params.alpha_prime)
    coeffs = a @ state.vector
    return (
        coeffs[0] * evolve_energy_state(1, params, t)
        + coeffs[1] * evolve_energy_state(-1, params, t)
    )


def amplitudes_pt(params: DerivedBrokenParams, t: float) -> AmplitudeTable:
    sh = _sinh_alpha(params.alpha_prime)
    phase = cmath.exp(-1j * params.omega * t)
    gt = params.gamma * t
    aa = -1j * phase * (math.sinh(gt) / sh)
    ab = phase * (math.sinh(params.alpha_prime + gt) / sh)
    ba = phase * (math.sinh(params.alpha_prime - gt) / sh)
    return AmplitudeTable(aa, ab, ba, aa)


def probabilities_pt(params: DerivedBrokenParams, t: float) -> FlavorProbabilities:
    sh = _sinh_alpha(params.alpha_prime)
    gt = params.gamma * t
    same = (math.sinh(gt) / sh) ** 2
    return FlavorProbabilities(
        same,
        (math.sinh(params.alpha_prime + gt) / sh) ** 2,
        (math.sinh(params.alpha_prime - gt) / sh) ** 2,
        same,
    )


def amplitudes_cpt_flavor(params: DerivedBrokenParams, t: float) -> AmplitudeTable:
    """Amplitudes onto the CPT flavor states ``(1, +-1)/sqrt(2)``."""
    amp = amplitudes_pt(params, t)
    return AmplitudeTable(
        _SQRT_HALF * (amp.aa + amp.ab),
        _SQRT_HALF * (amp.aa - amp.ab),
        _SQRT_HALF * (amp.ba + amp.bb),
        _SQRT_HALF * (amp.ba - amp.bb),
    )


def probabilities_cpt_flavor(params: DerivedBrokenParams, t: float) -> FlavorProbabilities:
    # A_aa is imaginary and A_ab real up to the common phase: no cross term
    sh = _sinh_alpha(params.alpha_prime)
    gt = params.gamma * t
    same = math.sinh(gt) ** 2
    to_a = (same + math.sinh(params.alpha_prime + gt) ** 2) / (2.0 * sh * sh)
    to_b = (same + math.sinh(params.alpha_prime - gt) ** 2) / (2.0 * sh * sh)
    return FlavorProbabilities(to_a, to_a, to_b, to_b)


def broken_hamiltonian(params: DerivedBrokenParams) -> np.ndarray:
    """``H`` rebuilt from ``(omega, gamma, alpha')``: ``rho sin(varphi) = gamma coth(alpha')``."""
    x = params.gamma / math.tanh(params.alpha_prime)
    return np.array([[complex(params.omega, x), params.sigma], [params.sigma, complex(params.omega, -x)]])


def amplitudes_pt_oracle(params: DerivedBrokenParams, t: float) -> AmplitudeTable:
    """The PT-paired amplitudes ``u_y^dagger P U(t) u_x`` from the brute-force exponential."""
    pu = PARITY @ expm_oracle(broken_hamiltonian(params), t)
    return AmplitudeTable(complex(pu[0, 0]), complex(pu[1, 0]), complex(pu[0, 1]), complex(pu[1, 1]))


def probabilities_pt_oracle(params: DerivedBrokenParams, t: float) -> FlavorProbabilities:
    return FlavorProbabilities(*(abs(a) ** 2 for a in amplitudes_pt_oracle(params, t)))


def evolve_ep_state(center: float, t: float) -> np.ndarray:
    """``u_0(t) = exp(-i E_0 t) u_0`` at the exceptional point, ``E_0 = rho cos(varphi)``.

    Only the degenerate eigenvector is covered. The Hamiltonian is defective
    there, so a generic state (flavor states included) also picks up a term
    linear in ``t``; no transition formulas are offered at the EP.
    """
    return cmath.exp(-1j * center * t) * ep_state()
