"""Neutral-meson mixing and its passive-PT reading.

The effective Hamiltonian ``H = M - (i/2) Gamma`` (``M``, ``Gamma`` Hermitian)
acting on ``(P0, P0bar)`` is solved through

    p^2 = M12 - (i/2) Gamma12,     q^2 = M12* - (i/2) Gamma12*
    kappa = (H22 - H11) / (2 p q)
    E1 = H11 + p q (kappa + sqrt(1 + kappa^2)),   E2 = H22 - p q (kappa + sqrt(1 + kappa^2))
    z = kappa / sqrt(1 + kappa^2)

A Hamiltonian with ``M11 = M22``, ``Im M12 = Gamma12 = 0`` splits into the
broken-phase PT Hamiltonian plus a global decay ``-i chi``:
``Gamma11 = 2(chi - rho sin varphi)``, ``Gamma22 = 2(chi + rho sin varphi)``,
``M12 = sigma``. Removing the decay by the gauge factor ``e^{chi t}`` maps the
physical probabilities onto the broken-phase ones with final flavors swapped
(ordinary vs PT pairing differ by the parity).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import csqrt
from .errors import DegenerateMixing, NotBrokenPhase, NotDecomposable, ValidationError, WidthNotPositive
from .hamiltonian import Broken, DerivedBrokenParams, PTParams, classify, require_zero_phi

JSON_KEYS = ("m11", "m22", "m12_re", "m12_im", "g11", "g22", "g12_re", "g12_im")


@dataclass(frozen=True)
class MesonParams:
    """Entries of ``M`` and ``Gamma``; the lower off-diagonals are the conjugates.

    Diagonal widths are not required to be non-negative: the passive-PT
    construction gives ``Gamma11 < 0`` whenever ``chi < rho sin(varphi)``.
    """

    m11: float
    m22: float
    m12: complex
    g11: float
    g22: float
    g12: complex

    def __post_init__(self):
        for name in ("m11", "m22", "g11", "g22"):
            value = getattr(self, name)
            if isinstance(value, complex) or not math.isfinite(value):
                raise ValidationError(f"{name} must be a finite real number, got {value!r}")
        for name in ("m12", "g12"):
            if not cmath.isfinite(complex(getattr(self, name))):
                raise ValidationError(f"{name} must be finite")

    def matrix(self) -> np.ndarray:
        m = np.array([[self.m11, self.m12], [np.conj(self.m12), self.m22]], dtype=complex)
        g = np.array([[self.g11, self.g12], [np.conj(self.g12), self.g22]], dtype=complex)
        return m - 0.5j * g

    @classmethod
    def from_json(cls, data: dict) -> "MesonParams":
        missing = [k for k in JSON_KEYS if k not in data]
        if missing:
            raise ValidationError(f"meson parameter file lacks keys: {', '.join(missing)}")
        extra = sorted(set(data) - set(JSON_KEYS))
        if extra:
            raise ValidationError(f"unknown meson parameter keys: {', '.join(extra)}")
        try:
            v = {k: float(data[k]) for k in JSON_KEYS}
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"meson parameters must be numbers: {exc}") from None
        return cls(
            m11=v["m11"],
            m22=v["m22"],
            m12=complex(v["m12_re"], v["m12_im"]),
            g11=v["g11"],
            g22=v["g22"],
            g12=complex(v["g12_re"], v["g12_im"]),
        )

    def to_json(self) -> dict:
        m12, g12 = complex(self.m12), complex(self.g12)
        return {
            "m11": self.m11,
            "m22": self.m22,
            "m12_re": m12.real,
            "m12_im": m12.imag,
            "g11": self.g11,
            "g22": self.g22,
            "g12_re": g12.real,
            "g12_im": g12.imag,
        }


@dataclass(frozen=True)
class MesonSolution:
    M1: float
    M2: float
    Gamma1: float
    Gamma2: float
    p: complex
    q: complex
    kappa: complex
    z: complex
    #: ``sqrt(1 - z^2)`` on the branch consistent with ``sqrt(1 + kappa^2)``
    sqrt_1mz2: complex
    dm: float
    Dm: float
    dG: float
    DG: float

    @property
    def Gbar(self) -> float:
        return 0.5 * (self.Gamma1 + self.Gamma2)

    @property
    def E1(self) -> complex:
        return complex(self.M1, -0.5 * self.Gamma1)

    @property
    def E2(self) -> complex:
        return complex(self.M2, -0.5 * self.Gamma2)

    @property
    def z_from_masses(self) -> complex:
        """``(dm - i dG/2) / (Dm - i DG/2)``, the second route to ``z``."""
        return complex(self.dm, -0.5 * self.dG) / complex(self.Dm, -0.5 * self.DG)


def solve(params: MesonParams) -> MesonSolution:
    h = params.matrix()
    p = csqrt(h[0, 1])
    q = csqrt(h[1, 0])
    pq = p * q
    if abs(pq) <= 1e-15 * float(np.max(np.abs(h))):
        raise DegenerateMixing("p q = 0: kappa undefined (no mixing)")
    kappa = (h[1, 1] - h[0, 0]) / (2 * pq)
    root = csqrt(1 + kappa * kappa)
    if root == 0:
        raise DegenerateMixing("1 + kappa^2 = 0: degenerate eigenvalues, z undefined")
    shift = pq * (kappa + root)
    e1 = complex(h[0, 0] + shift)
    e2 = complex(h[1, 1] - shift)
    if kappa == 0:
        z, sqrt_1mz2 = 0j, 1 + 0j
    else:
        z, sqrt_1mz2 = complex(kappa / root), complex(1 / root)
    M1, G1 = e1.real, -2.0 * e1.imag
    M2, G2 = e2.real, -2.0 * e2.imag
    return MesonSolution(
        M1=M1,
        M2=M2,
        Gamma1=G1,
        Gamma2=G2,
        p=p,
        q=q,
        kappa=complex(kappa),
        z=z,
        sqrt_1mz2=sqrt_1mz2,
        dm=params.m11 - params.m22,
        Dm=M2 - M1,
        dG=params.g11 - params.g22,
        DG=G2 - G1,
    )


def g_functions(sol: MesonSolution, t: float) -> tuple[complex, complex]:
    """``g_pm(t) = (e^{-i E2 t} +- e^{-i E1 t}) / 2``."""
    if t < 0:
        raise ValidationError("t must be non-negative")
    mode2 = cmath.exp(-1j * sol.E2 * t)
    mode1 = cmath.exp(-1j * sol.E1 * t)
    return 0.5 * (mode2 + mode1), 0.5 * (mode2 - mode1)


def evolve_p0(sol: MesonSolution, t: float) -> np.ndarray:
    """``|P0(t)>`` in the ``(P0, P0bar)`` basis."""
    gp, gm = g_functions(sol, t)
    return np.array([gp + sol.z * gm, -(sol.q / sol.p) * sol.sqrt_1mz2 * gm])


def evolve_p0bar(sol: MesonSolution, t: float) -> np.ndarray:
    gp, gm = g_functions(sol, t)
    return np.array([-(sol.p / sol.q) * sol.sqrt_1mz2 * gm, gp - sol.z * gm])


def transition_probabilities(sol: MesonSolution, t: float) -> tuple[float, float]:
    """``(P(P0 -> P0), P(P0 -> P0bar))`` from the closed expressions in ``z``."""
    if t < 0:
        raise ValidationError("t must be non-negative")
    e1 = math.exp(-sol.Gamma1 * t)
    e2 = math.exp(-sol.Gamma2 * t)
    eg = math.exp(-sol.Gbar * t)
    cos_t = math.cos(sol.Dm * t)
    sin_t = math.sin(sol.Dm * t)
    z = sol.z
    z_abs2 = abs(z) ** 2
    stay = (
        0.25 * (e1 + e2 + 2 * eg * cos_t)
        + 0.25 * (e1 + e2 - 2 * eg * cos_t) * z_abs2
        + 0.5 * (e2 - e1) * z.real
        + eg * sin_t * z.imag
    )
    flip = (
        abs(sol.q) ** 2
        / (4 * abs(sol.p) ** 2)
        * (e1 + e2 - 2 * eg * cos_t)
        * math.sqrt(max(0.0, 1 - 2 * (z * z).real + z_abs2**2))
    )
    return stay, flip


@dataclass(frozen=True)
class PassiveDecomposition:
    pt: PTParams
    chi: float
    #: ``chi > gamma``, i.e. both widths ``Gamma_{1,2} = 2(chi -+ gamma)`` positive
    positive_widths: bool


def compose_passive(pt: PTParams, chi: float) -> MesonParams:
    """Meson parameters of ``H_PT - i chi 1`` (the inverse of :func:`decompose_passive`)."""
    require_zero_phi(pt)
    x = pt.rho_sin
    return MesonParams(
        m11=pt.rho_cos,
        m22=pt.rho_cos,
        m12=complex(pt.sigma, 0.0),
        g11=-2.0 * (x - chi),
        g22=2.0 * (x + chi),
        g12=0j,
    )


def decompose_passive(params: MesonParams, tol: float = 1e-12) -> PassiveDecomposition:
    """Split ``H`` into a broken-phase PT Hamiltonian and a global decay.

    ``chi <= gamma`` is reported through ``positive_widths`` rather than
    rejected.
    """
    m12, g12 = complex(params.m12), complex(params.g12)
    scale = max(1.0, abs(params.m11), abs(params.m22), abs(m12))
    problems = []
    if abs(params.m11 - params.m22) > tol * scale:
        problems.append("M11 != M22")
    if abs(m12.imag) > tol * scale:
        problems.append("Im M12 != 0")
    if abs(g12) > tol * max(1.0, abs(params.g11), abs(params.g22)):
        problems.append("Gamma12 != 0")
    if m12.real < 0:
        problems.append("Re M12 < 0 (off-diagonal phase pi)")
    if problems:
        raise NotDecomposable("; ".join(problems))
    rho_cos = 0.5 * (params.m11 + params.m22)
    rho_sin = (params.g22 - params.g11) / 4.0
    chi = (params.g11 + params.g22) / 4.0
    pt = PTParams(rho=math.hypot(rho_cos, rho_sin), varphi=math.atan2(rho_sin, rho_cos), sigma=m12.real)
    if not isinstance(classify(pt), Broken):
        raise NotBrokenPhase("rho^2 sin^2(varphi) <= sigma^2: not a broken-phase decomposition")
    gamma = math.sqrt((abs(rho_sin) - pt.sigma) * (abs(rho_sin) + pt.sigma))
    return PassiveDecomposition(pt=pt, chi=chi, positive_widths=chi > gamma)


def decayed_probabilities(pt: PTParams, chi: float, t: float) -> tuple[float, float]:
    """Physical ``(P_aa, P_ab)`` of the passive-PT system.

    ``sinh^2(alpha' + gamma t) / sinh^2(alpha') e^{-2 chi t}`` and
    ``sinh^2(gamma t) / sinh^2(alpha') e^{-2 chi t}``, evaluated as squared
    differences of exponentials so that large ``t`` neither overflows nor
    cancels.
    """
    d = DerivedBrokenParams.from_pt(pt)
    if not chi > d.gamma:
        raise WidthNotPositive(f"chi={chi} <= gamma={d.gamma}: Gamma_1 = 2(chi - gamma) <= 0")
    if t < 0:
        raise ValidationError("t must be non-negative")
    sh = math.sinh(d.alpha_prime)

    def damped_sinh(x: float) -> float:
        return 0.5 * (math.exp(x - chi * t) - math.exp(-x - chi * t))

    gt = d.gamma * t
    return (damped_sinh(d.alpha_prime + gt) / sh) ** 2, (damped_sinh(gt) / sh) ** 2


def gauge_transform_factor(chi: float, t: float) -> float:
    """``e^{chi t}``: multiplying states by it removes the global decay."""
    if t < 0:
        raise ValidationError("t must be non-negative")
    return math.exp(chi * t)


def meson_discrete_ops() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Matrices of C, P and CP on ``(P0, P0bar)``; CP equals the PT parity."""
    c = np.array([[0, -1], [-1, 0]], dtype=complex)
    p = -np.eye(2, dtype=complex)
    return c, p, c @ p
