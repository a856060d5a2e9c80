"""2x2 complex linear algebra and the brute-force propagator.

Matrices are ``(2, 2)`` complex128 numpy arrays and state vectors are ``(2,)``
complex128 arrays. Nothing here knows about the closed-form solutions in the
rest of the package: :func:`expm_oracle` and :func:`eig2` are the independent
references those solutions are tested against.

Units are natural (hbar = 1); times, energies and widths are dimensionless.
"""

from __future__ import annotations

import cmath
import math
from typing import NamedTuple

import numpy as np

from .errors import NonConvergence

IDENTITY = np.eye(2, dtype=complex)
IDENTITY.setflags(write=False)

#: Parity: swaps the two basis states.
PARITY = np.array([[0, 1], [1, 0]], dtype=complex)
PARITY.setflags(write=False)

DEFECTIVE_TOL = 1e-10


def matrix(m00, m01, m10, m11) -> np.ndarray:
    return np.array([[m00, m01], [m10, m11]], dtype=complex)


def vector(c0, c1) -> np.ndarray:
    return np.array([c0, c1], dtype=complex)


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=complex) @ np.asarray(b, dtype=complex)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def inv2(m: np.ndarray) -> np.ndarray:
    """Closed-form inverse of a 2x2 matrix."""
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det


def pt_apply(v: np.ndarray) -> np.ndarray:
    """Anti-linear PT action: parity after complex conjugation."""
    return PARITY @ np.conj(v)


def csqrt(z: complex) -> complex:
    """Principal square root with a signed-zero imaginary part read as +0.

    ``cmath.sqrt(-4 - 0j)`` is ``-2j``; products of purely imaginary numbers
    routinely produce that ``-0.0``. Every negative real argument is therefore
    sent to the ``+i`` side of the cut.
    """
    z = complex(z)
    if z.imag == 0.0:
        z = complex(z.real, 0.0)
    return cmath.sqrt(z)


def max_abs(m) -> float:
    return float(np.max(np.abs(m)))


# --------------------------------------------------------------------------
# propagator oracle
# --------------------------------------------------------------------------

_WORK = np.clongdouble


def _taylor_exp(a: np.ndarray, max_terms: int = 80) -> np.ndarray:
    result = np.eye(2, dtype=_WORK)
    term = np.eye(2, dtype=_WORK)
    for k in range(1, max_terms + 1):
        term = term @ a / k
        result = result + term
        if np.max(np.abs(term)) <= 1e-22 * np.max(np.abs(result)):
            return result
    raise NonConvergence(f"Taylor series did not settle within {max_terms} terms")


def _scale_and_square(a: np.ndarray, halvings: int) -> np.ndarray:
    x = _taylor_exp(a / _WORK(2) ** halvings)
    for _ in range(halvings):
        x = x @ x
    return x


def expm_oracle(
    h: np.ndarray, t: float, rtol: float = 1e-13, max_refinements: int = 30
) -> np.ndarray:
    """Return ``exp(-i h t)`` by scaling and squaring of the Taylor series.

    The trace part is split off exactly (it commutes with everything) and the
    traceless remainder is exponentiated in extended precision
    (``np.clongdouble``): in plain double the squaring chain alone drifts by
    1e-13..1e-11 between refinements for non-normal generators. The number of
    halvings starts where ``||A|| / 2**s <= 1/2`` and grows one at a time until
    two successive results agree entrywise to ``rtol`` relative to the largest
    entry.

    Raises
    ------
    NonConvergence
        If no two successive refinements agree after ``max_refinements``
        extra halvings.
    """
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    h = np.asarray(h, dtype=complex)
    if not np.all(np.isfinite(h)):
        raise ValueError("generator has non-finite entries")
    half_trace = (h[0, 0] + h[1, 1]) / 2
    a = (-1j * t) * (h.astype(_WORK) - _WORK(half_trace) * np.eye(2, dtype=_WORK))
    norm = float(np.max(np.sum(np.abs(a), axis=0)))
    s = max(0, math.ceil(math.log2(norm)) + 1) if norm > 0.0 else 0
    prev = _scale_and_square(a, s)
    for _ in range(max_refinements):
        s += 1
        cur = _scale_and_square(a, s)
        scale = max(float(np.max(np.abs(cur))), np.finfo(float).tiny)
        if float(np.max(np.abs(cur - prev))) <= rtol * scale:
            return cmath.exp(-1j * t * half_trace) * cur.astype(complex)
        prev = cur
    raise NonConvergence(
        f"exp(-i h t) refinements disagree after {max_refinements} halvings "
        f"(||h t||_1 = {norm:.3g})"
    )


# --------------------------------------------------------------------------
# generic eigensolver
# --------------------------------------------------------------------------

class Eig2(NamedTuple):
    e1: complex
    e2: complex
    v1: np.ndarray
    v2: np.ndarray
    #: Eigenvectors linearly dependent: the matrix sits at (or numerically
    #: on top of) an exceptional point.
    defective: bool


def _order_key_first(l1: complex, l2: complex) -> bool:
    """True if ``l1`` comes first: real part descending, then imaginary."""
    scale = max(abs(l1), abs(l2))
    if abs(l1.real - l2.real) > 1e-12 * scale:
        return l1.real > l2.real
    return l1.imag >= l2.imag


def _eigvec(h: np.ndarray, lam: complex, fallback: int) -> np.ndarray:
    a = np.array([h[0, 1], lam - h[0, 0]])
    b = np.array([lam - h[1, 1], h[1, 0]])
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    scale = max_abs(h)
    if max(na, nb) <= 1e-14 * scale or max(na, nb) == 0.0:
        # scalar matrix: any basis diagonalizes it
        return IDENTITY[fallback].copy()
    return a if na >= nb else b


def eig2(h: np.ndarray, defective_tol: float = DEFECTIVE_TOL) -> Eig2:
    """Eigenvalues and unnormalized right eigenvectors of a 2x2 matrix.

    Eigenvalues come from the characteristic polynomial,
    ``lambda = tr/2 +- sqrt((tr/2)**2 - det)``, with the discriminant written
    as ``((h00 - h11)/2)**2 + h01*h10`` to avoid cancellation.

    Linear dependence is measured by ``sin(theta)**2`` where ``theta`` is the
    angle between the two eigenvectors. At a constructed exceptional point
    the rounded discriminant is ~1e-16, so the computed eigenvectors still
    differ by an angle ~1e-8; the squared sine puts that at the 1e-16 level,
    well inside ``defective_tol``.
    """
    h = np.asarray(h, dtype=complex)
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix has non-finite entries")
    half_trace = (h[0, 0] + h[1, 1]) / 2
    disc = ((h[0, 0] - h[1, 1]) / 2) ** 2 + h[0, 1] * h[1, 0]
    root = csqrt(disc)
    l1, l2 = complex(half_trace + root), complex(half_trace - root)
    if not _order_key_first(l1, l2):
        l1, l2 = l2, l1
    v1 = _eigvec(h, l1, 0)
    v2 = _eigvec(h, l2, 1)
    det = v1[0] * v2[1] - v1[1] * v2[0]
    sin_theta = abs(det) / (np.linalg.norm(v1) * np.linalg.norm(v2))
    return Eig2(l1, l2, v1, v2, bool(sin_theta**2 <= defective_tol))
