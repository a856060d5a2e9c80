import math

import numpy as np
import pytest
from hypothesis import strategies as st

from pt2level.hamiltonian import DerivedBrokenParams, PTParams

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)
matrices = st.lists(cplx, min_size=4, max_size=4).map(lambda v: np.array(v).reshape(2, 2))

alpha_primes = st.floats(0.05, 3.0)
gammas = st.floats(0.05, 2.0)
omegas = st.floats(-3.0, 3.0)
broken = st.builds(DerivedBrokenParams, omegas, gammas, alpha_primes)
symmetric_alphas = st.floats(0.05, math.pi / 2)


@st.composite
def pt_params(draw):
    return PTParams(
        rho=draw(st.floats(0, 5)),
        varphi=draw(st.floats(-math.pi, math.pi).filter(lambda x: x > -math.pi)),
        sigma=draw(st.floats(0.1, 5)),
    )


@st.composite
def symmetric_pt(draw):
    """phi = 0 and rho sin(varphi) / sigma in [-0.95, 0.95]."""
    sigma = draw(st.floats(0.1, 3))
    ratio = draw(st.floats(-0.95, 0.95))
    varphi = draw(st.floats(0.05, math.pi - 0.05)) * (1 if ratio >= 0 else -1)
    return PTParams(rho=abs(ratio) * sigma / abs(math.sin(varphi)), varphi=varphi, sigma=sigma)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
