"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (``pytest tests/test_acceptance.py -v -s``) or directly as a
script. Random draws use fixed seeds.
"""

from __future__ import annotations

import csv
import io
import math
import sys
import time
from typing import Callable

import numpy as np
import pytest

from pt2level import cli
from pt2level.algebra import IDENTITY, PARITY, csqrt, inv2
from pt2level.dynamics import evolve_energy_state, probabilities_cpt_flavor, probabilities_pt
from pt2level.exceptional import CaseI, CaseII, CaseIII, CaseIV, eigenvalues_open, is_ep
from pt2level.hamiltonian import Broken, DerivedBrokenParams, PTParams, Symmetric, build, classify, eigenvalues
from pt2level.meson import compose_passive, decayed_probabilities, meson_discrete_ops, solve, transition_probabilities
from pt2level.spectral import (
    charge_op,
    eigvecs_broken,
    eigvecs_symmetric,
    energies_broken,
    metric,
)

Result = tuple[bool, str]


def pt_pair(psi, chi) -> complex:
    return complex(np.conj(psi) @ PARITY @ chi)


def broken_grid(seed: int = 2024, n_params: int = 200, n_times: int = 20):
    """The shared broken-phase sample: (params, times on [0, 5/gamma])."""
    draws = cli.sample_broken_params(np.random.default_rng(seed), n_params)
    return [(d, np.linspace(0.0, 5.0 / d.gamma, n_times)) for d in draws]


# --- criteria -------------------------------------------------------------


def criterion_1_fig1() -> Result:
    spec = cli.SweepSpec(command="fig1", params={"xi": [2.0, 3.0, 4.0], "n": 401}, output=None)
    rows = list(csv.DictReader(io.StringIO(cli.render(cli.BUILDERS["fig1"](spec), "csv"))))
    step = 2.0 / 400
    worst = 0.0
    ok = len(rows) == 3 * 401
    for xi in (2.0, 3.0, 4.0):
        mine = [r for r in rows if float(r["xi"]) == xi]
        tags = [r["phase"] for r in mine]
        for r in mine:
            s = float(r["sin_varphi"])
            root = csqrt(1.0 - xi * xi * s * s)
            center = xi * math.sqrt(1.0 - s * s)
            plus = complex(float(r["re_plus"]), float(r["im_plus"]))
            minus = complex(float(r["re_minus"]), float(r["im_minus"]))
            worst = max(worst, abs(plus - (center + root)), abs(minus - (center - root)))
            if r["phase"] == "symmetric" and (float(r["im_plus"]) != 0.0 or float(r["im_minus"]) != 0.0):
                ok = False
        # phase boundaries: sign changes of the symmetric/other split
        edges = [
            0.5 * (float(mine[i]["sin_varphi"]) + float(mine[i + 1]["sin_varphi"]))
            for i in range(len(mine) - 1)
            if (tags[i] == "symmetric") != (tags[i + 1] == "symmetric")
        ]
        if len(edges) != 2 or any(abs(abs(e) - 1.0 / xi) > step for e in edges):
            ok = False
    ok = ok and worst <= 1e-12
    return ok, f"max |lambda - closed form| = {worst:.2e}; boundaries at |sin varphi| = 1/xi within one step"


def criterion_2_oracle() -> Result:
    worst_abs = worst_rel = 0.0
    for d, _ in broken_grid():
        a, r = cli.oracle_deviation(d, 20)
        worst_abs, worst_rel = max(worst_abs, a), max(worst_rel, r)
    return worst_rel <= 1e-10, f"max rel dev {worst_rel:.2e} (abs {worst_abs:.2e}), 200 params x 20 times"


def criterion_3_pt_norm() -> Result:
    """Absolute deviation, tolerance 1e-11.

    The detail line also reports the deviation relative to ``|u'(t)|^2``,
    the size of the terms the pairing cancels; in double precision that
    ratio, not the absolute value, is what rounding bounds.
    """
    worst = worst_scaled = 0.0
    for d, times in broken_grid():
        for t in times:
            up = evolve_energy_state(1, d, float(t))
            um = evolve_energy_state(-1, d, float(t))
            dev = max(
                abs(pt_pair(up, up)),
                abs(pt_pair(um, um)),
                abs(pt_pair(up, um) - 1),
                abs(pt_pair(um, up) - 1),
            )
            worst = max(worst, dev)
            worst_scaled = max(worst_scaled, dev / max(1.0, float(np.vdot(up, up).real)))
    return worst <= 1e-11, (
        f"max |<u'(t)|u'(t)>_PT - (1 - delta)| = {worst:.2e}; relative to |u'(t)|^2: {worst_scaled:.2e}"
    )


def criterion_4_differences() -> Result:
    """Absolute deviation, tolerance 1e-11; the scaled value divides by the largest probability differenced."""
    worst = worst_scaled = worst_tilde = 0.0
    for d, times in broken_grid():
        sh = math.sinh(d.alpha_prime)
        for t in times:
            pr = probabilities_pt(d, float(t))
            gt = d.gamma * float(t)
            dev = max(
                abs(pr.aa - pr.ab + math.sinh(d.alpha_prime + 2 * gt) / sh),
                abs(pr.ba - pr.bb - math.sinh(d.alpha_prime - 2 * gt) / sh),
            )
            worst = max(worst, dev)
            worst_scaled = max(worst_scaled, dev / max(1.0, pr.ab, pr.ba))
            tp = probabilities_cpt_flavor(d, float(t))
            worst_tilde = max(worst_tilde, abs(tp.aa - tp.ab), abs(tp.ba - tp.bb))
    ok = worst <= 1e-11 and worst_tilde <= 1e-12
    return ok, f"max dev {worst:.2e} (relative to max P: {worst_scaled:.2e}); tilde differences {worst_tilde:.2e}"


def criterion_5_continuation() -> Result:
    rng = np.random.default_rng(5)
    worst = 0.0
    for alpha in rng.uniform(0.01, math.pi / 2, 50):
        sigma, varphi = rng.uniform(0.2, 3.0), rng.uniform(0.1, math.pi - 0.1)
        p = PTParams(sigma * math.cos(alpha) / math.sin(varphi), varphi, sigma)
        assert isinstance(classify(p), Symmetric)
        sym_vecs = eigvecs_symmetric(alpha)
        cont_vecs = eigvecs_broken(complex(0.0, -alpha))
        sym_e = eigenvalues(p)
        cont_e = energies_broken(p.rho_cos, sigma, complex(0.0, -alpha))
        for a, b in zip(sym_vecs, cont_vecs):
            worst = max(worst, float(np.max(np.abs(a - b))))
        for a, b in zip(sym_e, cont_e):
            worst = max(worst, abs(a - b) / max(1.0, sigma))
    return worst <= 1e-12, f"max entrywise dev {worst:.2e} over 50 alpha"


def criterion_6_meson() -> Result:
    rng = np.random.default_rng(6)
    worst = worst_z = worst_qp = worst_tail = 0.0
    for _ in range(100):
        sigma = rng.uniform(0.2, 2.0)
        varphi = rng.uniform(0.05, math.pi - 0.05)
        ratio = math.cosh(rng.uniform(0.05, 3.0))
        pt = PTParams(ratio * sigma / math.sin(varphi), varphi, sigma)
        d = DerivedBrokenParams.from_pt(pt)
        u = 3.0 - rng.uniform(0.0, 3.0)
        chi = d.gamma * (1.0 + u)
        sol = solve(compose_passive(pt, chi))
        for t in np.linspace(0.0, 20.0 / d.gamma, 60):
            stay, flip = transition_probabilities(sol, float(t))
            paa, pab = decayed_probabilities(pt, chi, float(t))
            worst = max(worst, abs(stay - paa), abs(flip - pab))
        t_end = 50.0 / (chi - d.gamma)
        worst_tail = max(worst_tail, *transition_probabilities(sol, t_end), *decayed_probabilities(pt, chi, t_end))
        worst_z = max(worst_z, abs(sol.z + 1.0 / math.tanh(d.alpha_prime)))
        worst_qp = max(worst_qp, abs(sol.q / sol.p - 1.0))
    ok = worst <= 1e-11 and worst_tail < 1e-12 and worst_z <= 1e-12 and worst_qp <= 1e-12
    return ok, (
        f"paths agree to {worst:.2e}; tail max {worst_tail:.2e}; "
        f"|z + coth a'| {worst_z:.2e}; |q/p - 1| {worst_qp:.2e}"
    )


def criterion_7_ep() -> Result:
    rng = np.random.default_rng(7)
    ok = True
    worst_eig = 0.0
    for _ in range(50):
        w, g1, g2 = rng.uniform(-2, 2), rng.uniform(0.05, 2), rng.uniform(-2, 2)
        gamma = rng.uniform(0.05, 2)
        makers: list[Callable[[float], object]] = [
            lambda k: CaseI(w, g1, g2, k),
            lambda k: CaseII(w, gamma, 1.0, k),
            lambda k: CaseIII(w, gamma, k),
            lambda k: CaseIV(w, gamma, k),
        ]
        kappas = [(g1 - g2) / 2, gamma, gamma, gamma / 2]
        for make, kappa in zip(makers, kappas):
            ok &= is_ep(make(kappa))
            ok &= not is_ep(make(kappa * (1 + 1e-3)))
        for kappa in (gamma, gamma * (1 + 1e-3)):
            flags = {is_ep(CaseII(w, gamma, chi, kappa)) for chi in (0.0, 1.0, 10.0)}
            ok &= len(flags) == 1
        for chi in (0.0, 1.0, 10.0):
            plus, minus = eigenvalues_open(CaseII(w, gamma, chi, gamma))
            target = complex(w, -chi)
            worst_eig = max(worst_eig, abs(plus - target), abs(minus - target))
    ok = bool(ok) and worst_eig <= 1e-12
    return ok, f"cases i-iv detected and broken by 1e-3 kappa shifts; case-ii EP eigenvalue dev {worst_eig:.2e}"


def criterion_8_operators() -> Result:
    rng = np.random.default_rng(8)
    worst = 0.0
    positive = True
    for _ in range(100):
        alpha = rng.uniform(0.01, math.pi / 2)
        sigma, varphi = rng.uniform(0.2, 3.0), rng.uniform(0.1, math.pi - 0.1)
        p = PTParams(sigma * math.cos(alpha) / math.sin(varphi), varphi, sigma)
        phase = classify(p)
        h = build(p)
        eta, c = metric(phase), charge_op(phase)
        worst = max(
            worst,
            float(np.max(np.abs(eta @ h @ inv2(eta) - h.conj().T))),
            float(np.max(np.abs(c @ h - h @ c))),
        )
        positive &= bool(np.all(np.linalg.eigvalsh(eta) > 0))
    exact = (
        np.array_equal(metric(Broken(0.8)), PARITY)
        and np.array_equal(charge_op(Broken(0.8)), IDENTITY)
        and np.array_equal(meson_discrete_ops()[2], PARITY)
    )
    ok = worst <= 1e-11 and positive and exact
    return ok, f"symmetric residual {worst:.2e}, eta positive: {positive}; broken eta' = P, C = 1, meson CP = P: {exact}"


def criterion_9_limits() -> Result:
    rng = np.random.default_rng(9)
    increasing = decreasing = positive = True
    for _ in range(100):
        d = DerivedBrokenParams(rng.uniform(-3, 3), rng.uniform(0.05, 2), rng.uniform(0.05, 3))
        t0 = d.alpha_prime / d.gamma
        series = np.array([probabilities_pt(d, float(t)) for t in np.linspace(t0 * 1.0001, t0 + 15 / d.gamma, 80)])
        increasing &= bool(np.all(np.diff(series, axis=0) > 0))
        pt = d.to_pt()
        chi = d.gamma * (1 + (3.0 - rng.uniform(0.0, 3.0)))
        # both decayed probabilities fall once coth(gamma t) < chi/gamma
        t_late = math.atanh(d.gamma / chi) / d.gamma
        t_end = t_late + 50.0 / (chi - d.gamma)
        late = np.array([decayed_probabilities(pt, chi, float(t)) for t in np.linspace(t_late * 1.0001, t_end, 80)])
        decreasing &= bool(np.all(np.diff(late, axis=0) < 0))
        full = np.array([decayed_probabilities(pt, chi, float(t)) for t in np.linspace(0.0, t_end, 120)])
        positive &= bool(full[0, 0] > 0 and full[0, 1] == 0 and np.all(full[1:] > 0))
    ok = increasing and decreasing and positive
    return ok, f"PT probabilities increasing past alpha'/gamma: {increasing}; decayed decreasing late: {decreasing}, positive: {positive}"


CRITERIA = [
    ("1 eigenvalue curves (fig1)", criterion_1_fig1),
    ("2 oracle equivalence", criterion_2_oracle),
    ("3 PT-norm conservation", criterion_3_pt_norm),
    ("4 difference identities", criterion_4_differences),
    ("5 analytic continuation", criterion_5_continuation),
    ("6 meson end-to-end", criterion_6_meson),
    ("7 EP conditions", criterion_7_ep),
    ("8 operator algebra", criterion_8_operators),
    ("9 unboundedness and decay", criterion_9_limits),
]


def evaluate(check: Callable[[], Result]) -> tuple[bool, str, float]:
    start = time.perf_counter()
    ok, detail = check()
    return ok, detail, time.perf_counter() - start


def report_line(name: str, ok: bool, detail: str, seconds: float) -> str:
    return f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail} [{seconds:.1f}s]"


@pytest.mark.parametrize("name,check", CRITERIA, ids=[name.split()[0] for name, _ in CRITERIA])
def test_criterion(name, check, capsys):
    ok, detail, seconds = evaluate(check)
    with capsys.disabled():
        print("\n" + report_line(name, ok, detail, seconds))
    assert seconds < 60
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for name, check in CRITERIA:
        ok, detail, seconds = evaluate(check)
        failures += not ok
        print(report_line(name, ok, detail, seconds))
    sys.exit(1 if failures else 0)
