"""Acceptance criteria, one test and one PASS/FAIL summary line each."""
import itertools
import json
import math
import subprocess
import sys
import time

import numpy as np

from jgrdpf.cli import main
from jgrdpf.divergence import alpha_divergence, perception_sup
from jgrdpf.oracles import brute_force_rdpf, kl_rdpf_rate, quad_alpha_divergence
from jgrdpf.polynomial import hellinger_roots, pearson_roots, solve_roots
from jgrdpf.solver import RdpfQuery, Regime, jg_rdpf
from jgrdpf.divergence import alpha_divergence_ratio
from jgrdpf.verify import divergence_deviation, random_divergence_case, random_query


def test_c1_closed_form_vs_quadrature(report):
    rng = np.random.default_rng(0)
    start = time.perf_counter()
    worst_abs = worst_rel = 0.0
    misses = 0
    for _ in range(200):
        p, q, a = random_divergence_case(rng)
        closed = alpha_divergence(p, q, a).value
        quad = quad_alpha_divergence(p, q, a)
        worst_abs = max(worst_abs, abs(closed - quad))
        worst_rel = max(worst_rel, divergence_deviation(closed, quad))
        misses += abs(closed - quad) > 1e-6
    elapsed = time.perf_counter() - start
    ok = misses == 0 and elapsed <= 10.0
    report(
        "C1 closed form vs quadrature",
        ok,
        f"{misses}/200 above 1e-6 absolute, max abs {worst_abs:.3g}, "
        f"max |diff|/max(1,|D|) {worst_rel:.3g}, {elapsed:.1f}s",
    )
    assert ok


def test_c2_root_oracles(report):
    start = time.perf_counter()
    dev = res = 0.0
    for P in (0.01, 0.05, 0.1, 0.2, 0.5, 1.0):
        for alpha, oracle in ((2.0, pearson_roots), (0.5, hellinger_roots)):
            got, want = solve_roots(P, alpha), oracle(P)
            dev = max(dev, abs(got.r0 - want.r0), abs(got.r1 - want.r1))
            res = max(res, got.residual0, got.residual1)
    elapsed = time.perf_counter() - start
    ok = dev <= 1e-9 and res <= 1e-8 and elapsed <= 1.0
    report("C2 root oracle agreement", ok, f"max root diff {dev:.3g}, max |f(r)| {res:.3g}, {elapsed:.3f}s")
    assert ok


def test_c3_bracket_containment(report):
    violations = 0
    alphas = [a for a in np.linspace(-3.0, 3.0, 20) if a not in (0.0, 1.0)]
    for alpha in alphas:
        pmax = min(1.0, perception_sup(alpha))
        for k in range(1, 21):
            r = solve_roots(pmax * k / 21, alpha)
            violations += not (0.0 <= r.r0 <= r.x0 <= r.r1 <= r.y0)
    ok = violations == 0
    report("C3 bracket containment", ok, f"{violations} violations on {len(alphas)}x20 grid")
    assert ok


def test_c4_solver_vs_brute_force(report):
    rng = np.random.default_rng(0)
    start = time.perf_counter()
    worst = dist_err = perc_err = 0.0
    regimes = set()
    for _ in range(100):
        q = random_query(rng)
        sol, brute = jg_rdpf(q), brute_force_rdpf(q)
        regimes.add(sol.regime)
        worst = max(worst, abs(sol.rate - brute.rate))
        if sol.regime is Regime.BOTH_ACTIVE:
            dist_err = max(dist_err, abs(sol.distortion(q.sigma2) - q.D))
            perc_err = max(perc_err, abs(alpha_divergence_ratio(sol.rho2 / q.sigma2, q.alpha) - q.P))
    elapsed = time.perf_counter() - start
    ok = worst <= 5e-3 and dist_err <= 1e-9 and perc_err <= 1e-6 and elapsed <= 60.0 and len(regimes) == 3
    report(
        "C4 solver vs brute force",
        ok,
        f"max rate diff {worst:.3g}, distortion {dist_err:.3g}, perception {perc_err:.3g}, "
        f"{len(regimes)} regimes, {elapsed:.1f}s",
    )
    assert ok


def test_c5_zero_perception_overlap(report):
    Ds = np.linspace(0.01, 1.99, 200)
    curves = {a: np.array([jg_rdpf(RdpfQuery(1.0, float(D), 0.0, a)).rate for D in Ds]) for a in (-5.0, -0.5, 1.5, 3.0)}
    formula = 0.5 * np.log(1.0 / (Ds - Ds**2 / 4))
    pair = max(np.max(np.abs(curves[a] - curves[b])) for a, b in itertools.combinations(curves, 2))
    exact = max(np.max(np.abs(c - formula)) for c in curves.values())
    ok = pair <= 1e-9 and exact <= 1e-9
    report("C5 P=0 overlap", ok, f"pairwise {pair:.3g}, vs formula {exact:.3g}")
    assert ok


def test_c6_monotonicity(report):
    worst = -math.inf
    for alpha in (-1.2, 0.1, 0.5, 2.0):
        Ps = np.linspace(0.0, min(1.5, 0.95 * perception_sup(alpha)), 30)
        Ds = np.linspace(0.02, 2.5, 30)
        R = np.array([[jg_rdpf(RdpfQuery(1.0, float(D), float(P), alpha)).rate for D in Ds] for P in Ps])
        worst = max(worst, np.diff(R, axis=0).max(), np.diff(R, axis=1).max())
    ok = worst <= 1e-9
    report("C6 monotonicity", ok, f"largest increase {worst:.3g}")
    assert ok


def test_c7_kl_continuity(report):
    alpha, P = 1.0 - 1e-4, 0.5
    Ds = np.linspace(0.05, 1.5, 100)
    diff = max(abs(jg_rdpf(RdpfQuery(1.0, float(D), P, alpha)).rate - kl_rdpf_rate(1.0, float(D), P)) for D in Ds)
    ok = diff <= 1e-3
    report("C7 KL continuity", ok, f"max pointwise diff {diff:.3g}")
    assert ok


def test_c8_classical_corner(report, capsys):
    pairs = [(s2, s2 * f) for s2 in (0.5, 1.0, 2.0, 3.7) for f in (0.05, 0.3, 0.9, 1.0, 1.8)]
    worst = 0.0
    for s2, D in pairs:
        code = main(["eval", "--alpha", "2", "--sigma2", repr(s2), "--dist", repr(D), "--perc", "inf", "--format", "json"])
        rate = json.loads(capsys.readouterr().out)["rate"]
        want = max(0.5 * math.log(s2 / D), 0.0)
        worst = max(worst, abs(rate - want) if code == 0 else math.inf)
    ok = worst <= 1e-12
    report("C8 classical corner", ok, f"{len(pairs)} pairs, max diff {worst:.3g}")
    assert ok


def test_c9_determinism(report):
    cmd = [sys.executable, "-m", "jgrdpf", "verify", "--seed", "7", "--cases", "100"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    ok = a.returncode == 0 and b.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    report("C9 determinism", ok, f"exit codes {a.returncode}/{b.returncode}, identical={a.stdout == b.stdout}")
    assert ok
