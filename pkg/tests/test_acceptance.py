"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from quakelab.barycentric import (
    EarthquakeCircleMap,
    MoebiusCircleMap,
    de_extend_complex,
    default_grid,
    distance_proxy,
)
from quakelab.earthquake import build_earthquake, recover_measure, verify_left
from quakelab.experiments import (
    BoxTestFunction,
    Q_STAR,
    box_functional,
    random_lamination,
    run_asymptotic_test,
    run_odelta_test,
    run_scaling_path,
)
from quakelab.hyperbolic import BoundaryPoint, GeodesicBox, MoebiusMap, liouville_measure
from quakelab.lamination import EMPTY, FiniteMeasuredLamination, circle_length, sampled_norm, thurston_norm


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail, elapsed, budget):
        ok = bool(ok) and elapsed < budget
        with capsys.disabled():
            print(f"\nCRITERION {number:2d} {'PASS' if ok else 'FAIL'}  {detail}  [{elapsed:.1f}s / {budget:.0f}s]")
        assert ok, detail

    return emit


def _rand_map(rng):
    while True:
        m = rng.normal(0.0, 2.0, (2, 2))
        if np.linalg.det(m) > 0.05:
            return MoebiusMap.from_matrix(m)


def _disk_map(rng, rmax=0.6):
    r = rmax * math.sqrt(rng.uniform())
    t = rng.uniform(0, 2 * math.pi)
    return MoebiusCircleMap.disk(r * complex(math.cos(t), math.sin(t)), rng.uniform(0, 2 * math.pi))


def _bounded_quakes(rng, count, max_norm=2.0):
    out = []
    while len(out) < count:
        mu = random_lamination(rng, int(rng.integers(1, 7)), 0.05, 1.2)
        if thurston_norm(mu) <= max_norm:
            out.append(EarthquakeCircleMap(build_earthquake(mu)))
    return out


def test_criterion_01_liouville(verdict):
    t = time.perf_counter()
    rng = np.random.default_rng(1)
    val = liouville_measure(GeodesicBox.from_values(0, 1, 2, 3))
    err0 = abs(val - math.log(4 / 3))
    worst = 0.0
    for _ in range(1000):
        th = np.sort(rng.uniform(0, 2 * math.pi, 4))
        box = GeodesicBox(*(BoundaryPoint.from_angle(x) for x in th))
        g = _rand_map(rng)
        moved = GeodesicBox(*(g(p) for p in box.corners))
        worst = max(worst, abs(liouville_measure(moved) - liouville_measure(box)))
    ok = err0 < 1e-12 and worst < 1e-12
    verdict(1, ok, f"log(4/3) error {err0:.1e}, invariance worst {worst:.1e} (tol 1e-12)",
            time.perf_counter() - t, 1)


def test_criterion_02_round_trip(verdict):
    t = time.perf_counter()
    rng = np.random.default_rng(2)
    worst, mismatched = 0.0, 0
    for _ in range(500):
        mu = random_lamination(rng, int(rng.integers(1, 21)))
        got = recover_measure(build_earthquake(mu))
        if not got.isclose(mu, 1e-9):
            mismatched += 1
        for g, w in mu.leaves:
            match = [v for h, v in got.leaves if h == g]
            worst = max(worst, abs(match[0] - w) if match else math.inf)
    verdict(2, mismatched == 0 and worst < 1e-9,
            f"500 laminations, worst weight error {worst:.1e}, mismatches {mismatched}",
            time.perf_counter() - t, 30)


def test_criterion_03_left(verdict):
    t = time.perf_counter()
    rng = np.random.default_rng(3)
    bad, pairs = 0, 0
    for _ in range(150):
        mu = random_lamination(rng, int(rng.integers(1, 13)))
        rep = verify_left(build_earthquake(mu), exhaustive_limit=12)
        bad += len(rep.violations)
        pairs += rep.pairs_checked
    verdict(3, bad == 0, f"150 earthquakes, {pairs} stratum pairs, {bad} violations",
            time.perf_counter() - t, 30)


def test_criterion_04_norm_oracle(verdict):
    t = time.perf_counter()
    rng = np.random.default_rng(4)
    fixtures = {
        0.7: FiniteMeasuredLamination.from_pairs([(0, math.inf, 0.7)]),
        2.0: FiniteMeasuredLamination.from_pairs([(-1, 1, 1.0), (-2, 2, 1.0)]),
        1.0: FiniteMeasuredLamination.from_pairs([(-1, 1, 1.0), (-8, 8, 1.0)]),
    }
    exact = all(thurston_norm(mu) == v for v, mu in fixtures.items())
    below = True
    for _ in range(5):
        mu = random_lamination(rng, int(rng.integers(2, 10)))
        below &= sampled_norm(mu, 10_000, seed=int(rng.integers(1 << 30))) <= thurston_norm(mu) + 1e-12
    chains = [
        fixtures[2.0],
        FiniteMeasuredLamination.from_pairs([(-1, 1, 0.2), (-1.3, 1.3, 0.5), (-2, 2, 0.4)]),
        FiniteMeasuredLamination.from_pairs([(0, 1, 0.6), (0, 1.8, 0.3)]),
    ]
    gaps = [1 - sampled_norm(mu, 10_000, seed=0) / thurston_norm(mu) for mu in chains]
    ok = exact and below and max(gaps) <= 0.05
    verdict(4, ok, f"fixtures exact {exact}, sampled <= exact {below}, chain gap max {max(gaps):.3f}",
            time.perf_counter() - t, 60)


def test_criterion_05_douady_earle(verdict):
    t = time.perf_counter()
    rng = np.random.default_rng(5)
    grid = default_grid()
    ident = max(abs(de_extend_complex(MoebiusCircleMap.identity(), z.z) - z.z) for z in grid)
    mob = 0.0
    for _ in range(5):
        A = _disk_map(rng)
        mob = max(mob, max(abs(de_extend_complex(A, z.z) - A.interior(z.z)) for z in grid))
    quakes = _bounded_quakes(rng, 20)
    nat = 0.0
    for k in range(200):
        h = quakes[k % len(quakes)]
        A, B = _disk_map(rng), _disk_map(rng)
        z = grid[int(rng.integers(len(grid)))].z
        lhs = de_extend_complex(A @ h @ B, z)
        rhs = A.interior(de_extend_complex(h, B.interior(z)))
        nat = max(nat, abs(lhs - rhs))
    ok = ident < 1e-6 and mob < 1e-6 and nat < 1e-5
    verdict(5, ok, f"identity {ident:.1e}, Moebius {mob:.1e}, naturality {nat:.1e} over 200 triples",
            time.perf_counter() - t, 300)


def test_criterion_06_class_invariance(verdict):
    t = time.perf_counter()
    rng = np.random.default_rng(6)
    worst = 0.0
    for h in _bounded_quakes(rng, 8):
        worst = max(worst, distance_proxy(_disk_map(rng, 0.8) @ h, h))
    verdict(6, worst < 1e-4, f"8 (A, h) pairs, max proxy {worst:.1e} (tol 1e-4)",
            time.perf_counter() - t, 300)


def test_criterion_07_scaling_path(verdict):
    t = time.perf_counter()
    fixtures = {
        "single-leaf": FiniteMeasuredLamination.from_pairs([(0, math.inf, 0.2)]),
        "five-leaf": FiniteMeasuredLamination.from_pairs(
            [(-3, -2, 0.1), (-1, 1, 0.15), (-1.6, 1.6, 0.05), (2, 4, 0.1), (5, 9, 0.08)]
        ),
    }
    parts, ok = [], True
    for name, mu in fixtures.items():
        rep = run_scaling_path(mu, 0.5)
        vals = [r[2] for r in rep.rows if r[1] > 0]
        dec = all(b < a for a, b in zip(vals, vals[1:]))
        ok &= dec and vals[-1] < 1e-3
        parts.append(f"{name}: decreasing {dec}, last {vals[-1]:.2e}")
    verdict(7, ok, "; ".join(parts), time.perf_counter() - t, 600)


def test_criterion_08_asymptotic(verdict):
    t = time.perf_counter()
    rep = run_asymptotic_test()
    dec = [r[3] for r in rep.rows if r[0] == "decaying"]
    const = [r[3] for r in rep.rows if r[0] == "constant"]
    mono = all(b < a for a, b in zip(dec, dec[1:]))
    above = min(const) > dec[-1]
    verdict(8, mono and above,
            f"decaying {dec[0]:.3f} -> {dec[-1]:.1e} strictly decreasing {mono}; constant min {min(const):.3f}",
            time.perf_counter() - t, 600)


def test_criterion_09_odelta(verdict):
    t = time.perf_counter()
    worst = max(abs(circle_length(n) - 4 * math.pi * (n - 1) / (2 - 1 / n)) for n in range(2, 65))
    rep = run_odelta_test(alphas=(0.5, 1.5), n_list=(8, 64))
    b = {(r[0], r[1]): r[4] for r in rep.rows}
    shrink = b[(1.5, 64)] < b[(1.5, 8)]
    grow = b[(0.5, 64)] > b[(0.5, 8)]
    verdict(9, worst < 1e-12 and shrink and grow,
            f"length error {worst:.1e}; alpha 1.5: {b[(1.5, 8)]:.3f} -> {b[(1.5, 64)]:.3f}; "
            f"alpha 0.5: {b[(0.5, 8)]:.3f} -> {b[(0.5, 64)]:.3f}",
            time.perf_counter() - t, 30)


def test_criterion_10_box_functional(verdict):
    t = time.perf_counter()
    rng = np.random.default_rng(10)
    zero = all(box_functional(mu, mu) == 0.0 for mu in (random_lamination(rng, 6) for _ in range(5)))
    phi = BoxTestFunction()
    mu = FiniteMeasuredLamination.from_pairs([(0.2, 9.0, 0.3), (0.5, 3.0, 0.8), (0.6, 2.0, 0.25), (-4, -1, 1.0)])
    direct = 0.0
    for a, b, w in ((0.2, 9.0, 0.3), (0.5, 3.0, 0.8), (0.6, 2.0, 0.25)):
        s, u = a, (math.e / (math.e - 1)) / b
        direct += w * 16 * s * (1 - s) * u * (1 - u)
    err = abs(box_functional(mu, EMPTY, phi, [Q_STAR]) - direct)
    verdict(10, zero and err < 1e-12, f"self difference exactly 0: {zero}; direct-sum error {err:.1e}",
            time.perf_counter() - t, 10)
