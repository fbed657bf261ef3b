"""Finite measured laminations of the hyperbolic plane.

A :class:`FiniteMeasuredLamination` is a finite set of pairwise disjoint
geodesics with positive weights (atoms of the transverse measure).  All
computations are done in the upper half-plane; the disk model only enters
through boundary depth and the circle bound.

The norm is exact: a closed geodesic arc crosses a set of leaves whose
extreme members ``g, h`` satisfy ``dist(g, h) <= length`` and every leaf
strictly between them; conversely the common perpendicular realizes any
such pair.  The profile functions are estimators (lower bounds) and say so.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from quakelab.errors import GeometryError, LaminationError
from quakelab.hyperbolic import (
    GEOM_TOL,
    BoundaryPoint,
    Geodesic,
    GeodesicArc,
    HPoint,
    MoebiusMap,
    TWO_PI,
    _det,
    point_at,
)

DEFAULT_ARC_SAMPLES = 10_000
ON_LEAF_TOL = 1e-12


# ---------------------------------------------------------------------------
# side tests
# ---------------------------------------------------------------------------


def interior_side(g: Geodesic, z):
    """``sinh`` of the signed distance from ``z`` to ``g`` (vectorized)."""
    scale = abs(_det(g.p.pair, g.q.pair))
    return g.side(z) / (np.imag(z) * scale)


def boundary_sign(g: Geodesic, b: BoundaryPoint, tol: float = GEOM_TOL) -> int:
    """Side of a boundary point relative to ``g``; 0 at an endpoint of ``g``."""
    dp = _det(b.pair, g.p.pair)
    dq = _det(b.pair, g.q.pair)
    if abs(dp) <= tol or abs(dq) <= tol:
        return 0
    return 1 if dp * dq > 0 else -1


def geodesic_side(g: Geodesic, h: Geodesic) -> int:
    """Side of ``h`` relative to ``g`` (0 if equal, raises if crossing)."""
    sp, sq = boundary_sign(g, h.p), boundary_sign(g, h.q)
    if sp == 0 and sq == 0:
        return 0
    if sp * sq < 0:
        raise GeometryError("geodesics cross")
    return sp if sp != 0 else sq


def crosses(g: Geodesic, h: Geodesic) -> bool:
    return boundary_sign(g, h.p) * boundary_sign(g, h.q) < 0


def shares_endpoint(g: Geodesic, h: Geodesic) -> bool:
    return any(a.isclose(b) for a in (g.p, g.q) for b in (h.p, h.q))


def geodesic_distance(g1: Geodesic, g2: Geodesic) -> float:
    """Length of the common perpendicular of two disjoint geodesics."""
    if g1 == g2 or shares_endpoint(g1, g2):
        return 0.0
    if crosses(g1, g2):
        raise GeometryError("geodesic_distance: geodesics cross")
    a, b = g1.p, g1.q
    if boundary_sign(g1, g2.p) == boundary_sign(g1, BoundaryPoint.from_angle(_arc_mid(a, b))):
        a, b = b, a
    # now g2 lies on the counterclockwise arc from b to a
    c, d = g2.p, g2.q
    if (c.angle - b.angle) % TWO_PI > (d.angle - b.angle) % TWO_PI:
        c, d = d, c
    excess = abs(_det(b.pair, a.pair) * _det(d.pair, c.pair)) / abs(
        _det(d.pair, a.pair) * _det(c.pair, b.pair)
    )
    x = 1.0 + excess
    return 2.0 * math.log1p(math.sqrt(x)) - math.log(excess)


def _arc_mid(a: BoundaryPoint, b: BoundaryPoint) -> float:
    """Angle of the midpoint of the counterclockwise arc from ``a`` to ``b``."""
    span = (b.angle - a.angle) % TWO_PI
    return (a.angle + 0.5 * span) % TWO_PI


# ---------------------------------------------------------------------------
# the lamination type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteMeasuredLamination:
    leaves: tuple = ()

    def __post_init__(self):
        merged: list[list] = []
        for idx, item in enumerate(self.leaves):
            g, w = item
            w = float(w)
            if not (w > 0.0 and math.isfinite(w)):
                raise LaminationError(f"leaf {idx}: weight must be positive, got {w}", [idx])
            for m in merged:
                if m[0] == g:
                    m[1] += w
                    break
            else:
                merged.append([g, w, idx])
        for i in range(len(merged)):
            for j in range(i + 1, len(merged)):
                if crosses(merged[i][0], merged[j][0]):
                    a, b = merged[i][2], merged[j][2]
                    raise LaminationError(f"leaves {a} and {b} cross", [a, b])
        object.__setattr__(self, "leaves", tuple((g, w) for g, w, _ in merged))

    @classmethod
    def from_pairs(cls, items) -> "FiniteMeasuredLamination":
        """Build from ``[(a, b, w), ...]`` with real (or ``inf``) endpoints."""
        return cls(tuple((Geodesic.from_values(a, b), w) for a, b, w in items))

    def __len__(self):
        return len(self.leaves)

    def __iter__(self):
        return iter(self.leaves)

    @property
    def geodesics(self) -> list[Geodesic]:
        return [g for g, _ in self.leaves]

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.leaves], dtype=float)

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum()) if self.leaves else 0.0

    def isclose(self, other: "FiniteMeasuredLamination", wtol: float = 1e-9) -> bool:
        if len(self) != len(other):
            return False
        remaining = list(other.leaves)
        for g, w in self.leaves:
            for k, (h, v) in enumerate(remaining):
                if g == h and abs(w - v) <= wtol:
                    remaining.pop(k)
                    break
            else:
                return False
        return True


EMPTY = FiniteMeasuredLamination()


def scale(mu: FiniteMeasuredLamination, s: float) -> FiniteMeasuredLamination:
    if s < 0:
        raise LaminationError(f"scale factor must be nonnegative, got {s}")
    if s == 0:
        return EMPTY
    # weights that underflow to zero are dropped
    return FiniteMeasuredLamination(tuple((g, w * s) for g, w in mu.leaves if w * s > 0.0))


def pushforward(mu: FiniteMeasuredLamination, g: MoebiusMap) -> FiniteMeasuredLamination:
    return FiniteMeasuredLamination(tuple((g(leaf), w) for leaf, w in mu.leaves))


# ---------------------------------------------------------------------------
# transverse measure and norm
# ---------------------------------------------------------------------------


def crossing_matrix(mu: FiniteMeasuredLamination, start, end) -> np.ndarray:
    """Boolean ``(n_leaves, n_arcs)`` matrix: does leaf k meet arc j."""
    start = np.atleast_1d(np.asarray(start, dtype=complex))
    end = np.atleast_1d(np.asarray(end, dtype=complex))
    out = np.zeros((len(mu), start.size), dtype=bool)
    for k, (g, _) in enumerate(mu.leaves):
        sa = interior_side(g, start)
        sb = interior_side(g, end)
        out[k] = (sa * sb <= 0.0) | (np.abs(sa) <= ON_LEAF_TOL) | (np.abs(sb) <= ON_LEAF_TOL)
    return out


def transverse_measures(mu: FiniteMeasuredLamination, start, end) -> np.ndarray:
    if len(mu) == 0:
        return np.zeros(np.atleast_1d(start).size)
    return mu.weights @ crossing_matrix(mu, start, end)


def transverse_measure(mu: FiniteMeasuredLamination, arc: GeodesicArc) -> float:
    """Total weight of leaves meeting the closed arc."""
    return float(transverse_measures(mu, arc.start.z, arc.end.z)[0])


def _pair_tables(mu: FiniteMeasuredLamination):
    geos = mu.geodesics
    n = len(geos)
    side = np.zeros((n, n), dtype=int)
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                side[i, j] = geodesic_side(geos[i], geos[j])
            if j > i:
                dist[i, j] = dist[j, i] = geodesic_distance(geos[i], geos[j])
    return side, dist


def chain_weights(mu: FiniteMeasuredLamination):
    """Yield ``(i, j, total)`` for every pair of leaves and the weight of the
    chain they bound (both ends plus every leaf separating them)."""
    w = mu.weights
    side, dist = _pair_tables(mu)
    n = len(w)
    for i in range(n):
        yield i, i, float(w[i]), 0.0
        for j in range(i + 1, n):
            sep = (side[:, i] != side[:, j]) & (side[:, i] != 0) & (side[:, j] != 0)
            sep[i] = sep[j] = False
            yield i, j, float(w[i] + w[j] + w[sep].sum()), dist[i, j]


def thurston_norm(mu: FiniteMeasuredLamination, length: float = 1.0) -> float:
    """Exact supremum of the transverse measure over closed arcs of the given length."""
    best = 0.0
    for _, _, total, d in chain_weights(mu):
        if d <= length:
            best = max(best, total)
    return best


# ---------------------------------------------------------------------------
# random unit arcs
# ---------------------------------------------------------------------------


def leaf_point_and_normal(g: Geodesic, s: float, origin: complex = 1j) -> tuple[complex, float]:
    """Point at signed distance ``s`` from the foot of ``origin`` on ``g`` and
    the direction angle of a normal to ``g`` there."""
    frame = g.frame
    w0 = frame.inverse().apply_complex(origin)
    w = 1j * abs(w0) * math.exp(s)
    deriv = 1.0 / (frame.c * w + frame.d) ** 2
    return frame.apply_complex(w), float(np.angle(deriv))


def sample_unit_arcs(
    mu: FiniteMeasuredLamination,
    n: int,
    rng: np.random.Generator,
    origin: complex = 1j,
    spread: float = 3.0,
    length: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Random closed arcs of the given length, biased towards the leaves.

    Half the arcs start on a leaf and leave along a jittered normal, a
    quarter start on a leaf in a uniform direction, and the rest start at
    random points near ``origin``.
    """
    starts = np.empty(n, dtype=complex)
    ends = np.empty(n, dtype=complex)
    geos = mu.geodesics
    for k in range(n):
        mode = rng.random()
        if geos and mode < 0.75:
            g = geos[rng.integers(len(geos))]
            p, normal = leaf_point_and_normal(g, rng.uniform(-spread, spread), origin)
            if mode < 0.5:
                direction = normal + math.pi * rng.integers(2) + rng.normal(0.0, 0.15)
            else:
                direction = rng.uniform(0.0, TWO_PI)
        else:
            p = point_at(origin, rng.uniform(0.0, TWO_PI), spread * math.sqrt(rng.random()))
            direction = rng.uniform(0.0, TWO_PI)
        starts[k] = p
        ends[k] = point_at(p, direction, length)
    return starts, ends


def sampled_norm(mu: FiniteMeasuredLamination, n: int = DEFAULT_ARC_SAMPLES, seed: int = 0) -> float:
    """Maximum measure over ``n`` random unit arcs (a lower bound for the norm)."""
    if len(mu) == 0:
        return 0.0
    starts, ends = sample_unit_arcs(mu, n, np.random.default_rng(seed))
    return float(transverse_measures(mu, starts, ends).max())


# ---------------------------------------------------------------------------
# decay profiles
# ---------------------------------------------------------------------------


@dataclass
class DecayProfile:
    """``(depth, sup_measure)`` pairs; depth doubles as exhaustion radius."""

    depths: list
    values: list
    kind: str = "depth"
    chain_values: list = field(default_factory=list)
    sampled_values: list = field(default_factory=list)

    def __iter__(self):
        return iter(zip(self.depths, self.values))


def boundary_depth(z):
    """Euclidean distance to the unit circle of the disk image of ``z``."""
    z = np.asarray(z, dtype=complex)
    one_minus_sq = 4.0 * z.imag / np.abs(z + 1j) ** 2
    r = np.abs((z - 1j) / (z + 1j))
    return one_minus_sq / (1.0 + r)


def _perpendicular(g: Geodesic, h: Geodesic) -> tuple[complex, complex]:
    """Feet of the common perpendicular of disjoint, non-asymptotic geodesics."""
    # in the frame of g (the imaginary axis) h has endpoints a, b of one sign
    # and the perpendicular is the circle |w| = sqrt(ab)
    frame = g.frame
    inv = frame.inverse()
    a, b = inv(h.p).value, inv(h.q).value
    r = math.sqrt(a * b)
    # foot on h: intersection of |w| = r with the semicircle over [a, b]
    m, rad = 0.5 * (a + b), 0.5 * abs(b - a)
    x = (r * r - rad * rad + m * m) / (2.0 * m)
    y = math.sqrt(max(r * r - x * x, 0.0))
    foot_h = complex(x, y)
    return frame.apply_complex(1j * r), frame.apply_complex(foot_h)


def _extended_perpendiculars(g: Geodesic, h: Geodesic, length: float):
    """Both extensions of the common perpendicular to total ``length``."""
    p, q = _perpendicular(g, h)
    d = 2.0 * math.asinh(0.5 * abs(p - q) / math.sqrt(p.imag * q.imag))
    extra = max(length - d, 0.0)
    ext = _geodesic_through(p, q)
    out = []
    for end_a, end_b in ((p, q), (q, p)):
        # extend beyond end_b away from end_a
        frame = ext.frame
        inv = frame.inverse()
        wa, wb = inv.apply_complex(end_a), inv.apply_complex(end_b)
        factor = math.exp(extra) if abs(wb) > abs(wa) else math.exp(-extra)
        out.append((end_a, frame.apply_complex(wb * factor)))
    return out


def _geodesic_through(a: complex, b: complex) -> Geodesic:
    if abs(a.real - b.real) <= 1e-15 * max(1.0, abs(a), abs(b)):
        return Geodesic(BoundaryPoint.real(0.5 * (a.real + b.real)), BoundaryPoint.infinity())
    m = (abs(a) ** 2 - abs(b) ** 2) / (2.0 * (a.real - b.real))
    r = abs(a - m)
    return Geodesic.from_values(m - r, m + r)


def segment_distance(z0: complex, a, b):
    """Hyperbolic distance from ``z0`` to the closed segments ``[a, b]`` (vectorized)."""
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    out = np.empty(a.size)
    for k in range(a.size):
        out[k] = _segment_distance(z0, a[k], b[k])
    return out


def _hd(p: complex, q: complex) -> float:
    return 2.0 * math.asinh(0.5 * abs(p - q) / math.sqrt(p.imag * q.imag))


def _segment_distance(z0: complex, a: complex, b: complex) -> float:
    g = _geodesic_through(a, b)
    foot = g.project(z0)
    dab = _hd(a, b)
    if abs(_hd(a, foot) + _hd(foot, b) - dab) <= 1e-9 * max(1.0, dab):
        return _hd(z0, foot)
    return min(_hd(z0, a), _hd(z0, b))


def _leaf_param_for(g: Geodesic, origin: complex, predicate, sign: float, s_max: float = 60.0):
    """Smallest ``|s|`` (in direction ``sign``) with ``predicate(point)`` true, by bisection."""
    lo, hi = 0.0, s_max
    if not predicate(g.point_at(sign * hi, origin)):
        return None
    if predicate(g.point_at(0.0, origin)):
        return 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if predicate(g.point_at(sign * mid, origin)):
            hi = mid
        else:
            lo = mid
    return hi


def _region_samples(mu, rng, n, origin, start_ok, arc_ok):
    """Arcs starting on leaves inside a region; keeps arcs satisfying ``arc_ok``."""
    starts, ends = [], []
    geos = mu.geodesics
    if not geos:
        return np.array([], dtype=complex), np.array([], dtype=complex)
    params = []
    for g in geos:
        for sign in (1.0, -1.0):
            s0 = _leaf_param_for(g, origin, start_ok, sign)
            if s0 is not None:
                params.append((g, sign, s0))
    if not params:
        return np.array([], dtype=complex), np.array([], dtype=complex)
    for _ in range(n):
        g, sign, s0 = params[rng.integers(len(params))]
        s = sign * (s0 + rng.exponential(1.0))
        p, normal = leaf_point_and_normal(g, s, origin)
        if rng.random() < 0.5:
            direction = normal + math.pi * rng.integers(2) + rng.normal(0.0, 0.15)
        else:
            direction = rng.uniform(0.0, TWO_PI)
        q = point_at(p, direction, 1.0)
        if arc_ok(p, q):
            starts.append(p)
            ends.append(q)
    return np.array(starts, dtype=complex), np.array(ends, dtype=complex)


def depth_profile(
    mu: FiniteMeasuredLamination,
    depths,
    n_samples: int = DEFAULT_ARC_SAMPLES,
    seed: int = 0,
) -> DecayProfile:
    """Estimate ``sup mu(I)`` over unit arcs within Euclidean distance ``delta``
    of the unit circle (disk model), for each ``delta`` in ``depths``.

    Reported value is the larger of a chain estimator (chains whose
    extended common perpendicular reaches the depth) and a sampled
    estimator, made monotone in ``delta``.  Every leaf reaches the circle,
    so a nonempty lamination never has a vanishing depth profile.
    """
    depths = [float(d) for d in depths]
    chains = list(chain_weights(mu)) if len(mu) else []
    geos = mu.geodesics
    chain_vals, sample_vals = [], []
    rng = np.random.default_rng(seed)
    per = max(n_samples // max(len(depths), 1), 1)
    for delta in depths:
        best = 0.0
        for i, j, total, d in chains:
            if d > 1.0:
                continue
            if i == j or d == 0.0:
                best = max(best, total)
                continue
            for a, b in _extended_perpendiculars(geos[i], geos[j], 1.0):
                if min(boundary_depth(a), boundary_depth(b)) <= delta:
                    best = max(best, total)
        chain_vals.append(best)
        starts, ends = _region_samples(
            mu,
            rng,
            per,
            1j,
            lambda z: boundary_depth(z) <= delta,
            lambda p, q: True,
        )
        sample_vals.append(float(transverse_measures(mu, starts, ends).max()) if starts.size else 0.0)
    raw = np.maximum(chain_vals, sample_vals) if depths else np.array([])
    order = np.argsort(depths)
    mono = np.empty_like(raw)
    mono[order] = np.maximum.accumulate(raw[order]) if raw.size else raw
    # sorted strictly decreasing toward 0
    idx = sorted(range(len(depths)), key=lambda k: -depths[k])
    return DecayProfile(
        depths=[depths[k] for k in idx],
        values=[float(mono[k]) for k in idx],
        kind="depth",
        chain_values=[chain_vals[k] for k in idx],
        sampled_values=[sample_vals[k] for k in idx],
    )


def _perpendicular_segment(g: Geodesic, h: Geodesic) -> tuple[complex, complex]:
    p, q = _perpendicular(g, h)
    return p, q


def exhaustion_profile(
    mu: FiniteMeasuredLamination,
    radii,
    n_samples: int = DEFAULT_ARC_SAMPLES,
    seed: int = 0,
    basepoint: complex = 1j,
) -> DecayProfile:
    """Estimate ``sup mu(I)`` over unit arcs disjoint from the closed ball
    ``B(basepoint, R)`` for each ``R`` in ``radii``.

    Same two-estimator scheme as :func:`depth_profile`; monotone
    nonincreasing in ``R``.
    """
    radii = [float(r) for r in radii]
    chains = list(chain_weights(mu)) if len(mu) else []
    geos = mu.geodesics
    rng = np.random.default_rng(seed)
    per = max(n_samples // max(len(radii), 1), 1)
    chain_vals, sample_vals = [], []
    for R in radii:
        best = 0.0
        for i, j, total, d in chains:
            if d > 1.0:
                continue
            if i == j or d == 0.0:
                best = max(best, total)
                continue
            p, q = _perpendicular_segment(geos[i], geos[j])
            if _segment_distance(basepoint, p, q) > R:
                best = max(best, total)
        chain_vals.append(best)
        starts, ends = _region_samples(
            mu,
            rng,
            per,
            basepoint,
            lambda z: _hd(basepoint, z) > R + 1.0,
            lambda p, q: _segment_distance(basepoint, p, q) > R,
        )
        sample_vals.append(float(transverse_measures(mu, starts, ends).max()) if starts.size else 0.0)
    raw = np.maximum(chain_vals, sample_vals) if radii else np.array([])
    idx = sorted(range(len(radii)), key=lambda k: radii[k])
    mono = np.maximum.accumulate(raw[idx][::-1])[::-1] if raw.size else raw
    return DecayProfile(
        depths=[radii[k] for k in idx],
        values=[float(v) for v in mono],
        kind="exhaustion",
        chain_values=[chain_vals[k] for k in idx],
        sampled_values=[sample_vals[k] for k in idx],
    )


def end_region(end: BoundaryPoint, radius: float, basepoint: complex = 1j) -> Geodesic:
    """Geodesic orthogonal to the ray from ``basepoint`` to ``end`` at
    distance ``radius``; the region beyond it shrinks to ``end``."""
    frame = MoebiusMap(basepoint.imag ** 0.5, basepoint.real / basepoint.imag ** 0.5, 0.0, basepoint.imag ** -0.5)
    theta0 = frame.inverse()(end).angle
    beta = 2.0 * math.atan(math.exp(-radius))
    wall = Geodesic(BoundaryPoint.from_angle(theta0 - beta), BoundaryPoint.from_angle(theta0 + beta))
    return frame(wall)


def end_profile(
    mu: FiniteMeasuredLamination,
    end: BoundaryPoint,
    radii,
    n_samples: int = DEFAULT_ARC_SAMPLES,
    seed: int = 0,
    basepoint: complex = 1j,
) -> DecayProfile:
    """Estimate ``sup mu(I)`` over unit arcs inside the half-plane cut off by
    :func:`end_region` for each radius.

    This is the exhaustion of a single end: it can decay to zero for
    laminations whose weights decay towards ``end``, unlike
    :func:`exhaustion_profile` which always sees every leaf.
    """
    radii = [float(r) for r in radii]
    rng = np.random.default_rng(seed)
    per = max(n_samples // max(len(radii), 1), 1)
    chain_vals, sample_vals = [], []
    for R in radii:
        wall = end_region(end, R, basepoint)
        inside_sign = boundary_sign(wall, end)

        def inside(z, wall=wall, s=inside_sign):
            return bool(interior_side(wall, z) * s >= -ON_LEAF_TOL)

        keep = [
            (g, w)
            for g, w in mu.leaves
            if all(boundary_sign(wall, e) in (0, inside_sign) for e in (g.p, g.q))
        ]
        sub = FiniteMeasuredLamination(tuple(keep))
        chain_vals.append(thurston_norm(sub))
        ref = wall.project(basepoint)
        starts, ends = _region_samples(
            mu, rng, per, ref, inside, lambda p, q: inside(p) and inside(q)
        )
        sample_vals.append(float(transverse_measures(mu, starts, ends).max()) if starts.size else 0.0)
    raw = np.maximum(chain_vals, sample_vals) if radii else np.array([])
    idx = sorted(range(len(radii)), key=lambda k: radii[k])
    mono = np.maximum.accumulate(raw[idx][::-1])[::-1] if raw.size else raw
    return DecayProfile(
        depths=[radii[k] for k in idx],
        values=[float(v) for v in mono],
        kind="end",
        chain_values=[chain_vals[k] for k in idx],
        sampled_values=[sample_vals[k] for k in idx],
    )


# ---------------------------------------------------------------------------
# circle bound
# ---------------------------------------------------------------------------


def circle_length(n: int) -> float:
    """Hyperbolic length of the circle of Euclidean radius ``1 - 1/n`` about 0."""
    return 4.0 * math.pi * (n - 1) / (2.0 - 1.0 / n)


def circle_crossings(mu: FiniteMeasuredLamination, r: float) -> tuple[np.ndarray, np.ndarray]:
    """Angles where leaves cross the circle ``|z| = r`` (disk model) and the
    weight carried by each crossing."""
    angles, weights = [], []
    for g, w in mu.leaves:
        a, b = g.p.angle, g.q.angle
        span = (b - a) % TWO_PI
        if span > math.pi:
            a, b, span = b, a, TWO_PI - span
        mid = a + 0.5 * span
        half = 0.5 * span
        if abs(half - 0.5 * math.pi) < 1e-15:
            offs = half
        else:
            center = 1.0 / math.cos(half)
            ratio = (r * r + 1.0) / (2.0 * r * center)
            if ratio > 1.0:
                continue
            offs = math.acos(ratio)
        for t in (mid - offs, mid + offs):
            angles.append(t % TWO_PI)
            weights.append(w)
    return np.array(angles), np.array(weights)


def circle_mass_bound(mu: FiniteMeasuredLamination, n: int) -> tuple[float, float, float]:
    """``(length, unit_sup, bound)`` for the circle of radius ``1 - 1/n``.

    ``unit_sup`` is the largest total weight of leaf crossings inside one
    subarc of unit hyperbolic length (exact sliding window over crossing
    angles) and ``bound = unit_sup * ceil(length)``.
    """
    if n < 2:
        raise LaminationError(f"circle index must be >= 2, got {n}")
    r = 1.0 - 1.0 / n
    length = circle_length(n)
    window = (1.0 - r * r) / (2.0 * r)
    angles, weights = circle_crossings(mu, r)
    sup = 0.0
    if angles.size:
        order = np.argsort(angles)
        ang = angles[order]
        wts = weights[order]
        ang2 = np.concatenate([ang, ang + TWO_PI])
        wts2 = np.concatenate([wts, wts])
        csum = np.concatenate([[0.0], np.cumsum(wts2)])
        hi = np.searchsorted(ang2, ang + window * (1 + 1e-12), side="right")
        lo = np.arange(ang.size)
        sup = float(np.max(csum[hi] - csum[lo]))
    return length, sup, sup * math.ceil(length)


def circle_total_measure(mu: FiniteMeasuredLamination, n: int) -> float:
    """Total weight of crossings with the circle of radius ``1 - 1/n``."""
    _, weights = circle_crossings(mu, 1.0 - 1.0 / n)
    return float(weights.sum())


# ---------------------------------------------------------------------------
# file I/O
# ---------------------------------------------------------------------------
#
# Grammar (one item per line; '#' starts a comment; blank lines ignored):
#
#   model halfplane|disk        -- first non-comment line
#   <endpoint> <endpoint> <weight>
#
# Half-plane endpoints are decimal reals or the token ``inf``; disk
# endpoints are angles in radians.  Weights are positive decimals.

_NUM = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def _parse_endpoint(tok: str, model: str, lineno: int) -> BoundaryPoint:
    t = tok.lower()
    if model == "halfplane":
        if t in ("inf", "+inf", "-inf", "infinity"):
            return BoundaryPoint.infinity()
        if _NUM.match(tok):
            return BoundaryPoint.real(float(tok))
    elif _NUM.match(tok):
        return BoundaryPoint.from_angle(float(tok) % TWO_PI)
    raise LaminationError(f"line {lineno}: bad endpoint {tok!r}")


def parse_lamination(text: str) -> FiniteMeasuredLamination:
    model = None
    leaves = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if model is None:
            if len(parts) != 2 or parts[0] != "model" or parts[1] not in ("halfplane", "disk"):
                raise LaminationError(f"line {lineno}: expected 'model halfplane|disk'")
            model = parts[1]
            continue
        if len(parts) != 3:
            raise LaminationError(f"line {lineno}: expected 'a b weight'", [len(leaves)])
        a = _parse_endpoint(parts[0], model, lineno)
        b = _parse_endpoint(parts[1], model, lineno)
        if not _NUM.match(parts[2]):
            raise LaminationError(f"line {lineno}: bad weight {parts[2]!r}", [len(leaves)])
        try:
            g = Geodesic(a, b)
        except GeometryError as exc:
            raise LaminationError(f"line {lineno}: {exc}", [len(leaves)]) from exc
        leaves.append((g, float(parts[2])))
    if model is None:
        raise LaminationError("missing 'model' header")
    return FiniteMeasuredLamination(tuple(leaves))


def _fmt_endpoint(b: BoundaryPoint, model: str) -> str:
    if model == "disk":
        return f"{b.angle:.17g}"
    return "inf" if b.is_infinite else f"{b.value:.17g}"


def format_lamination(mu: FiniteMeasuredLamination, model: str = "halfplane") -> str:
    if model not in ("halfplane", "disk"):
        raise LaminationError(f"unknown model {model!r}")
    lines = [f"model {model}"]
    for g, w in mu.leaves:
        lines.append(f"{_fmt_endpoint(g.p, model)} {_fmt_endpoint(g.q, model)} {w:.17g}")
    return "\n".join(lines) + "\n"


def read_lamination(path) -> FiniteMeasuredLamination:
    return parse_lamination(Path(path).read_text())


def write_lamination(mu: FiniteMeasuredLamination, path, model: str = "halfplane") -> None:
    Path(path).write_text(format_lamination(mu, model))
