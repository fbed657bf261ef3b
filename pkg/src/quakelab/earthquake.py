"""Finite left earthquakes.

For a finite lamination the stratum map of a complementary region ``S`` is
the product ``T_1 T_2 ... T_k`` of translations along the leaves separating
``S`` from the base region, nearest leaf first; ``T_j`` translates along
leaf ``j`` by its weight.  The comparison isometry of strata ``A, B`` is
``E|A^{-1} E|B``; with this ordering it is the product of the translations
along the leaves between ``A`` and ``B``, so its axis separates them.

Orientation convention: a translation is oriented (repelling, attracting)
so that the counterclockwise boundary arc from the repelling to the
attracting fixed point lies on the far side of the leaf.  Seen from the
base, the far side slides to the left.  ``left=False`` flips every
translation and produces right earthquakes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from quakelab.errors import GeometryError
from quakelab.hyperbolic import (
    BoundaryPoint,
    Geodesic,
    HPoint,
    IsometryType,
    MoebiusMap,
    axis,
    ccw,
    point_at,
    translation_length,
)
from quakelab.lamination import (
    ON_LEAF_TOL,
    FiniteMeasuredLamination,
    _arc_mid,
    boundary_sign,
    geodesic_side,
    interior_side,
    leaf_point_and_normal,
)

_BASE_CANDIDATES = (1j, 1 + 1j, -1 + 1j, 2j, 0.5j, 0.37 + 1.3j)


@dataclass
class Stratum:
    kind: str  # "region" or "leaf"
    signature: tuple
    map: MoebiusMap
    point: complex
    ideal: list = field(default_factory=list)
    leaf: int = -1
    sep: tuple = ()

    @property
    def label(self) -> str:
        if self.kind == "leaf":
            return f"leaf[{self.leaf}]"
        return "region[" + "".join("+" if s > 0 else "-" for s in self.signature) + "]"


def pair_keys(u, v):
    """Cyclic-order keys (infinity first) for projective pairs."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    flip = v < 0
    u = np.where(flip, -u, u)
    v = np.where(flip, -v, v)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(v == 0.0, -np.inf, u / v)


class EarthquakeMap:
    """Earthquake of a finite measured lamination, normalized at a base region."""

    def __init__(self, lamination, basepoint=None, left=True, flips=()):
        self.lamination = lamination
        self.left = left
        self.flips = frozenset(flips)
        self.geodesics = lamination.geodesics
        self.weights = lamination.weights
        n = len(self.geodesics)
        self.basepoint = self._choose_basepoint(basepoint)
        base = self.basepoint
        self.base_sign = tuple(
            1 if interior_side(g, base) > 0 else -1 for g in self.geodesics
        )
        self._dist = [g.distance_to(base) for g in self.geodesics]
        self.translations = [self._translation(k) for k in range(n)]
        self._cache: dict = {}
        self._build_strata()
        self._build_gaps()

    # -- construction ------------------------------------------------------

    def _choose_basepoint(self, basepoint):
        def clear(z):
            return all(abs(interior_side(g, z)) > 1e-9 for g in self.geodesics)

        if basepoint is not None:
            z = basepoint.z if isinstance(basepoint, HPoint) else complex(basepoint)
            if not clear(z):
                raise GeometryError("basepoint lies on a leaf")
            return z
        for z in _BASE_CANDIDATES:
            if clear(z):
                return z
        raise GeometryError("no basepoint candidate avoids the leaves")

    def _translation(self, k: int) -> MoebiusMap:
        g = self.geodesics[k]
        far = -self.base_sign[k]
        mid = BoundaryPoint.from_angle(_arc_mid(g.p, g.q))
        if boundary_sign(g, mid) == far:
            rep, att = g.p, g.q
        else:
            rep, att = g.q, g.p
        if (not self.left) != (k in self.flips):
            rep, att = att, rep
        frame = Geodesic(rep, att).frame
        return frame @ MoebiusMap.dilation(self.weights[k]) @ frame.inverse()

    def separating(self, signature) -> list[int]:
        """Leaves separating a region from the base, nearest first."""
        sep = [k for k, s in enumerate(signature) if s != self.base_sign[k]]
        return sorted(sep, key=lambda k: self._dist[k])

    def map_for(self, signature) -> MoebiusMap:
        signature = tuple(signature)
        m = self._cache.get(signature)
        if m is None:
            m = MoebiusMap.identity()
            for k in self.separating(signature):
                m = m @ self.translations[k]
            self._cache[signature] = m
        return m

    def _stratum(self, kind, sig, point, ideal=None, leaf=-1) -> Stratum:
        return Stratum(
            kind, sig, self.map_for(sig), point, list(ideal or []), leaf, tuple(self.separating(sig))
        )

    def product(self, leaves) -> MoebiusMap:
        m = MoebiusMap.identity()
        for k in leaves:
            m = m @ self.translations[k]
        return m

    def comparison(self, A: "Stratum", B: "Stratum") -> MoebiusMap:
        """Comparison isometry ``E|A^{-1} E|B`` with the shared prefix of
        separating leaves cancelled exactly."""
        p = 0
        while p < min(len(A.sep), len(B.sep)) and A.sep[p] == B.sep[p]:
            p += 1
        return self.product(A.sep[p:]).inverse() @ self.product(B.sep[p:])

    def _leaf_signature(self, k: int, s: int) -> tuple:
        g = self.geodesics[k]
        return tuple(
            s if j == k else geodesic_side(h, g) for j, h in enumerate(self.geodesics)
        )

    def _offset_point(self, k: int, s: int) -> complex:
        g = self.geodesics[k]
        foot, normal = leaf_point_and_normal(g, 0.0, self.basepoint)
        others = [h.distance_to(foot) for j, h in enumerate(self.geodesics) if j != k]
        eps = min([1e-3] + [0.5 * d for d in others])
        for direction in (normal, normal + math.pi):
            z = point_at(foot, direction, eps)
            if np.sign(interior_side(g, z)) == s:
                return z
        raise GeometryError("could not place a point beside a leaf")

    def _build_strata(self):
        n = len(self.geodesics)
        regions: dict[tuple, Stratum] = {}
        base_sig = self.base_sign
        regions[base_sig] = self._stratum("region", base_sig, self.basepoint)
        for k in range(n):
            g = self.geodesics[k]
            for s in (1, -1):
                sig = self._leaf_signature(k, s)
                st = regions.get(sig)
                if st is None:
                    st = self._stratum("region", sig, self._offset_point(k, s))
                    regions[sig] = st
                st.ideal.extend([g.p, g.q])
        self.regions = list(regions.values())
        self._region_index = {st.signature: i for i, st in enumerate(self.regions)}
        self.leaf_strata = []
        for k, g in enumerate(self.geodesics):
            sig = self._leaf_signature(k, self.base_sign[k])
            foot, _ = leaf_point_and_normal(g, 0.0, self.basepoint)
            self.leaf_strata.append(
                self._stratum("leaf", sig, foot, [g.p, g.q], leaf=k)
            )

    def _build_gaps(self):
        ends: list[BoundaryPoint] = []
        for g in self.geodesics:
            for e in (g.p, g.q):
                if not any(e.isclose(f) for f in ends):
                    ends.append(e)
        ends.sort(key=lambda b: b.key)
        self.endpoints = ends
        m = len(ends)
        self.end_keys = np.array([b.key for b in ends])
        mats, gap_regions = [], []
        for j in range(m):
            a, b = ends[j], ends[(j + 1) % m]
            mid = BoundaryPoint.from_angle(_arc_mid(a, b))
            sig = tuple(boundary_sign(g, mid) for g in self.geodesics)
            st = self.regions[self._region_index[sig]] if sig in self._region_index else None
            if st is None:
                st = self._stratum("region", sig, self._gap_point(mid))
                self._region_index[sig] = len(self.regions)
                self.regions.append(st)
            st.ideal.append(mid)
            mats.append(st.map.matrix)
            gap_regions.append(self._region_index[sig])
        self.gap_matrices = np.array(mats).reshape(m, 2, 2)
        self.gap_inverse = np.linalg.inv(self.gap_matrices) if m else self.gap_matrices
        self.gap_regions = gap_regions
        if m:
            u, v = np.array([b.pair for b in ends]).T
            iu, iv = self._apply_gaps(u, v, np.arange(m))
            self.image_keys = pair_keys(iu, iv)
            self._rot = int(np.argmin(self.image_keys))
            self._rot_keys = np.roll(self.image_keys, -self._rot)
            self.image_endpoints = [BoundaryPoint(a, b) for a, b in zip(iu, iv)]
        else:
            self.image_endpoints = []

    def _gap_point(self, mid: BoundaryPoint) -> complex:
        # a point inside a region seen only from a boundary gap
        z = mid.value if not mid.is_infinite else None
        if z is None:
            return 1e6j
        return complex(z, 1e-6 * max(1.0, abs(z)))

    # -- evaluation --------------------------------------------------------

    def _apply_gaps(self, u, v, idx):
        m = self.gap_matrices[idx]
        return m[..., 0, 0] * u + m[..., 0, 1] * v, m[..., 1, 0] * u + m[..., 1, 1] * v

    def gap_index(self, keys) -> np.ndarray:
        j = np.searchsorted(self.end_keys, keys, side="right") - 1
        return np.where(j < 0, len(self.end_keys) - 1, j)

    def boundary_pairs(self, u, v):
        """Vectorized boundary map on projective pairs."""
        if not len(self.geodesics):
            return np.asarray(u, float), np.asarray(v, float)
        idx = self.gap_index(pair_keys(u, v))
        return self._apply_gaps(u, v, idx)

    def inverse_boundary_pairs(self, u, v):
        if not len(self.geodesics):
            return np.asarray(u, float), np.asarray(v, float)
        keys = pair_keys(u, v)
        m = len(self.end_keys)
        p = np.searchsorted(self._rot_keys, keys, side="right") - 1
        idx = (self._rot + p) % m
        inv = self.gap_inverse[idx]
        return inv[..., 0, 0] * u + inv[..., 0, 1] * v, inv[..., 1, 0] * u + inv[..., 1, 1] * v

    def stratum_of_interior(self, z: complex) -> tuple:
        sig = []
        for k, g in enumerate(self.geodesics):
            s = interior_side(g, z)
            sig.append(self.base_sign[k] if abs(s) <= ON_LEAF_TOL else (1 if s > 0 else -1))
        return tuple(sig)

    def interior_map(self, z: complex) -> MoebiusMap:
        return self.map_for(self.stratum_of_interior(z))

    def __repr__(self):
        return f"EarthquakeMap({len(self.geodesics)} leaves, left={self.left})"


def build_earthquake(mu: FiniteMeasuredLamination, basepoint=None, left: bool = True, flips=()) -> EarthquakeMap:
    """Earthquake with measure ``mu`` normalized to the identity on the base region.

    ``flips`` reverses the translation direction of the listed leaves; it
    exists to build deliberately broken maps for :func:`verify_left`.
    """
    return EarthquakeMap(mu, basepoint=basepoint, left=left, flips=flips)


def eval_boundary(E: EarthquakeMap, x: BoundaryPoint) -> BoundaryPoint:
    """Boundary value; at a leaf endpoint the base-side map is used."""
    if not E.geodesics:
        return x
    j = int(E.gap_index(np.array([x.key]))[0])
    m = len(E.end_keys)
    if E.endpoints[j].isclose(x):
        # both adjacent gaps agree at an endpoint; take the one nearer the base
        cands = [j, (j - 1) % m]
        j = min(cands, key=lambda i: len(E.separating(E.regions[E.gap_regions[i]].signature)))
    u, v = E._apply_gaps(np.array(x.x), np.array(x.y), j)
    return BoundaryPoint(float(u), float(v))


def eval_interior(E: EarthquakeMap, z: HPoint) -> HPoint:
    return E.interior_map(z.z)(z)


def invert_boundary(E: EarthquakeMap, y: BoundaryPoint) -> BoundaryPoint:
    u, v = E.inverse_boundary_pairs(np.array([y.x]), np.array([y.y]))
    return BoundaryPoint(float(u[0]), float(v[0]))


def strata(E: EarthquakeMap) -> list[Stratum]:
    return list(E.regions) + list(E.leaf_strata)


def comparison(E: EarthquakeMap, A: Stratum, B: Stratum) -> MoebiusMap:
    """Comparison isometry ``E|A^{-1} E|B``."""
    return E.comparison(A, B)


def _check_pair(E: EarthquakeMap, A: Stratum, B: Stratum):
    c = E.comparison(A, B)
    _, kind = translation_length(c)
    if kind is IsometryType.IDENTITY:
        return None
    if kind is not IsometryType.HYPERBOLIC:
        return f"comparison is {kind.value}"
    ax = axis(c)
    sa, a_on = _stratum_signs(ax, A)
    sb, _ = _stratum_signs(ax, B)
    if len(sa) > 1 or len(sb) > 1 or (sa and sa == sb):
        return "axis does not separate the strata"
    frame = ax.frame
    w = frame.inverse().apply_complex(A.point)
    if a_on:
        wb = frame.inverse().apply_complex(B.point)
        x = math.copysign(abs(w), wb.real)
    else:
        x = -math.copysign(abs(w), w.real)
    target = frame(BoundaryPoint.real(x))
    if not ccw(ax.p, target, ax.q):
        return "translation is to the right"
    return None


def _stratum_signs(ax: Geodesic, st: Stratum) -> tuple[set, bool]:
    # a leaf stratum is located by its endpoints; its foot point is only
    # accurate to about 1e-8 on very thin leaves
    ideal = [boundary_sign(ax, b) for b in st.ideal]
    if st.kind == "leaf":
        signs = {v for v in ideal if v}
        return signs, not signs
    v = _interior_sign(ax, st.point)
    return {x for x in ideal + [v] if x}, v == 0


def _interior_sign(g: Geodesic, z: complex) -> int:
    s = interior_side(g, z)
    return 0 if abs(s) <= 1e-9 else (1 if s > 0 else -1)


@dataclass
class LeftReport:
    ok: bool
    violations: list
    pairs_checked: int


def verify_left(E: EarthquakeMap, exhaustive_limit: int = 12, n_random: int = 2000, seed: int = 0) -> LeftReport:
    """Check every comparison isometry is a left translation whose axis
    weakly separates the two strata.  Exhaustive over stratum pairs for
    laminations with at most ``exhaustive_limit`` leaves, random otherwise."""
    items = strata(E)
    n = len(items)
    if len(E.geodesics) <= exhaustive_limit:
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    else:
        rng = np.random.default_rng(seed)
        pairs = [tuple(rng.choice(n, 2, replace=False)) for _ in range(n_random)]
    violations = []
    for i, j in pairs:
        msg = _check_pair(E, items[i], items[j])
        if msg:
            violations.append({"from": items[i].label, "to": items[j].label, "reason": msg})
    return LeftReport(ok=not violations, violations=violations, pairs_checked=len(pairs))


def recover_measure(E: EarthquakeMap) -> FiniteMeasuredLamination:
    """Read the lamination back from the translation lengths of the
    comparison maps across each leaf."""
    leaves = []
    for k in range(len(E.geodesics)):
        inner = E._stratum("region", E._leaf_signature(k, E.base_sign[k]), E.basepoint)
        outer = E._stratum("region", E._leaf_signature(k, -E.base_sign[k]), E.basepoint)
        c = E.comparison(inner, outer)
        length, kind = translation_length(c)
        if kind is IsometryType.HYPERBOLIC:
            leaves.append((axis(c), length))
    return FiniteMeasuredLamination(tuple(leaves))
