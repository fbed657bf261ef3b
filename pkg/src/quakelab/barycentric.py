"""Douady-Earle extension of circle homeomorphisms and Beltrami sampling.

Boundary maps live on the unit circle of the disk model.  Internally they
act on half-plane projective pairs, so earthquake maps and Moebius maps
share one evaluation path.  The extension at ``z`` is computed as the
conformal barycenter, at the origin, of ``h o B_z`` where ``B_z`` is the
disk automorphism sending 0 to ``z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, NumericalBreakdownError, ValidationError
from .hyperbolic import DPoint, MoebiusMap, TWO_PI
from .earthquake import EarthquakeMap

DEFAULT_QUADRATURE = 512
DEFAULT_TOL = 1e-9
DEFAULT_STEP = 1e-4
MAX_ITER = 100


# ---------------------------------------------------------------------------
# circle <-> projective pairs
# ---------------------------------------------------------------------------


def pairs_to_circle(u, v):
    """Cayley image ``(x - iy)/(x + iy)`` of projective pairs."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    z = u - 1j * v
    return z * z / (u * u + v * v)


def circle_to_pairs(zeta):
    theta = np.angle(np.asarray(zeta, dtype=complex))
    return -np.cos(0.5 * theta), np.sin(0.5 * theta)


def disk_moebius(center: complex, rotation: float = 0.0):
    """Vectorized ``w -> e^{i rot} (w + c)/(1 + conj(c) w)``."""
    c = complex(center)
    e = complex(math.cos(rotation), math.sin(rotation))

    def f(w):
        return e * (w + c) / (1.0 + c.conjugate() * w)

    return f


# ---------------------------------------------------------------------------
# circle maps
# ---------------------------------------------------------------------------


class CircleMap:
    """Orientation-preserving homeomorphism of the unit circle.

    Subclasses implement :meth:`apply_pairs`, :meth:`inverse` and
    :meth:`break_pairs` (points where the map may fail to be analytic).
    Instances are immutable.
    """

    tol: float = DEFAULT_TOL

    def apply_pairs(self, u, v):
        raise NotImplementedError

    def inverse(self) -> "CircleMap":
        raise NotImplementedError

    def break_pairs(self):
        return np.empty(0), np.empty(0)

    def __call__(self, zeta):
        u, v = circle_to_pairs(zeta)
        return pairs_to_circle(*self.apply_pairs(u, v))

    def breaks(self) -> np.ndarray:
        """Break points on the unit circle."""
        u, v = self.break_pairs()
        if not len(u):
            return np.empty(0, dtype=complex)
        return pairs_to_circle(u, v)

    def __matmul__(self, other: "CircleMap") -> "CircleMap":
        return ComposedMap(self, other)


class MoebiusCircleMap(CircleMap):
    """Boundary action of a Moebius map."""

    def __init__(self, m: MoebiusMap, tol: float = DEFAULT_TOL):
        self.m = m
        self.tol = tol

    @classmethod
    def identity(cls) -> "MoebiusCircleMap":
        return cls(MoebiusMap.identity())

    @classmethod
    def disk(cls, center: complex, rotation: float = 0.0) -> "MoebiusCircleMap":
        """Disk automorphism ``w -> e^{i rot} (w + c)/(1 + conj(c) w)``."""
        return cls(MoebiusMap.from_disk_automorphism(center, rotation))

    def apply_pairs(self, u, v):
        return self.m.act_pair(np.asarray(u, float), np.asarray(v, float))

    def inverse(self) -> "MoebiusCircleMap":
        return MoebiusCircleMap(self.m.inverse(), self.tol)

    def interior(self, w):
        """The map extended to the disk."""
        z = 1j * (1 + w) / (1 - w)
        z = self.m.apply_complex(z)
        return (z - 1j) / (z + 1j)


class EarthquakeCircleMap(CircleMap):
    """Boundary values of an earthquake (or of its inverse)."""

    def __init__(self, E: EarthquakeMap, inverted: bool = False, tol: float = DEFAULT_TOL):
        self.E = E
        self.inverted = inverted
        self.tol = tol

    def apply_pairs(self, u, v):
        if self.inverted:
            return self.E.inverse_boundary_pairs(u, v)
        return self.E.boundary_pairs(u, v)

    def inverse(self) -> "EarthquakeCircleMap":
        return EarthquakeCircleMap(self.E, not self.inverted, self.tol)

    def break_pairs(self):
        ends = [b for g in self.E.geodesics for b in (g.p, g.q)]
        if not ends:
            return np.empty(0), np.empty(0)
        u = np.array([b.x for b in ends])
        v = np.array([b.y for b in ends])
        if self.inverted:
            return self.E.boundary_pairs(u, v)
        return u, v


class ComposedMap(CircleMap):
    """``outer o inner``."""

    def __init__(self, outer: CircleMap, inner: CircleMap):
        self.outer = outer
        self.inner = inner
        self.tol = max(outer.tol, inner.tol)

    def apply_pairs(self, u, v):
        return self.outer.apply_pairs(*self.inner.apply_pairs(u, v))

    def inverse(self) -> "ComposedMap":
        return ComposedMap(self.inner.inverse(), self.outer.inverse())

    def break_pairs(self):
        ou, ov = self.outer.break_pairs()
        iu, iv = self.inner.break_pairs()
        if len(ou):
            ou, ov = self.inner.inverse().apply_pairs(ou, ov)
        return np.concatenate([ou, iu]), np.concatenate([ov, iv])


def earthquake_circle_map(E: EarthquakeMap) -> EarthquakeCircleMap:
    return EarthquakeCircleMap(E)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _gauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def circle_nodes(breaks: np.ndarray, n: int):
    """Nodes and weights (summing to 1) for the uniform measure on the circle.

    Without breaks this is the trapezoid rule; otherwise each arc between
    consecutive breaks gets its own Gauss-Legendre rule, sized in
    proportion to its length.
    """
    if len(breaks) == 0:
        t = TWO_PI * np.arange(n) / n
        return t, np.full(n, 1.0 / n)
    a = np.unique(np.mod(np.angle(breaks), TWO_PI))
    a = np.concatenate([a, [a[0] + TWO_PI]])
    nodes, weights = [], []
    for lo, hi in zip(a[:-1], a[1:]):
        length = hi - lo
        if length <= 0.0:
            continue
        k = max(4, math.ceil(n * length / TWO_PI))
        x, w = _gauss(k)
        nodes.append(lo + 0.5 * length * (x + 1.0))
        weights.append(0.5 * length * w / TWO_PI)
    return np.concatenate(nodes), np.concatenate(weights)


# ---------------------------------------------------------------------------
# barycenter
# ---------------------------------------------------------------------------


def barycenter_field(zeta, weights, w: complex) -> complex:
    """Weighted average of ``zeta`` moved by the automorphism taking ``w`` to 0."""
    return complex(np.dot(weights, (zeta - w) / (1.0 - np.conj(w) * zeta)))


def conformal_barycenter(zeta, weights, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> complex:
    """Solve ``barycenter_field(zeta, weights, w) = 0`` by damped Newton.

    Raises
    ------
    ConvergenceError
        If the residual does not drop below ``tol``.
    """
    w = complex(np.dot(weights, zeta))
    if abs(w) >= 1.0:
        w = 0j
    res = barycenter_field(zeta, weights, w)
    polished = False
    for _ in range(max_iter):
        if abs(res) <= tol:
            if polished:
                return w
            polished = True
        q = 1.0 / (1.0 - np.conj(w) * zeta)
        A = -complex(np.dot(weights, q))
        B = complex(np.dot(weights, (zeta - w) * zeta * q * q))
        det = abs(A) ** 2 - abs(B) ** 2
        if det > 1e-14:
            dw = (-res * A.conjugate() + B * res.conjugate()) / det
        else:
            # fixed-point step: move to the barycenter seen from w
            dw = (res + w) / (1.0 + w.conjugate() * res) - w
        step = 1.0
        while True:
            cand = w + step * dw
            if abs(cand) < 1.0:
                r = barycenter_field(zeta, weights, cand)
                if abs(r) < abs(res) or (polished and abs(r) <= tol):
                    break
            step *= 0.5
            if step < 1e-10:
                if abs(res) <= tol:
                    return w
                raise ConvergenceError("barycenter line search failed", residual=abs(res))
        w, res = cand, r
    if abs(res) <= tol:
        return w
    raise ConvergenceError("barycenter did not converge", residual=abs(res))


def de_extend_complex(h: CircleMap, z: complex, quadrature_n: int = DEFAULT_QUADRATURE,
                      tol: float = DEFAULT_TOL) -> complex:
    """Douady-Earle extension of ``h`` at the complex disk point ``z``."""
    if quadrature_n < 64:
        raise ValidationError("quadrature_n must be at least 64")
    if not tol > 0:
        raise ValidationError("tol must be positive")
    z = complex(z)
    if abs(z) >= 1.0:
        raise ValidationError(f"point {z} is not inside the disk")
    back = disk_moebius(-z)
    br = h.breaks()
    t, wts = circle_nodes(back(br) if len(br) else br, quadrature_n)
    omega = np.exp(1j * t)
    zeta = h(disk_moebius(z)(omega))
    return conformal_barycenter(zeta, wts, tol)


def de_extend(h: CircleMap, z: DPoint, quadrature_n: int = DEFAULT_QUADRATURE,
              tol: float = DEFAULT_TOL) -> DPoint:
    """Douady-Earle extension ``DE(h)(z)``.

    Parameters
    ----------
    h : CircleMap
        Boundary homeomorphism.
    z : DPoint
        Point of the open disk.
    quadrature_n : int
        Base node count for the circle quadrature (at least 64).
    tol : float
        Residual tolerance for the barycenter equation.
    """
    zc = z.z if isinstance(z, DPoint) else complex(z)
    return DPoint.from_complex(de_extend_complex(h, zc, quadrature_n, tol))


# ---------------------------------------------------------------------------
# Beltrami coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BeltramiSample:
    point: DPoint
    value: complex

    def __post_init__(self):
        if not abs(self.value) < 1.0:
            raise NumericalBreakdownError(f"Beltrami coefficient {self.value} has modulus >= 1")


def beltrami_of_map(F, z: complex, step: float = DEFAULT_STEP) -> complex:
    """Beltrami coefficient of an interior map by central differences."""
    z = complex(z)
    fx = (F(z + step) - F(z - step)) / (2.0 * step)
    fy = (F(z + 1j * step) - F(z - 1j * step)) / (2.0 * step)
    dz = 0.5 * (fx - 1j * fy)
    dzbar = 0.5 * (fx + 1j * fy)
    if dz == 0:
        raise NumericalBreakdownError("vanishing complex derivative")
    return dzbar / dz


def beltrami(h: CircleMap, z: DPoint, step: float = DEFAULT_STEP,
             quadrature_n: int = DEFAULT_QUADRATURE, tol: float = DEFAULT_TOL) -> BeltramiSample:
    """Beltrami coefficient of ``DE(h)`` at ``z``.

    The extension is differentiated in recentered coordinates: with
    ``B_z(0) = z`` and ``w = DE(h)(z)``, the map ``B_w^{-1} o h o B_z`` has
    extension fixing 0 and the same Beltrami coefficient at 0 as ``DE(h)``
    at ``z`` (the derivative of ``B_z`` at 0 is real).  ``step`` is taken
    in those coordinates.
    """
    zc = z.z if isinstance(z, DPoint) else complex(z)
    w = de_extend_complex(h, zc, quadrature_n, tol)
    g = MoebiusCircleMap.disk(-w) @ h @ MoebiusCircleMap.disk(zc)
    value = beltrami_of_map(lambda u: de_extend_complex(g, u, quadrature_n, tol), 0j, step)
    return BeltramiSample(DPoint.from_complex(zc), complex(value))


def default_grid(radii=(0.0, 0.3, 0.6, 0.9), n_angles: int = 16) -> list[DPoint]:
    """Concentric rings of sample points; the zero ring is a single point."""
    pts = []
    for r in radii:
        if r == 0.0:
            pts.append(DPoint(0.0, 0.0))
            continue
        for k in range(n_angles):
            a = TWO_PI * k / n_angles
            pts.append(DPoint(r * math.cos(a), r * math.sin(a)))
    return pts


def dilatation_distance(beta: float) -> float:
    """``(1/2) log((1 + beta)/(1 - beta))``."""
    return 0.5 * math.log1p(2.0 * beta / (1.0 - beta))


def max_beltrami(h: CircleMap, grid, step: float = DEFAULT_STEP,
                 quadrature_n: int = DEFAULT_QUADRATURE, tol: float = DEFAULT_TOL) -> float:
    return max(abs(beltrami(h, z, step, quadrature_n, tol).value) for z in grid)


def distance_proxy(h1: CircleMap, h2: CircleMap, grid=None, step: float = DEFAULT_STEP,
                   quadrature_n: int = DEFAULT_QUADRATURE, tol: float = DEFAULT_TOL) -> float:
    """Dilatation proxy for the distance between the classes of ``h1`` and ``h2``.

    Returns ``(1/2) log((1 + b)/(1 - b))`` with ``b`` the largest sampled
    Beltrami modulus of ``DE(h1 o h2^{-1})``.
    """
    grid = default_grid() if grid is None else list(grid)
    if not grid:
        raise ValidationError("grid must be nonempty")
    beta = max_beltrami(h1 @ h2.inverse(), grid, step, quadrature_n, tol)
    return dilatation_distance(beta)
