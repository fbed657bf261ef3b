"""Exact-formula hyperbolic geometry in the upper half-plane and the disk.

Boundary points are stored as canonical projective pairs ``(x : y)`` with
``x**2 + y**2 == 1`` and ``y >= 0`` so that infinity is the ordinary value
``(1 : 0)``.  Cyclic order on the extended real line runs
``inf -> negative reals -> 0 -> positive reals``; under the Cayley transform
``z -> (z - i)/(z + i)`` this is the counterclockwise order on the unit
circle, with infinity sitting at angle 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from quakelab.errors import (
    ClassificationError,
    GeometryError,
    InconsistencyError,
    InvalidBoxError,
    NormalizationError,
)

GEOM_TOL = 1e-10
LIOUVILLE_RTOL = 1e-12
TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    """A point of the extended real line as a projective pair ``(x : y)``."""

    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        r = math.hypot(x, y)
        if r == 0.0 or not math.isfinite(r):
            raise GeometryError(f"invalid projective pair ({self.x}, {self.y})")
        x, y = x / r, y / r
        if y < 0.0 or (y == 0.0 and x < 0.0):
            x, y = -x, -y
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def real(cls, value) -> "BoundaryPoint":
        value = float(value)
        if math.isinf(value):
            return cls(1.0, 0.0)
        if abs(value) > 1.0:
            return cls(1.0, 1.0 / value)
        return cls(value, 1.0)

    @classmethod
    def infinity(cls) -> "BoundaryPoint":
        return cls(1.0, 0.0)

    @classmethod
    def from_angle(cls, theta: float) -> "BoundaryPoint":
        """Inverse of :attr:`angle` (disk angle -> half-plane boundary)."""
        return cls(-math.cos(theta / 2.0), math.sin(theta / 2.0))

    @property
    def is_infinite(self) -> bool:
        return self.y == 0.0

    @property
    def value(self) -> float:
        """The real coordinate, ``math.inf`` for the point at infinity."""
        return math.inf if self.y == 0.0 else self.x / self.y

    @property
    def key(self) -> float:
        """Sort key for the cyclic order starting at infinity."""
        return -math.inf if self.y == 0.0 else self.x / self.y

    @property
    def angle(self) -> float:
        """Angle in ``[0, 2*pi)`` of the Cayley image on the unit circle."""
        theta = (-2.0 * math.atan2(self.y, self.x)) % TWO_PI
        return 0.0 if theta >= TWO_PI else theta

    @property
    def pair(self) -> tuple[float, float]:
        return (self.x, self.y)

    def to_disk(self) -> complex:
        return cmath.exp(1j * self.angle)

    def isclose(self, other: "BoundaryPoint", tol: float = GEOM_TOL) -> bool:
        return abs(self.x * other.y - self.y * other.x) <= tol

    def __eq__(self, other):
        if not isinstance(other, BoundaryPoint):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def __repr__(self):
        return "BoundaryPoint(inf)" if self.is_infinite else f"BoundaryPoint({self.value!r})"


@dataclass(frozen=True)
class HPoint:
    """Upper half-plane point ``x + iy`` with metric ``|dz|/y``."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0.0:
            raise GeometryError(f"HPoint needs y > 0, got {self.y}")

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class DPoint:
    """Unit disk point ``u + iv`` with metric ``2|dz|/(1 - |z|^2)``."""

    u: float
    v: float

    def __post_init__(self):
        if not self.u * self.u + self.v * self.v < 1.0:
            raise GeometryError(f"DPoint must lie in the open disk, got ({self.u}, {self.v})")

    @classmethod
    def from_complex(cls, z: complex) -> "DPoint":
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.u, self.v)


def _det(p, q) -> float:
    return p[0] * q[1] - q[0] * p[1]


def ccw(a: BoundaryPoint, b: BoundaryPoint, c: BoundaryPoint) -> bool:
    """True if ``a, b, c`` are distinct and counterclockwise on the circle."""
    return _det(a.pair, b.pair) * _det(b.pair, c.pair) * _det(c.pair, a.pair) > 0.0


# ---------------------------------------------------------------------------
# Moebius maps
# ---------------------------------------------------------------------------


class IsometryType(str, Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """Element of PSL(2, R) acting by ``z -> (az + b)/(cz + d)``.

    Entries are rescaled on construction so that ``ad - bc = 1``.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not det > 0.0 or not math.isfinite(det):
            raise GeometryError(f"Moebius map needs positive determinant, got {det}")
        s = math.sqrt(det)
        for name in "abcd":
            object.__setattr__(self, name, float(getattr(self, name)) / s)

    @classmethod
    def _exact(cls, a, b, c, d) -> "MoebiusMap":
        # skip renormalization: det is already 1 up to rounding, and
        # recomputing it from large entries cancels badly
        m = object.__new__(cls)
        for name, val in zip("abcd", (a, b, c, d)):
            object.__setattr__(m, name, float(val))
        return m

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_matrix(cls, m) -> "MoebiusMap":
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def dilation(cls, length: float) -> "MoebiusMap":
        """``z -> e^length z``: translation along (0, inf) towards inf."""
        h = 0.5 * length
        return cls(math.exp(h), 0.0, 0.0, math.exp(-h))

    @classmethod
    def shift(cls, t: float) -> "MoebiusMap":
        return cls(1.0, t, 0.0, 1.0)

    @classmethod
    def from_disk_automorphism(cls, center: complex, rotation: float = 0.0) -> "MoebiusMap":
        """Half-plane form of ``w -> e^{i rot} (w + center)/(1 + conj(center) w)``."""
        a = cmath.exp(0.5j * rotation)
        disk = np.array([[a, a * center], [np.conj(center) / a, 1.0 / a]])
        cay = np.array([[1.0, -1j], [1.0, 1j]])
        m = np.linalg.inv(cay) @ disk @ cay
        # m is a complex multiple of a real matrix; strip the phase
        k = np.argmax(np.abs(m))
        m = (m / (m.flat[k] / abs(m.flat[k]))).real
        if np.linalg.det(m) < 0:
            m = -m
        return cls.from_matrix(m)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self) -> float:
        return self.a + self.d

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap._exact(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap._exact(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def act_pair(self, u, v):
        """Projective action on (arrays of) pairs."""
        return self.a * u + self.b * v, self.c * u + self.d * v

    def __call__(self, p):
        if isinstance(p, BoundaryPoint):
            return BoundaryPoint(*self.act_pair(p.x, p.y))
        if isinstance(p, HPoint):
            return HPoint.from_complex(self.apply_complex(p.z))
        if isinstance(p, Geodesic):
            return Geodesic(self(p.p), self(p.q))
        if isinstance(p, GeodesicArc):
            return GeodesicArc(self(p.start), self(p.end))
        if isinstance(p, GeodesicBox):
            return GeodesicBox(self(p.a), self(p.b), self(p.c), self(p.d))
        return self.apply_complex(p)

    def apply_complex(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def isclose(self, other: "MoebiusMap", tol: float = GEOM_TOL) -> bool:
        m, n = self.matrix, other.matrix
        return bool(min(np.max(np.abs(m - n)), np.max(np.abs(m + n))) <= tol)

    def __repr__(self):
        return f"MoebiusMap({self.a:.6g}, {self.b:.6g}, {self.c:.6g}, {self.d:.6g})"


def moebius_from_points(src, dst) -> MoebiusMap:
    """The orientation-preserving map sending the boundary triple ``src`` to ``dst``."""
    s = _to_standard(*src)
    t = _to_standard(*dst)
    m = np.linalg.inv(t) @ s
    if np.linalg.det(m) <= 0:
        raise GeometryError("triples have opposite orientation")
    return MoebiusMap.from_matrix(m)


def _to_standard(p1: BoundaryPoint, p2: BoundaryPoint, p3: BoundaryPoint) -> np.ndarray:
    # rows are linear forms vanishing at p1 and p3, scaled so that p2 -> 1
    alpha = _det(p2.pair, p3.pair)
    beta = _det(p2.pair, p1.pair)
    if alpha == 0.0 or beta == 0.0 or _det(p1.pair, p3.pair) == 0.0:
        raise GeometryError("three-point interpolation needs distinct points")
    return np.array(
        [[alpha * p1.y, -alpha * p1.x], [beta * p3.y, -beta * p3.x]]
    )


def translation_length(g: MoebiusMap, tol: float = 1e-13) -> tuple[float, IsometryType]:
    """Translation length ``2 arccosh(|tr|/2)`` and the isometry type."""
    if abs(g.b) <= GEOM_TOL and abs(g.c) <= GEOM_TOL and abs(g.a - g.d) <= GEOM_TOL:
        return 0.0, IsometryType.IDENTITY
    tr = abs(g.trace)
    if tr > 2.0 + tol:
        return 2.0 * math.acosh(0.5 * tr), IsometryType.HYPERBOLIC
    if tr < 2.0 - tol:
        return 0.0, IsometryType.ELLIPTIC
    return 0.0, IsometryType.PARABOLIC


def axis(g: MoebiusMap) -> "Geodesic":
    """Axis of a hyperbolic map, ordered (repelling, attracting)."""
    _, kind = translation_length(g)
    if kind is not IsometryType.HYPERBOLIC:
        raise ClassificationError(f"axis needs a hyperbolic map, got {kind.value}")
    m = g.matrix if g.trace > 0 else -g.matrix
    a, b, c, d = m.ravel()
    tr = a + d
    root = math.sqrt(tr * tr - 4.0)
    lam_big = 0.5 * (tr + root)
    lam_small = 1.0 / lam_big

    def eigvec(lam):
        v1 = (b, lam - a)
        v2 = (lam - d, c)
        return v1 if math.hypot(*v1) >= math.hypot(*v2) else v2

    return Geodesic(BoundaryPoint(*eigvec(lam_small)), BoundaryPoint(*eigvec(lam_big)))


# ---------------------------------------------------------------------------
# geodesics, arcs, boxes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Geodesic:
    """Complete geodesic with ideal endpoints ``p`` and ``q``.

    Equality ignores the order of the endpoints; the stored order is kept
    because :func:`axis` uses it for (repelling, attracting).
    """

    p: BoundaryPoint
    q: BoundaryPoint

    def __post_init__(self):
        if self.p.isclose(self.q):
            raise GeometryError("geodesic endpoints must be distinct")

    @classmethod
    def from_values(cls, a, b) -> "Geodesic":
        return cls(BoundaryPoint.real(a), BoundaryPoint.real(b))

    def __eq__(self, other):
        if not isinstance(other, Geodesic):
            return NotImplemented
        return (self.p.isclose(other.p) and self.q.isclose(other.q)) or (
            self.p.isclose(other.q) and self.q.isclose(other.p)
        )

    __hash__ = None

    def reversed(self) -> "Geodesic":
        return Geodesic(self.q, self.p)

    @property
    def frame(self) -> MoebiusMap:
        """A map sending 0 -> p and inf -> q."""
        p, q = self.p.pair, self.q.pair
        det = _det(q, p)
        if det < 0:
            p = (-p[0], -p[1])
            det = -det
        if not det > 0.0:
            raise GeometryError("degenerate geodesic")
        s = math.sqrt(det)
        return MoebiusMap._exact(q[0] / s, p[0] / s, q[1] / s, p[1] / s)

    def side(self, z):
        """Signed side function; zero on the geodesic.

        ``z`` may be a complex scalar or array of interior points.
        """
        (p1, p2), (q1, q2) = self.p.pair, self.q.pair
        x = np.real(z)
        return p2 * q2 * (np.abs(z) ** 2) - (p1 * q2 + p2 * q1) * x + p1 * q1

    def boundary_side(self, u, v=1.0):
        """Side function at boundary points given projectively as ``(u : v)``."""
        (p1, p2), (q1, q2) = self.p.pair, self.q.pair
        return p2 * q2 * u * u - (p1 * q2 + p2 * q1) * u * v + p1 * q1 * v * v

    def contains_boundary(self, b: BoundaryPoint, tol: float = GEOM_TOL) -> bool:
        return self.p.isclose(b, tol) or self.q.isclose(b, tol)

    def distance_to(self, z: complex) -> float:
        """Hyperbolic distance from an interior point to the geodesic."""
        w = self.frame.inverse().apply_complex(z)
        return math.asinh(abs(w.real) / w.imag)

    def project(self, z: complex) -> complex:
        frame = self.frame
        w = frame.inverse().apply_complex(z)
        return frame.apply_complex(1j * abs(w))

    def point_at(self, s: float, origin: complex = 1j) -> complex:
        """Point at signed distance ``s`` (towards ``q``) from the foot of ``origin``."""
        frame = self.frame
        w = frame.inverse().apply_complex(origin)
        return frame.apply_complex(1j * abs(w) * math.exp(s))

    def arc_angles(self) -> tuple[float, float]:
        return self.p.angle, self.q.angle


@dataclass(frozen=True)
class GeodesicArc:
    """Closed geodesic segment between two interior points."""

    start: HPoint
    end: HPoint

    @property
    def length(self) -> float:
        return hyp_distance(self.start, self.end)


@dataclass(frozen=True, eq=False)
class GeodesicBox:
    """Box ``[a, b] x [c, d]`` of geodesics, corners counterclockwise."""

    a: BoundaryPoint
    b: BoundaryPoint
    c: BoundaryPoint
    d: BoundaryPoint

    def __post_init__(self):
        pts = (self.a, self.b, self.c, self.d)
        for i in range(4):
            for j in range(i + 1, 4):
                if pts[i].isclose(pts[j]):
                    raise InvalidBoxError("box corners must be distinct")
        if not (ccw(self.a, self.b, self.c) and ccw(self.a, self.c, self.d)):
            raise InvalidBoxError("box corners must be counterclockwise")

    @classmethod
    def from_values(cls, a, b, c, d) -> "GeodesicBox":
        return cls(*(BoundaryPoint.real(t) for t in (a, b, c, d)))

    @property
    def corners(self) -> tuple[BoundaryPoint, ...]:
        return (self.a, self.b, self.c, self.d)


# ---------------------------------------------------------------------------
# metric quantities
# ---------------------------------------------------------------------------


def hyp_distance(p: HPoint, q: HPoint) -> float:
    dx, dy = p.x - q.x, p.y - q.y
    # arcsinh form is accurate for nearby points
    return 2.0 * math.asinh(0.5 * math.hypot(dx, dy) / math.sqrt(p.y * q.y))


def disk_distance(p: DPoint, q: DPoint) -> float:
    z, w = p.z, q.z
    num = abs(z - w)
    den = math.sqrt((1.0 - abs(z) ** 2) * (1.0 - abs(w) ** 2))
    return 2.0 * math.asinh(num / den)


def cross_ratio(a: BoundaryPoint, b: BoundaryPoint, c: BoundaryPoint, d: BoundaryPoint) -> float:
    """``(c - a)(d - b) / ((d - a)(c - b))`` with infinite corners cancelled."""
    num = _det(c.pair, a.pair) * _det(d.pair, b.pair)
    den = _det(d.pair, a.pair) * _det(c.pair, b.pair)
    if num == 0.0 or den == 0.0:
        raise InvalidBoxError("degenerate cross-ratio: coincident corners")
    return num / den


def liouville_measure(box: GeodesicBox) -> float:
    return math.log(cross_ratio(*box.corners))


def moebius_from_box(box: GeodesicBox, target: GeodesicBox, tol: float = 1e-9) -> MoebiusMap:
    """The unique map taking a unit-Liouville box onto ``target``.

    Three corners are interpolated; the fourth is checked.
    """
    for name, q in (("box", box), ("target", target)):
        lm = liouville_measure(q)
        if abs(lm - 1.0) > tol:
            raise NormalizationError(f"{name} has Liouville measure {lm!r}, expected 1")
    g = moebius_from_points((box.a, box.b, box.c), (target.a, target.b, target.c))
    dd = g(box.d)
    if angle_metric(dd, target.d) > 1e-8:
        raise InconsistencyError("fourth corner does not match after normalization")
    return g


def angle_metric(x: BoundaryPoint, y: BoundaryPoint) -> float:
    """Angle at ``i`` between the geodesic rays towards ``x`` and ``y``."""
    delta = abs(x.angle - y.angle) % TWO_PI
    return min(delta, TWO_PI - delta)


def to_disk(p: HPoint) -> DPoint:
    z = p.z
    return DPoint.from_complex((z - 1j) / (z + 1j))


def from_disk(p: DPoint) -> HPoint:
    w = p.z
    return HPoint.from_complex(1j * (1 + w) / (1 - w))


def boundary_to_disk(b: BoundaryPoint) -> complex:
    return b.to_disk()


def boundary_from_disk(zeta: complex) -> BoundaryPoint:
    return BoundaryPoint.from_angle(cmath.phase(zeta) % TWO_PI)


def point_at(z: complex, direction: float, distance: float) -> complex:
    """Endpoint of the geodesic segment from ``z`` with the given initial
    direction (angle in the half-plane) and hyperbolic length."""
    w = math.tanh(0.5 * distance) * cmath.exp(1j * (direction - 0.5 * math.pi))
    return z.real + z.imag * (1j * (1 + w) / (1 - w))
