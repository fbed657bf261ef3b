"""Lamination generators, the box functional, and desk-scale experiments.

Every experiment returns an :class:`ExperimentReport`, which serializes to
CSV or JSON deterministically given its parameters.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .barycentric import (
    DEFAULT_QUADRATURE,
    DEFAULT_STEP,
    DEFAULT_TOL,
    EarthquakeCircleMap,
    beltrami,
    default_grid,
    distance_proxy,
)
from .earthquake import build_earthquake
from .errors import NumericalError, ValidationError
from .hyperbolic import (
    BoundaryPoint,
    DPoint,
    Geodesic,
    GeodesicBox,
    MoebiusMap,
    TWO_PI,
    moebius_from_box,
)
from .lamination import (
    FiniteMeasuredLamination,
    circle_mass_bound,
    crosses,
    end_profile,
    pushforward,
    scale,
)

SCHEMA_VERSION = 1
C_STAR = math.e / (math.e - 1.0)
Q_STAR = GeodesicBox.from_values(0.0, 1.0, C_STAR, math.inf)
DEFAULT_STEPS = (0.2, 0.1, 0.05, 0.025, 0.0125)
STACK_RATIO = 4.0


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class Verdict:
    name: str
    passed: bool
    threshold: float
    value: float
    detail: str = ""


@dataclass
class ExperimentReport:
    """Table of measurements plus trend verdicts."""

    experiment: str
    params: dict
    columns: list
    rows: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def column(self, name: str) -> list:
        k = self.columns.index(name)
        return [r[k] for r in self.rows]

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "version": __version__,
            "schema": SCHEMA_VERSION,
            "params": self.params,
            "columns": list(self.columns),
            "rows": [dict(zip(self.columns, (_json_value(v) for v in r))) for r in self.rows],
            "verdicts": [
                {
                    "name": v.name,
                    "passed": v.passed,
                    "threshold": _json_value(v.threshold),
                    "value": _json_value(v.value),
                    "detail": v.detail,
                }
                for v in self.verdicts
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(f"# experiment={self.experiment} version={__version__} schema={SCHEMA_VERSION}\n")
        for k, v in self.params.items():
            out.write(f"# param {k}={json.dumps(v)}\n")
        out.write(",".join(self.columns) + "\n")
        for r in self.rows:
            out.write(",".join(_csv_value(v) for v in r) + "\n")
        for v in self.verdicts:
            out.write(
                f"# verdict {v.name} passed={str(v.passed).lower()} "
                f"threshold={_csv_value(v.threshold)} value={_csv_value(v.value)}"
                + (f" detail={v.detail}" if v.detail else "")
                + "\n"
            )
        return out.getvalue()

    def render(self, fmt: str = "csv") -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValidationError(f"unknown format {fmt!r}")


def _csv_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    s = "" if v is None else str(v)
    return f'"{s}"' if ("," in s or '"' in s) else s


def _json_value(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def random_lamination(rng: np.random.Generator, n_leaves: int, wmin: float = 0.05,
                      wmax: float = 1.5, max_tries: int = 10_000) -> FiniteMeasuredLamination:
    """Rejection-sampled lamination with uniformly random chord endpoints."""
    leaves = []
    tries = 0
    while len(leaves) < n_leaves:
        tries += 1
        if tries > max_tries:
            raise ValidationError(f"could not place {n_leaves} disjoint leaves")
        a, b = rng.uniform(0.0, TWO_PI, 2)
        if abs(a - b) < 1e-6:
            continue
        g = Geodesic(BoundaryPoint.from_angle(a), BoundaryPoint.from_angle(b))
        if any(crosses(g, h) or g == h for h, _ in leaves):
            continue
        leaves.append((g, float(rng.uniform(wmin, wmax))))
    return FiniteMeasuredLamination(tuple(leaves))


@dataclass(frozen=True)
class StackFamily:
    """Nested geodesics ``(-e_k, e_k)``, ``e_k = 4^-(k+1)``, accumulating at 0.

    Consecutive leaves are ``log 4`` apart, so unit arcs meet at most one
    leaf and the Thurston norm is the largest weight.
    """

    name: str
    weights: tuple
    ratio: float = STACK_RATIO

    @property
    def end(self) -> BoundaryPoint:
        return BoundaryPoint.real(0.0)

    def lamination(self) -> FiniteMeasuredLamination:
        leaves = []
        for k, w in enumerate(self.weights):
            e = self.ratio ** -(k + 1)
            leaves.append((Geodesic.from_values(-e, e), float(w)))
        return FiniteMeasuredLamination(tuple(leaves))

    def leaf_distances(self) -> list[float]:
        """Distance from ``i`` to each leaf."""
        return [(k + 1) * math.log(self.ratio) for k in range(len(self.weights))]


def decaying_stack(c: float = 0.5, r: float = 0.5, n: int = 12) -> StackFamily:
    return StackFamily("decaying", tuple(c * r ** k for k in range(n)))


def constant_stack(c: float = 0.5, n: int = 12) -> StackFamily:
    return StackFamily("constant", tuple(c for _ in range(n)))


def cap_family(alpha: float, n: int, c: float = 1.0, caps: int = 8,
               max_halfwidth: float = 0.35) -> FiniteMeasuredLamination:
    """Probe lamination at circle index ``n`` for sup measure ``~ c delta^alpha``.

    ``caps`` short geodesics of angular half-width ``2/n`` are spread
    evenly; each reaches Euclidean depth about ``2/n`` below the circle
    and carries weight ``c n^-alpha``.
    """
    a = min(2.0 / n, max_halfwidth)
    w = c * float(n) ** -alpha
    if w <= 0.0:
        return FiniteMeasuredLamination()
    leaves = []
    for j in range(caps):
        t = TWO_PI * (j + 0.5) / caps
        leaves.append((Geodesic(BoundaryPoint.from_angle(t - a), BoundaryPoint.from_angle(t + a)), w))
    return FiniteMeasuredLamination(tuple(leaves))


def random_moebius(rng: np.random.Generator, max_center: float = 0.8) -> MoebiusMap:
    r = max_center * math.sqrt(rng.uniform())
    c = r * complex(math.cos(t := rng.uniform(0, TWO_PI)), math.sin(t))
    return MoebiusMap.from_disk_automorphism(c, rng.uniform(0.0, TWO_PI))


# ---------------------------------------------------------------------------
# box functional
# ---------------------------------------------------------------------------


def _bump(t):
    return np.where((t > 0.0) & (t < 1.0), 4.0 * t * (1.0 - t), 0.0)


@dataclass(frozen=True)
class BoxTestFunction:
    """Tensor bump on ``Q* = [0,1] x [c*, inf]``.

    For a geodesic with endpoints ``a in [0,1]`` and ``b in [c*, inf]`` the
    value is ``amp * (4s(1-s))^p (4t(1-t))^p`` with ``s = a`` and
    ``t = c*/b``; it vanishes on the boundary of the box and outside it.
    """

    amplitude: float = 1.0
    power: float = 1.0

    def value(self, a: BoundaryPoint, b: BoundaryPoint) -> float:
        s = a.value
        if not (0.0 < s < 1.0) or (not b.is_infinite and b.value <= C_STAR):
            return 0.0
        t = 0.0 if b.is_infinite else C_STAR / b.value
        if t <= 0.0:
            return 0.0
        return float(self.amplitude * (_bump(s) * _bump(t)) ** self.power)

    def __call__(self, g: Geodesic) -> float:
        return max(self.value(g.p, g.q), self.value(g.q, g.p))


def default_boxes(n: int = 200, seed: int = 0) -> list[GeodesicBox]:
    """``Q*`` followed by ``n - 1`` seeded random Moebius translates of it."""
    rng = np.random.default_rng(seed)
    boxes = [Q_STAR]
    while len(boxes) < n:
        g = random_moebius(rng)
        boxes.append(GeodesicBox(*(g(p) for p in Q_STAR.corners)))
    return boxes


def box_integral(mu: FiniteMeasuredLamination, phi: BoxTestFunction, gamma: MoebiusMap) -> float:
    """``sum weight * phi(gamma g)`` over leaves ``g``."""
    return float(sum(w * phi(gamma(g)) for g, w in mu.leaves))


def box_functional(mu1: FiniteMeasuredLamination, mu2: FiniteMeasuredLamination,
                   phi: BoxTestFunction | None = None, boxes=None) -> float:
    """Sampled ``S_phi``: max over boxes of the difference of box integrals."""
    phi = BoxTestFunction() if phi is None else phi
    boxes = default_boxes() if boxes is None else boxes
    best = 0.0
    for Q in boxes:
        gamma = moebius_from_box(Q, Q_STAR)
        best = max(best, abs(box_integral(mu1, phi, gamma) - box_integral(mu2, phi, gamma)))
    return best


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProxyParams:
    quadrature_n: int = DEFAULT_QUADRATURE
    tol: float = DEFAULT_TOL
    step: float = DEFAULT_STEP
    radii: tuple = (0.0, 0.3, 0.6, 0.9)
    n_angles: int = 16

    def grid(self) -> list[DPoint]:
        return default_grid(self.radii, self.n_angles)

    def as_dict(self) -> dict:
        return {
            "quadrature_n": self.quadrature_n,
            "tol": self.tol,
            "step": self.step,
            "grid_radii": list(self.radii),
            "grid_angles": self.n_angles,
        }


def scaling_times(t0: float, steps=DEFAULT_STEPS) -> list[float]:
    """``t0 + s`` when it stays in ``[0, 1]``, else ``t0 - s``; then ``t0``."""
    out = []
    for s in steps:
        out.append(t0 + s if t0 + s <= 1.0 else t0 - s)
    return out + [t0]


def run_scaling_path(mu: FiniteMeasuredLamination, t0: float = 0.5, t_list=None,
                     proxy: ProxyParams = ProxyParams(), threshold: float = 1e-3) -> ExperimentReport:
    """Proxy distance between the earthquakes of ``(1-t) mu`` and ``(1-t0) mu``."""
    if not 0.0 <= t0 <= 1.0:
        raise ValidationError("t0 must lie in [0, 1]")
    t_list = scaling_times(t0) if t_list is None else [float(t) for t in t_list]
    if any(not 0.0 <= t <= 1.0 for t in t_list):
        raise ValidationError("times must lie in [0, 1]")
    grid = proxy.grid()

    def h(t):
        # same basepoint for every t keeps the normalizations aligned
        return EarthquakeCircleMap(build_earthquake(scale(mu, 1.0 - t), basepoint=base))

    base = build_earthquake(mu).basepoint
    ref = h(t0)
    report = ExperimentReport(
        "scaling-path",
        {"t0": t0, "times": t_list, "leaves": len(mu), "threshold": threshold, **proxy.as_dict()},
        ["t", "dt", "proxy", "error"],
    )
    for t in t_list:
        try:
            d = distance_proxy(h(t), ref, grid, proxy.step, proxy.quadrature_n, proxy.tol)
            report.rows.append([t, abs(t - t0), d, ""])
        except NumericalError as exc:
            report.rows.append([t, abs(t - t0), math.nan, type(exc).__name__])

    moving = sorted((r for r in report.rows if r[1] > 0), key=lambda r: -r[1])
    vals = [r[2] for r in moving]
    dec = len(vals) > 1 and all(b < a for a, b in zip(vals, vals[1:]))
    report.verdicts.append(Verdict("strictly_decreasing", bool(dec), 0.0, float(len(vals))))
    last = vals[-1] if vals else math.nan
    report.verdicts.append(Verdict("final_below_threshold", bool(last < threshold), threshold, last))
    zero = [r[2] for r in report.rows if r[1] == 0]
    if zero:
        report.verdicts.append(Verdict("t0_row_zero", bool(zero[0] < 1e-6), 1e-6, zero[0]))
    return report


def ray_beltrami(family_mu: FiniteMeasuredLamination, end: BoundaryPoint, s: float,
                 proxy: ProxyParams = ProxyParams()) -> float:
    """``|Belt|`` of the extended earthquake at distance ``s`` from ``i``
    along the ray towards ``end``.

    The sample is taken at ``i`` after moving the lamination by the
    isometry that carries the ray point to ``i``: the extension is natural
    and post-composition does not change the Beltrami coefficient, so
    this avoids evaluating the extension next to the circle.
    """
    rot = MoebiusMap.from_disk_automorphism(0.0, end.angle - math.pi)
    move = rot @ MoebiusMap.dilation(-s)
    nu = pushforward(family_mu, move.inverse())
    if not len(nu):
        return 0.0
    h = EarthquakeCircleMap(build_earthquake(nu))
    return abs(beltrami(h, DPoint(0.0, 0.0), proxy.step, proxy.quadrature_n, proxy.tol).value)


def run_asymptotic_test(families=None, radii=None, proxy: ProxyParams = ProxyParams(),
                        ray_step: float = 0.25, n_samples: int = 4000, seed: int = 0,
                        floor: float | None = None) -> ExperimentReport:
    """End profile against sampled Beltrami sup beyond each radius.

    Beltrami is sampled every ``ray_step`` along the ray towards the
    stack's end, out to one spacing past the last leaf; the column for
    ``R`` is the sup over samples at distance at least ``R``.

    ``floor`` is the level the constant family must stay above; by default
    it is the decaying family's value at the largest radius.
    """
    families = [decaying_stack(), constant_stack()] if families is None else list(families)
    if radii is None:
        d = families[0].leaf_distances()
        radii = [x - 0.5 for x in d[: max(len(d) - 2, 1)]]
    radii = sorted(float(r) for r in radii)
    report = ExperimentReport(
        "asymptotic-test",
        {
            "families": [{"name": f.name, "weights": list(f.weights)} for f in families],
            "radii": radii,
            "ray_step": ray_step,
            "n_samples": n_samples,
            "seed": seed,
            "floor": floor,
            **proxy.as_dict(),
        },
        ["family", "R", "end_profile", "beltrami_sup", "error"],
    )
    tails = {}
    for fam in families:
        mu = fam.lamination()
        prof = end_profile(mu, fam.end, radii, n_samples=n_samples, seed=seed)
        s_max = (fam.leaf_distances()[-1] if len(fam.weights) else 0.0) + math.log(fam.ratio)
        s_grid = np.arange(0.0, s_max + 1e-12, ray_step)
        samples, err = [], ""
        for s in s_grid:
            try:
                samples.append(ray_beltrami(mu, fam.end, float(s), proxy))
            except NumericalError as exc:
                samples.append(math.nan)
                err = type(exc).__name__
        samples = np.array(samples)
        col = []
        for R, pv in zip(prof.depths, prof.values):
            tail = samples[s_grid >= R - 1e-12]
            sup = float(np.nanmax(tail)) if tail.size and not np.all(np.isnan(tail)) else math.nan
            col.append(sup)
            report.rows.append([fam.name, R, pv, sup, err])
        tails[fam.name] = col

    for fam in families:
        col = tails[fam.name]
        if fam.name.startswith("decaying"):
            dec = all(b < a for a, b in zip(col, col[1:]))
            report.verdicts.append(Verdict(f"{fam.name}_beltrami_decreasing", bool(dec), 0.0, col[-1]))
    if floor is None:
        dec_cols = [tails[f.name] for f in families if f.name.startswith("decaying")]
        floor = dec_cols[0][-1] if dec_cols else 0.0
    for fam in families:
        if fam.name.startswith("constant"):
            low = min(tails[fam.name])
            report.verdicts.append(Verdict(f"{fam.name}_beltrami_above_floor", bool(low > floor), floor, low))
    return report


def run_odelta_test(alphas=(0.5, 1.0, 1.5), n_list=(8, 16, 32, 64), c: float = 1.0,
                    caps: int = 8, flat_band: float = 2.0) -> ExperimentReport:
    """Circle mass bound for the cap probe families.

    Verdicts: the bound shrinks for ``alpha > 1``, grows for ``alpha < 1``
    and stays within a factor ``flat_band`` for ``alpha = 1``.
    """
    n_list = [int(n) for n in n_list]
    report = ExperimentReport(
        "odelta-test",
        {"alphas": list(alphas), "n_list": n_list, "c": c, "caps": caps, "flat_band": flat_band},
        ["alpha", "n", "circle_length", "unit_sup", "bound"],
    )
    for alpha in alphas:
        bounds = []
        for n in n_list:
            length, sup, bound = circle_mass_bound(cap_family(alpha, n, c, caps), n)
            report.rows.append([float(alpha), n, length, sup, bound])
            bounds.append(bound)
        first, last = bounds[0], bounds[-1]
        if alpha > 1:
            report.verdicts.append(Verdict(f"alpha_{alpha:g}_shrinks", bool(last < first), first, last))
        elif alpha < 1:
            report.verdicts.append(Verdict(f"alpha_{alpha:g}_grows", bool(last > first), first, last))
        else:
            ratio = last / first if first > 0 else math.inf
            ok = 1.0 / flat_band <= ratio <= flat_band
            report.verdicts.append(Verdict(f"alpha_{alpha:g}_flat", bool(ok), flat_band, ratio))
    return report
