import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import optimize

from quakelab.errors import GeometryError, LaminationError
from quakelab.experiments import random_lamination
from quakelab.hyperbolic import Geodesic, GeodesicArc, HPoint, MoebiusMap, hyp_distance, point_at
from quakelab.lamination import (
    EMPTY,
    FiniteMeasuredLamination,
    circle_length,
    circle_mass_bound,
    depth_profile,
    end_profile,
    exhaustion_profile,
    format_lamination,
    geodesic_distance,
    parse_lamination,
    pushforward,
    read_lamination,
    sampled_norm,
    scale,
    thurston_norm,
    transverse_measure,
    transverse_measures,
    write_lamination,
)

from conftest import moebius_maps, rand_moebius


def arc(z0, z1):
    return GeodesicArc(HPoint.from_complex(z0), HPoint.from_complex(z1))


def semicircle(a, b):
    """Parametrization of the geodesic (a, b); ``inf`` allowed for b."""
    if math.isinf(b):
        return lambda s: complex(a, math.exp(s))
    m, r = 0.5 * (a + b), 0.5 * abs(b - a)
    return lambda s: m + r * complex(math.tanh(s), 1.0 / math.cosh(s))


def brute_distance(g1, g2):
    f1, f2 = semicircle(*g1), semicircle(*g2)

    def obj(x):
        return hyp_distance(HPoint.from_complex(f1(x[0])), HPoint.from_complex(f2(x[1])))

    best = math.inf
    for s0 in (-2.0, 0.0, 2.0):
        for t0 in (-2.0, 0.0, 2.0):
            res = optimize.minimize(obj, [s0, t0], method="Nelder-Mead",
                                    options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 5000})
            best = min(best, res.fun)
    return best


class TestConstruction:
    def test_merges_equal_geodesics(self):
        mu = FiniteMeasuredLamination.from_pairs([(0, 1, 0.3), (1, 0, 0.4)])
        assert len(mu) == 1 and abs(mu.weights[0] - 0.7) < 1e-15

    def test_rejects_crossing_and_names_pair(self):
        with pytest.raises(LaminationError) as exc:
            FiniteMeasuredLamination.from_pairs([(5, 6, 1.0), (0, 2, 1.0), (1, 3, 1.0)])
        assert list(exc.value.leaves) == [1, 2]

    @pytest.mark.parametrize("w", [0.0, -1.0, math.nan])
    def test_rejects_bad_weight(self, w):
        with pytest.raises(LaminationError):
            FiniteMeasuredLamination.from_pairs([(0, 1, w)])

    def test_shared_endpoint_allowed(self):
        mu = FiniteMeasuredLamination.from_pairs([(0, 1, 1.0), (1, 2, 1.0)])
        assert len(mu) == 2


class TestTransverseMeasure:
    lam = FiniteMeasuredLamination.from_pairs([(-1, 1, 0.5), (-2, 2, 0.3)])

    def test_both_leaves(self):
        assert abs(transverse_measure(self.lam, arc(0.5j, 3j)) - 0.8) < 1e-15

    def test_between_leaves(self):
        assert transverse_measure(self.lam, arc(1.5j, 1.9j)) == 0.0

    def test_closed_endpoint_counts(self):
        assert abs(transverse_measure(self.lam, arc(1j, 1.5j)) - 0.5) < 1e-15

    def test_empty(self):
        assert transverse_measure(EMPTY, arc(1j, 2j)) == 0.0

    def test_explicit_intersection_oracle(self, rng):
        # leaf (-r, r) meets the vertical arc iff r lies in [y0, y1]
        for _ in range(200):
            y0, y1 = np.sort(rng.uniform(0.2, 3, 2))
            want = 0.5 * (y0 <= 1 <= y1) + 0.3 * (y0 <= 2 <= y1)
            assert abs(transverse_measure(self.lam, arc(1j * y0, 1j * y1)) - want) < 1e-15

    def test_pushforward_invariance_exact(self, rng):
        for _ in range(100):
            mu = random_lamination(rng, 5)
            g = rand_moebius(rng)
            s = rng.normal(0, 1.5, 10) + 1j * rng.uniform(0.2, 3, 10)
            e = np.array([point_at(z, t, d) for z, t, d in
                          zip(s, rng.uniform(0, 2 * math.pi, 10), rng.uniform(0.1, 3, 10))])
            before = transverse_measures(mu, s, e)
            after = transverse_measures(pushforward(mu, g), g.apply_complex(s), g.apply_complex(e))
            assert np.array_equal(before, after)


class TestGeodesicDistance:
    def test_nested(self):
        d = geodesic_distance(Geodesic.from_values(-1, 1), Geodesic.from_values(-2, 2))
        assert abs(d - math.log(2)) < 1e-14

    def test_self(self):
        g = Geodesic.from_values(0, 3)
        assert geodesic_distance(g, g) == 0.0

    def test_asymptotic(self):
        assert geodesic_distance(Geodesic.from_values(0, 1), Geodesic.from_values(1, 2)) == 0.0

    def test_crossing_raises(self):
        with pytest.raises(GeometryError):
            geodesic_distance(Geodesic.from_values(0, 2), Geodesic.from_values(1, 3))

    @pytest.mark.parametrize("g1,g2", [((0, math.inf), (1, 2)), ((-3, -1), (0.5, 4)), ((-1, 1), (-5, 7))])
    def test_brute_force_oracle(self, g1, g2):
        d = geodesic_distance(Geodesic.from_values(*g1), Geodesic.from_values(*g2))
        assert abs(d - brute_distance(g1, g2)) < 1e-8


class TestNorm:
    def test_single_leaf(self, single_leaf):
        assert thurston_norm(single_leaf) == 0.7

    def test_close_pair(self, nested_pair):
        assert thurston_norm(nested_pair) == 2.0

    def test_far_pair(self, far_pair):
        assert thurston_norm(far_pair) == 1.0

    def test_empty(self):
        assert thurston_norm(EMPTY) == 0.0

    def test_sampling_never_exceeds(self, rng):
        for _ in range(10):
            mu = random_lamination(rng, int(rng.integers(1, 10)))
            assert sampled_norm(mu, 2000, seed=int(rng.integers(1 << 30))) <= thurston_norm(mu) + 1e-12

    def test_bounded_by_total_weight(self, rng):
        for _ in range(30):
            mu = random_lamination(rng, int(rng.integers(1, 10)))
            assert thurston_norm(mu) <= mu.total_weight + 1e-12

    def test_total_weight_for_single_chain(self):
        mu = FiniteMeasuredLamination.from_pairs([(-1, 1, 0.2), (-1.3, 1.3, 0.5), (-2, 2, 0.4)])
        assert abs(thurston_norm(mu) - mu.total_weight) < 1e-15

    def test_moebius_invariance(self, rng):
        for _ in range(30):
            mu = random_lamination(rng, 6)
            g = rand_moebius(rng)
            assert abs(thurston_norm(pushforward(mu, g)) - thurston_norm(mu)) < 1e-10

    @given(st.floats(0.0, 10.0))
    def test_homogeneity(self, s):
        mu = FiniteMeasuredLamination.from_pairs([(-1, 1, 0.4), (-2, 2, 0.9), (3, 4, 0.1)])
        assert abs(thurston_norm(scale(mu, s)) - s * thurston_norm(mu)) < 1e-12


class TestScalePushforward:
    def test_scale_one(self, nested_pair):
        assert scale(nested_pair, 1.0).isclose(nested_pair, 0.0)

    def test_scale_zero(self, nested_pair):
        assert len(scale(nested_pair, 0.0)) == 0

    def test_negative_scale(self, nested_pair):
        with pytest.raises(LaminationError):
            scale(nested_pair, -0.5)

    def test_pushforward_identity(self, nested_pair):
        assert pushforward(nested_pair, MoebiusMap.identity()).isclose(nested_pair, 0.0)

    def test_pushforward_shift(self):
        mu = FiniteMeasuredLamination.from_pairs([(0, math.inf, 0.6)])
        out = pushforward(mu, MoebiusMap.shift(1.0))
        assert out.isclose(FiniteMeasuredLamination.from_pairs([(1, math.inf, 0.6)]), 0.0)

    @given(moebius_maps())
    def test_pushforward_keeps_weights(self, g):
        mu = FiniteMeasuredLamination.from_pairs([(-1, 1, 0.4), (2, 5, 0.9)])
        assert sorted(pushforward(mu, g).weights) == sorted(mu.weights)


class TestProfiles:
    depths = [0.01, 0.05, 0.1, 0.3, 0.6]
    radii = [0.5, 1.0, 2.0, 4.0]

    def test_empty(self):
        assert depth_profile(EMPTY, self.depths, 500).values == [0.0] * 5
        assert exhaustion_profile(EMPTY, self.radii, 500).values == [0.0] * 4

    def test_depth_monotone(self, rng):
        mu = random_lamination(rng, 6)
        prof = depth_profile(mu, self.depths, 2000)
        assert prof.depths == sorted(self.depths, reverse=True)
        vals = [v for _, v in sorted(prof)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_exhaustion_monotone(self, rng):
        mu = random_lamination(rng, 6)
        vals = exhaustion_profile(mu, self.radii, 2000).values
        assert all(b <= a for a, b in zip(vals, vals[1:]))

    def test_single_leaf_never_decays(self):
        # every leaf reaches the circle, so near-boundary arcs always see it
        mu = FiniteMeasuredLamination.from_pairs([(-1, 1, 0.9)])
        assert depth_profile(mu, self.depths, 2000).values == [0.9] * 5
        assert exhaustion_profile(mu, self.radii, 2000).values == [0.9] * 4

    def test_end_profile_of_stack_decays(self):
        mu = FiniteMeasuredLamination.from_pairs([(-4.0 ** -k, 4.0 ** -k, 0.5 ** k) for k in range(1, 7)])
        from quakelab.hyperbolic import BoundaryPoint

        prof = end_profile(mu, BoundaryPoint.real(0.0), [1.0, 2.5, 3.9, 5.3], 2000)
        assert prof.values == sorted(prof.values, reverse=True)
        assert prof.values[-1] < prof.values[0]


class TestCircle:
    def test_closed_form(self):
        assert abs(circle_length(2) - 8 * math.pi / 3) < 1e-14
        for n in range(2, 65):
            r = 1 - 1 / n
            assert abs(circle_length(n) - 4 * math.pi * r / (1 - r * r)) < 1e-10 * n

    def test_growth(self):
        lengths = [circle_length(n) for n in range(2, 200)]
        assert all(b > a for a, b in zip(lengths, lengths[1:]))
        assert abs(circle_length(10 ** 6) / (2 * math.pi * 10 ** 6) - 1) < 1e-5

    def test_empty_bound(self):
        for n in (2, 8, 64):
            assert circle_mass_bound(EMPTY, n)[2] == 0.0

    def test_single_crossing(self):
        # the leaf (0, inf) crosses every circle in two points, far apart
        mu = FiniteMeasuredLamination.from_pairs([(0, math.inf, 0.25)])
        length, sup, bound = circle_mass_bound(mu, 16)
        assert sup == 0.25 and bound == 0.25 * math.ceil(length)

    def test_bad_index(self):
        with pytest.raises(LaminationError):
            circle_mass_bound(EMPTY, 1)


class TestFileFormat:
    def test_round_trip(self, tmp_path, rng):
        mu = random_lamination(rng, 7)
        for model in ("halfplane", "disk"):
            path = tmp_path / f"{model}.lam"
            write_lamination(mu, path, model)
            back = read_lamination(path)
            assert back.isclose(mu, 1e-15)

    def test_infinity_token(self):
        mu = parse_lamination("model halfplane\n# comment\n0 inf 0.5\n")
        assert mu.leaves[0][0] == Geodesic.from_values(0, math.inf)
        assert "inf" in format_lamination(mu)

    def test_crossing_file(self):
        with pytest.raises(LaminationError) as exc:
            parse_lamination("model halfplane\n0 2 1\n1 3 1\n")
        assert list(exc.value.leaves) == [0, 1]

    def test_zero_weight(self):
        with pytest.raises(LaminationError):
            parse_lamination("model halfplane\n0 2 0\n")

    @pytest.mark.parametrize("text", ["0 1 1\n", "model sphere\n0 1 1\n", "model halfplane\n0 x 1\n",
                                      "model halfplane\n0 1\n"])
    def test_malformed(self, text):
        with pytest.raises(LaminationError):
            parse_lamination(text)
