"""Tests for the ambient space R x l1: norms, combinations, membership."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from commonfix.errors import LengthMismatch, WeightSumViolation
from commonfix.space import (
    AdmissibleSet,
    L1Vector,
    ProductPoint,
    convex_combine,
    in_set,
    l1_norm,
    point_from_json,
    point_to_json,
    product_norm,
)

_TOL = 1e-12

coords = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
vectors = st.lists(coords, min_size=0, max_size=6).map(L1Vector)
scalars = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)
points = st.builds(ProductPoint, scalars, vectors)


class TestL1Norm:
    def test_signed_coordinates(self):
        assert l1_norm(L1Vector((1.0, -2.0, 0.5))) == 3.5

    def test_empty_vector_is_zero(self):
        assert l1_norm(L1Vector(())) == 0.0

    def test_explicit_zeros_are_zero(self):
        assert l1_norm(L1Vector((0.0, 0.0))) == 0.0

    @given(vectors, vectors)
    def test_triangle_inequality(self, u, v):
        """||u + v||_1 <= ||u||_1 + ||v||_1 within 1e-12."""
        assert l1_norm(u + v) <= l1_norm(u) + l1_norm(v) + _TOL

    @given(vectors, scalars)
    def test_absolute_homogeneity(self, v, t):
        """||t v||_1 = |t| ||v||_1 within 1e-12 relative."""
        assert math.isclose(
            l1_norm(v * t), abs(t) * l1_norm(v), rel_tol=_TOL, abs_tol=_TOL
        )

    @given(vectors)
    def test_trailing_zero_padding_never_changes_norm(self, v):
        padded = L1Vector(v.coords + (0.0, 0.0, 0.0))
        assert l1_norm(padded) == l1_norm(v)
        assert l1_norm(v.trim()) == l1_norm(v)


class TestVectorValueSemantics:
    def test_trailing_zeros_do_not_affect_equality(self):
        assert L1Vector((1.0, 0.0)) == L1Vector((1.0,))
        assert L1Vector(()) == L1Vector((0.0, 0.0))
        assert hash(L1Vector((1.0, 0.0))) == hash(L1Vector((1.0,)))

    def test_arithmetic_aligns_lengths_by_zero_padding(self):
        a = L1Vector((1.0, 2.0))
        b = L1Vector((0.5,))
        assert (a + b) == L1Vector((1.5, 2.0))
        assert (a - b) == L1Vector((0.5, 2.0))

    def test_operations_return_new_values(self):
        v = L1Vector((1.0,))
        w = v * 2.0
        assert v == L1Vector((1.0,))
        assert w == L1Vector((2.0,))


class TestProductNorm:
    def test_scalar_plus_vector_norm(self):
        p = ProductPoint(0.5, (0.2, 0.1))
        assert product_norm(p) == pytest.approx(0.8, abs=1e-15)

    def test_sign_of_scalar_irrelevant(self):
        assert product_norm(ProductPoint(-0.5, (0.2,))) == product_norm(
            ProductPoint(0.5, (0.2,))
        )

    def test_witness_pair_separation_is_exact(self):
        # (0, (x0,)) minus (0, (x0/4,)) has norm exactly 3*x0/4 for x0 = 0.005
        x0 = 0.005
        a = ProductPoint(0.0, (x0,))
        b = ProductPoint(0.0, (x0 / 4.0,))
        assert product_norm(a - b) == 0.00375

    @given(points, points)
    def test_triangle_inequality(self, p, q):
        assert product_norm(p + q) <= product_norm(p) + product_norm(q) + _TOL


class TestConvexCombine:
    def test_midpoint(self):
        p = ProductPoint(0.0, (1.0, 0.0))
        q = ProductPoint(1.0, (0.0, 1.0))
        mid = convex_combine((0.5, 0.5), (p, q))
        assert mid.scalar == 0.5
        assert mid.vec == L1Vector((0.5, 0.5))

    def test_three_equal_points_with_thirds(self):
        p = ProductPoint(0.7, (1.0,))
        w = 1.0 / 3.0
        out = convex_combine((w, w, w), (p, p, p))
        # 3 * (1/3) rounds back to 1 for these values
        assert out.scalar == 0.7
        assert out.vec == L1Vector((1.0,))

    def test_mismatched_lengths_rejected(self):
        p = ProductPoint(0.0, ())
        with pytest.raises(LengthMismatch):
            convex_combine((0.5, 0.5), (p,))

    def test_empty_rejected(self):
        with pytest.raises(LengthMismatch):
            convex_combine((), ())

    def test_nonpositive_weight_rejected(self):
        p = ProductPoint(0.0, ())
        with pytest.raises(WeightSumViolation):
            convex_combine((1.5, -0.5), (p, p))
        with pytest.raises(WeightSumViolation):
            convex_combine((1.0, 0.0), (p, p))

    def test_weights_summing_off_by_more_than_tolerance_rejected(self):
        p = ProductPoint(0.0, ())
        with pytest.raises(WeightSumViolation):
            convex_combine((0.45, 0.45), (p, p))

    def test_weight_sum_within_tolerance_accepted(self):
        p = ProductPoint(1.0, ())
        out = convex_combine((0.5, 0.5 + 5e-13), (p, p))
        assert abs(out.scalar - 1.0) < 1e-12

    def test_vectors_of_unequal_lengths_align(self):
        p = ProductPoint(0.0, (1.0,))
        q = ProductPoint(0.0, (0.0, 1.0))
        out = convex_combine((0.5, 0.5), (p, q))
        assert out.vec == L1Vector((0.5, 0.5))

    @given(
        st.lists(st.floats(min_value=0.05, max_value=1.0), min_size=2, max_size=5),
        st.data(),
    )
    def test_result_stays_in_convex_set(self, raw_weights, data):
        """A convex combination of points of [0,1] x B1 stays inside.

        Float rounding can push an extreme combination one ulp past the
        mathematical boundary, so membership is asserted in the set widened
        by 1e-12 on every face.
        """
        total = math.fsum(raw_weights)
        weights = [w / total for w in raw_weights]
        # renormalized weights sum to 1 within float error of fsum
        box = AdmissibleSet((-1e-12, 1.0 + 1e-12), 1.0 + 1e-12)
        pts = []
        for _ in weights:
            s = data.draw(st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
            vc = data.draw(
                st.lists(
                    st.floats(min_value=-0.19, max_value=0.19, allow_nan=False),
                    min_size=0,
                    max_size=5,
                )
            )
            pts.append(ProductPoint(s, vc))
        out = convex_combine(weights, pts)
        assert in_set(out, box)

    def test_accumulation_is_deterministic(self):
        pts = (
            ProductPoint(0.1, (0.3, 0.1)),
            ProductPoint(0.7, (0.05,)),
            ProductPoint(0.2, (0.0, 0.4)),
        )
        w = (0.2, 0.5, 0.3)
        first = convex_combine(w, pts)
        second = convex_combine(w, pts)
        assert first.scalar == second.scalar and first.vec == second.vec


class TestInSet:
    box = AdmissibleSet((0.0, 1.0), 1.0)

    def test_interior(self):
        assert in_set(ProductPoint(0.5, (0.2, -0.3)), self.box)

    def test_boundary_is_inside(self):
        assert in_set(ProductPoint(1.0, (1.0,)), self.box)
        assert in_set(ProductPoint(0.0, ()), self.box)

    def test_one_ulp_outside_is_outside(self):
        beyond = math.nextafter(1.0, 2.0)
        assert not in_set(ProductPoint(beyond, ()), self.box)
        assert not in_set(ProductPoint(0.5, (beyond,)), self.box)

    def test_scalar_below_interval(self):
        assert not in_set(ProductPoint(-0.1, ()), self.box)

    def test_degenerate_radius(self):
        thin = AdmissibleSet((0.0, 1.0), 0.0)
        assert in_set(ProductPoint(0.3, (0.0,)), thin)
        assert not in_set(ProductPoint(0.3, (1e-300,)), thin)


class TestAdmissibleSetValidation:
    def test_reversed_interval_rejected(self):
        with pytest.raises(ValueError):
            AdmissibleSet((1.0, 0.0), 1.0)

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            AdmissibleSet((0.0, 1.0), -1.0)


class TestJsonRoundTrip:
    @given(points)
    def test_round_trip_preserves_value(self, p):
        back = point_from_json(point_to_json(p))
        assert back.scalar == p.scalar
        assert back.vec == p.vec

    def test_wire_shape(self):
        blob = point_to_json(ProductPoint(0.7, (1.0, 0.0)))
        assert blob == {"scalar": 0.7, "vec": [1.0, 0.0]}

    @pytest.mark.parametrize(
        "bad",
        [None, [], {"scalar": 1.0}, {"vec": []}, {"scalar": 1.0, "vec": 3}],
    )
    def test_bad_shapes_rejected(self, bad):
        with pytest.raises(ValueError):
            point_from_json(bad)
