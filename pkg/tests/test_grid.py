import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import pklaplace as pk
from pklaplace.grid import (
    GridFunction,
    ExponentMap,
    constant_profile,
    forward_difference,
    h_norm,
    negative_part,
    positive_part,
    sup_norm,
)


def interior_arrays(max_T=24, elements=st.floats(-10, 10, allow_nan=False)):
    return st.integers(2, max_T).flatmap(
        lambda T: arrays(float, T, elements=elements)
    )


class TestGridFunction:
    def test_boundary_zeros_enforced(self):
        with pytest.raises(ValueError, match="boundary"):
            GridFunction([0.5, 1.0, 2.0, 0.0])
        with pytest.raises(ValueError, match="boundary"):
            GridFunction([0.0, 1.0, 2.0, 1e-300])

    def test_from_interior_pads(self):
        y = GridFunction.from_interior([1.0, 2.0, 3.0])
        assert y.T == 3
        assert np.array_equal(y.values, [0, 1, 2, 3, 0])

    def test_immutable(self):
        y = GridFunction.from_interior([1.0, 2.0])
        with pytest.raises(ValueError):
            y.values[1] = 5.0

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            GridFunction([0.0, 1.0, 0.0])

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            GridFunction([0.0, np.nan, 1.0, 0.0])


class TestExponentMap:
    def test_constant(self):
        p = ExponentMap.constant(4, 3.0)
        assert p.p_minus == p.p_plus == 3.0
        assert p.values.shape == (6,)

    def test_below_two_rejected(self):
        with pytest.raises(ValueError, match="exponent below 2"):
            ExponentMap([2.0, 1.5, 2.0, 2.0])

    def test_periodic(self):
        p = ExponentMap.periodic(4, [2.0, 3.0])
        assert np.array_equal(p.values, [2, 3, 2, 3, 2, 3])
        assert p.p_minus == 2.0 and p.p_plus == 3.0

    def test_extremes_cached(self):
        p = ExponentMap([2.0, 5.0, 2.5, 4.0, 2.0])
        assert p.p_minus == 2.0
        assert p.p_plus == 5.0


class TestOperations:
    @pytest.mark.parametrize(
        "interior, expected",
        [
            ([0.0, 0.0], [0, 0, 0]),
            ([1.0, 2.0], [1, 1, -2]),
            ([1.0, 1.0, 1.0], [1, 0, 0, -1]),
        ],
    )
    def test_forward_difference(self, interior, expected):
        assert np.array_equal(
            forward_difference(GridFunction.from_interior(interior)), expected
        )

    def test_parts_split_signs(self):
        y = GridFunction([0.0, -3.0, 5.0, 0.0])
        assert np.array_equal(positive_part(y).values, [0, 0, 5, 0])
        assert np.array_equal(negative_part(y).values, [0, 3, 0, 0])

    def test_parts_of_zero(self):
        z = GridFunction.zero(2)
        assert positive_part(z) == z
        assert negative_part(z) == z

    def test_parts_nonnegative_input(self):
        y = GridFunction([0.0, 2.0, 1.0, 0.0])
        assert positive_part(y) == y
        assert negative_part(y) == GridFunction.zero(2)

    @pytest.mark.parametrize(
        "interior, expected",
        [([1.0, 1.0], np.sqrt(2)), ([0.0, 0.0], 0.0), ([3.0, 0.0], np.sqrt(18))],
    )
    def test_h_norm(self, interior, expected):
        assert h_norm(GridFunction.from_interior(interior)) == pytest.approx(
            expected, rel=1e-15
        )

    @pytest.mark.parametrize(
        "interior, expected", [([-3.0, 5.0], 5.0), ([0.0, 0.0], 0.0), ([1.0, 1.0], 1.0)]
    )
    def test_sup_norm(self, interior, expected):
        assert sup_norm(GridFunction.from_interior(interior)) == expected

    def test_constant_profile(self):
        assert np.array_equal(constant_profile(2, 1.0).values, [0, 1, 1, 0])
        assert constant_profile(3, 0.0) == GridFunction.zero(3)
        assert np.array_equal(constant_profile(2, 2.5).values, [0, 2.5, 2.5, 0])


class TestProperties:
    @given(interior_arrays())
    @settings(max_examples=200, deadline=None)
    def test_sign_decomposition(self, interior):
        y = GridFunction.from_interior(interior)
        pos, neg = positive_part(y), negative_part(y)
        assert np.array_equal(pos.values - neg.values, y.values)
        assert np.all(pos.values * neg.values == 0.0)

    @given(interior_arrays())
    @settings(max_examples=200, deadline=None)
    def test_difference_sign_inequalities(self, interior):
        # exact sign facts, no tolerance: max(y,0) is monotone and max(-y,0)
        # antitone in y, so their forward differences cannot share a sign
        y = GridFunction.from_interior(interior)
        dy = forward_difference(y)
        dpos = forward_difference(positive_part(y))
        dneg = forward_difference(negative_part(y))
        assert np.all(dy * dneg <= 0.0)
        assert np.all(dpos * dneg <= 0.0)

    @given(
        st.integers(2, 50),
        st.one_of(
            st.just(0.0), st.floats(1e-100, 100), st.floats(-100, -1e-100)
        ),
    )
    @settings(max_examples=200, deadline=None)
    def test_constant_profile_norm(self, T, lam):
        # |lam| below ~1e-154 underflows the squared differences; out of scope
        assert h_norm(constant_profile(T, lam)) == pytest.approx(
            abs(lam) * np.sqrt(2), rel=1e-12, abs=0.0
        )

    @given(interior_arrays())
    @settings(max_examples=200, deadline=None)
    def test_ball_membership_bounds_sup_norm(self, interior):
        y = GridFunction.from_interior(interior)
        T = y.T
        nrm = h_norm(y)
        if nrm == 0.0:
            return
        scaled = GridFunction(y.values * (1.0 / np.sqrt(T + 1) / nrm))
        assert sup_norm(scaled) <= 1.0 + 1e-12
