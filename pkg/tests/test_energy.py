import numpy as np
import pytest

import pklaplace as pk
from pklaplace.energy import _energy
from oracles import directional_fd_oracle, energy_oracle, f_scalar, primitive_oracle


def random_power_problem(rng, T=None):
    T = int(rng.integers(2, 13)) if T is None else T
    p = pk.ExponentMap(rng.uniform(2.0, 4.0, T + 2))
    m = p.p_plus + rng.uniform(0.5, 3.0)
    a = rng.uniform(0.1, 2.0, T)
    b = rng.uniform(0.1, 2.0, T)
    return pk.ProblemSpec(T, p, pk.power_family(T, m, a, b))


class TestPrimitive:
    def test_zero_is_exact(self, t10_problem):
        assert pk.primitive_F(t10_problem, 3, 0.0) == 0.0

    def test_constant_integrand(self, linear_problem):
        assert pk.primitive_F(linear_problem, 1, 2.0) == pytest.approx(2.0, rel=1e-14)

    def test_against_quadpack_oracle(self):
        nl = pk.example1_family(2, 4.0)
        prob = pk.ProblemSpec(2, pk.ExponentMap.constant(2, 2.0), nl)
        for k, y in [(1, 1.0), (1, 7.5), (2, 0.3), (2, -1.2), (1, 16.0)]:
            mine = pk.primitive_F(prob, k, y)
            ref = primitive_oracle(prob, k, y, tol=1e-13)
            assert mine == pytest.approx(ref, rel=1e-11, abs=1e-13)

    def test_memoized_value_identical(self, t10_problem):
        a = pk.primitive_F(t10_problem, 5, 3.7)
        b = pk.primitive_F(t10_problem, 5, 3.7)
        assert a == b

    def test_closed_form_preferred(self):
        nl = pk.power_family(4, 4.0, 1.0, 1.0)
        prob = pk.ProblemSpec(4, pk.ExponentMap.constant(4, 2.0), nl)
        assert pk.primitive_F(prob, 2, 2.0) == pytest.approx(2.0**4 / 4 + 2.0, rel=1e-15)

    def test_k_range_enforced(self, linear_problem):
        with pytest.raises(ValueError):
            pk.primitive_F(linear_problem, 0, 1.0)

    def test_nonconvergence_raises_with_achieved_tol(self):
        # an integrand rough enough to defeat a tiny panel budget
        def vicious(k, y):
            return 1.0 + np.abs(np.sin(1e7 * y))

        nl = pk.Nonlinearity(vicious)
        prob = pk.ProblemSpec(2, pk.ExponentMap.constant(2, 2.0), nl)
        with pytest.raises(pk.QuadratureError) as err:
            pk.primitive_F(prob, 1, 5.0, max_panels=4)
        assert err.value.achieved_tol > 0


class TestEnergy:
    def test_zero_function(self, t10_problem):
        assert pk.energy_J(t10_problem, pk.GridFunction.zero(10)) == 0.0

    def test_hand_value_linear(self, linear_problem):
        # kinetic (1 + 0 + 1)/2 minus (1 + 1)
        y = pk.GridFunction([0, 1, 1, 0])
        assert pk.energy_J(linear_problem, y) == pytest.approx(-1.0, rel=1e-15)

    def test_against_straight_line_oracle(self):
        nl = pk.example1_family(2, 4.0)
        prob = pk.ProblemSpec(2, pk.ExponentMap.constant(2, 2.0), nl)
        y = pk.GridFunction([0, 1, 1, 0])
        assert pk.energy_J(prob, y) == pytest.approx(
            energy_oracle(prob, y.values), rel=1e-11
        )

    def test_oracle_agreement_random(self):
        rng = np.random.default_rng(7)
        nl = pk.example1_family(4, 5.0, scale=0.8)
        prob = pk.ProblemSpec(4, pk.ExponentMap([2, 3, 2.5, 4, 2, 3]), nl)
        for _ in range(5):
            y = pk.GridFunction.from_interior(rng.uniform(-2, 3, 4))
            assert pk.energy_J(prob, y) == pytest.approx(
                energy_oracle(prob, y.values), rel=1e-10, abs=1e-12
            )

    def test_positive_part_dependence(self):
        # the nonlinear term feels only max(y, 0) up to the frozen linear ramp:
        # J(y) - J(y+) = kinetic(y) - kinetic(y+) + sum f(k,0) max(-y(k), 0)
        nl = pk.example1_family(4, 4.0)
        prob = pk.ProblemSpec(4, pk.ExponentMap.constant(4, 2.0), nl)
        y = pk.GridFunction([0, 1.5, -2.0, 0.5, -0.25, 0])
        pos = pk.positive_part(y)
        neg = pk.negative_part(y)

        def kinetic(v):
            d = np.diff(v.values)
            return float(np.sum(np.abs(d) ** 2 / 2.0))

        ramp = float(np.sum(prob.f_at_zero * neg.interior))
        lhs = pk.energy_J(prob, y) - pk.energy_J(prob, pos)
        assert lhs == pytest.approx(kinetic(y) - kinetic(pos) + ramp, rel=1e-12)


class TestGradientAndResidual:
    def test_gradient_at_zero_is_minus_f0(self):
        nl = pk.example1_family(6, 4.0)
        prob = pk.ProblemSpec(6, pk.ExponentMap.constant(6, 2.0), nl)
        g = pk.grad_J(prob, pk.GridFunction.zero(6))
        ks = np.arange(1, 7)
        expected = -(np.sin(ks) ** 2 + 1.0) / 6.0**3
        assert np.allclose(g.interior, expected, rtol=1e-15)
        assert g.values[0] == 0.0 and g.values[-1] == 0.0

    def test_linear_critical_point(self, linear_problem):
        y = pk.GridFunction([0, 1, 1, 0])
        assert np.array_equal(pk.grad_J(linear_problem, y).interior, [0.0, 0.0])

    def test_residual_of_exact_solution(self, linear_problem):
        assert np.array_equal(
            pk.residual(linear_problem, pk.GridFunction([0, 1, 1, 0])), [0.0, 0.0]
        )

    def test_residual_of_zero_is_f0(self, t10_problem):
        r = pk.residual(t10_problem, pk.GridFunction.zero(10))
        assert np.array_equal(r, t10_problem.f_at_zero)
        assert np.all(r > 0)

    def test_residual_is_negated_gradient(self):
        rng = np.random.default_rng(3)
        prob = random_power_problem(rng)
        y = pk.GridFunction.from_interior(rng.uniform(-3, 3, prob.T))
        r = pk.residual(prob, y)
        g = pk.grad_J(prob, y).interior
        assert np.array_equal(r, -g)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            prob = random_power_problem(rng)
            y = rng.uniform(-2, 2, prob.T)
            v = rng.uniform(-1, 1, prob.T)
            yf = np.zeros(prob.T + 2)
            yf[1:-1] = y
            vf = np.zeros(prob.T + 2)
            vf[1:-1] = v
            gv = float(np.dot(pk.grad_J(prob, pk.GridFunction(yf)).interior, v))
            fd = directional_fd_oracle(prob, yf, vf)
            assert gv == pytest.approx(fd, rel=1e-7, abs=1e-10)

    def test_summation_by_parts(self):
        rng = np.random.default_rng(13)
        for _ in range(25):
            prob = random_power_problem(rng)
            y = pk.GridFunction.from_interior(rng.uniform(-2, 2, prob.T))
            v = pk.GridFunction.from_interior(rng.uniform(-1, 1, prob.T))
            pairing = pk.directional_derivative(prob, y, v)
            pointwise = float(np.dot(pk.grad_J(prob, y).interior, v.interior))
            assert pairing == pytest.approx(pointwise, rel=1e-12, abs=1e-12)


class TestValidation:
    def test_m_must_exceed_p_plus(self):
        nl = pk.power_family(3, 3.0, 1.0, 1.0)
        with pytest.raises(ValueError, match="exceed"):
            pk.ProblemSpec(3, pk.ExponentMap.constant(3, 4.0), nl)

    def test_size_mismatch(self):
        nl = pk.power_family(3, 5.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            pk.ProblemSpec(4, pk.ExponentMap.constant(4, 2.0), nl)

    def test_envelope_positivity(self):
        with pytest.raises(ValueError):
            pk.GrowthEnvelope(4.0, [1.0, 0.0], [1.0, 1.0], [1.0, 1.0], [1.0, 1.0])
