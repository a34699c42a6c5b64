import math

import mpmath as mp
import numpy as np
import pytest

import pklaplace as pk
from pklaplace.conditions import _geometric_constant


def random_grid_function(rng, T):
    return pk.GridFunction.from_interior(rng.uniform(-10.0, 10.0, T))


class TestGrowthEnvelopeCheck:
    def test_example_family_holds(self):
        nl = pk.example1_family(10, 4.0)
        prob = pk.ProblemSpec(10, pk.ExponentMap.constant(10, 2.0), nl)
        rep = pk.check_growth_envelope(prob)
        assert rep.holds
        assert rep.condition_id == "C1"
        assert rep.witness is None
        assert rep.sample_count > 10_000

    def test_exact_envelope_holds_with_equality(self):
        nl = pk.power_family(4, 4.0, 1.0, 1.0)
        prob = pk.ProblemSpec(4, pk.ExponentMap.constant(4, 2.0), nl)
        rep = pk.check_growth_envelope(prob)
        assert rep.holds
        assert rep.lhs == 0.0 and rep.rhs == 0.0

    def test_inflated_lower_envelope_fails_near_zero(self):
        nl = pk.example1_family(10, 4.0)
        env = nl.envelope
        bad = pk.Nonlinearity(
            nl.evaluator,
            pk.GrowthEnvelope(env.m, 2.0 * env.phi1, env.phi2, env.psi1, env.psi2),
            name="bad",
        )
        prob = pk.ProblemSpec(10, pk.ExponentMap.constant(10, 2.0), bad)
        rep = pk.check_growth_envelope(prob)
        assert not rep.holds
        k, y = rep.witness
        assert 1 <= k <= 10
        # doubling phi1 breaks the lower bound once the power term kicks in
        assert 0.0 < y < 100.0

    def test_negative_grid_rejected(self, t10_problem):
        with pytest.raises(pk.PreconditionError, match="nonnegative"):
            pk.check_growth_envelope(t10_problem, y_grid=np.array([-1.0, 0.0]))

    def test_envelope_required(self, linear_problem):
        with pytest.raises(pk.PreconditionError, match="envelope"):
            pk.check_growth_envelope(linear_problem)


class TestSmallnessCondition:
    def test_large_instance_direction(self):
        # T=200 with top exponent 18: geometric constant beats the envelope sum
        nl = pk.example1_family(200, 19.0)
        exps = pk.ExponentMap.constant(200, 18.0)
        rep = pk.check_envelope_smallness(200, exps, nl.envelope)
        assert rep.holds
        assert rep.lhs > rep.rhs

    def test_large_instance_values_against_mpmath(self):
        nl = pk.example1_family(200, 19.0)
        exps = pk.ExponentMap.constant(200, 18.0)
        rep = pk.check_envelope_smallness(200, exps, nl.envelope)
        with mp.workdps(50):
            T = mp.mpf(200)
            lhs = T ** mp.mpf(8) * (T + 1) ** mp.mpf(-9)
            rhs = mp.fsum(
                [(4 + mp.pi) / (2 * T**2 * k) + 2 / T**3 for k in range(1, 201)]
            )
            assert abs(rep.lhs - float(lhs)) <= 1e-12 * float(lhs)
            assert abs(rep.rhs - float(rhs)) <= 1e-12 * float(rhs)

    def test_exponent_two_collapse(self):
        # with exponents 2 the geometric constant is exactly 1/(T+1)
        env = pk.GrowthEnvelope(4.0, [0.01, 0.01], [0.01, 0.01], [0.01, 0.01], [0.01, 0.01])
        rep = pk.check_envelope_smallness(2, pk.ExponentMap.constant(2, 2.0), env)
        assert rep.lhs == pytest.approx(1.0 / 3.0, rel=1e-15)
        assert rep.rhs == pytest.approx(0.04, rel=1e-15)
        assert rep.holds

    def test_monotone_in_upper_envelope(self):
        nl = pk.example1_family(10, 4.0)
        exps = pk.ExponentMap.constant(10, 2.0)
        held = None
        for s in [0.25, 0.5, 1.0, 2.0, 4.0]:
            rep = pk.check_envelope_smallness(10, exps, nl.envelope.scaled(s))
            if held is not None and not held:
                assert not rep.holds  # scaling up never turns a fail into a pass
            held = rep.holds

    def test_scale_threshold_is_the_flip_point(self):
        nl = pk.example1_family(10, 4.0)
        exps = pk.ExponentMap.constant(10, 2.0)
        s_star = pk.envelope_scale_threshold(10, exps, nl.envelope)
        below = pk.check_envelope_smallness(10, exps, nl.envelope.scaled(0.999 * s_star))
        above = pk.check_envelope_smallness(10, exps, nl.envelope.scaled(1.001 * s_star))
        assert below.holds and not above.holds

    def test_geometric_constant_log_space(self):
        # overflow-prone parameters stay finite in log space
        assert _geometric_constant(10**6, 40.0) > 0.0
        assert math.isfinite(_geometric_constant(10**6, 40.0))


class TestSphereLowerBound:
    def test_hand_value(self):
        env = pk.GrowthEnvelope(4.0, [0.01, 0.01], [0.01, 0.01], [0.01, 0.01], [0.01, 0.01])
        nl = pk.Nonlinearity(lambda k, y: 0.01 * np.abs(y) ** 2 * y + 0.01, env)
        prob = pk.ProblemSpec(2, pk.ExponentMap.constant(2, 2.0), nl)
        # (1/2)(1/3) - 2 (0.01/4 + 0.01)
        assert pk.sphere_energy_lower_bound(prob) == pytest.approx(
            1.0 / 6.0 - 0.025, rel=1e-14
        )

    def test_bounds_sphere_samples_for_exponent_two(self, t10_problem):
        # certified bound regime: exponents identically 2
        L = pk.sphere_energy_lower_bound(t10_problem)
        rng = np.random.default_rng(42)
        radius = t10_problem.ball_radius
        for _ in range(300):
            v = rng.standard_normal(10)
            y = pk.GridFunction.from_interior(v)
            y = pk.GridFunction(y.values * (radius / pk.h_norm(y)))
            assert pk.energy_J(t10_problem, y) >= L - 1e-12

    def test_requires_envelope(self, linear_problem):
        with pytest.raises(pk.PreconditionError):
            pk.sphere_energy_lower_bound(linear_problem)


class TestNormInequalities:
    def test_a3_hand_chain(self):
        y = pk.GridFunction([0, 1, 1, 0])
        rep = pk.check_norm_inequality("A3", y, m=2.0)
        assert rep.holds
        assert rep.lhs == pytest.approx(2.0)
        assert rep.rhs == pytest.approx(6.0)

    def test_a5_constant_profile(self):
        for T in (2, 5, 9):
            for m in (2.0, 3.5):
                y = pk.constant_profile(T, 1.7)
                rep = pk.check_norm_inequality("A5", y, m=m)
                assert rep.holds
                assert rep.lhs == pytest.approx(2 * 1.7**m, rel=1e-12)
                assert rep.rhs == pytest.approx(2.0**m * T * 1.7**m, rel=1e-12)

    def test_a2_normalized_trials(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            T = int(rng.integers(2, 51))
            y = random_grid_function(rng, T)
            # keep strictly inside the unit ball against rounding overshoot
            y = pk.GridFunction(y.values * ((1.0 - 1e-12) / pk.h_norm(y)))
            exps = pk.ExponentMap(rng.uniform(2.0, 6.0, T + 2))
            assert pk.check_norm_inequality("A2", y, exponents=exps).holds

    def test_preconditions_raise(self):
        y = pk.GridFunction([0, 0.1, 0.1, 0])
        big = pk.GridFunction([0, 5.0, 5.0, 0])
        exps = pk.ExponentMap.constant(2, 3.0)
        with pytest.raises(pk.PreconditionError, match="A1"):
            pk.check_norm_inequality("A1", y, exponents=exps)
        with pytest.raises(pk.PreconditionError, match="A2"):
            pk.check_norm_inequality("A2", big, exponents=exps)
        with pytest.raises(pk.PreconditionError, match="m >= 2"):
            pk.check_norm_inequality("A3", y, m=1.5)
        with pytest.raises(pk.PreconditionError, match="A6"):
            pk.check_norm_inequality("A6", y, p=2.0, q=3.0)
        with pytest.raises(pk.PreconditionError, match="exponent map"):
            pk.check_norm_inequality("A1", big)

    def test_a6_conjugate_default(self):
        y = pk.GridFunction([0, -3, 5, 0])
        rep = pk.check_norm_inequality("A6", y, p=3.0)
        assert rep.holds
        assert rep.lhs == 5.0

    def test_unknown_id(self):
        with pytest.raises(ValueError, match="unknown inequality"):
            pk.check_norm_inequality("A7", pk.GridFunction.zero(2))

    def test_alternating_profile_attains_a2_constant(self):
        # equal-magnitude differences attain the power-mean bound exactly
        y = pk.GridFunction([0, 0.25, 0, 0.25, 0])
        exps = pk.ExponentMap.constant(3, 4.0)
        rep = pk.check_norm_inequality("A2", y, exponents=exps)
        assert rep.holds
        assert rep.lhs == pytest.approx(rep.rhs, rel=1e-12)
