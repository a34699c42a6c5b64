import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import pklaplace as pk


@pytest.fixture(scope="session")
def t10_problem():
    """Smallness-feasible oscillatory instance at T=10 (the desk-scale case)."""
    nl = pk.example1_family(10, 4.0, scale=0.5)
    return pk.ProblemSpec(10, pk.ExponentMap.constant(10, 2.0), nl)


@pytest.fixture(scope="session")
def t2_problem():
    """Smallness-feasible oscillatory instance reduced to T=2 (two unknowns)."""
    nl = pk.example1_family(2, 4.0, scale=0.15)
    return pk.ProblemSpec(2, pk.ExponentMap.constant(2, 2.0), nl)


@pytest.fixture(scope="session")
def boundary_problem():
    """Instance violating the smallness condition by a wide margin.

    The huge forcing drags the constrained minimizer onto the boundary of
    the ball, exercising the active-constraint KKT branch.
    """
    nl = pk.power_family(4, 4.0, 5.0, 5.0)
    return pk.ProblemSpec(4, pk.ExponentMap.constant(4, 2.0), nl)


@pytest.fixture(scope="session")
def linear_problem():
    """Constant forcing with exponents 2: exactly solvable discrete Poisson."""
    return pk.ProblemSpec(2, pk.ExponentMap.constant(2, 2.0), pk.constant_family(2, 1.0))


@pytest.fixture(scope="session")
def t10_solution(t10_problem):
    return pk.solve_two(t10_problem, seed=0)


@pytest.fixture(scope="session")
def t2_solution(t2_problem):
    return pk.solve_two(t2_problem, seed=0)
