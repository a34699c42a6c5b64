"""Built-in nonlinearity families with automatically derived growth envelopes.

Only parametric families are supported (no user expression language): the
envelopes below are exact consequences of the formulas, which keeps the C1
check sound.  Evaluators are numpy-vectorized over both arguments.
"""

from __future__ import annotations

import numpy as np

from .energy import GrowthEnvelope, Nonlinearity

__all__ = ["example1_family", "power_family", "constant_family", "FAMILY_BUILDERS"]


def example1_family(T: int, m: float, scale: float = 1.0) -> Nonlinearity:
    """Oscillatory arctan family.

        f(k, y) = scale * [ |y|^(m-2) y (2 + arctan y) / (T^2 k)
                            + (sin^2(k) e^(-|y|) + 1) / T^3 ]

    For y >= 0 the factor 2 + arctan y lies in [2, 2 + pi/2] and the
    exponential term in [1, 2] (times 1/T^3), giving the exact envelope

        phi1 = 2 s/(T^2 k),  phi2 = (4+pi) s/(2 T^2 k),
        psi1 = s/T^3,        psi2 = 2 s/T^3.

    ``scale`` multiplies f and the envelope together, so C1 is preserved for
    every scale > 0 while the smallness condition C2 can be tuned.
    """
    T = int(T)
    m = float(m)
    s = float(scale)
    if T < 2:
        raise ValueError("T must be >= 2")
    if not s > 0.0:
        raise ValueError("scale must be positive")

    def evaluator(k, y):
        k = np.asarray(k, dtype=float)
        y = np.asarray(y, dtype=float)
        power = np.abs(y) ** (m - 2.0) * y
        osc = np.sin(k) ** 2 * np.exp(-np.abs(y))
        return s * (power * (2.0 + np.arctan(y)) / (T * T * k) + (osc + 1.0) / T**3)

    ks = np.arange(1, T + 1, dtype=float)
    envelope = GrowthEnvelope(
        m,
        2.0 * s / (T * T * ks),
        (4.0 + np.pi) * s / (2.0 * T * T * ks),
        np.full(T, s / T**3),
        np.full(T, 2.0 * s / T**3),
    )
    return Nonlinearity(evaluator, envelope, None, name=f"example1(m={m}, scale={s})")


def power_family(T: int, m: float, a, b) -> Nonlinearity:
    """Pure power family f(k, y) = a(k) |y|^(m-2) y + b(k).

    ``a`` and ``b`` are positive scalars or length-T sequences.  The envelope
    is the family itself (phi1 = phi2 = a, psi1 = psi2 = b), so the C1 check
    holds with equality, and the primitive has the closed form
    F(k, y) = a(k) |y|^m / m + b(k) y.
    """
    T = int(T)
    m = float(m)
    a_arr = np.broadcast_to(np.asarray(a, dtype=float), (T,)).copy()
    b_arr = np.broadcast_to(np.asarray(b, dtype=float), (T,)).copy()
    if np.any(a_arr <= 0.0) or np.any(b_arr <= 0.0):
        raise ValueError("power family coefficients a, b must be strictly positive")

    def evaluator(k, y):
        idx = (np.asarray(k, dtype=int) - 1,)
        y = np.asarray(y, dtype=float)
        return a_arr[idx] * (np.abs(y) ** (m - 2.0) * y) + b_arr[idx]

    def primitive(k, y):
        idx = (np.asarray(k, dtype=int) - 1,)
        y = np.asarray(y, dtype=float)
        return a_arr[idx] * np.abs(y) ** m / m + b_arr[idx] * y

    envelope = GrowthEnvelope(m, a_arr, a_arr, b_arr, b_arr)
    return Nonlinearity(evaluator, envelope, primitive, name=f"power(m={m})")


def constant_family(T: int, value: float = 1.0) -> Nonlinearity:
    """Constant forcing f(k, y) = value (no growth envelope exists for it).

    Useful as a linear oracle when the exponents are identically 2: the
    unique solution of the problem is value * k (T + 1 - k) / 2.
    """
    value = float(value)
    if not value > 0.0:
        raise ValueError("constant forcing must be positive")

    def evaluator(k, y):
        k = np.asarray(k, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.full(np.broadcast_shapes(k.shape, y.shape), value)

    def primitive(k, y):
        y = np.asarray(y, dtype=float)
        k = np.asarray(k, dtype=float)
        return np.broadcast_to(value * y, np.broadcast_shapes(k.shape, y.shape))

    return Nonlinearity(evaluator, None, primitive, name=f"constant({value})")


FAMILY_BUILDERS = {
    "example1": example1_family,
    "power": power_family,
}
