"""Grid functions on {0, ..., T+1} with zero Dirichlet boundary.

The ambient space is

    Y = { y : {0,...,T+1} -> R,  y(0) = y(T+1) = 0 },

a (T-dimensional) Hilbert space under the difference norm

    ||y|| = ( sum_{k=1}^{T+1} |y(k) - y(k-1)|^2 )^(1/2).

Arrays are stored 0-based and the array index *is* the grid index k, so
``y.values[k]`` is the value at k for k = 0..T+1.  All operations here are
pure functions over immutable values; instances are safe to share across
threads.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "GridFunction",
    "ExponentMap",
    "forward_difference",
    "positive_part",
    "negative_part",
    "h_norm",
    "sup_norm",
    "constant_profile",
]


class GridFunction:
    """Immutable real-valued grid function with zero boundary values.

    Parameters
    ----------
    values : array_like, shape (T+2,)
        Values at grid indices 0..T+1.  The first and last entry must be
        exactly zero; anything else is rejected so membership in Y cannot
        be violated.  Use :meth:`from_interior` to construct from the T
        interior values with boundary zeros padded automatically.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        v = np.array(values, dtype=float)
        if v.ndim != 1 or v.size < 4:
            raise ValueError("values must be a 1-d sequence of length T+2 with T >= 2")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function values must be finite")
        if v[0] != 0.0 or v[-1] != 0.0:
            raise ValueError("boundary values y(0) and y(T+1) must be exactly zero")
        v.flags.writeable = False
        self._values = v

    @classmethod
    def from_interior(cls, interior) -> "GridFunction":
        """Build from the T interior values y(1..T); boundary zeros are padded."""
        inner = np.asarray(interior, dtype=float)
        if inner.ndim != 1 or inner.size < 2:
            raise ValueError("interior must be a 1-d sequence of length T >= 2")
        full = np.zeros(inner.size + 2)
        full[1:-1] = inner
        return cls(full)

    @classmethod
    def zero(cls, T: int) -> "GridFunction":
        """The zero function on {0,...,T+1}."""
        if T < 2:
            raise ValueError("T must be >= 2")
        return cls(np.zeros(T + 2))

    @property
    def values(self) -> np.ndarray:
        """Read-only array of length T+2; index k is the grid index."""
        return self._values

    @property
    def interior(self) -> np.ndarray:
        """Read-only view of the interior values y(1..T)."""
        return self._values[1:-1]

    @property
    def T(self) -> int:
        return self._values.size - 2

    def __len__(self) -> int:
        return self._values.size

    def __getitem__(self, k):
        return self._values[k]

    def __eq__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    __hash__ = None

    def __repr__(self):
        return f"GridFunction(T={self.T}, values={np.array2string(self._values, max_line_width=70)})"


class ExponentMap:
    """Variable exponent p : {0,...,T+1} -> [2, inf), with cached extremes.

    ``p_minus`` and ``p_plus`` are the minimum and maximum of the map.  The
    energy's kinetic term uses p(0..T) (the exponent attached to each of the
    T+1 forward differences).
    """

    __slots__ = ("_values", "_pmin", "_pmax")

    def __init__(self, exponents):
        v = np.array(exponents, dtype=float)
        if v.ndim != 1 or v.size < 4:
            raise ValueError("exponents must be a 1-d sequence of length T+2 with T >= 2")
        if not np.all(np.isfinite(v)):
            raise ValueError("exponents must be finite")
        if np.any(v < 2.0):
            raise ValueError("exponent below 2")
        v.flags.writeable = False
        self._values = v
        self._pmin = float(v.min())
        self._pmax = float(v.max())

    @classmethod
    def constant(cls, T: int, p: float) -> "ExponentMap":
        return cls(np.full(T + 2, float(p)))

    @classmethod
    def periodic(cls, T: int, pattern) -> "ExponentMap":
        """Tile ``pattern`` over the indices 0..T+1."""
        pat = np.asarray(pattern, dtype=float)
        if pat.ndim != 1 or pat.size == 0:
            raise ValueError("pattern must be a non-empty 1-d sequence")
        reps = int(np.ceil((T + 2) / pat.size))
        return cls(np.tile(pat, reps)[: T + 2])

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def p_minus(self) -> float:
        return self._pmin

    @property
    def p_plus(self) -> float:
        return self._pmax

    @property
    def T(self) -> int:
        return self._values.size - 2

    def __repr__(self):
        return (
            f"ExponentMap(T={self.T}, p_minus={self._pmin}, p_plus={self._pmax})"
        )


def forward_difference(y: GridFunction) -> np.ndarray:
    """Forward differences d(k-1) = y(k) - y(k-1) for k = 1..T+1 (length T+1)."""
    return np.diff(y.values)


def positive_part(y: GridFunction) -> GridFunction:
    """Pointwise max(y, 0); boundary zeros are preserved."""
    return GridFunction(np.maximum(y.values, 0.0))


def negative_part(y: GridFunction) -> GridFunction:
    """Pointwise max(-y, 0), so that y = positive_part(y) - negative_part(y)."""
    return GridFunction(np.maximum(-y.values, 0.0))


def h_norm(y: GridFunction) -> float:
    """The difference (Hilbert) norm: sqrt of the sum of squared forward differences."""
    d = np.diff(y.values)
    return float(np.sqrt(np.sum(d * d)))


def sup_norm(y: GridFunction) -> float:
    """max over k in [1,T] of |y(k)| (boundary values are zero by construction)."""
    return float(np.max(np.abs(y.values[1:-1])))


def constant_profile(T: int, lam: float) -> GridFunction:
    """The profile equal to ``lam`` at every interior index and zero at the boundary.

    Its difference norm is |lam| * sqrt(2) for every T (only the two boundary
    jumps contribute).
    """
    full = np.full(T + 2, float(lam))
    full[0] = 0.0
    full[-1] = 0.0
    return GridFunction(full)
