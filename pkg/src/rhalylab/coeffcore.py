"""Truncated power series and the coefficient-level algebra built on them.

A :class:`CoeffSeq` holds the Taylor coefficients a_0 .. a_d of an analytic
function truncated at degree d. All operations are pure; coefficient arrays
are frozen after construction. Coefficient reads beyond the stored degree
are treated as 0, matching the truncated-series semantics used everywhere
else in the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import IndexOrder, OversamplingViolation


@dataclass(frozen=True)
class CoeffSeq:
    """Immutable complex coefficient vector; index n holds a_n."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coeffs must be a nonempty 1-d array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, n: int) -> complex:
        """a_n, with out-of-range reads returning 0."""
        if n < 0 or n > self.degree:
            return 0j
        return complex(self.coeffs[n])

    def __eq__(self, other):
        if not isinstance(other, CoeffSeq):
            return NotImplemented
        return self.degree == other.degree and bool(
            np.array_equal(self.coeffs, other.coeffs)
        )

    def to_json(self) -> str:
        pairs = [[float(c.real), float(c.imag)] for c in self.coeffs]
        return json.dumps({"coeffs": pairs})

    @classmethod
    def from_json(cls, text: str) -> "CoeffSeq":
        data = json.loads(text)
        pairs = data["coeffs"]
        return cls(np.array([complex(re, im) for re, im in pairs]))

    @classmethod
    def log_one_over_one_minus_z(cls, degree: int) -> "CoeffSeq":
        """Truncation of log 1/(1-z) = sum_{n>=1} z^n / n."""
        c = np.zeros(degree + 1, dtype=complex)
        if degree >= 1:
            c[1:] = 1.0 / np.arange(1, degree + 1)
        return cls(c)


@dataclass(frozen=True)
class CircleGrid:
    """M equispaced angles theta_j = 2 pi j / M on the circle of radius r."""

    points: int
    radius: float = 1.0

    def __post_init__(self):
        if self.points < 4:
            raise ValueError("need at least 4 grid points")
        if not 0.0 < self.radius <= 1.0:
            raise ValueError("radius must lie in (0, 1]")

    def check_oversampling(self, degree: int):
        if self.points < 4 * (degree + 1):
            raise OversamplingViolation(
                f"M={self.points} < 4*(degree+1)={4 * (degree + 1)}"
            )


def hadamard(f: CoeffSeq, g: CoeffSeq) -> CoeffSeq:
    """Coefficientwise product; degree is the min of the two degrees."""
    d = min(f.degree, g.degree)
    return CoeffSeq(f.coeffs[: d + 1] * g.coeffs[: d + 1])


def derivative(f: CoeffSeq) -> CoeffSeq:
    """Termwise derivative; a degree-0 input yields the zero series."""
    if f.degree == 0:
        return CoeffSeq(np.zeros(1, dtype=complex))
    n = np.arange(1, f.degree + 1)
    return CoeffSeq(n * f.coeffs[1:])


def shift(f: CoeffSeq) -> CoeffSeq:
    """Multiplication by z: coefficients move up one slot."""
    return CoeffSeq(np.concatenate([[0j], f.coeffs]))


def prefix_sums(f: CoeffSeq) -> CoeffSeq:
    """Running sums sum_{k<=n} a_k, accumulated with Kahan compensation.

    Sign-alternating inputs make plain cumulative sums cancellation-prone,
    so the compensation term is carried explicitly.
    """
    out = np.empty(f.degree + 1, dtype=complex)
    total = 0j
    comp = 0j
    for n, a in enumerate(f.coeffs):
        y = a - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out[n] = total
    return CoeffSeq(out)


def evaluate_on_circle(f: CoeffSeq, grid: CircleGrid) -> np.ndarray:
    """Samples f(r e^{i theta_j}) via an FFT of the radially damped coefficients."""
    grid.check_oversampling(f.degree)
    damped = f.coeffs * grid.radius ** np.arange(f.degree + 1)
    padded = np.zeros(grid.points, dtype=complex)
    padded[: f.degree + 1] = damped
    # ifft uses the e^{+i n theta} convention needed here
    return np.fft.ifft(padded) * grid.points


def slice_coeffs(f: CoeffSeq, n: int, m: int) -> CoeffSeq:
    """Keep coefficients n..m in place, zero the rest; indices past the
    degree read as 0."""
    if n < 0:
        raise IndexOrder("slice start must be >= 0")
    if n > m:
        raise IndexOrder(f"slice start {n} exceeds end {m}")
    out = np.zeros(f.degree + 1, dtype=complex)
    lo = min(n, f.degree + 1)
    hi = min(m + 1, f.degree + 1)
    out[lo:hi] = f.coeffs[lo:hi]
    return CoeffSeq(out)


def block(f: CoeffSeq, N: int) -> CoeffSeq:
    """Dyadic block: coefficients N .. 2N-1."""
    if N < 1:
        raise IndexOrder("block index N must be >= 1")
    return slice_coeffs(f, N, 2 * N - 1)


def partial_sum(f: CoeffSeq, N: int) -> CoeffSeq:
    """Coefficients 0 .. N."""
    return slice_coeffs(f, 0, N)


def add(f: CoeffSeq, g: CoeffSeq) -> CoeffSeq:
    d = max(f.degree, g.degree)
    out = np.zeros(d + 1, dtype=complex)
    out[: f.degree + 1] += f.coeffs
    out[: g.degree + 1] += g.coeffs
    return CoeffSeq(out)


def subtract(f: CoeffSeq, g: CoeffSeq) -> CoeffSeq:
    return add(f, scale(g, -1.0))


def scale(f: CoeffSeq, c: complex) -> CoeffSeq:
    return CoeffSeq(c * f.coeffs)
