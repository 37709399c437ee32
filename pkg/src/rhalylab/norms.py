"""Integral means and the norms built from them.

Everything here reduces to two quadratures: a trapezoid rule over
equispaced angles for M_p(r, f), which is spectrally accurate for
trigonometric-polynomial integrands, and a Gauss-Jacobi rule in the
radius for the weighted area integrals. Every norm is returned as a
:class:`NormReport` carrying its own grid-doubling refinement estimate,
so accuracy is observable rather than assumed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .coeffcore import CircleGrid, CoeffSeq, derivative, evaluate_on_circle
from .errors import AlphaRange, ParamOrder, RadiusRange

#: relative refinement change above which a report is considered unresolved
REFINEMENT_FLAG = 1e-6

DEFAULT_RADIAL_NODES = 64
DEFAULT_DYADIC_J = 14


@dataclass(frozen=True)
class NormReport:
    value: float
    grid_points: int
    radial_nodes: int
    refinement_delta: float

    @property
    def flagged(self) -> bool:
        return self.refinement_delta > REFINEMENT_FLAG

    def to_json(self) -> str:
        return json.dumps(
            {
                "value": self.value,
                "grid_points": self.grid_points,
                "radial_nodes": self.radial_nodes,
                "refinement_delta": self.refinement_delta,
            }
        )


@dataclass(frozen=True)
class RadialGrid:
    """Radial quadrature nodes in (0,1).

    kind="jacobi" carries Gauss-Jacobi nodes/weights for the measure
    (1-r)^alpha dr on [0,1]; kind="dyadic" is the ladder r_j = 1 - 2^{-j}
    used for sup-type quantities (weights are placeholders there).
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    alpha: float = 0.0

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("radial nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def jacobi(cls, alpha: float, n_nodes: int = DEFAULT_RADIAL_NODES) -> "RadialGrid":
        """Nodes/weights with sum w_i g(r_i) ~ int_0^1 (1-r)^alpha g(r) dr."""
        if alpha <= -1:
            raise AlphaRange(f"alpha={alpha} must exceed -1")
        x, w = roots_jacobi(n_nodes, alpha, 0.0)
        order = np.argsort(x)
        x, w = x[order], w[order]
        r = (x + 1.0) / 2.0
        w = w / 2.0 ** (alpha + 1.0)
        return cls(nodes=r, weights=w, kind="jacobi", alpha=alpha)

    @classmethod
    def dyadic(cls, J: int = DEFAULT_DYADIC_J) -> "RadialGrid":
        r = 1.0 - 2.0 ** (-np.arange(1, J + 1, dtype=float))
        return cls(nodes=r, weights=np.ones_like(r), kind="dyadic")


def dyadic_radii(J: int = DEFAULT_DYADIC_J) -> np.ndarray:
    return 1.0 - 2.0 ** (-np.arange(1, J + 1, dtype=float))


def default_angular_points(degree: int) -> int:
    return max(1024, 8 * (degree + 1))


def _mp_power_mean(f: CoeffSeq, r: float, p: float, M: int) -> float:
    """Trapezoid value of (1/2pi) int |f(r e^{it})|^p dt on M angles."""
    vals = evaluate_on_circle(f, CircleGrid(points=M, radius=r))
    return float(np.mean(np.abs(vals) ** p))


def mean_mp(f: CoeffSeq, r: float, p: float, M: int | None = None) -> NormReport:
    """Integral mean M_p(r, f) with a doubled-grid refinement estimate."""
    if not 0.0 < r <= 1.0:
        raise RadiusRange(f"r={r} must lie in (0, 1]")
    if p < 1:
        raise ValueError("p must be >= 1")
    if M is None:
        M = default_angular_points(f.degree)
    coarse = _mp_power_mean(f, r, p, M) ** (1.0 / p)
    fine = _mp_power_mean(f, r, p, 2 * M) ** (1.0 / p)
    delta = abs(fine - coarse) / max(fine, np.finfo(float).tiny)
    return NormReport(
        value=coarse, grid_points=M, radial_nodes=1, refinement_delta=delta
    )


def hp_norm(f: CoeffSeq, p: float, M: int | None = None) -> NormReport:
    """H^p norm of a polynomial.

    Integral means are nondecreasing in r, so the sup over r is attained
    at r = 1 and no radial extrapolation is needed.
    """
    return mean_mp(f, 1.0, p, M)


def _mp_powers_on_nodes(f: CoeffSeq, p: float, nodes: np.ndarray, M: int) -> np.ndarray:
    """M_p^p(r, f) for every radius at once via a batched FFT."""
    n = np.arange(f.degree + 1)
    damped = nodes[:, None] ** n[None, :] * f.coeffs[None, :]
    vals = np.fft.ifft(damped, n=M, axis=1) * M
    return np.mean(np.abs(vals) ** p, axis=1)


def bergman_norm(
    f: CoeffSeq, p: float, alpha: float, grid: RadialGrid | None = None
) -> NormReport:
    """A^p_alpha norm via ((a+1) int_0^1 2r (1-r^2)^a M_p^p(r,f) dr)^{1/p}."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if alpha <= -1:
        raise AlphaRange(f"alpha={alpha} must exceed -1")
    if grid is None:
        grid = RadialGrid.jacobi(alpha)
    M = default_angular_points(f.degree)

    def value(g: RadialGrid) -> float:
        means = _mp_powers_on_nodes(f, p, g.nodes, M)
        integrand = 2.0 * g.nodes * (1.0 + g.nodes) ** alpha * means
        return float((alpha + 1.0) * np.dot(g.weights, integrand)) ** (1.0 / p)

    coarse = value(grid)
    fine = value(RadialGrid.jacobi(alpha, 2 * len(grid.nodes)))
    delta = abs(fine - coarse) / max(fine, np.finfo(float).tiny)
    return NormReport(
        value=coarse,
        grid_points=M,
        radial_nodes=len(grid.nodes),
        refinement_delta=delta,
    )


def dirichlet_norm(
    f: CoeffSeq, p: float, alpha: float, grid: RadialGrid | None = None
) -> NormReport:
    """D^p_alpha norm: (|f(0)|^p + ||f'||_{A^p_alpha}^p)^{1/p}."""
    rep = bergman_norm(derivative(f), p, alpha, grid)
    value = (abs(f.coeff(0)) ** p + rep.value**p) ** (1.0 / p)
    return NormReport(
        value=value,
        grid_points=rep.grid_points,
        radial_nodes=rep.radial_nodes,
        refinement_delta=rep.refinement_delta,
    )


def xqp_dirichlet_normalization(p: float) -> float:
    """The (alpha+1) factor relating the X_{p,p} integral to D^p_{p-1}."""
    return p


def xqp_norm(
    f: CoeffSeq, q: float, p: float, grid: RadialGrid | None = None
) -> NormReport:
    """Mixed-norm value (|f(0)|^p + int_0^1 (1-r)^{p(1-1/q)} M_q^p(r,f') dr)^{1/p}."""
    if q > p:
        raise ParamOrder(f"need q <= p, got q={q}, p={p}")
    if q < 1:
        raise ValueError("q must be >= 1")
    a = p * (1.0 - 1.0 / q)
    if grid is None:
        grid = RadialGrid.jacobi(a)
    fp = derivative(f)
    M = default_angular_points(fp.degree)

    def value(g: RadialGrid) -> float:
        means = _mp_powers_on_nodes(fp, q, g.nodes, M) ** (p / q)
        return float(abs(f.coeff(0)) ** p + np.dot(g.weights, means)) ** (1.0 / p)

    coarse = value(grid)
    fine = value(RadialGrid.jacobi(a, 2 * len(grid.nodes)))
    delta = abs(fine - coarse) / max(fine, np.finfo(float).tiny)
    return NormReport(
        value=coarse,
        grid_points=M,
        radial_nodes=len(grid.nodes),
        refinement_delta=delta,
    )


def beta(f: CoeffSeq, p: float, alpha: float, r: float) -> float:
    """Growth seminorm (1-r)^{1-alpha} M_p(r, f')."""
    if not 0.0 < r < 1.0:
        raise RadiusRange(f"r={r} must lie in (0, 1)")
    if not 0.0 < alpha <= 1.0:
        raise AlphaRange(f"alpha={alpha} must lie in (0, 1]")
    return (1.0 - r) ** (1.0 - alpha) * mean_mp(derivative(f), r, p).value


def beta_sup(
    f: CoeffSeq, p: float, alpha: float, radii: np.ndarray | None = None
) -> float:
    """Max of the growth seminorm over a radius ladder (dyadic by default)."""
    if radii is None:
        radii = dyadic_radii()
    return max(beta(f, p, alpha, r) for r in radii)
