"""The Rhaly operator: application, generating function, moment sequences,
finite-rank truncations, and operator-norm estimation.

The operator never materializes its matrix: application is a weighted
prefix sum, the l2 adjoint is a weighted suffix sum, so an N x N section
costs O(N) per matrix-vector product and power iteration scales to large
sections.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .coeffcore import CoeffSeq, derivative, partial_sum, prefix_sums, shift
from .errors import NotMonotone, TruncationMismatch
from .norms import hp_norm


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite positive (or signed) atomic measure on [0, 1)."""

    atoms_t: np.ndarray
    atoms_mass: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.atoms_t, dtype=float)
        m = np.asarray(self.atoms_mass, dtype=float)
        if t.shape != m.shape or t.ndim != 1:
            raise ValueError("atom arrays must be 1-d and of equal length")
        if np.any(t < 0) or np.any(t >= 1):
            raise ValueError("atoms must lie in [0, 1)")
        if np.any(np.diff(t) <= 0):
            raise ValueError("atom positions must be strictly increasing")
        if not np.all(np.isfinite(m)):
            raise ValueError("masses must be finite")
        object.__setattr__(self, "atoms_t", t)
        object.__setattr__(self, "atoms_mass", m)

    def tail_mass(self, r: float) -> float:
        """mu([r, 1))."""
        return float(np.sum(self.atoms_mass[self.atoms_t >= r]))

    @classmethod
    def lebesgue_midpoint(cls, n_atoms: int = 1024) -> "DiscreteMeasure":
        """Midpoint discretization of Lebesgue measure on [0, 1)."""
        t = (np.arange(n_atoms) + 0.5) / n_atoms
        return cls(t, np.full(n_atoms, 1.0 / n_atoms))

    @classmethod
    def from_json(cls, text: str) -> "DiscreteMeasure":
        data = json.loads(text)
        atoms = data["atoms"]
        return cls(
            np.array([a["t"] for a in atoms]), np.array([a["mass"] for a in atoms])
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "atoms": [
                    {"t": float(t), "mass": float(m)}
                    for t, m in zip(self.atoms_t, self.atoms_mass)
                ]
            }
        )


@dataclass(frozen=True)
class SequenceSpec:
    """Closed-form or explicit law for the weight sequence eta_n.

    kind is one of "literal", "power_law", "cesaro", "measure_moments",
    "signed". Power law means eta_n = c * (n+1)^{-s}.
    """

    kind: str
    truncation: int
    c: float = 1.0
    s: float = 0.0
    values_list: tuple = field(default=())
    measure: DiscreteMeasure | None = None
    base: "SequenceSpec | None" = None
    signs: tuple = field(default=())

    def __post_init__(self):
        if self.truncation < 1:
            raise ValueError("truncation must be >= 1")
        if self.kind not in (
            "literal",
            "power_law",
            "cesaro",
            "measure_moments",
            "signed",
        ):
            raise ValueError(f"unknown sequence kind {self.kind!r}")

    # --- constructors -------------------------------------------------

    @classmethod
    def literal(cls, values, truncation: int | None = None) -> "SequenceSpec":
        vals = tuple(complex(v) for v in values)
        if truncation is None:
            truncation = len(vals) - 1
        return cls(kind="literal", truncation=truncation, values_list=vals)

    @classmethod
    def power_law(cls, c: float, s: float, truncation: int) -> "SequenceSpec":
        return cls(kind="power_law", truncation=truncation, c=c, s=s)

    @classmethod
    def cesaro(cls, truncation: int) -> "SequenceSpec":
        return cls(kind="cesaro", truncation=truncation)

    @classmethod
    def measure_moments(cls, mu: DiscreteMeasure, truncation: int) -> "SequenceSpec":
        return cls(kind="measure_moments", truncation=truncation, measure=mu)

    @classmethod
    def signed(cls, base: "SequenceSpec", signs) -> "SequenceSpec":
        signs = tuple(int(s) for s in signs)
        if len(signs) != base.truncation + 1:
            raise ValueError("need one sign per realized entry")
        if any(s not in (-1, 1) for s in signs):
            raise ValueError("signs must be +-1")
        return cls(kind="signed", truncation=base.truncation, base=base, signs=signs)

    # --- realization --------------------------------------------------

    def values(self) -> np.ndarray:
        """eta_0 .. eta_truncation as a complex vector."""
        n = np.arange(self.truncation + 1)
        if self.kind == "literal":
            if len(self.values_list) < self.truncation + 1:
                out = np.zeros(self.truncation + 1, dtype=complex)
                out[: len(self.values_list)] = self.values_list
                return out
            return np.array(self.values_list[: self.truncation + 1], dtype=complex)
        if self.kind == "power_law":
            return (self.c * (n + 1.0) ** (-self.s)).astype(complex)
        if self.kind == "cesaro":
            return (1.0 / (n + 1.0)).astype(complex)
        if self.kind == "measure_moments":
            # direct power evaluation per atom; no recurrences
            t = self.measure.atoms_t
            m = self.measure.atoms_mass
            mom = (m[None, :] * t[None, :] ** n[:, None]).sum(axis=1)
            return mom.astype(complex)
        if self.kind == "signed":
            return np.array(self.signs) * self.base.values()
        raise AssertionError("unreachable")

    def is_certified_decreasing(self) -> bool:
        """True when eta is certifiably nonnegative and nonincreasing."""
        if self.kind == "cesaro":
            return True
        if self.kind == "power_law":
            return self.c >= 0 and self.s >= 0
        if self.kind in ("literal", "measure_moments"):
            v = self.values()
            if np.any(np.abs(v.imag) > 0):
                return False
            re = v.real
            return bool(np.all(re >= 0) and np.all(np.diff(re) <= 1e-15))
        return False

    # --- serialization ------------------------------------------------

    def to_json(self) -> str:
        data: dict = {"kind": self.kind, "truncation": self.truncation}
        if self.kind == "power_law":
            data.update(c=self.c, s=self.s)
        elif self.kind == "literal":
            data["values"] = [[v.real, v.imag] for v in self.values_list]
        elif self.kind == "measure_moments":
            data["measure"] = json.loads(self.measure.to_json())
        elif self.kind == "signed":
            data["base"] = json.loads(self.base.to_json())
            data["signs"] = list(self.signs)
        return json.dumps(data)

    @classmethod
    def from_json(cls, text: str) -> "SequenceSpec":
        data = json.loads(text) if isinstance(text, str) else text
        kind = data["kind"]
        trunc = int(data["truncation"])
        if kind == "power_law":
            return cls.power_law(float(data["c"]), float(data["s"]), trunc)
        if kind == "cesaro":
            return cls.cesaro(trunc)
        if kind == "literal":
            vals = [
                complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
                for v in data["values"]
            ]
            return cls.literal(vals, trunc)
        if kind == "measure_moments":
            mu = DiscreteMeasure.from_json(json.dumps(data["measure"]))
            return cls.measure_moments(mu, trunc)
        if kind == "signed":
            base = cls.from_json(json.dumps(data["base"]))
            return cls.signed(base, data["signs"])
        raise ValueError(f"unknown sequence kind {kind!r}")


@dataclass(frozen=True)
class OpNormEstimate:
    lower: float
    method: str  # "PowerIteration" or "FamilySearch"
    witness: CoeffSeq
    iterations: int
    residual: float
    converged: bool = True

    def to_json(self) -> str:
        return json.dumps(
            {
                "lower": self.lower,
                "method": self.method,
                "iterations": self.iterations,
                "residual": self.residual,
                "converged": self.converged,
                "witness": json.loads(self.witness.to_json()),
            }
        )


# --- operator application ---------------------------------------------


def apply_rhaly(eta: SequenceSpec, f: CoeffSeq) -> CoeffSeq:
    """Coefficient n of the image is eta_n * sum_{k<=n} a_k."""
    if f.degree > eta.truncation:
        raise TruncationMismatch(
            f"degree {f.degree} exceeds sequence truncation {eta.truncation}"
        )
    pref = prefix_sums(f)
    return CoeffSeq(eta.values()[: f.degree + 1] * pref.coeffs)


def generating_function(eta: SequenceSpec) -> CoeffSeq:
    """F(z) = sum eta_n z^n, i.e. the image of the constant 1."""
    return CoeffSeq(eta.values())


def radial_derivative_series(eta: SequenceSpec) -> CoeffSeq:
    """G(z) = z F'(z) = sum n eta_n z^n."""
    return shift(derivative(generating_function(eta)))


def moments(mu: DiscreteMeasure, truncation: int) -> SequenceSpec:
    """Moment sequence mu_n = sum_j mass_j t_j^n as a literal spec."""
    spec = SequenceSpec.measure_moments(mu, truncation)
    return SequenceSpec.literal(spec.values(), truncation)


def carleson_check(mu: DiscreteMeasure, radii) -> tuple[float, bool]:
    """Max of mu([r,1))/(1-r) over the radii plus a boundedness flag.

    The flag is false when the ratio sequence trends upward over the tail
    of the supplied (increasing) radii, i.e. the measure is not Carleson
    at the resolved scales.
    """
    radii = np.asarray(radii, dtype=float)
    ratios = np.array([mu.tail_mass(r) / (1.0 - r) for r in radii])
    constant = float(ratios.max()) if len(ratios) else 0.0
    positive = ratios > 0
    if positive.sum() >= 4:
        x = np.log(1.0 / (1.0 - radii[positive]))
        y = np.log(ratios[positive])
        half = len(x) // 2
        slope = float(np.polyfit(x[half:], y[half:], 1)[0])
        flag = slope < 0.25
    else:
        flag = True
    return constant, flag


class TruncatedRhaly:
    """Finite-rank truncation R_N: apply the operator, keep coefficients 0..N."""

    def __init__(self, eta: SequenceSpec, N: int):
        if N > eta.truncation:
            raise TruncationMismatch(f"N={N} exceeds truncation {eta.truncation}")
        self.eta = eta
        self.N = N

    def __call__(self, f: CoeffSeq) -> CoeffSeq:
        return partial_sum(apply_rhaly(self.eta, f), self.N)

    def tail(self, f: CoeffSeq) -> CoeffSeq:
        """(R - R_N) f, the operator realized by zeroing eta_0..eta_N."""
        full = apply_rhaly(self.eta, f)
        out = full.coeffs.copy()
        out[: min(self.N + 1, len(out))] = 0
        return CoeffSeq(out)


def truncated_operator(eta: SequenceSpec, N: int) -> TruncatedRhaly:
    return TruncatedRhaly(eta, N)


# --- l2 operator norm via matrix-free power iteration -------------------


def _section_matvec(eta_vals: np.ndarray, v: np.ndarray) -> np.ndarray:
    return eta_vals * np.cumsum(v)


def _section_rmatvec(eta_vals: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.cumsum((np.conj(eta_vals) * v)[::-1])[::-1]


def opnorm_h2(
    eta: SequenceSpec,
    N: int,
    max_iter: int = 10000,
    tol: float = 1e-13,
    seed: int = 0,
) -> OpNormEstimate:
    """Largest singular value of the N x N lower-triangular section.

    Power iteration on (adjoint o operator); both passes are O(N). Starts
    from the all-ones vector with one seeded random restart; the better
    Rayleigh quotient wins.
    """
    if N > eta.truncation + 1:
        raise TruncationMismatch(f"N={N} exceeds truncation+1 {eta.truncation + 1}")
    ev = eta.values()[:N]
    if not np.any(ev):
        return OpNormEstimate(
            lower=0.0,
            method="PowerIteration",
            witness=CoeffSeq(np.ones(N, dtype=complex) / np.sqrt(N)),
            iterations=0,
            residual=0.0,
        )

    def run(v0: np.ndarray):
        v = v0 / np.linalg.norm(v0)
        rho_prev = -1.0
        iters = 0
        for iters in range(1, max_iter + 1):
            u = _section_rmatvec(ev, _section_matvec(ev, v))
            rho = float(np.real(np.vdot(v, u)))
            nrm = np.linalg.norm(u)
            if nrm == 0.0:
                return v, 0.0, iters, True
            v_next = u / nrm
            if abs(rho - rho_prev) < tol * max(rho, 1e-300):
                return v_next, rho, iters, True
            rho_prev = rho
            v = v_next
        return v, rho_prev, max_iter, False

    rng = np.random.default_rng(seed)
    starts = [np.ones(N, dtype=complex), rng.standard_normal(N).astype(complex)]
    best = None
    for v0 in starts:
        v, rho, iters, ok = run(v0)
        if best is None or rho > best[1]:
            best = (v, rho, iters, ok)
    v, rho, iters, ok = best
    Av = _section_matvec(ev, v)
    lower = float(np.linalg.norm(Av) / np.linalg.norm(v))
    u = _section_rmatvec(ev, Av)
    residual = float(np.linalg.norm(u - rho * v) / max(rho, 1e-300))
    return OpNormEstimate(
        lower=lower,
        method="PowerIteration",
        witness=CoeffSeq(v),
        iterations=iters,
        residual=residual,
        converged=ok,
    )


# --- lower bounds on H^p via candidate families --------------------------


def _family_candidates(
    eta: SequenceSpec, family: str, budget: int, seed: int
) -> list[CoeffSeq]:
    T = eta.truncation
    cands: list[CoeffSeq] = []
    if family == "CoordinateDisks":
        # geometric kernels (1 - a z)^{-1} on a ladder accumulating at 1,
        # plus a few coordinate monomials
        n = np.arange(T + 1)
        js = np.linspace(0.5, 14.0, max(2, budget - 4))
        for j in js:
            a = 1.0 - 2.0 ** (-j)
            cands.append(CoeffSeq((a**n).astype(complex)))
        for k in (0, 1, 2, min(8, T)):
            e = np.zeros(T + 1, dtype=complex)
            e[k] = 1.0
            cands.append(CoeffSeq(e))
    elif family == "ExtremalFN":
        from .constructions import extremal_fn

        N = 4
        while 40 * N <= T and len(cands) < budget:
            cands.append(extremal_fn(2.0, N, T))
            N *= 2
    elif family == "RandomPoly":
        rng = np.random.default_rng(seed)
        deg = min(256, T)
        for _ in range(budget):
            c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
            cands.append(CoeffSeq(c))
    else:
        raise ValueError(f"unknown candidate family {family!r}")
    return cands


def opnorm_lower_hp(
    eta: SequenceSpec,
    p: float,
    family: str = "CoordinateDisks",
    budget: int = 64,
    seed: int = 0,
) -> OpNormEstimate:
    """Certified lower bound: max over candidates of ||R f||_{H^p} / ||f||_{H^p}."""
    best_ratio = 0.0
    best_witness = None
    for f in _family_candidates(eta, family, budget, seed):
        denom = hp_norm(f, p).value
        if denom == 0.0:
            continue
        ratio = hp_norm(apply_rhaly(eta, f), p).value / denom
        if ratio > best_ratio:
            best_ratio = ratio
            best_witness = f
    if best_witness is None:
        best_witness = CoeffSeq(np.ones(1, dtype=complex))
    return OpNormEstimate(
        lower=best_ratio,
        method="FamilySearch",
        witness=best_witness,
        iterations=budget,
        residual=0.0,
    )


def require_decreasing(eta: SequenceSpec):
    if not eta.is_certified_decreasing():
        raise NotMonotone("sequence is not certified nonnegative decreasing")
