"""Verdict engine: boundedness and compactness decisions for the averaging
operator on Hardy and Bergman spaces.

Each decision routes through the mean-Lipschitz membership of the generating
function F(z) = sum eta_n z^n, or through the exact monotone-weight rule
when the spec certifies a nonnegative decreasing sequence. Verdicts carry
their numeric evidence and the tag of the result they instantiate; the
open region for p > 2 and the one-sided p = 1 conditions surface as
Inconclusive rather than being forced to a side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .coeffcore import CoeffSeq, block, derivative, partial_sum
from .errors import AlphaRange, PRange
from .lipschitz import (
    BIG_LAMBDA,
    DEFAULT_EPS_TAIL,
    INCONCLUSIVE,
    LITTLE_LAMBDA,
    NEITHER,
    block_profile,
    classify_membership,
)
from .norms import dirichlet_norm, hp_norm, xqp_norm
from .rhalyop import (
    SequenceSpec,
    TruncatedRhaly,
    apply_rhaly,
    generating_function,
    require_decreasing,
)

BOUNDED = "Bounded"
COMPACT = "Compact"
NOT_BOUNDED = "NotBounded"
INCONCLUSIVE_VERDICT = "Inconclusive"

#: classifier-level slope threshold; tighter than the membership default so
#: that profiles growing like a small positive power still register as growth
CLASSIFIER_EPS_SLOPE = 0.05

#: log-log trend above which a ratio sequence counts as unbounded growth
TREND_THRESHOLD = 0.1


@dataclass(frozen=True)
class Verdict:
    conclusion: str
    theorem: str
    space: str
    evidence: tuple  # of (name, dict) pairs

    def __post_init__(self):
        if len(self.evidence) == 0:
            raise ValueError("a verdict must carry at least one evidence item")

    @property
    def conclusions(self) -> tuple:
        """All conclusions implied; compactness implies boundedness."""
        if self.conclusion == COMPACT:
            return (COMPACT, BOUNDED)
        return (self.conclusion,)

    def to_json(self) -> str:
        return json.dumps(
            {
                "conclusion": self.conclusion,
                "conclusions": list(self.conclusions),
                "theorem": self.theorem,
                "space": self.space,
                "evidence": [{"name": n, **d} for n, d in self.evidence],
            }
        )


def _profile_evidence(name: str, profile) -> tuple:
    return (
        name,
        {
            "alpha": profile.exponent_alpha,
            "p": profile.p,
            "slope": profile.slope,
            "tail_ratio": profile.tail_ratio,
            "entries": [[int(N), s] for N, s in profile.entries],
        },
    )


def _fit_K(eta: SequenceSpec, K: int) -> int:
    """Largest block count whose top block fits inside the truncation."""
    K_max = int(np.floor(np.log2(eta.truncation + 2))) - 1
    return min(K, K_max)


def _membership(eta: SequenceSpec, p: float, K: int, eps_slope, eps_tail):
    F = generating_function(eta)
    profile = block_profile(F, p, 1.0 / p, _fit_K(eta, K))
    return classify_membership(profile, eps_slope, eps_tail)


_MEMBERSHIP_TO_CONCLUSION = {
    LITTLE_LAMBDA: COMPACT,
    BIG_LAMBDA: BOUNDED,
    NEITHER: NOT_BOUNDED,
    INCONCLUSIVE: INCONCLUSIVE_VERDICT,
}


def classify_hardy(
    eta: SequenceSpec,
    p: float,
    K: int = 12,
    eps_slope: float = CLASSIFIER_EPS_SLOPE,
    eps_tail: float = DEFAULT_EPS_TAIL,
) -> Verdict:
    """Boundedness/compactness on H^p from the generating function.

    For 1 < p <= 2 the membership test at (p, 1/p) is an iff. For p > 2
    sufficiency is tested on a q-grid in (2, p) and necessity at p itself;
    the region between is reported Inconclusive.
    """
    if not 1.0 < p < np.inf:
        raise PRange(f"p={p} must lie in (1, inf)")
    space = f"Hardy(p={p})"
    if p <= 2.0:
        verdict = _membership(eta, p, K, eps_slope, eps_tail)
        conclusion = _MEMBERSHIP_TO_CONCLUSION[verdict.space]
        theorem = "Thm2a" if conclusion == COMPACT else "Thm1a"
        return Verdict(
            conclusion=conclusion,
            theorem=theorem,
            space=space,
            evidence=(_profile_evidence("block_profile", verdict.profile),),
        )
    # p > 2: sufficiency on a q-grid strictly inside (2, p)
    evidence = []
    for k in range(1, 8):
        q = 2.0 + (p - 2.0) * k / 8.0
        v = _membership(eta, q, K, eps_slope, eps_tail)
        evidence.append(_profile_evidence(f"block_profile_q={q}", v.profile))
        if v.space == LITTLE_LAMBDA:
            return Verdict(COMPACT, "Thm2c", space, tuple(evidence))
        if v.space == BIG_LAMBDA:
            return Verdict(BOUNDED, "Thm1c", space, tuple(evidence))
    v_at_p = _membership(eta, p, K, eps_slope, eps_tail)
    evidence.append(_profile_evidence("block_profile_at_p", v_at_p.profile))
    if v_at_p.space == NEITHER:
        return Verdict(NOT_BOUNDED, "Thm1b", space, tuple(evidence))
    return Verdict(INCONCLUSIVE_VERDICT, "Thm1b", space, tuple(evidence))


def classify_bergman(
    eta: SequenceSpec,
    p: float,
    alpha: float,
    K: int = 12,
    eps_slope: float = CLASSIFIER_EPS_SLOPE,
    eps_tail: float = DEFAULT_EPS_TAIL,
) -> Verdict:
    """Boundedness/compactness on A^p_alpha from the generating function.

    The sufficiency direction holds on the full range alpha > -1; the
    necessity direction is only available for alpha < 2p - 2, so a growing
    profile outside that range yields Inconclusive.
    """
    if not 1.0 < p < np.inf:
        raise PRange(f"p={p} must lie in (1, inf)")
    if alpha <= -1.0:
        raise AlphaRange(f"alpha={alpha} must exceed -1")
    space = f"Bergman(p={p},alpha={alpha})"
    theorem = "Thm3" if alpha == 0.0 else "Thm7"
    verdict = _membership(eta, p, K, eps_slope, eps_tail)
    conclusion = _MEMBERSHIP_TO_CONCLUSION[verdict.space]
    if conclusion == NOT_BOUNDED and alpha >= 2.0 * p - 2.0:
        conclusion = INCONCLUSIVE_VERDICT
    return Verdict(
        conclusion=conclusion,
        theorem=theorem,
        space=space,
        evidence=(_profile_evidence("block_profile", verdict.profile),),
    )


def _tail_trend(xs: np.ndarray, ys: np.ndarray) -> float:
    """Log-log slope over the tail half; 0 when the tail touches zero."""
    half = max(len(xs) // 2 - 1, 0)
    x, y = xs[half:], ys[half:]
    if np.any(y <= 0) or len(x) < 2:
        return 0.0
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def h1_necessary(eta: SequenceSpec, Ns) -> Verdict:
    """Necessary and sufficient H^1 diagnostics.

    (a) (sum_{n<=N} n |eta_n|)/N must stay bounded, (b) the dyadic blocks
    of F' must have H^1 norms O(log N), and (c) if ||F'||_{H^1} converges
    under truncation growth the operator is compact on H^1. Only one-sided
    conclusions are available at p = 1, so the fallback is Inconclusive.
    """
    Ns = np.asarray(Ns, dtype=int)
    if np.any(Ns < 2) or np.any(2 ** np.round(np.log2(Ns)).astype(int) != Ns):
        raise ValueError("Ns must be dyadic and >= 2")
    if Ns.max() > eta.truncation:
        raise ValueError("largest N exceeds the sequence truncation")
    v = np.abs(eta.values())
    n = np.arange(len(v))
    weighted = np.cumsum(n * v)
    ratio_a = np.array([weighted[N] / N for N in Ns])
    F = generating_function(eta)
    Fp = derivative(F)
    ratio_b = np.array(
        [hp_norm(block(Fp, int(N)), 1.0).value / np.log(N) for N in Ns]
    )
    norms_c = np.array(
        [hp_norm(partial_sum(Fp, int(N)), 1.0).value for N in Ns]
    )
    trend_a = _tail_trend(Ns.astype(float), ratio_a)
    trend_b = _tail_trend(Ns.astype(float), ratio_b)
    rel_c = abs(norms_c[-1] - norms_c[-2]) / max(norms_c[-1], np.finfo(float).tiny)
    evidence = (
        ("weighted_sum_ratio", {"Ns": Ns.tolist(), "values": ratio_a.tolist(),
                                "trend": trend_a}),
        ("block_log_ratio", {"Ns": Ns.tolist(), "values": ratio_b.tolist(),
                             "trend": trend_b}),
        ("derivative_h1_trend", {"Ns": Ns.tolist(), "values": norms_c.tolist(),
                                 "relative_change": rel_c}),
    )
    if trend_a > TREND_THRESHOLD:
        return Verdict(NOT_BOUNDED, "Thm6ii", "Hardy(p=1)", evidence)
    if trend_b > TREND_THRESHOLD:
        return Verdict(NOT_BOUNDED, "Thm6iii", "Hardy(p=1)", evidence)
    if rel_c < 1e-2:
        return Verdict(COMPACT, "Thm6i", "Hardy(p=1)", evidence)
    return Verdict(INCONCLUSIVE_VERDICT, "Thm6i", "Hardy(p=1)", evidence)


def decreasing_rule(
    eta: SequenceSpec, p: float, trend_threshold: float = TREND_THRESHOLD
) -> Verdict:
    """Exact rule for certified nonnegative decreasing weights: bounded on
    H^p (1 < p < inf) exactly when n * eta_n stays bounded."""
    if not 1.0 < p < np.inf:
        raise PRange(f"p={p} must lie in (1, inf)")
    require_decreasing(eta)
    v = eta.values().real
    ns = 2 ** np.arange(1, int(np.floor(np.log2(eta.truncation))) + 1)
    products = ns * v[ns]
    trend = _tail_trend(ns.astype(float), products)
    evidence = (
        ("n_eta_n", {"ns": ns.tolist(), "values": products.tolist(),
                     "trend": trend, "threshold": trend_threshold}),
    )
    conclusion = NOT_BOUNDED if trend > trend_threshold else BOUNDED
    return Verdict(conclusion, "Thm4iii", f"Hardy(p={p})", evidence)


# --- embedding diagnostics -------------------------------------------------


def default_corpus(seed: int = 11, n_random: int = 20) -> list[CoeffSeq]:
    """Fixed test corpus: the concentrated family plus seeded random
    polynomials of degree 256."""
    from .constructions import extremal_fn

    corpus = [extremal_fn(2.0, N) for N in (4, 8, 16, 32, 64)]
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        c = rng.standard_normal(257) + 1j * rng.standard_normal(257)
        corpus.append(CoeffSeq(c))
    return corpus


def dpp_embedding_check(
    eta: SequenceSpec,
    p: float,
    q: float | None = None,
    corpus: list[CoeffSeq] | None = None,
    tail_Ns=(64, 256, 1024),
) -> dict:
    """Fitted embedding constants into the derivative-weighted target spaces.

    Reports the largest ratio over the corpus of the Dirichlet-type norm of
    the image against the H^p norm of the input (and the mixed-norm
    analogue when q is given), plus the same ratios for the tail operators,
    which must decay when the operator is compact.
    """
    if corpus is None:
        corpus = default_corpus()
    dirichlet_ratios = []
    xqp_ratios = []
    for f in corpus:
        denom = hp_norm(f, p).value
        if denom == 0.0:
            continue
        Rf = apply_rhaly(eta, f)
        dirichlet_ratios.append(dirichlet_norm(Rf, p, p - 1.0).value / denom)
        if q is not None:
            xqp_ratios.append(xqp_norm(Rf, q, p).value / denom)
    tail_ratios = []
    for N in tail_Ns:
        op = TruncatedRhaly(eta, int(N))
        worst = 0.0
        for f in corpus:
            denom = hp_norm(f, p).value
            if denom == 0.0:
                continue
            worst = max(
                worst, dirichlet_norm(op.tail(f), p, p - 1.0).value / denom
            )
        tail_ratios.append(worst)
    out = {
        "dirichlet_constant": max(dirichlet_ratios, default=0.0),
        "tail_Ns": list(tail_Ns),
        "tail_ratios": tail_ratios,
    }
    if q is not None:
        out["xqp_constant"] = max(xqp_ratios, default=0.0)
    return out


def hardy_inequality_check(f: CoeffSeq) -> tuple[float, float]:
    """(sum |a_n|/(n+1), pi * ||f||_{H^1}); the first never exceeds the
    second beyond quadrature slack."""
    s = float(np.sum(np.abs(f.coeffs) / (np.arange(f.degree + 1) + 1.0)))
    return s, float(np.pi * hp_norm(f, 1.0).value)
