"""Dyadic block profiles and mean-Lipschitz membership classification.

Membership in the growth class at exponent alpha is read off the sequence
N^alpha ||Delta_N f||_{H^p} over dyadic N: bounded profiles indicate the
big-oh class, profiles that decay to zero the little-oh class, and profiles
with a clear upward log-log slope indicate neither. Since any finite
truncation underdetermines an asymptotic statement, thresholds are explicit
configuration and "Inconclusive" is a first-class outcome.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .coeffcore import CoeffSeq, block, derivative, partial_sum, subtract
from .errors import DegreeTooSmall, RadiusRange
from .norms import beta_sup, hp_norm

DEFAULT_EPS_SLOPE = 0.1
DEFAULT_EPS_TAIL = 0.5

BIG_LAMBDA = "BigLambda"
LITTLE_LAMBDA = "LittleLambda"
NEITHER = "Neither"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class BlockProfile:
    exponent_alpha: float
    p: float
    entries: tuple  # of (N, scaled_norm)
    slope: float
    tail_ratio: float

    @property
    def scaled_norms(self) -> np.ndarray:
        return np.array([s for _, s in self.entries])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("N,scaled_norm\n")
        for N, s in self.entries:
            buf.write(f"{N},{s!r}\n")
        return buf.getvalue()

    def sidecar_json(self, verdict: str | None = None) -> str:
        data = {"slope": self.slope, "tail_ratio": self.tail_ratio}
        if verdict is not None:
            data["verdict"] = verdict
        return json.dumps(data)


@dataclass(frozen=True)
class MembershipVerdict:
    space: str
    profile: BlockProfile
    eps_slope: float
    eps_tail: float


def _fit_tail_slope(Ns: np.ndarray, scaled: np.ndarray) -> float:
    """Least-squares log-log slope over the tail half of the k range."""
    K = len(Ns)
    tail = slice(K // 2 - 1, K)  # k in [K/2, K], 1-based k
    s = scaled[tail]
    if np.any(s <= 0):
        return 0.0
    return float(np.polyfit(np.log(Ns[tail].astype(float)), np.log(s), 1)[0])


def block_profile(
    f: CoeffSeq, p: float, alpha: float, K: int, strict: bool = True
) -> BlockProfile:
    """Scaled dyadic block norms N^alpha ||Delta_N f||_{H^p} for N = 2..2^K.

    strict=True refuses block ranges past the stored degree, where truncation
    zeros would masquerade as decay. Pass strict=False only for inputs that
    genuinely have no tail (e.g. constants).
    """
    if K < 6:
        raise ValueError("need K >= 6 dyadic blocks")
    if strict and 2 ** (K + 1) - 1 > f.degree:
        raise DegreeTooSmall(
            f"top block ends at {2 ** (K + 1) - 1}, past degree {f.degree}; "
            "the profile would read truncation zeros"
        )
    Ns = 2 ** np.arange(1, K + 1)
    scaled = np.array(
        [N**alpha * hp_norm(block(f, int(N)), p).value for N in Ns]
    )
    slope = _fit_tail_slope(Ns, scaled)
    top = scaled.max()
    tail_ratio = float(scaled[-1] / top) if top > 0 else 0.0
    return BlockProfile(
        exponent_alpha=alpha,
        p=p,
        entries=tuple((int(N), float(s)) for N, s in zip(Ns, scaled)),
        slope=slope,
        tail_ratio=tail_ratio,
    )


def derivative_profile(f: CoeffSeq, p: float, alpha: float, K: int) -> BlockProfile:
    """Equivalent derivative form: N^{alpha-1} ||Delta_N f'||_{H^p}."""
    return block_profile(derivative(f), p, alpha - 1.0, K, strict=False)


def classify_membership(
    profile: BlockProfile,
    eps_slope: float = DEFAULT_EPS_SLOPE,
    eps_tail: float = DEFAULT_EPS_TAIL,
) -> MembershipVerdict:
    """Map a block profile to a membership verdict.

    Bounded-and-flat profiles are BigLambda, additionally-vanishing tails
    are LittleLambda, clearly growing slopes are Neither, everything else
    is Inconclusive.
    """
    scaled = profile.scaled_norms
    top = scaled.max()
    if top == 0.0:
        # identically vanishing blocks: trivially in the little-oh class
        space = LITTLE_LAMBDA
    else:
        # boundedness means no late surge; a decaying tail is still bounded,
        # so only the tail half is compared against the overall median
        tail_top = scaled[len(scaled) // 2 :].max()
        bounded = (
            tail_top / max(np.median(scaled), np.finfo(float).tiny) <= 1.0 / eps_tail
        )
        if profile.slope <= eps_slope and bounded:
            space = LITTLE_LAMBDA if profile.tail_ratio <= eps_tail else BIG_LAMBDA
        elif profile.slope >= 2.0 * eps_slope:
            space = NEITHER
        else:
            space = INCONCLUSIVE
    return MembershipVerdict(
        space=space, profile=profile, eps_slope=eps_slope, eps_tail=eps_tail
    )


def partial_sum_convergence(
    f: CoeffSeq,
    p: float,
    alpha: float,
    Ns,
    radii: np.ndarray | None = None,
) -> np.ndarray:
    """beta_sup of the partial-sum remainders f - S_N f over the given Ns."""
    return np.array(
        [beta_sup(subtract(f, partial_sum(f, int(N))), p, alpha, radii) for N in Ns]
    )


def dilate(f: CoeffSeq, r: float) -> CoeffSeq:
    """f_r(z) = f(rz): coefficient n picks up a factor r^n."""
    if not 0.0 < r < 1.0:
        raise RadiusRange(f"dilation radius {r} must lie in (0, 1)")
    return CoeffSeq(f.coeffs * r ** np.arange(f.degree + 1))
