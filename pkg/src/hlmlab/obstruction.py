"""Quadratic obstruction sets: no linear bias, yet excess 4-term APs.

Two sets inside [1, N], for a width parameter alpha:

    A1 = {x : {x^2 sqrt(2)} in [-alpha/2, alpha/2]}
    A2 = {x : {x sqrt(2) {x sqrt(3)}} in [-alpha/2, alpha/2]}

with the signed fractional part {t} in (-1/2, 1/2], both interval ends
closed. Both sets have density ~ alpha and tiny linear exponential-sum
bias, yet A1 has ~ 8/(27 alpha) times the random-model count of 4-term
APs: the alternating second difference

    x^2 - 3(x+d)^2 + 3(x+2d)^2 - (x+3d)^2 = 0

forces {(x+3d)^2 sqrt(2)} into [-7a/2, 7a/2] whenever the first three
points lie in A1, and the completion probability tends to
P(y1 - 3y2 + 3y3 in [-1,1] | y_i in [-1,1]) = 8/27.

Fractional parts are computed in double-double arithmetic (Dekker
products), so x^2 sqrt(2) mod 1 keeps ~1e-15 accuracy out to x ~ 2e6
instead of losing 12 bits in plain doubles.
"""

from dataclasses import dataclass
from fractions import Fraction
import json
import math

import numpy as np

from ._parallel import parallel_map
from .arith import balanced_function
from .fourier import sup_exp_sum


def _dd_sqrt(n: int) -> tuple[float, float]:
    """sqrt(n) as a hi+lo double pair via exact rational Newton steps."""
    s = Fraction(math.isqrt(n * 10**40), 10**20)
    for _ in range(4):
        s = (s + n / s) / 2
    hi = float(s)
    lo = float(s - Fraction(hi))
    return hi, lo


SQRT2_HI, SQRT2_LO = _dd_sqrt(2)
SQRT3_HI, SQRT3_LO = _dd_sqrt(3)

_SPLIT = 2.0**27 + 1.0


def _two_prod(a, b):
    """p + e = a*b exactly (Dekker split, no fma needed)."""
    p = a * b
    aa = a * _SPLIT
    ahi = aa - (aa - a)
    alo = a - ahi
    bb = b * _SPLIT
    bhi = bb - (bb - b)
    blo = b - bhi
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


def frac_half_dd(k, hi: float, lo: float):
    """{k * (hi + lo)} in (-1/2, 1/2] to ~1e-15 for |k*hi| up to ~1e15.

    k may be an integer array; hi + lo is a double-double constant.
    """
    kf = np.asarray(k, dtype=np.float64)
    p, e = _two_prod(kf, hi)
    t = (p % 1.0) + (e + kf * lo)
    return t - np.ceil(t - 0.5)


def _frac_half(t):
    return t - np.ceil(t - 0.5)


@dataclass
class ObstructionSet:
    """Membership table of A1 or A2 on [1, N] with measured density."""

    kind: str  # "A1" | "A2"
    N: int
    alpha: float
    membership: np.ndarray  # bool, index i <-> n = i+1
    density: float

    def members(self) -> np.ndarray:
        return np.nonzero(self.membership)[0] + 1

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("n\n")
            for n in self.members():
                fh.write(f"{n}\n")

    def to_bitset(self, path) -> None:
        np.packbits(self.membership).tofile(path)


def build(kind: str, N: int, alpha: float) -> ObstructionSet:
    """Membership by direct evaluation of the defining inequality."""
    if not 0.0 < alpha <= 0.25:
        raise ValueError(f"need 0 < alpha <= 0.25, got {alpha}")
    if N < 10**3:
        raise ValueError(f"need N >= 10^3, got {N}")
    x = np.arange(1, N + 1, dtype=np.int64)
    if kind == "A1":
        phase = frac_half_dd(x * x, SQRT2_HI, SQRT2_LO)
    elif kind == "A2":
        inner = frac_half_dd(x, SQRT3_HI, SQRT3_LO)
        # x*sqrt2*inner in double-double: inner is exact to ~1e-16, and
        # the product is re-split so the mod-1 keeps full precision
        p1, e1 = _two_prod(x.astype(np.float64) * inner, SQRT2_HI)
        corr = e1 + x * inner * SQRT2_LO
        phase = _frac_half((p1 % 1.0) + corr)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    member = np.abs(phase) <= alpha / 2.0
    # closed interval at both ends: the <= above keeps +alpha/2; -alpha/2
    # maps to |phase| == alpha/2 as well under the signed convention
    return ObstructionSet(kind=kind, N=N, alpha=alpha,
                          membership=member, density=float(member.mean()))


def random_control_set(N: int, alpha: float, seed: int = 0) -> ObstructionSet:
    """Bernoulli(alpha) control with the same interface."""
    rng = np.random.default_rng(seed)
    member = rng.uniform(size=N) < alpha
    return ObstructionSet(kind="bernoulli", N=N, alpha=alpha,
                          membership=member, density=float(member.mean()))


def linear_bias(obset: ObstructionSet, oversample: int = 4) -> float:
    """sup over the frequency grid of |E f_A(n) e(theta n)|."""
    return sup_exp_sum(balanced_function(obset.membership), oversample)[1]


def count_aps(membership: np.ndarray, k: int, threads: int = 1) -> int:
    """# of (x, d), d >= 1, with x, x+d, ..., x+(k-1)d all in the set.

    Exact whatever the schedule: the d-range splits into chunks whose
    integer subtotals are summed in order.
    """
    m = membership
    N = m.size
    d_max = (N - 1) // (k - 1)

    def chunk_total(bounds):
        lo, hi = bounds
        sub = 0
        for d in range(lo, hi):
            L = N - (k - 1) * d
            acc = m[:L].copy()
            for j in range(1, k):
                acc &= m[j * d : j * d + L]
            sub += int(acc.sum())
        return sub

    step = d_max if threads <= 1 else max(1, d_max // (4 * threads) + 1)
    bounds = [(lo, min(lo + step, d_max + 1)) for lo in range(1, d_max + 1, step)]
    return sum(parallel_map(chunk_total, bounds, threads))


def _ap_cells(N: int, k: int) -> int:
    """#{(x, d) : d >= 1, x + (k-1)d <= N}."""
    D = (N - 1) // (k - 1)
    return D * N - (k - 1) * D * (D + 1) // 2


def ap_stats(obset: ObstructionSet, k: int, threads: int = 1) -> dict:
    """Exact in-set AP count against the random-model alpha^k baseline."""
    if k < 3:
        raise ValueError("need k >= 3")
    observed = count_aps(obset.membership, k, threads)
    predicted = obset.density**k * _ap_cells(obset.N, k)
    return {
        "kind": obset.kind,
        "k": k,
        "N": obset.N,
        "observed": observed,
        "predicted": predicted,
        "ratio": observed / predicted if predicted > 0 else math.inf,
    }


def completion_probability(obset: ObstructionSet, min_condition: int = 100) -> float:
    """Empirical P(x + 3d in A | x, x+d, x+2d in A), over d >= 1."""
    m = obset.membership
    N = m.size
    conditioned = 0
    completed = 0
    for d in range(1, (N - 1) // 3 + 1):
        L = N - 3 * d
        first3 = m[:L] & m[d : d + L] & m[2 * d : 2 * d + L]
        conditioned += int(first3.sum())
        completed += int((first3 & m[3 * d : 3 * d + L]).sum())
    if conditioned < min_condition:
        raise ValueError(
            f"only {conditioned} conditioning triples (< {min_condition})"
        )
    return completed / conditioned


def check_constraint_identity(x_max: int, d_max: int) -> bool:
    """x^2 - 3(x+d)^2 + 3(x+2d)^2 - (x+3d)^2 == 0, all 0 <= x,d <= bounds.

    Exact integer arithmetic; int64 is safe for bounds up to ~1e6.
    """
    x = np.arange(0, x_max + 1, dtype=np.int64)[:, None]
    d = np.arange(0, d_max + 1, dtype=np.int64)[None, :]
    val = x**2 - 3 * (x + d) ** 2 + 3 * (x + 2 * d) ** 2 - (x + 3 * d) ** 2
    return bool((val == 0).all())


def stats_report(obset: ObstructionSet) -> dict:
    """Full JSON-ready report: density, bias, AP counts, completion."""
    s3 = ap_stats(obset, 3)
    s4 = ap_stats(obset, 4)
    report = {
        "kind": obset.kind,
        "N": obset.N,
        "alpha": obset.alpha,
        "density": obset.density,
        "bias": linear_bias(obset),
        "ap3": s3["observed"],
        "ap4": s4["observed"],
        "ratios": {"ap3": s3["ratio"], "ap4": s4["ratio"]},
    }
    try:
        report["completion_prob"] = completion_probability(obset)
    except ValueError:
        report["completion_prob"] = None
    return report


def stats_json(obset: ObstructionSet) -> str:
    return json.dumps(stats_report(obset))
