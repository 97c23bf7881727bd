"""Integer linear systems, local solution densities, and singular series.

A system is an s x t integer matrix A, solutions read as A x = 0
(homogeneous only). Validity:

  * t >= s + 2 and rank_Q(A) = s (fraction-free integer elimination);
  * no nonzero vector in the rational row span has <= 2 nonzero entries.
    Equivalent finite test: for every column pair {i, j}, the matrix with
    those columns deleted still has rank s; a rank drop exhibits a
    row-span vector supported inside {i, j}.

The local factor at a prime p is

    alpha_p = P(all x_i != 0 | A x = 0 over F_p) / ((p-1)/p)^t,

an exact rational. Two routes compute it:

  * "enumerate": literal traversal of the F_p null space (parametrize
    the free coordinates after mod-p reduction), capped in size;
  * "rank": inclusion-exclusion over coordinates forced to zero,
    #(x : Ax=0, x_S = 0) = p^(t - |S| - rank of A minus columns S),
    which needs only O(2^t) mod-p ranks and scales to large p.

Both give the same rational; tests pin their equality. The truncated
singular series is the double-precision product of exact alpha_p over
p <= P0 in ascending order, with a tail estimate from extrapolating
partial sums of |log alpha_p| linearly in 1/p.

Closed forms for the AP systems (densities of three- and four-term
progressions of primes):

    S3(P0) = 1/2 * prod_{3 <= p <= P0} (1 - 1/(p-1)^2)      ~ 0.3301
    S4(P0) = 3/4 * prod_{5 <= p <= P0} (1 - (3p-1)/(p-1)^3) ~ 0.4764
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt
import json

import numpy as np

from ._parallel import parallel_map

ENUMERATION_CAP = 10**7


class DegenerateSystem(ValueError):
    """Rejected matrix; .reason names the violated clause."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class EnumerationTooLarge(ValueError):
    """Null-space size p^dim exceeds the enumeration cap."""


@dataclass(frozen=True)
class LinearSystem:
    """Validated non-degenerate s x t integer system (rows() gives A)."""

    s: int
    t: int
    entries: tuple
    validated: bool = True

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def describe(self) -> str:
        return ";".join(",".join(str(e) for e in r) for r in self.entries)


@dataclass
class SingularSeries:
    """Truncated product of local factors with an extrapolated tail."""

    local_factors: dict  # prime -> Fraction
    truncated_product: float
    truncation_prime: int
    tail_estimate: float
    system: LinearSystem | None = field(default=None, repr=False)

    def to_json(self) -> str:
        return json.dumps(
            {
                "factors": [
                    [p, f.numerator, f.denominator]
                    for p, f in sorted(self.local_factors.items())
                ],
                "product": self.truncated_product,
                "P0": self.truncation_prime,
                "tail": self.tail_estimate,
            }
        )


def parse_system(text: str) -> LinearSystem:
    """Rows separated by ';', entries by ',': "1,-2,1,0;0,1,-2,1"."""
    rows = [[int(e) for e in row.split(",")] for row in text.strip().split(";")]
    return new_system(rows)


def rank_int(rows: list[list[int]]) -> int:
    """Exact rank over Q by fraction-free (Bareiss) elimination."""
    m = [list(map(int, r)) for r in rows]
    if not m or not m[0]:
        return 0
    nr, nc = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(nc):
        piv = next((r for r in range(rank, nr) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rank + 1, nr):
            for c in range(col + 1, nc):
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = m[rank][col]
        rank += 1
        if rank == nr:
            break
    return rank


def new_system(matrix) -> LinearSystem:
    """Validate and wrap an integer matrix; DegenerateSystem on failure."""
    rows = [list(map(int, r)) for r in matrix]
    s = len(rows)
    if s < 1 or any(len(r) != len(rows[0]) for r in rows):
        raise DegenerateSystem("matrix must be rectangular with at least one row")
    t = len(rows[0])
    r = rank_int(rows)
    if r < s:
        raise DegenerateSystem(f"rank deficient: rank {r} < s = {s}")
    if t < s + 2:
        raise DegenerateSystem(f"need t >= s+2, got s={s}, t={t}")
    for i, j in combinations(range(t), 2):
        reduced = [[row[c] for c in range(t) if c not in (i, j)] for row in rows]
        if rank_int(reduced) < s:
            raise DegenerateSystem(
                f"row span contains a vector supported on columns {{{i},{j}}}"
            )
    return LinearSystem(s=s, t=t, entries=tuple(tuple(r) for r in rows))


def _rref_mod_p(rows: list[list[int]], p: int):
    """Reduced row echelon mod p: (rank, pivot_cols, reduced_matrix)."""
    m = [[e % p for e in r] for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    piv_cols = []
    rank = 0
    for col in range(nc):
        piv = next((r for r in range(rank, nr) if m[r][col] % p != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], p - 2, p) if p > 2 else m[rank][col]
        m[rank] = [(e * inv) % p for e in m[rank]]
        for r in range(nr):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[rank])]
        piv_cols.append(col)
        rank += 1
        if rank == nr:
            break
    return rank, piv_cols, m


def _local_factor_enumerate(system: LinearSystem, p: int, cap: int) -> Fraction:
    rank, piv_cols, R = _rref_mod_p(system.rows(), p)
    t = system.t
    free_cols = [c for c in range(t) if c not in piv_cols]
    m = len(free_cols)
    if p**m > cap:
        raise EnumerationTooLarge(
            f"null space has p^{m} = {p**m} points, cap is {cap}"
        )
    # x_piv = -R[:, free] @ x_free mod p, enumerated in column blocks
    coef = np.array([[R[i][c] for c in free_cols] for i in range(rank)], dtype=np.int64)
    total = p**m
    nonzero = 0
    block = 1 << 20
    grid = np.indices((p,) * m).reshape(m, -1) if m else np.zeros((0, 1), dtype=np.int64)
    for lo in range(0, grid.shape[1], block):
        xf = grid[:, lo : lo + block]
        xp = (-coef @ xf) % p if rank else np.zeros((0, xf.shape[1]), dtype=np.int64)
        ok = np.ones(xf.shape[1], dtype=bool)
        if m:
            ok &= (xf != 0).all(axis=0)
        if rank:
            ok &= (xp != 0).all(axis=0)
        nonzero += int(ok.sum())
    return (Fraction(nonzero, total)) / (Fraction(p - 1, p) ** t)


@dataclass(frozen=True)
class _SystemPatterns:
    """One-time inclusion-exclusion data for a system.

    For primes not dividing any minor gcd, the nonzero-solution count is
    the polynomial sum_j coeffs[j] * p^j; subsets carries (rank_Q,
    minor_gcd) per zeroed-column set for the exceptional primes.
    """

    t: int
    r0: int
    coeffs: tuple  # ((exponent, coefficient), ...)
    subsets: tuple  # ((S, rank_Q, minor_gcd), ...)
    gcds: tuple  # distinct minor gcds > 1


def _zero_pattern_ranks(system: LinearSystem) -> _SystemPatterns:
    """Rational rank and minor gcd of A minus each column subset.

    Rank mod p equals rank_Q unless p divides the subset's minor gcd
    (gcd of all rank-sized minors of the column-deleted matrix).
    """
    rows = system.rows()
    t = system.t
    subsets = []
    coeffs: dict[int, int] = {}
    for size in range(t + 1):
        for S in combinations(range(t), size):
            keep = [c for c in range(t) if c not in S]
            sub = [[row[c] for c in keep] for row in rows]
            r = rank_int(sub) if keep else 0
            g = 0
            if r:
                for rsel in combinations(range(len(sub)), r):
                    for csel in combinations(range(len(keep)), r):
                        g = gcd(g, _det_int([[sub[i][j] for j in csel] for i in rsel]))
                        if g == 1:
                            break
                    if g == 1:
                        break
            subsets.append((S, r, abs(g)))
            e = t - size - r
            coeffs[e] = coeffs.get(e, 0) + (-1) ** size
    gcds = tuple(sorted({g for _, _, g in subsets if g > 1}))
    return _SystemPatterns(
        t=t,
        r0=subsets[0][1],
        coeffs=tuple(sorted((e, c) for e, c in coeffs.items() if c != 0)),
        subsets=tuple(subsets),
        gcds=gcds,
    )


def _det_int(m: list[list[int]]) -> int:
    """Exact determinant by fraction-free elimination."""
    n = len(m)
    m = [list(r) for r in m]
    sign = 1
    prev = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        for r in range(col + 1, n):
            for c in range(col + 1, n):
                m[r][c] = (m[col][col] * m[r][c] - m[r][col] * m[col][c]) // prev
            m[r][col] = 0
        prev = m[col][col]
    return sign * m[n - 1][n - 1]


def _local_factor_rank(system: LinearSystem, p: int,
                       patterns: _SystemPatterns | None = None) -> Fraction:
    """Exact alpha_p by inclusion-exclusion over zeroed coordinates."""
    if patterns is None:
        patterns = _zero_pattern_ranks(system)
    t = patterns.t
    if any(g % p == 0 for g in patterns.gcds):
        # some subset rank drops mod p: redo the ranks at this prime
        count = 0
        r0 = patterns.r0
        for S, r_q, g in patterns.subsets:
            if g != 0 and g % p == 0:
                keep = [c for c in range(t) if c not in S]
                sub = [[row[c] for c in keep] for row in system.rows()]
                r = _rref_mod_p(sub, p)[0] if keep else 0
                if not S:
                    r0 = r
            else:
                r = r_q
            count += (-1) ** len(S) * p ** (t - len(S) - r)
    else:
        count = sum(c * p**e for e, c in patterns.coeffs)
        r0 = patterns.r0
    # alpha = (count / p^(t-r0)) / ((p-1)/p)^t = count * p^r0 / (p-1)^t
    return Fraction(count * p**r0, (p - 1) ** t)


def local_factor(system: LinearSystem, p: int, method: str = "auto",
                 cap: int = ENUMERATION_CAP) -> Fraction:
    """Exact local density alpha_p >= 0 of the system at a prime p.

    method "enumerate" walks the F_p null space (EnumerationTooLarge
    beyond the cap); "rank" uses the inclusion-exclusion identity;
    "auto" enumerates when the null space fits and falls back to rank.
    """
    if p < 2 or any(p % q == 0 for q in range(2, isqrt(p) + 1)):
        raise ValueError(f"p={p} is not prime")
    if method == "enumerate":
        return _local_factor_enumerate(system, p, cap)
    if method == "rank":
        return _local_factor_rank(system, p)
    if p ** (system.t - system.s) <= cap:
        try:
            return _local_factor_enumerate(system, p, cap)
        except EnumerationTooLarge:
            pass
    return _local_factor_rank(system, p)


def _sieve_primes(limit: int) -> np.ndarray:
    bs = np.ones(limit + 1, dtype=bool)
    bs[:2] = False
    for i in range(2, isqrt(limit) + 1):
        if bs[i]:
            bs[i * i :: i] = False
    return np.nonzero(bs)[0]


def singular_series(system: LinearSystem, P0: int = 10**4,
                    threads: int = 1) -> SingularSeries:
    """Truncated product of exact alpha_p over p <= P0.

    Factors are exact rationals (rank route for large p), computable
    independently per prime; the product always accumulates in
    ascending p in double precision. tail_estimate extrapolates partial
    sums of |log alpha_p| over (P0, 10*P0] linearly in 1/p to the
    1/p -> 0 intercept.
    """
    patterns = _zero_pattern_ranks(system)
    primes = _sieve_primes(10 * P0)
    head = [int(p) for p in primes[primes <= P0]]
    vals = parallel_map(lambda p: _local_factor_rank(system, p, patterns), head, threads)
    factors: dict[int, Fraction] = dict(zip(head, vals))
    product = 1.0
    for p in head:
        product *= float(factors[p])
    if any(a == 0 for a in factors.values()):
        return SingularSeries(factors, 0.0, P0, 0.0, system)

    tail_primes = primes[primes > P0]
    if tail_primes.size >= 4:
        logs = np.abs(np.log(_alpha_float(patterns, system, tail_primes)))
        csum = np.cumsum(logs)
        marks = np.unique(np.linspace(tail_primes.size // 4, tail_primes.size - 1, 8).astype(int))
        slope, intercept = np.polyfit(1.0 / tail_primes[marks].astype(float), csum[marks], 1)
        tail = float(max(intercept, csum[-1]))
    else:
        tail = 0.0
    return SingularSeries(factors, product, P0, tail, system)


def _alpha_float(patterns: _SystemPatterns, system: LinearSystem,
                 primes: np.ndarray) -> np.ndarray:
    """alpha_p in double precision, vectorized over a prime array."""
    p = primes.astype(np.float64)
    count = np.zeros_like(p)
    for e, c in patterns.coeffs:
        count += c * p**e
    alpha = count * p**patterns.r0 / (p - 1.0) ** patterns.t
    for g in patterns.gcds:
        if g < 2**62:
            bad = np.nonzero(np.mod(g, primes) == 0)[0]
        else:
            bad = np.nonzero([g % int(q) == 0 for q in primes])[0]
        for i in bad:
            alpha[i] = float(_local_factor_rank(system, int(primes[i]), patterns))
    return alpha


def closed_form_S3(P0: int = 10**6) -> float:
    """Truncated 1/2 * prod_{3<=p<=P0} (1 - 1/(p-1)^2)."""
    if P0 < 10**3:
        raise ValueError("need P0 >= 10^3")
    p = _sieve_primes(P0)[1:].astype(np.float64)  # drop p = 2
    return 0.5 * float(np.exp(np.log1p(-1.0 / (p - 1.0) ** 2).sum()))


def closed_form_S4(P0: int = 10**6) -> float:
    """Truncated 3/4 * prod_{5<=p<=P0} (1 - (3p-1)/(p-1)^3)."""
    if P0 < 10**3:
        raise ValueError("need P0 >= 10^3")
    p = _sieve_primes(P0)[2:].astype(np.float64)  # drop p = 2, 3
    return 0.75 * float(np.exp(np.log1p(-(3.0 * p - 1.0) / (p - 1.0) ** 3).sum()))


AP3 = new_system([[1, -2, 1]])
AP4 = new_system([[1, -2, 1, 0], [0, 1, -2, 1]])


def ap_system(k: int) -> LinearSystem:
    """The (k-2) x k second-difference matrix whose kernel is k-term APs."""
    if k < 3:
        raise ValueError("need k >= 3")
    rows = []
    for i in range(k - 2):
        row = [0] * k
        row[i : i + 3] = [1, -2, 1]
        rows.append(row)
    return new_system(rows)
