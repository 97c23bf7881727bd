"""Counting prime solutions of linear systems, with asymptotic predictions.

Three counters:

  * count_ap_primes: exact number of p_1 < ... < p_k <= N in arithmetic
    progression (genuine primes, strictly increasing). k = 3 tests the
    midpoint of prime pairs; k >= 4 walks (p_1, d) pairs with d = p_2 - p_1.
  * weighted_ap_average: E of Lambda(x_1)...Lambda(x_k) over the integer
    solutions of the AP system in [1, N]^k — all solutions, any sign of
    d including d = 0 (that is the normalization of the expectation:
    divide by the number of integer solutions in the box). k = 3 runs
    through an FFT autocorrelation; k = 4 loops over (x, d) directly.
  * generic_count: any validated system, exact enumeration over t - s
    free coordinates (t - s <= 2) or seeded Monte Carlo.

Predictions: the truncated singular-series constants give

    #(increasing k-AP of primes <= N) ~ S_k N^2 / log^k N,   k = 3, 4,

and the weighted average tends to the full product of local factors.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations
import json
import math

import numpy as np

from .arith import ArithTable
from .linsys import LinearSystem, ap_system, closed_form_S3, closed_form_S4, rank_int, singular_series


class FreeRankTooLarge(ValueError):
    """Exact enumeration needs t - s <= 2 free coordinates."""


@dataclass
class CountReport:
    """Observed-vs-predicted record for one counting run."""

    descriptor: str
    N: int
    observed: float
    predicted: float
    method: str  # direct | fft | enumerate | montecarlo
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return self.observed / self.predicted if self.predicted != 0 else math.inf

    def to_dict(self) -> dict:
        d = {
            "descriptor": self.descriptor,
            "N": self.N,
            "observed": self.observed,
            "predicted": self.predicted,
            "ratio": self.ratio if self.predicted != 0 else None,
            "method": self.method,
            "seed": self.seed,
        }
        d.update(self.extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def count_ap_primes(table: ArithTable, N: int, k: int, chunk: int = 512) -> int:
    """Exact count of strictly increasing k-term prime APs inside [1, N]."""
    if k < 3:
        raise ValueError("need k >= 3")
    if N > table.limit:
        raise ValueError(f"N={N} beyond table limit {table.limit}")
    primes = table.primes()
    primes = primes[primes <= N]
    odd = primes[primes % 2 == 1]  # p1 = 2 forces an even later term
    if odd.size < k - 1:
        return 0
    isp = table.is_prime
    total = 0
    if k == 3:
        # midpoint test over pairs p1 < p3 of odd primes
        for lo in range(0, odd.size, chunk):
            p1 = odd[lo : lo + chunk, None]
            p3 = odd[None, :]
            mask = p3 > p1
            mid = (p1 + p3) >> 1
            total += int((isp[mid] & mask).sum())
        return total
    # (p1, d) loop with d = p2 - p1 over prime pairs, then check the rest
    for lo in range(0, odd.size, chunk):
        p1 = odd[lo : lo + chunk, None]
        p2 = odd[None, :]
        d = p2 - p1
        ok = d > 0
        last = p1 + (k - 1) * d
        ok &= last <= N
        for j in range(2, k):
            pj = p1 + j * d
            ok &= isp[np.where(ok, pj, 1)]
        total += int(ok.sum())
    return total


def _ap3_solution_count(N: int) -> int:
    """#{(x1,x2,x3) in [1,N]^3 : x1 - 2x2 + x3 = 0} = #same-parity pairs."""
    odd = (N + 1) // 2
    even = N // 2
    return odd * odd + even * even


def _ap4_solution_count(N: int) -> int:
    """#{(x,d) : x, x+3d in [1,N], d in Z} = N + 2*sum_{d>=1} (N-3d)+."""
    D = (N - 1) // 3
    return N + 2 * (D * N - 3 * D * (D + 1) // 2)


def weighted_ap_average(table: ArithTable, N: int, k: int) -> float:
    """E over {AP system solutions in [1,N]^k} of the Lambda product."""
    if k not in (3, 4):
        raise ValueError("weighted averages implemented for k in {3, 4}")
    if N > table.limit:
        raise ValueError(f"N={N} beyond table limit {table.limit}")
    lam = table.vonmangoldt[: N + 1]
    if k == 3:
        # r(2m) = sum_{a+b=2m} Lambda(a)Lambda(b) by real FFT, then sum_m Lambda(m) r(2m)
        L = 1 << max(1, math.ceil(math.log2(2 * N + 1)))
        fa = np.fft.rfft(lam, L)
        conv = np.fft.irfft(fa * fa, L)  # conv[u] = sum_{a+b=u} Lambda(a)Lambda(b)
        m = np.arange(1, N + 1)
        total = float(np.dot(lam[1:], conv[2 * m]))
        return total / _ap3_solution_count(N)
    total = float(np.dot(lam[1:] ** 2, lam[1:] ** 2))  # d = 0 term
    for d in range(1, (N - 1) // 3 + 1):
        x = lam[1 : N - 3 * d + 1]
        prod = x * lam[1 + d : N - 2 * d + 1]
        prod *= lam[1 + 2 * d : N - d + 1]
        prod *= lam[1 + 3 * d : N + 1]
        total += 2.0 * float(prod.sum())
    return total / _ap4_solution_count(N)


def weighted_ap_average_bruteforce(table: ArithTable, N: int) -> float:
    """O(N^2) oracle for the k = 3 weighted average."""
    lam = table.vonmangoldt[: N + 1]
    total = 0.0
    for x1 in range(1, N + 1):
        if lam[x1] == 0.0:
            continue
        x3 = np.arange(1 if x1 % 2 else 2, N + 1, 2)  # same parity as x1
        mid = (x1 + x3) // 2
        total += lam[x1] * float(np.dot(lam[x3], lam[mid]))
    return total / _ap3_solution_count(N)


def _column_complement(system: LinearSystem) -> tuple[list[int], list[int]]:
    """Split columns into an invertible s-set and the free complement."""
    rows = system.rows()
    for bound in combinations(range(system.t), system.s):
        sub = [[row[c] for c in bound] for row in rows]
        if rank_int(sub) == system.s:
            free = [c for c in range(system.t) if c not in bound]
            return list(bound), free
    raise FreeRankTooLarge("no invertible column complement")  # unreachable if validated


def _adjugate(m: list[list[int]]) -> tuple[list[list[int]], int]:
    """(adj, det) of a small integer matrix, exactly."""
    n = len(m)
    det = _det(m)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[m[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            adj[i][j] = (-1) ** (i + j) * (_det(minor) if minor else 1)
    return adj, det


def _det(m: list[list[int]]) -> int:
    if len(m) == 1:
        return m[0][0]
    if len(m) == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j, e in enumerate(m[0]):
        if e:
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            total += (-1) ** j * e * _det(minor)
    return total


def _solution_symmetry(system: LinearSystem) -> int:
    """# of coordinate permutations preserving the rational row span.

    This is the runtime-computed ordering factor between all-distinct
    ordered solutions and solutions counted up to symmetry (2 for AP
    systems: identity and reversal).
    """
    rows = system.rows()
    count = 0
    for perm in permutations(range(system.t)):
        permuted = [[row[c] for c in perm] for row in rows]
        if rank_int(rows + permuted) == system.s:
            count += 1
    return count


def generic_count(table: ArithTable, system: LinearSystem, N: int,
                  mode: str = "exact", samples: int = 10**4,
                  seed: int = 0, chunk: int = 1 << 20) -> CountReport:
    """Count box solutions of A x = 0 with every coordinate prime.

    observed counts ordered solutions (the full solution set in
    [1, N]^t). extra carries: distinct (all-coordinates-distinct
    solutions), symmetry (row-span-preserving coordinate permutations),
    and up_to_symmetry = distinct / symmetry, which for AP systems is
    the strictly-increasing count. predicted is the Hardy-Littlewood
    value: the singular series times sum over integer solutions of
    prod 1/log x_i (solutions with any x_i = 1 are skipped; 1 is not
    prime). Monte Carlo samples the free coordinates uniformly.
    """
    if mode not in ("exact", "montecarlo"):
        raise ValueError(f"unknown mode {mode!r}")
    if N > table.limit:
        raise ValueError(f"N={N} beyond table limit {table.limit}")
    free_rank = system.t - system.s
    if mode == "exact" and free_rank > 2:
        raise FreeRankTooLarge(f"t - s = {free_rank} > 2")
    if mode == "montecarlo" and samples < 10**3:
        raise ValueError("need samples >= 10^3")

    bound_cols, free_cols = _column_complement(system)
    rows = system.rows()
    B = [[rows[i][c] for c in bound_cols] for i in range(system.s)]
    F = np.array([[rows[i][c] for c in free_cols] for i in range(system.s)], dtype=np.int64)
    adj, det = _adjugate(B)
    adj = np.array(adj, dtype=np.int64)
    solve = -adj @ F  # x_bound * det = solve @ x_free

    isp = table.is_prime
    rng = np.random.default_rng(seed)

    observed = 0
    distinct = 0
    hl_sum = 0.0
    if mode == "exact":
        total_cells = N**free_rank
        starts = range(0, total_cells, chunk)
    else:
        starts = range(0, samples, chunk)

    for start in starts:
        if mode == "exact":
            stop = min(start + chunk, N**free_rank)
            flat = np.arange(start, stop, dtype=np.int64)
            xf = np.empty((free_rank, flat.size), dtype=np.int64)
            rem = flat
            for i in range(free_rank - 1, -1, -1):
                xf[i] = rem % N + 1
                rem = rem // N
        else:
            stop = min(start + chunk, samples)
            xf = rng.integers(1, N + 1, size=(free_rank, stop - start), dtype=np.int64)
        xb_scaled = solve @ xf
        integral = (xb_scaled % det == 0).all(axis=0)
        xb = np.where(integral, xb_scaled // det, 0)
        in_box = integral & ((xb >= 1) & (xb <= N)).all(axis=0)
        coords = np.vstack([xb, xf])
        # the HL weight sum runs over every integer solution in the box
        if in_box.any():
            sol = coords[:, in_box]
            big = (sol > 1).all(axis=0)
            hl_sum += float((1.0 / np.log(sol[:, big]).prod(axis=0)).sum())
        safe = np.where(in_box, coords, 2)
        ok = in_box & isp[safe].all(axis=0)
        observed += int(ok.sum())
        if ok.any():
            pts = coords[:, ok]
            dmask = np.ones(pts.shape[1], dtype=bool)
            for i, j in combinations(range(system.t), 2):
                dmask &= pts[i] != pts[j]
            distinct += int(dmask.sum())

    sym = _solution_symmetry(system)
    series = singular_series(system, 10**4)
    if mode == "montecarlo":
        scale = N**free_rank / samples
        observed = observed * scale
        distinct = distinct * scale
        hl_sum = hl_sum * scale
    predicted = series.truncated_product * hl_sum
    return CountReport(
        descriptor=system.describe(),
        N=N,
        observed=float(observed),
        predicted=float(predicted),
        method="enumerate" if mode == "exact" else "montecarlo",
        seed=seed if mode == "montecarlo" else None,
        extra={
            "distinct": float(distinct),
            "symmetry": sym,
            "up_to_symmetry": float(distinct) / sym,
            "singular_series": series.truncated_product,
        },
    )


def prediction(kind, N: int, P0: int = 10**6) -> float:
    """Hardy-Littlewood main term.

    kind = 3 or 4: S_k N^2 / (log N)^k for increasing prime k-APs.
    kind = LinearSystem: the weighted-average limit, i.e. the truncated
    singular series (0 when some local factor vanishes).
    """
    if isinstance(kind, LinearSystem):
        return singular_series(kind, min(P0, 10**4)).truncated_product
    k = int(kind)
    if N < 100:
        raise ValueError("need N >= 100")
    if k == 3:
        return closed_form_S3(P0) * N**2 / math.log(N) ** 3
    if k == 4:
        return closed_form_S4(P0) * N**2 / math.log(N) ** 4
    raise ValueError("closed-form predictions available for k in {3, 4}")


def ap_count_report(table: ArithTable, N: int, k: int) -> CountReport:
    """count_ap_primes wrapped with its asymptotic prediction.

    The closed-form prediction needs N >= 100; below that the report
    carries predicted = 0 (ratio suppressed).
    """
    return CountReport(
        descriptor=f"{k}-AP",
        N=N,
        observed=float(count_ap_primes(table, N, k)),
        predicted=prediction(k, N) if N >= 100 and k in (3, 4) else 0.0,
        method="direct",
    )


def weighted_ap_report(table: ArithTable, N: int, k: int) -> CountReport:
    """weighted_ap_average wrapped with its singular-series prediction."""
    return CountReport(
        descriptor=f"{k}-AP weighted",
        N=N,
        observed=weighted_ap_average(table, N, k),
        predicted=singular_series(ap_system(k), 10**4).truncated_product,
        method="fft" if k == 3 else "direct",
    )
