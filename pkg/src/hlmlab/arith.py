"""Sieved arithmetic-function tables: primality, Mobius mu, von Mangoldt Lambda.

Provides:
- ArithTable: is_prime / mu / Lambda on [1, N], built by a linear sieve
- W-trick reweighting  Lambda_{b,W}(n) = (phi(W)/W) * Lambda(W*n + b)
- balanced function of a set, 1_A - |A|/N
- binary dump/load of tables (magic "HLM1", little-endian)

Conventions:
    mu(1) = 1, mu(n) = 0 iff a square divides n
    Lambda(n) = log p if n = p^k, else 0; Lambda(p^k) is the *same float*
    as Lambda(p), so prime-power equality checks are exact.

Arrays are indexed directly by n (length N+1, slot 0 unused). Sequence
helpers return length-N views covering n = 1..N for the Fourier and
correlation routines, which all take "sequences on [1, N]".

Tables are immutable after construction (frozen dataclass over arrays
nobody mutates) and safe for shared concurrent reads; construction
itself is single-threaded.
"""

from dataclasses import dataclass
from math import gcd
import struct

import numpy as np

MAGIC = b"HLM1"

# Default memory cap: N <= 10^8 keeps the three arrays near 1 GB.
DEFAULT_LIMIT_CAP = 10**8


class CapacityError(ValueError):
    """Requested table size exceeds the configured cap."""


@dataclass(frozen=True)
class ArithTable:
    """Arithmetic-function arrays up to limit N.

    Attributes:
        limit: largest n covered
        is_prime: bool array, length N+1, indexed by n
        mobius: int8 array, mu(n) in {-1, 0, 1}
        vonmangoldt: float64 array, Lambda(n)
    """

    limit: int
    is_prime: np.ndarray
    mobius: np.ndarray
    vonmangoldt: np.ndarray

    def primes(self) -> np.ndarray:
        return np.nonzero(self.is_prime)[0]

    def mobius_seq(self, N: int | None = None) -> np.ndarray:
        """mu(n) for n = 1..N as a length-N float array."""
        N = self.limit if N is None else N
        return self.mobius[1 : N + 1].astype(np.float64)

    def vonmangoldt_seq(self, N: int | None = None) -> np.ndarray:
        """Lambda(n) for n = 1..N as a length-N array."""
        N = self.limit if N is None else N
        return self.vonmangoldt[1 : N + 1]


@dataclass(frozen=True)
class WTrickParams:
    """Parameters of the reweighting n -> (phi(W)/W) * Lambda(W*n + b).

    W must be squarefree (a product of distinct small primes) and b
    coprime to W; scale = phi(W)/W is derived, not stored by the caller.
    """

    W: int
    b: int
    scale: float

    @classmethod
    def create(cls, W: int, b: int) -> "WTrickParams":
        if W < 1:
            raise ValueError(f"W must be positive, got {W}")
        if gcd(b, W) != 1:
            raise ValueError(f"b={b} is not coprime to W={W}")
        scale = 1.0
        m, p = W, 2
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    raise ValueError(f"W={W} is not squarefree")
                scale *= 1.0 - 1.0 / p
            p += 1
        if m > 1:
            scale *= 1.0 - 1.0 / m
        return cls(W=W, b=b, scale=scale)


def default_w_params(b: int = 1) -> WTrickParams:
    """Product of the primes up to 5 (W = 30); w(N) is a free knob here."""
    return WTrickParams.create(2 * 3 * 5, b)


def build_table(N: int, limit_cap: int = DEFAULT_LIMIT_CAP) -> ArithTable:
    """Sieve is_prime, mu and Lambda on [1, N].

    Deterministic: rebuilding yields bit-identical arrays. Linear
    (non-segmented) Eratosthenes; mu by sign-flips over primes and
    zeroing over squares; Lambda written only at prime powers.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if N > limit_cap:
        raise CapacityError(f"N={N} exceeds cap {limit_cap}")

    is_prime = np.ones(N + 1, dtype=bool)
    is_prime[0] = False
    if N >= 1:
        is_prime[1] = False
    for p in range(2, int(N**0.5) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False

    # mu: sign-flip over primes p <= sqrt(N) while tracking the product of
    # those primes per n; any n whose product falls short of n has exactly
    # one prime factor > sqrt(N), contributing one more sign flip.
    mobius = np.ones(N + 1, dtype=np.int8)
    mobius[0] = 0
    small_prime_prod = np.ones(N + 1, dtype=np.int32)
    for p in range(2, int(N**0.5) + 1):
        if is_prime[p]:
            mobius[p::p] *= -1
            small_prime_prod[p::p] *= p
            mobius[p * p :: p * p] = 0
    chunk = 1 << 22
    for lo in range(0, N + 1, chunk):
        hi = min(lo + chunk, N + 1)
        rest = small_prime_prod[lo:hi] < np.arange(lo, hi, dtype=np.int32)
        mobius[lo:hi][rest] *= -1
    del small_prime_prod

    primes = np.nonzero(is_prime)[0]
    vonmangoldt = np.zeros(N + 1, dtype=np.float64)
    logs = np.log(primes.astype(np.float64))
    vonmangoldt[primes] = logs
    for p, lg in zip(primes, logs):
        pk = p * p
        if pk > N:
            break
        while pk <= N:
            vonmangoldt[pk] = lg
            pk *= p

    return ArithTable(limit=N, is_prime=is_prime, mobius=mobius, vonmangoldt=vonmangoldt)


def w_trick(table: ArithTable, params: WTrickParams, N: int) -> np.ndarray:
    """Lambda_{b,W}(n) = (phi(W)/W) * Lambda(W*n + b) for n = 1..N."""
    need = params.W * N + params.b
    if table.limit < need:
        raise ValueError(
            f"table limit {table.limit} < W*N+b = {need}; rebuild with a larger N"
        )
    idx = params.W * np.arange(1, N + 1, dtype=np.int64) + params.b
    return params.scale * table.vonmangoldt[idx]


def balanced_function(indicator) -> np.ndarray:
    """1_A - alpha for a set A given by its indicator on [1, N].

    alpha = |A|/N; the output sums to zero up to rounding.
    """
    ind = np.asarray(indicator, dtype=np.float64)
    if ind.size == 0:
        raise ValueError("empty indicator sequence")
    return ind - ind.mean()


def dump_table(table: ArithTable, path) -> None:
    """Binary dump: magic "HLM1", N as u64 LE, then the three arrays.

    Layout after the 12-byte header: is_prime as u8[N], mobius as i8[N],
    vonmangoldt as f64-LE[N], each covering n = 1..N.
    """
    N = table.limit
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", N))
        fh.write(table.is_prime[1:].astype(np.uint8).tobytes())
        fh.write(table.mobius[1:].astype(np.int8).tobytes())
        fh.write(table.vonmangoldt[1:].astype("<f8").tobytes())


def load_table(path) -> ArithTable:
    """Inverse of dump_table; validates the magic and the payload size."""
    with open(path, "rb") as fh:
        head = fh.read(4)
        if head != MAGIC:
            raise ValueError(f"bad magic {head!r}, expected {MAGIC!r}")
        (N,) = struct.unpack("<Q", fh.read(8))
        buf = fh.read()
    expect = N * (1 + 1 + 8)
    if len(buf) != expect:
        raise ValueError(f"payload is {len(buf)} bytes, expected {expect}")
    is_prime = np.zeros(N + 1, dtype=bool)
    is_prime[1:] = np.frombuffer(buf, dtype=np.uint8, count=N).astype(bool)
    mobius = np.zeros(N + 1, dtype=np.int8)
    mobius[1:] = np.frombuffer(buf, dtype=np.int8, count=N, offset=N)
    vonmangoldt = np.zeros(N + 1, dtype=np.float64)
    vonmangoldt[1:] = np.frombuffer(buf, dtype="<f8", count=N, offset=2 * N)
    return ArithTable(limit=int(N), is_prime=is_prime, mobius=mobius, vonmangoldt=vonmangoldt)
