"""Discrete Fourier analysis on Z/M and on [1, N].

The normalized transform is

    fhat(xi) = (1/M) * sum_n f(n) e(-xi*n/M),      e(t) = exp(2*pi*i*t),

so Parseval reads sum_xi |fhat|^2 = E_n |f|^2. Exponential sums over
[1, N] are plain averages E_{n<=N} w(n) e(theta*n), evaluated by direct
summation; the supremum over theta is searched on a zero-padded FFT grid
(grid error is bounded by the derivative bound 2*pi*N*E|w| per grid cell).

Arc classification follows the usual major/minor split: theta is major
when its best rational approximation a/q with q <= log^A N (continued
fractions, via Fraction.limit_denominator) satisfies
|theta - a/q| <= log^A N / (q*N).

Type I/II maximal bilinear sums: the Type I maximum over unit-l2
coefficients collapses to an l2 norm of inner sums (Cauchy-Schwarz with
equality); the Type II maximum is the top singular value of the matrix
f(w*d), computed by power iteration.
"""

from dataclasses import dataclass
from fractions import Fraction
import csv
import json
import math

import numpy as np


@dataclass(frozen=True)
class Spectrum:
    """Normalized DFT coefficients of a function on Z/M."""

    modulus: int
    coeffs: np.ndarray

    def to_csv(self, path) -> None:
        """Rows (xi, re, im), one per frequency."""
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["xi", "re", "im"])
            for xi, c in enumerate(self.coeffs):
                wr.writerow([xi, repr(float(c.real)), repr(float(c.imag))])

    def to_json(self) -> str:
        return json.dumps(
            {
                "modulus": self.modulus,
                "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
            }
        )


@dataclass(frozen=True)
class ArcClassification:
    theta: float
    verdict: str  # "major" | "minor"
    a: int | None
    q: int | None
    N: int
    A: float

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "verdict": self.verdict,
            "a": self.a,
            "q": self.q,
        }


@dataclass(frozen=True)
class TypeSumSpec:
    """Dyadic ranges [D, 2D) x [W, 2W) for a Type II sum at level N."""

    D: int
    W: int
    N: int

    def validate(self) -> None:
        lo = self.N ** (1.0 / 3.0)
        if not (lo <= self.D <= self.N ** (2.0 / 3.0)):
            raise ValueError(f"need N^(1/3) <= D <= N^(2/3), got D={self.D}, N={self.N}")
        if not (lo <= self.W <= self.N / self.D):
            raise ValueError(f"need N^(1/3) <= W <= N/D, got W={self.W}, D={self.D}, N={self.N}")


class PowerIterationError(RuntimeError):
    """Power iteration failed to converge; carries the last iterate."""

    def __init__(self, msg: str, last_value: float):
        super().__init__(msg)
        self.last_value = last_value


def dft(values) -> Spectrum:
    """Forward transform with the averaged (1/M) normalization."""
    v = np.asarray(values, dtype=np.complex128)
    if v.size == 0:
        raise ValueError("modulus must be >= 1")
    return Spectrum(modulus=v.size, coeffs=np.fft.fft(v) / v.size)


def idft(spec: Spectrum) -> np.ndarray:
    """Inverse of dft: recovers the original values."""
    return np.fft.ifft(spec.coeffs * spec.modulus)


def exp_sum(weights, theta: float) -> complex:
    """E_{n<=N} w(n) e(theta*n) by direct summation.

    weights[i] is the weight at n = i+1. The phase theta*n is reduced
    mod 1 before exponentiation to keep the argument small.
    """
    w = np.asarray(weights, dtype=np.float64)
    N = w.size
    if N < 1:
        raise ValueError("need N >= 1")
    n = np.arange(1, N + 1, dtype=np.float64)
    phase = np.mod(theta * n, 1.0)
    return complex(np.mean(w * np.exp(2j * np.pi * phase)))


def _padded_length(n: int) -> int:
    return 1 << max(1, int(math.ceil(math.log2(max(2, n)))))


def sup_exp_sum(weights, oversample: int = 4) -> tuple[float, float]:
    """Maximize |E_n w(n) e(theta*n)| over the grid xi/M2.

    M2 is the power-of-two FFT length >= oversample*N. Returns
    (theta_star, value); ties resolve to the smallest grid frequency.
    """
    if oversample < 4:
        raise ValueError("oversample must be >= 4")
    w = np.asarray(weights, dtype=np.float64)
    N = w.size
    M2 = _padded_length(oversample * N)
    buf = np.zeros(M2)
    buf[1 : N + 1] = w  # value at n sits at index n, so FFT bin xi means theta = xi/M2
    mags = np.abs(np.fft.rfft(buf))
    xi = int(np.argmax(mags))
    # rfft covers xi <= M2/2; by symmetry of real input this is the full sup
    return xi / M2, float(mags[xi] / N)


def classify_arc(theta: float, N: int, A: float) -> ArcClassification:
    """Major/minor verdict for theta in [0,1) at scale N with exponent A.

    Q = (log N)^A caps the denominator; the best rational a/q with
    q <= Q comes from the continued-fraction convergent machinery.
    Major iff |theta - a/q| <= Q/(q*N).
    """
    if not (0.0 <= theta < 1.0):
        raise ValueError(f"theta must lie in [0,1), got {theta}")
    if N < 10 or A <= 0:
        raise ValueError("need N >= 10 and A > 0")
    Q = math.log(N) ** A
    qmax = max(1, int(Q))
    approx = Fraction(theta).limit_denominator(qmax)
    a, q = approx.numerator, approx.denominator
    eta = abs(theta - a / q)
    if eta <= Q / (q * N):
        return ArcClassification(theta=theta, verdict="major", a=a, q=q, N=N, A=A)
    return ArcClassification(theta=theta, verdict="minor", a=None, q=None, N=N, A=A)


def arc_sweep(thetas, N: int, A: float) -> list[dict]:
    """Classification report for a batch of thetas, JSON-ready."""
    return [classify_arc(t, N, A).to_dict() for t in thetas]


def type1_max(f, D: int) -> float:
    """max over unit-l2 (a_d) of |sum_{d in [D,2D)} a_d sum_{w < N/d} f(wd)|.

    Equals sqrt(sum_d |S_d|^2) with S_d = sum_{w>=1, wd<N} f(wd): the
    Cauchy-Schwarz equality case aligns a_d with conj(S_d).
    """
    fv = np.asarray(f, dtype=np.complex128)
    N = fv.size
    if not (1 <= D <= N ** (2.0 / 3.0)):
        raise ValueError(f"need 1 <= D <= N^(2/3), got D={D}, N={N}")
    a = np.zeros(N + 1, dtype=np.complex128)
    a[1:] = fv
    total = 0.0
    for d in range(D, 2 * D):
        s = a[d:N:d].sum()
        total += abs(s) ** 2
    return math.sqrt(total)


def _type2_matvec(fext: np.ndarray, ds: np.ndarray, ws: np.ndarray,
                  v: np.ndarray, block: int = 512) -> np.ndarray:
    """(Av)_d = sum_w fext[w*d] v_w, rows blocked to bound the gather size."""
    out = np.empty(ds.size, dtype=np.complex128)
    for lo in range(0, ds.size, block):
        hi = min(lo + block, ds.size)
        idx = np.outer(ds[lo:hi], ws)
        out[lo:hi] = fext[idx] @ v
    return out


def type2_max(f, D: int, W: int, rtol: float = 1e-6, max_iter: int = 10**4,
              seed: int = 7) -> float:
    """Top singular value of the matrix m(d, w) = f(w*d), dyadic ranges.

    d in [D,2D), w in [W,2W); entries with w*d > N are zero (f lives on
    [1, N]). Power iteration on A^H A until the value settles to rtol;
    raises PowerIterationError with the last iterate past max_iter.
    """
    fv = np.asarray(f, dtype=np.complex128)
    N = fv.size
    TypeSumSpec(D=D, W=W, N=N).validate()
    fext = np.zeros(4 * D * W + 1, dtype=np.complex128)
    fext[1 : N + 1] = fv[: min(N, 4 * D * W)]
    fext_conj = np.conj(fext)
    ds = np.arange(D, 2 * D, dtype=np.int64)
    ws = np.arange(W, 2 * W, dtype=np.int64)

    rng = np.random.default_rng(seed)
    v = rng.standard_normal(ws.size) + 1j * rng.standard_normal(ws.size)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        u = _type2_matvec(fext, ds, ws, v)
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return 0.0
        # back-multiply by A^H: (A^H u)_w = sum_d conj(f(w*d)) u_d
        vt = _type2_matvec(fext_conj, ws, ds, u / nu)
        nv = np.linalg.norm(vt)
        if nv == 0.0:
            return 0.0
        v = vt / nv
        prev, sigma = sigma, nv
        if abs(sigma - prev) <= rtol * 0.02 * max(sigma, 1e-300):
            return float(sigma)
    raise PowerIterationError(
        f"no convergence after {max_iter} iterations (last value {sigma})", float(sigma)
    )
