"""Nilsequences: torus rotations, the Heisenberg nilmanifold, generalized
quadratic phases, and local quadratics.

The Heisenberg nilmanifold is the quotient of upper unitriangular 3x3
real matrices by the integer lattice, coordinatized as (x, y, z) with
the equivalences (x, y, z) ~ (x+a, y+b+c*x, z+c), a, b, c integers
(so x, y reduce mod 1 and a z-wrap by c twists y by c*x; the cylinder
gluing (x, y, -1/2) ~ (x, x+y, 1/2) is the c = 1 case). Fundamental
domain: x, y in [0, 1), z in (-1/2, 1/2].

The translation by g = (alpha, beta, gamma) acting on this quotient is

    T_g(x, y, z) = (x + alpha, y + beta + alpha*z, z + gamma).

The middle term must couple alpha with z: that is the unique form that
descends through the identification above (a cross-term gamma*x fails
to: a z-wrap before or after the shift would then change the result by
the non-integer gamma*a - c*alpha). Because T_g descends, reducing at
every step or reducing once at the end agree, and a short induction
gives the orbit of the origin:

    T_g^n(0,0,0) = (n*alpha, n*beta + n(n-1)/2 * alpha*gamma, n*gamma),

whose reduced y-coordinate picks up the bracket cross-term
[n*gamma]*n*alpha: the hallmark generalized-quadratic behaviour of
2-step sequences. (The quadratic coefficient is n(n-1)/2: one
application of T_g to the origin yields exactly (alpha, beta, gamma).)

Signed fractional part convention everywhere: {t} in (-1/2, 1/2], and
[t] = t - {t} is the nearest integer with half-integers rounding down.

Closed-form orbit coordinates are reduced in exact rational arithmetic
(floats are binary rationals), so they stay trustworthy for any n; the
step-by-step shift orbit is the independent ground truth the tests
compare against.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import csv
import json
import math

import numpy as np


def frac_half(t):
    """Signed fractional part {t} in (-1/2, 1/2] (array-friendly)."""
    return t - np.ceil(t - 0.5)


def nearest_int(t):
    """[t] = t - {t}: nearest integer, half-integers rounding down."""
    return np.ceil(t - 0.5)


def _frac01(t):
    return t - np.floor(t)


class OutsideSupportError(ValueError):
    """A second-difference corner left the local-quadratic support."""


@dataclass(frozen=True)
class HeisenbergElement:
    """Group element g with upper-triangular coordinates (alpha, beta, gamma)."""

    alpha: float
    beta: float
    gamma: float


@dataclass(frozen=True)
class HeisenbergPoint:
    """Fundamental-domain point: x, y in [0,1), z in (-1/2, 1/2]."""

    x: float
    y: float
    z: float


ORIGIN = HeisenbergPoint(0.0, 0.0, 0.0)


def reduce_point(x: float, y: float, z: float) -> HeisenbergPoint:
    """Reduce raw coordinates into the fundamental domain.

    c = -[z] fixes z (updating y by c*x with the pre-reduction x), then
    x and y drop mod 1. Idempotent, and equivalent to the input.
    """
    c = float(nearest_int(z))
    y = y - c * x
    return HeisenbergPoint(float(_frac01(x)), float(_frac01(y)), float(z - c))


def shift(g: HeisenbergElement, p: HeisenbergPoint) -> HeisenbergPoint:
    """One translation: reduce(x + alpha, y + beta + alpha*z, z + gamma)."""
    return reduce_point(p.x + g.alpha, p.y + g.beta + g.alpha * p.z, p.z + g.gamma)


def closed_form_orbit(g: HeisenbergElement, n: int) -> HeisenbergPoint:
    """T_g^n(origin), reduced, via exact rational mod-1 arithmetic.

    Unreduced coordinates (n*a, n*b + n(n-1)/2 * a*c, n*c) are formed
    as exact fractions (each float is a binary rational), so the mod-1
    reductions lose nothing even when the quadratic term is huge.
    """
    if n < 0:
        raise ValueError("need n >= 0")
    a, b, c = Fraction(g.alpha), Fraction(g.beta), Fraction(g.gamma)
    xr = n * a
    zr = n * c
    yr = n * b + Fraction(n * (n - 1), 2) * a * c
    zint = math.ceil(zr - Fraction(1, 2))  # [z], halves down
    y_red = (yr - zint * xr) % 1
    return HeisenbergPoint(float(xr % 1), float(y_red), float(zr - zint))


def orbit_array(g: HeisenbergElement, x0: HeisenbergPoint, n_max: int) -> np.ndarray:
    """Reduced orbit points for n = 1..n_max as an (n_max, 3) array.

    Vectorized closed form (valid because the shift descends to the
    quotient): unreduced coordinates from (x0, y0, z0) are

        x = x0 + n*alpha,  z = z0 + n*gamma,
        y = y0 + n*beta + n*alpha*z0 + n(n-1)/2 * alpha*gamma,

    then one reduction. The quadratic term reaches n^2 before its mod 1,
    so it is accumulated in extended precision.
    """
    n = np.arange(1, n_max + 1, dtype=np.float64)
    x_raw = x0.x + g.alpha * n
    z_raw = x0.z + g.gamma * n
    quad = np.longdouble(n) * np.longdouble(n - 1.0)
    quad = quad * (np.longdouble(g.alpha) * np.longdouble(g.gamma) / 2.0)
    quad_frac = np.asarray(quad - np.floor(quad), dtype=np.float64)
    x_red = _frac01(x_raw)
    c = nearest_int(z_raw)
    # c * x_raw = c * x_red (mod 1); the reduced form avoids huge products
    y_raw = x0.y + g.beta * n + g.alpha * x0.z * n + quad_frac - c * x_red
    return np.column_stack([x_red, _frac01(y_raw), z_raw - c])


@dataclass
class TestFunction:
    """Bounded Lipschitz test function on the Heisenberg nilmanifold.

    kind "vertical_character": F(x,y,z) = e(m*y) * bump(z), where the
    smooth bump vanishes at z = +-1/2 so the gluing
    F(x, y, -1/2) = F(x, x+y, 1/2) holds exactly (both sides are 0).
    kind "torus_character": F = e(m1*x + m2*z); no cutoff is needed
    since e(m2*z) glues on its own (e(-m2/2) = e(m2/2) for integer m2).
    kind "custom_grid": trilinear interpolation of a complex grid over
    (x, y, z); the constructor checks the gluing on the grid boundary.

    lipschitz_estimate is a sampled finite-difference estimate on a
    random grid, not a certified bound.
    """

    kind: str
    m: tuple
    grid: np.ndarray | None = None
    lipschitz_estimate: float = field(default=0.0)

    @classmethod
    def vertical_character(cls, m: int = 1) -> "TestFunction":
        tf = cls(kind="vertical_character", m=(int(m),))
        tf.lipschitz_estimate = tf._estimate_lipschitz()
        return tf

    @classmethod
    def torus_character(cls, m1: int = 1, m2: int = 0) -> "TestFunction":
        tf = cls(kind="torus_character", m=(int(m1), int(m2)))
        tf.lipschitz_estimate = tf._estimate_lipschitz()
        return tf

    @classmethod
    def custom_grid(cls, grid, gluing_tol: float = 1e-9) -> "TestFunction":
        g = np.asarray(grid, dtype=np.complex128)
        if g.ndim != 3:
            raise ValueError("grid must be 3-d over (x, y, z)")
        if np.max(np.abs(g)) > 1.0 + 1e-12:
            raise ValueError("need |F| <= 1")
        tf = cls(kind="custom_grid", m=(), grid=g)
        err = tf.gluing_defect(g.shape[0], g.shape[1])
        if err > gluing_tol:
            raise ValueError(f"gluing defect {err:.2e} exceeds {gluing_tol:.0e}")
        tf.lipschitz_estimate = tf._estimate_lipschitz()
        return tf

    @staticmethod
    def _bump(z):
        z = np.asarray(z, dtype=np.float64)
        out = np.zeros_like(z)
        inside = np.abs(z) < 0.5
        u = np.clip(2.0 * z[inside], -1.0 + 1e-300, 1.0 - 1e-300)
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - u * u))
        return out

    def evaluate(self, x, y, z) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        z = np.asarray(z, dtype=np.float64)
        if self.kind == "vertical_character":
            return np.exp(2j * np.pi * self.m[0] * y) * self._bump(z)
        if self.kind == "torus_character":
            return np.exp(2j * np.pi * (self.m[0] * x + self.m[1] * z))
        return self._interp(x, y, z)

    def evaluate_point(self, p: HeisenbergPoint) -> complex:
        return complex(self.evaluate(p.x, p.y, p.z))

    def _interp(self, x, y, z):
        nx, ny, nz = self.grid.shape
        # x, y periodic on [0,1); z linear on (-1/2, 1/2]
        fx = _frac01(x) * nx
        fy = _frac01(y) * ny
        fz = np.clip((np.asarray(z) + 0.5) * (nz - 1), 0, nz - 1)
        out = np.zeros(np.broadcast(fx, fy, fz).shape, dtype=np.complex128)
        i0, j0, k0 = np.floor(fx).astype(int), np.floor(fy).astype(int), np.floor(fz).astype(int)
        tx, ty, tz = fx - i0, fy - j0, fz - k0
        k1 = np.minimum(k0 + 1, nz - 1)
        for di, wx in ((0, 1 - tx), (1, tx)):
            for dj, wy in ((0, 1 - ty), (1, ty)):
                for dk, wz in ((k0, 1 - tz), (k1, tz)):
                    out += wx * wy * wz * self.grid[(i0 + di) % nx, (j0 + dj) % ny, dk]
        return out

    def gluing_defect(self, gx: int = 100, gy: int = 100) -> float:
        """max |F(x, y, -1/2) - F(x, x+y, 1/2)| over a gx-by-gy grid."""
        x = np.linspace(0.0, 1.0, gx, endpoint=False)[:, None]
        y = np.linspace(0.0, 1.0, gy, endpoint=False)[None, :]
        lo = self.evaluate(x + 0 * y, y + 0 * x, np.full((gx, gy), -0.5))
        hi = self.evaluate(x + 0 * y, _frac01(x + y), np.full((gx, gy), 0.5))
        return float(np.max(np.abs(lo - hi)))

    def _estimate_lipschitz(self, samples: int = 4000, eps: float = 1e-4, seed: int = 1) -> float:
        rng = np.random.default_rng(seed)
        x = rng.uniform(0, 1, samples)
        y = rng.uniform(0, 1, samples)
        z = rng.uniform(-0.5 + eps, 0.5 - eps, samples)
        base = self.evaluate(x, y, z)
        grad = np.zeros(samples)
        for dx, dy, dz in ((eps, 0, 0), (0, eps, 0), (0, 0, eps)):
            stepped = self.evaluate(_frac01(x + dx), _frac01(y + dy), z + dz)
            grad += (np.abs(stepped - base) / eps) ** 2
        return float(np.sqrt(grad).max())


def eval_nilsequence(F: TestFunction, g: HeisenbergElement,
                     x0: HeisenbergPoint = ORIGIN, n_max: int = 1000) -> np.ndarray:
    """(F(T_g^n x0))_{n=1..n_max} as a complex array, |values| <= 1."""
    orbit = orbit_array(g, x0, n_max)
    return F.evaluate(orbit[:, 0], orbit[:, 1], orbit[:, 2])


def orbit_to_csv(F: TestFunction, g: HeisenbergElement, x0: HeisenbergPoint,
                 n_max: int, path) -> None:
    """CSV rows (n, x, y, z, re F, im F) along one orbit."""
    orbit = orbit_array(g, x0, n_max)
    vals = F.evaluate(orbit[:, 0], orbit[:, 1], orbit[:, 2])
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["n", "x", "y", "z", "re_F", "im_F"])
        for i in range(n_max):
            wr.writerow(
                [i + 1, orbit[i, 0], orbit[i, 1], orbit[i, 2], vals[i].real, vals[i].imag]
            )


@dataclass(frozen=True)
class GeneralizedQuadratic:
    """phi(n) = sum_{r,s} beta[r,s] {theta_r n}{theta_s n} + sum_r gamma[r] {theta_r n}."""

    beta: np.ndarray
    gamma_coeffs: np.ndarray
    thetas: np.ndarray

    @classmethod
    def create(cls, beta, gamma_coeffs, thetas, dim_cap: int = 64) -> "GeneralizedQuadratic":
        b = np.atleast_2d(np.asarray(beta, dtype=np.float64))
        g = np.atleast_1d(np.asarray(gamma_coeffs, dtype=np.float64))
        th = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
        C = th.size
        if C > dim_cap:
            raise ValueError(f"dimension {C} beyond cap {dim_cap}")
        if b.shape != (C, C) or g.shape != (C,):
            raise ValueError("beta must be C x C and gamma length C")
        if not (np.isfinite(b).all() and np.isfinite(g).all() and np.isfinite(th).all()):
            raise ValueError("parameters must be finite")
        return cls(beta=b, gamma_coeffs=g, thetas=th)

    def phase(self, n) -> np.ndarray:
        """phi(n), vectorized over integer n >= 1."""
        narr = np.atleast_1d(np.asarray(n, dtype=np.float64))
        parts = frac_half(np.outer(self.thetas, narr))  # (C, len(n))
        quad = np.einsum("rs,rn,sn->n", self.beta, parts, parts)
        lin = self.gamma_coeffs @ parts
        out = quad + lin
        return out if np.ndim(n) else float(out[0])

    def value(self, n) -> np.ndarray:
        """e(phi(n))."""
        return np.exp(2j * np.pi * np.asarray(self.phase(n)))


def quadratic_embedding(theta: float, N: int) -> GeneralizedQuadratic:
    """theta*n^2 as a generalized quadratic: 100*theta*N^2 {n/(10N)}^2.

    Exact for 1 <= n <= N since n/(10N) stays inside (0, 1/2].
    """
    return GeneralizedQuadratic.create(
        beta=[[100.0 * theta * N * N]], gamma_coeffs=[0.0], thetas=[1.0 / (10.0 * N)]
    )


def bilinear_embedding(theta1: float, theta2: float, N: int) -> GeneralizedQuadratic:
    """theta1*n*{theta2*n} as 10*theta1*N {n/(10N)}{theta2 n} for n <= N."""
    b = np.zeros((2, 2))
    b[0, 1] = 10.0 * theta1 * N
    return GeneralizedQuadratic.create(
        beta=b, gamma_coeffs=[0.0, 0.0], thetas=[1.0 / (10.0 * N), theta2]
    )


def eval_gen_quadratic(q: GeneralizedQuadratic, n) -> tuple:
    """(phi(n), e(phi(n))) for integer n >= 1 (scalar or array)."""
    phase = q.phase(n)
    return phase, np.exp(2j * np.pi * np.asarray(phase))


reduce = reduce_point  # the fundamental-domain reduction under its op name


def correlate(weights, seq) -> complex:
    """E_{n<=N} w(n) * seq(n); lengths must match."""
    w = np.asarray(weights, dtype=np.float64)
    s = np.asarray(seq)
    if w.shape != s.shape:
        raise ValueError(f"length mismatch: {w.shape} vs {s.shape}")
    return complex(np.mean(w * s))


@dataclass
class LocalQuadratic:
    """Phase on a structured support B_N inside [N/2, N).

    support[i] says whether n = n0 + i belongs to B_N (nonvanishing of
    the stored 1-step nilsequence f1); phase[i] is phi(n) mod 1 in
    (-1/2, 1/2], meaningful only on the support. Off-support second
    differences are refused rather than extrapolated.
    """

    n0: int
    support: np.ndarray
    phase: np.ndarray
    f1: np.ndarray

    def contains(self, n: int) -> bool:
        i = n - self.n0
        return 0 <= i < self.support.size and bool(self.support[i])

    def phase_at(self, n: int) -> float:
        if not self.contains(n):
            raise OutsideSupportError(f"n={n} outside the support")
        return float(self.phase[n - self.n0])


def make_local_quadratic(N: int, quad_theta: float, rot_theta: float,
                         level: float = 0.3) -> LocalQuadratic:
    """Explicit local quadratic: phi(n) = {quad_theta * n^2} on
    B_N = {N/2 <= n < N : f1(n) != 0}, f1(n) = max(0, cos(2 pi n rot_theta) - level).

    Phases are reduced mod 1 exactly (rational arithmetic), so second
    differences are clean at the 1e-12 level even for n^2 ~ 1e12.
    """
    n0 = N // 2
    ns = np.arange(n0, N)
    f1 = np.maximum(0.0, np.cos(2 * np.pi * frac_half(rot_theta * ns)) - level)
    support = f1 > 0.0
    th = Fraction(quad_theta)
    phase = np.array(
        [float(frac_half_fraction(th * n * n)) for n in ns], dtype=np.float64
    )
    return LocalQuadratic(n0=n0, support=support, phase=phase, f1=f1)


def frac_half_fraction(t: Fraction) -> Fraction:
    """Exact {t} in (-1/2, 1/2] for a rational t."""
    z = math.ceil(t - Fraction(1, 2))
    return t - z


def second_difference(lq: LocalQuadratic, x: int, h1: int, h2: int) -> float:
    """phi(x+h1+h2) - phi(x+h1) - phi(x+h2) + phi(x), mod 1 into (-1/2, 1/2].

    All four corners must lie in the support (OutsideSupportError
    otherwise). The raw value is returned; any major-arc-style
    smallness classification (q * phi'' small for a small q) is the
    caller's threshold to choose.
    """
    val = (
        lq.phase_at(x + h1 + h2)
        - lq.phase_at(x + h1)
        - lq.phase_at(x + h2)
        + lq.phase_at(x)
    )
    return float(frac_half(val))


def correlation_battery(weights, n_max: int, batch: dict | None = None) -> dict:
    """|E w(n) seq(n)| for a frozen battery of nilsequences.

    Two torus rotations and three Heisenberg orbits with a vertical
    character; keys describe each sequence. Used for the Mobius
    correlation-decay checks.
    """
    if batch is None:
        batch = default_battery()
    out = {}
    w = np.asarray(weights, dtype=np.float64)[:n_max]
    for name, (F, g) in batch.items():
        seq = eval_nilsequence(F, g, ORIGIN, n_max)
        out[name] = abs(correlate(w, seq))
    return out


def default_battery() -> dict:
    """The frozen 5-sequence battery: 2 torus, 3 Heisenberg."""
    sq2 = math.sqrt(2.0)
    sq3 = math.sqrt(3.0)
    sq5 = math.sqrt(5.0)
    return {
        "torus_e(n*sqrt2)": (
            TestFunction.torus_character(1, 0),
            HeisenbergElement(sq2 - 1.0, 0.0, 0.0),
        ),
        "torus_e(n*golden)": (
            TestFunction.torus_character(1, 0),
            HeisenbergElement((sq5 - 1.0) / 2.0, 0.0, 0.0),
        ),
        "heis_sqrt2_sqrt3": (
            TestFunction.vertical_character(1),
            HeisenbergElement(sq2, 0.0, sq3),
        ),
        "heis_pi_e": (
            TestFunction.vertical_character(1),
            HeisenbergElement(1.0 / math.pi, 1.0 / math.e, sq5),
        ),
        "heis_cbrt2": (
            TestFunction.vertical_character(2),
            HeisenbergElement(2.0 ** (1.0 / 3.0), 0.1, 3.0 ** (1.0 / 3.0)),
        ),
    }
