"""Arithmetic tables: primality, Mobius, von Mangoldt, and the W-trick.

The von Mangoldt function Lambda is the natural prime-counting weight:
its average over [1, N] tending to 1 is the prime number theorem. The
Mobius function is the primes' oscillating shadow; its partial sums
grow far slower than N. The W-trick reweights Lambda along W*n + b to
strip the bias that small primes impose on raw prime counts.
"""

import numpy as np

from hlmlab import arith

N = 10**6
table = arith.build_table(N)

print(f"pi({N}) = {int(table.is_prime.sum())}")
print(f"E Lambda over [1, {N}] = {table.vonmangoldt[1:].mean():.6f}   (PNT says -> 1)")

mertens = np.cumsum(table.mobius[1:].astype(np.int64))
print(f"Mertens sums: M(1e4) = {mertens[10**4 - 1]}, M(1e6) = {mertens[-1]}"
      f"   (|M(N)| << N: cancellation everywhere)")

print("\nmu on 1..20:", table.mobius[1:21].tolist())
print("Lambda nonzero on 1..20 at prime powers only:",
      np.nonzero(table.vonmangoldt[1:21])[0] + 1)

# The W-trick: primes n = 6m+1 carry density 1/phi(6) = 1/2 of all primes,
# and the rescaled weight (phi(W)/W) Lambda(Wn+b) has mean 1 again.
params = arith.WTrickParams.create(6, 1)
tricked = arith.w_trick(table, params, 10**5)
print(f"\nW-trick (W=6, b=1): scale = phi(W)/W = {params.scale:.4f}, "
      f"E Lambda_b,W = {tricked.mean():.4f}")

# Balanced functions subtract the density so correlation tests see only
# the fluctuation. The balanced even numbers are +-1/2 with mean zero.
f = arith.balanced_function(np.arange(1, 11) % 2 == 0)
print("\nbalanced(evens on [1,10]) =", f)
