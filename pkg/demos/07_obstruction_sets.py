"""Why linear harmonics cannot count 4-term progressions.

A1 = {x : {x^2 sqrt 2} in [-alpha/2, alpha/2]} has density ~ alpha and
no linear bias at all (its exponential sums are tiny), so a
harmonic-analysis count would predict the random-model number of APs.
For 3-term APs that is right; for 4-term APs it is badly wrong: the
identity x^2 - 3(x+d)^2 + 3(x+2d)^2 - (x+3d)^2 = 0 makes the fourth
point nearly free once three are in, with conditional probability
tending to P(y1 - 3y2 + 3y3 in [-1,1] | y_i uniform) = 8/27.
"""

import numpy as np

from hlmlab import obstruction

N, alpha = 10**5, 0.1
a1 = obstruction.build("A1", N, alpha)
print(f"A1 at N = {N}, alpha = {alpha}: density = {a1.density:.4f}")
print(f"linear bias sup|E f_A e(n theta)| = {obstruction.linear_bias(a1):.5f}"
      "   (an unbiased set)")

s3 = obstruction.ap_stats(a1, 3)
s4 = obstruction.ap_stats(a1, 4)
print(f"\n3-AP count {s3['observed']} vs random model {s3['predicted']:.0f}: "
      f"ratio {s3['ratio']:.2f}  (linear analysis suffices)")
print(f"4-AP count {s4['observed']} vs random model {s4['predicted']:.0f}: "
      f"ratio {s4['ratio']:.2f}  (the quadratic constraint bites)")

cp = obstruction.completion_probability(a1)
print(f"\ncompletion probability P(x+3d in A1 | x, x+d, x+2d in A1) = {cp:.3f}")
print(f"the harmonic-analysis limit 8/27 = {8/27:.3f}")

ctrl = obstruction.random_control_set(N, alpha, seed=5)
print(f"Bernoulli control of the same density completes at "
      f"{obstruction.completion_probability(ctrl):.3f} (= alpha)")

print(f"\nthe exact integer identity behind it holds for all x, d <= 1000: "
      f"{obstruction.check_constraint_identity(1000, 1000)}")

a2 = obstruction.build("A2", N, alpha)
s4b = obstruction.ap_stats(a2, 4)
print(f"\nA2 (bracket phase x sqrt2 {{x sqrt3}}): density {a2.density:.4f}, "
      f"bias {obstruction.linear_bias(a2):.5f}, 4-AP ratio {s4b['ratio']:.2f}")
print("generalized quadratics obstruct linear analysis the same way")
