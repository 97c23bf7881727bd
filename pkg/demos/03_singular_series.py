"""Local factors and the singular series of linear systems in primes.

Each prime p contributes a density correction alpha_p: the chance that
a random null-space point of A mod p avoids all zero coordinates,
relative to independent coordinates. Their product is the singular
series, the constant in every Hardy-Littlewood prediction. A single
vanishing factor (a local obstruction) kills the count: p1 + 9p2 = 27p3
has no solutions because alpha_3 = 0.
"""

from hlmlab import linsys

print("3-term AP system (1, -2, 1): local factors")
for p in (2, 3, 5, 7, 11, 13):
    a = linsys.local_factor(linsys.AP3, p)
    print(f"  alpha_{p} = {a}  (= 1 - 1/(p-1)^2 for p >= 3)")

print("\n4-term AP system: the p >= 5 factors follow 1 - (3p-1)/(p-1)^3")
for p in (2, 3, 5, 7, 11):
    print(f"  alpha_{p} = {linsys.local_factor(linsys.AP4, p)}")

s3 = linsys.closed_form_S3(10**6)
s4 = linsys.closed_form_S4(10**6)
print(f"\nclosed-form constants: S3 = {s3:.6f} (~0.3301), S4 = {s4:.6f} (~0.4764)")

series3 = linsys.singular_series(linsys.AP3, 10**4)
series4 = linsys.singular_series(linsys.AP4, 10**4)
print(f"singular series, truncated at 1e4:")
print(f"  S(A3) = {series3.truncated_product:.6f} = 4 * S3 "
      f"(tail estimate {series3.tail_estimate:.2e})")
print(f"  S(A4) = {series4.truncated_product:.6f} = 6 * S4")

blocked = linsys.new_system([[1, 9, -27]])
print(f"\nlocal obstruction: alpha_3 of (1, 9, -27) = "
      f"{linsys.local_factor(blocked, 3)}, so the series is "
      f"{linsys.singular_series(blocked, 10**3).truncated_product}")

print("\nDegeneracy detection (binary problems are refused):")
for rows in ([[1, -2, 1], [2, -4, 2]], [[1, -1, 0, 0], [0, 0, 1, -1]]):
    try:
        linsys.new_system(rows)
    except linsys.DegenerateSystem as exc:
        print(f"  {rows}: rejected ({exc.reason})")
