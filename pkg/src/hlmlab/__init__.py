"""Desk-scale laboratory for linear equations in primes.

Subpackages cover: arithmetic sieves (arith), discrete Fourier analysis
with arc classification and type sums (fourier), integer linear systems
and singular series (linsys), prime-solution counting (counting), Gowers
uniformity norms (gowers), nilsequences on tori and the Heisenberg
nilmanifold (nilseq), the quadratic obstruction sets (obstruction), and a
report-oriented CLI (cli) with an acceptance-suite runner (acceptance).
"""

__version__ = "0.1.0"
