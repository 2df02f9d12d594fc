"""
heisenlab is a numerical laboratory for harmonic analysis on the Heisenberg
group H^n = R^{2n} x R.

**group.py** holds the group law, inverses, dilations, the symplectic
rotations and the Koranyi norm, both on GroupPoints and vectorized over numpy
arrays.  **integration.py** integrates against Haar measure with product
Gauss rules in Koranyi polar coordinates, or by Monte Carlo.
**calculus.py** applies the left-invariant vector fields X_1..X_{2n+1}, their
products X^I, and builds left Taylor polynomials.

**varexp.py** covers variable exponents: log-Holder fits, modulars and
Luxemburg norms.  **atoms.py** builds and verifies Hardy space atoms.
**operators.py** evaluates the generalized Riesz operators T_{alpha,m},
fractional maximal functions and the geometric quantities used to bound them.

**harness.py** collects the experiments that check the theory numerically;
**cli.py** runs them from the command line (`heisenlab run <experiment>`).
The value types live in **data_classes/**.
"""

__all__ = [
    "atoms",
    "calculus",
    "group",
    "harness",
    "integration",
    "operators",
    "varexp",
]
