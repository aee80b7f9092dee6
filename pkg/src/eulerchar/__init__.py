"""Exact arithmetic for generalized Euler characteristics.

Submodules:

* ``padics`` -- exact rationals with p-adic valuation and magnitudes.
* ``lambda_algebra`` -- truncated power series over Z_p, Weierstrass
  preparation, leading terms.
* ``gamma_modules`` -- Euler characteristics of torsion modules, closed
  form and finite-level Smith-normal-form oracle.
* ``akashi`` -- alternating products of characteristic elements.
* ``curves`` -- elliptic-curve point counts, traces, local Euler factors,
  ordinarity and weight checks.
* ``cyclotomic_fields`` -- prime splitting in Q(mu_p), infinite-inertia sets.
* ``euler_char`` -- the product formula tying everything together.
* ``cli`` -- JSON-report command line front end.
"""

from .errors import EulerCharError, InputError, PrecisionError, PrimeMismatchError

__all__ = ["EulerCharError", "InputError", "PrecisionError", "PrimeMismatchError"]

__version__ = "0.1.0"
