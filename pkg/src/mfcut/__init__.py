"""Exact cuts of matrix factorisations over the rationals.

Modules: ring (polynomials), groebner (bases and t-expansions), clifford
(spinor representations), mf (graded matrices and factorisations), cut
(the finite composite Y|X and its Clifford action), transfer (Koszul
transfer identities), perturb (retracts, the finite-model map and
cohomology), problem (input files) and cli.
"""

__version__ = "0.1.0"
