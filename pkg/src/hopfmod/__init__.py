"""Exact computational engine for finite-dimensional Hopf algebra module categories.

The package provides, over the exact coefficient fields Q, F_p and Q(zeta_n):

* structure-constant Hopf algebras with full axiom verification and
  (co)integral / distinguished-grouplike / pivot extraction (``hopf``),
* finite-dimensional modules, duals, evaluation/coevaluation morphisms and
  free presentations (``rep``),
* modified traces on projectives and the associated dual-basis data
  (``mtrace``),
* exact evaluation of sliced ribbon-graph diagrams (``diagrams``),
* chromatic maps, two-sided and one-sided, with identity verification
  (``chromatic``),
* surgery programs, skein operators and the closed-3-manifold invariant
  (``tqft``).

All arithmetic is exact; equality checks are zero-tolerance.
"""

from hopfmod.fields import QQ, GF, Cyclotomic
from hopfmod.hopf import HopfAlgebra
from hopfmod.builtins import BUILTIN_NAMES, builtin_algebra, load_algebra
from hopfmod.tqft import (BUILTIN_PROGRAM_NAMES, SurgeryProgram,
                          builtin_program, k_invariant, load_program)

__all__ = ["QQ", "GF", "Cyclotomic", "HopfAlgebra",
           "BUILTIN_NAMES", "builtin_algebra", "load_algebra",
           "BUILTIN_PROGRAM_NAMES", "SurgeryProgram", "builtin_program",
           "k_invariant", "load_program"]

__version__ = "0.1.0"
