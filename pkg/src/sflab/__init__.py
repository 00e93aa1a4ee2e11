"""sflab: exact computations around deformations of symplectic foliations.

Modules
-------
- :mod:`sflab.exactnum` - exact field Q(i, sqrt d), Fourier rings, epsilon-series
- :mod:`sflab.graded` - Koszul signs, unshuffles, decalage
- :mod:`sflab.linfty` - L-infinity[1] algebras, coderivations, coalgebra morphisms
- :mod:`sflab.bigbracket` - the degree -2 Poisson superalgebra and derived brackets
- :mod:`sflab.foliation` - multivector calculus on tori and the foliation L-infinity[1] algebra
- :mod:`sflab.gaugeequiv` - lifts to M x I^2 and gauge-equivalence identities
- :mod:`sflab.kronecker` - truncated leafwise cohomology of linear foliations
- :mod:`sflab.cli` - manifest parser, check runner and reports
"""

__version__ = "0.1.0"
