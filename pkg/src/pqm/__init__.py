"""Exact arithmetic and finite phase-space machinery for quantum mechanics
on profinite groups.

Subpackages follow the layered structure of the problem:

* :mod:`pqm.numbers` -- p-adic / rational-mod-1 arithmetic, CRT machinery,
  characters.
* :mod:`pqm.poset` -- supernatural numbers, divisor posets, divisor topology.
* :mod:`pqm.finiteqm` -- the finite system on Z(n): Fourier transforms,
  displacement and parity operators, Wigner/Weyl functions, tomography.
* :mod:`pqm.schwartz_bruhat` -- locally constant / compact-support functions
  on Z_p and Q_p/Z_p and their restricted tensor products.
* :mod:`pqm.embeddings` -- subsystem embeddings and ubiquitous quantities.
* :mod:`pqm.profinite_hw` -- the non-quantum profinite Heisenberg-Weyl groups.
* :mod:`pqm.verify` -- the verification harness behind ``pqm verify``.
"""

__version__ = "0.1.0"
