"""Supernatural numbers, divisor posets and the divisor (Alexandrov) topology.

A supernatural number is a formal product prod p^{e_p} with exponents in
Z>=0 union {inf}.  We restrict to finitely-described elements: finitely many
finite exponents, finitely many explicitly-infinite primes, and a tail that
is either all-zero or all-infinite.  That covers every element named in the
theory (N, p^inf, Omega(Pi_1) for finite or cofinite Pi_1, Omega) while
staying decidable.

1 is excluded throughout: with divisibility as the order, {2, 3, 4, ...} is
a directed partial order but not a lattice, and the divisor poset of n has
sigma_0(n) - 1 elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .numbers import factorize

INF = math.inf


@dataclass(frozen=True)
class Supernatural:
    """prod p^{e_p} with finitely many finite exponents and an inf set.

    ``finite_exp`` holds primes with 0 < e_p < inf; ``inf_primes`` holds
    primes with e_p = inf.  Primes in neither carry the tail exponent
    (0, or inf when ``tail_infinite``).
    """

    finite_exp: tuple[tuple[int, int], ...] = ()
    inf_primes: frozenset[int] = frozenset()
    tail_infinite: bool = False

    def __post_init__(self) -> None:
        primes = [p for p, _ in self.finite_exp]
        if sorted(primes) != primes or len(set(primes)) != len(primes):
            raise ValueError("finite_exp must be sorted with distinct primes")
        if any(e < 1 for _, e in self.finite_exp):
            raise ValueError("finite exponents must be >= 1")
        if set(primes) & self.inf_primes:
            raise ValueError("finite_exp and inf_primes must be disjoint")
        if not self.finite_exp and not self.inf_primes and not self.tail_infinite:
            raise ValueError("1 is excluded from the supernatural numbers")

    @classmethod
    def from_int(cls, n: int) -> "Supernatural":
        if n < 2:
            raise ValueError("n must be >= 2")
        return cls(tuple(sorted(factorize(n).items())))

    @classmethod
    def of(
        cls,
        finite: dict[int, int] | None = None,
        inf_primes: Iterable[int] = (),
        tail_infinite: bool = False,
    ) -> "Supernatural":
        return cls(
            tuple(sorted((finite or {}).items())),
            frozenset(inf_primes),
            tail_infinite,
        )

    @classmethod
    def prime_power(cls, p: int, e: "int | float") -> "Supernatural":
        if e == INF:
            return cls((), frozenset([p]))
        return cls(((p, int(e)),))

    @classmethod
    def omega(cls) -> "Supernatural":
        """The maximum element: every exponent is infinite."""
        return cls((), frozenset(), True)

    def exponent(self, p: int) -> "int | float":
        for q, e in self.finite_exp:
            if q == p:
                return e
        if p in self.inf_primes:
            return INF
        return INF if self.tail_infinite else 0

    @property
    def mentioned_primes(self) -> frozenset[int]:
        return frozenset(p for p, _ in self.finite_exp) | self.inf_primes

    def is_finite_int(self) -> bool:
        return not self.inf_primes and not self.tail_infinite

    def as_int(self) -> int:
        if not self.is_finite_int():
            raise ValueError("not a finite integer")
        out = 1
        for p, e in self.finite_exp:
            out *= p**e
        return out

    def __repr__(self) -> str:
        parts = [f"{p}^{e}" for p, e in self.finite_exp]
        parts += [f"{p}^inf" for p in sorted(self.inf_primes)]
        if self.tail_infinite:
            parts.append("(all remaining)^inf")
        return "Supernatural(" + " * ".join(parts) + ")"


OMEGA = Supernatural.omega()


def sn_divides(m: Supernatural, n: Supernatural) -> bool:
    """m | n iff e_p(m) <= e_p(n) for every prime (inf dominates)."""
    if m.tail_infinite and not n.tail_infinite:
        return False
    for p in m.mentioned_primes | n.mentioned_primes:
        if m.exponent(p) > n.exponent(p):
            return False
    return True


@dataclass(frozen=True)
class PrimePowerChain:
    """The symbolic chain p, p^2, p^3, ... whose supremum is p^inf."""

    p: int


@dataclass(frozen=True)
class OmegaChain:
    """The symbolic chain q1^inf, (q1 q2)^inf, ... exhausting ``primes``.

    ``primes`` is None for all primes (supremum Omega), else an explicit
    finite collection.
    """

    primes: frozenset[int] | None = None


def sn_sup(
    chain: "Iterable[Supernatural] | PrimePowerChain | OmegaChain",
) -> Supernatural:
    """Supremum of a finite set or of a symbolically-described chain."""
    if isinstance(chain, PrimePowerChain):
        return Supernatural.prime_power(chain.p, INF)
    if isinstance(chain, OmegaChain):
        if chain.primes is None:
            return OMEGA
        return Supernatural.of(inf_primes=chain.primes)
    items = list(chain)
    if not items:
        raise ValueError("empty set has no supremum here (1 is excluded)")
    tail_inf = any(x.tail_infinite for x in items)
    finite: dict[int, int] = {}
    infs: set[int] = set()
    mentioned: frozenset[int] = frozenset()
    for x in items:
        mentioned |= x.mentioned_primes
    for p in mentioned:
        e = max(x.exponent(p) for x in items)
        if e == INF:
            if not tail_inf:  # an infinite tail already covers p
                infs.add(p)
        elif e >= 1:
            finite[p] = int(e)
    return Supernatural.of(finite, infs, tail_inf)


# ---------------------------------------------------------------------------
# Finite posets under divisibility
# ---------------------------------------------------------------------------


def _int_divides(a, b) -> bool:
    return b % a == 0


@dataclass(frozen=True)
class FinitePoset:
    """A finite set with a divisibility-style order relation.

    Elements are integers (ordinary divisibility) or Supernatural values
    (supernatural divisibility); a custom reflexive/antisymmetric/transitive
    predicate may be supplied.
    """

    elements: tuple
    divides: Callable = field(default=_int_divides, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate elements")
        if self.elements and isinstance(self.elements[0], Supernatural):
            object.__setattr__(self, "divides", sn_divides)

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, a, b) -> bool:
        return self.divides(a, b)

    def down_set(self, x) -> frozenset:
        """U(x): the basis open set of all elements dividing x."""
        return frozenset(m for m in self.elements if self.leq(m, x))

    def check_axioms(self) -> bool:
        els = self.elements
        for a in els:
            if not self.leq(a, a):
                return False
        for a in els:
            for b in els:
                if a != b and self.leq(a, b) and self.leq(b, a):
                    return False
                for c in els:
                    if self.leq(a, b) and self.leq(b, c) and not self.leq(a, c):
                        return False
        return True


def divisor_poset(n: int) -> FinitePoset:
    """N(n): all divisors of n except 1, ordered by divisibility."""
    if n < 2:
        raise ValueError("n must be >= 2")
    divs = sorted(d for d in range(2, n + 1) if n % d == 0)
    return FinitePoset(tuple(divs))


@dataclass(frozen=True)
class WidthLengthResult:
    width: int
    length: int
    chain_partition: tuple[tuple, ...]
    max_antichain: tuple


def poset_width_length(poset: FinitePoset, bound: int = 10**4) -> WidthLengthResult:
    """Exact width, length, a minimum chain partition and a witness antichain.

    Width via Dilworth through Koenig: a maximum matching in the bipartite
    strict-order graph gives a minimum chain cover of size |P| - |M|, and the
    vertex-cover construction recovers a maximum antichain of the same size.
    """
    els = list(poset.elements)
    n = len(els)
    if n > bound:
        raise ValueError(f"poset size {n} exceeds bound {bound}")
    idx = {x: i for i, x in enumerate(els)}
    succ = [
        [j for j, y in enumerate(els) if i != j and poset.leq(x, y)]
        for i, x in enumerate(els)
    ]

    match_right = [-1] * n  # right vertex -> left vertex
    match_left = [-1] * n

    def augment(u: int, seen: list[bool]) -> bool:
        for v in succ[u]:
            if seen[v]:
                continue
            seen[v] = True
            if match_right[v] == -1 or augment(match_right[v], seen):
                match_right[v] = u
                match_left[u] = v
                return True
        return False

    matched = 0
    for u in range(n):
        if augment(u, [False] * n):
            matched += 1
    width = n - matched

    # chains: follow matched successors from unmatched-on-the-right starts
    starts = [i for i in range(n) if match_right[i] == -1]
    chains = []
    for s in starts:
        chain = [s]
        while match_left[chain[-1]] != -1:
            chain.append(match_left[chain[-1]])
        chains.append(tuple(els[i] for i in chain))

    # Koenig: alternate from unmatched left vertices; the antichain is the
    # set of elements outside the minimum vertex cover on both sides
    z_left = [match_left[u] == -1 for u in range(n)]
    z_right = [False] * n
    frontier = [u for u in range(n) if z_left[u]]
    while frontier:
        nxt = []
        for u in frontier:
            for v in succ[u]:
                if v != match_left[u] and not z_right[v]:
                    z_right[v] = True
                    w = match_right[v]
                    if w != -1 and not z_left[w]:
                        z_left[w] = True
                        nxt.append(w)
        frontier = nxt
    antichain = tuple(
        els[i] for i in range(n) if z_left[i] and not z_right[i]
    )

    # length: longest chain by dynamic programming over the strict order
    order = sorted(range(n), key=lambda i: len(poset.down_set(els[i])))
    longest = [1] * n
    for i in order:
        for j in succ[i]:
            longest[j] = max(longest[j], longest[i] + 1)
    length = max(longest, default=0)

    assert len(antichain) == width
    assert sum(len(c) for c in chains) == n
    return WidthLengthResult(width, length, tuple(chains), antichain)


# ---------------------------------------------------------------------------
# The divisor topology (Alexandrov): opens are down-sets
# ---------------------------------------------------------------------------


def basis_open(poset: FinitePoset, x) -> frozenset:
    return poset.down_set(x)


def is_open(poset: FinitePoset, s: Iterable) -> bool:
    s = frozenset(s)
    return all(
        m in s
        for x in s
        for m in poset.elements
        if poset.leq(m, x)
    )


def is_closed(poset: FinitePoset, s: Iterable) -> bool:
    """Closed iff the complement is open, i.e. s is an up-set."""
    s = frozenset(s)
    return is_open(poset, frozenset(poset.elements) - s)


def check_t0(poset: FinitePoset) -> bool:
    """True iff every pair of distinct points has a separating down-set."""
    els = poset.elements
    for i, x in enumerate(els):
        for y in els[i + 1 :]:
            # U(x) separates unless each point is in the other's down-set
            if poset.leq(x, y) and poset.leq(y, x):
                return False
    return True


def check_t1(poset: FinitePoset) -> "tuple[bool, tuple | None]":
    """T1 fails whenever a strict divisibility pair exists.

    Returns (is_T1, witness): the witness pair (m, x) has m strictly below
    x, so every open set containing x also contains m.  A poset with no
    strict pair (an antichain, in particular a singleton) is vacuously T1.
    """
    els = poset.elements
    for x in els:
        for m in els:
            if m != x and poset.leq(m, x):
                return False, (m, x)
    return True, None


def topology_ops(poset: FinitePoset, query: str, arg=None):
    """Spec-level dispatcher over the divisor-topology checks."""
    if query == "basis":
        return basis_open(poset, arg)
    if query == "is_open":
        return is_open(poset, arg)
    if query == "is_closed":
        return is_closed(poset, arg)
    if query == "check_T0":
        return check_t0(poset)
    if query == "check_T1":
        return check_t1(poset)
    raise ValueError(f"unknown query {query!r}")
