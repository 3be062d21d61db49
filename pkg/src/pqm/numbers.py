"""Exact arithmetic for Z_p, Q_p/Z_p, Zhat, Q/Z and the CRT machinery.

All values are immutable and all phases are exact: a character value is a
rational exponent q with the meaning exp(2*pi*i*q), and complex doubles only
appear when a phase is finally evaluated numerically.

Conventions:

* A truncated p-adic integer carries an explicit precision N and represents
  a residue mod p^N.  Binary operations return the minimum precision of
  their operands and raise instead of silently extending.
* A coset in Q_p/Z_p is represented by the unique element with zero integer
  part, i.e. a fraction m / p^k with 0 <= m < p^k.
* Integers embed into base-p digits via their residue mod p^N, so negative
  integers come out in (p-1)-complement form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping


class PrecisionError(ValueError):
    """A p-adic operation needed more digits than the operand carries."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=65536)
def factorize(n: int) -> dict[int, int]:
    """Prime factorization ``{p: e}`` with primes in increasing order."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out: dict[int, int] = {}
    m = n
    f = 2
    while f * f <= m:
        while m % f == 0:
            out[f] = out.get(f, 0) + 1
            m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


# ---------------------------------------------------------------------------
# Q/Z: rational numbers on the circle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatMod1:
    """An exact element kappa/lambda of Q/Z, always reduced and in [0, 1)."""

    numerator: int
    denominator: int

    def __post_init__(self) -> None:
        if self.denominator < 1:
            raise ValueError("denominator must be >= 1")
        if not (0 <= self.numerator < self.denominator) and not (
            self.numerator == 0 and self.denominator == 1
        ):
            raise ValueError("not reduced to [0, 1); use RatMod1.of")
        if math.gcd(self.numerator, self.denominator) != 1:
            raise ValueError("fraction not in lowest terms; use RatMod1.of")

    @classmethod
    def of(cls, numerator: int | Fraction, denominator: int = 1) -> "RatMod1":
        q = Fraction(numerator, denominator)
        q -= math.floor(q)
        return cls(q.numerator, q.denominator)

    @property
    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __add__(self, other: "RatMod1") -> "RatMod1":
        return RatMod1.of(self.as_fraction + other.as_fraction)

    def __sub__(self, other: "RatMod1") -> "RatMod1":
        return RatMod1.of(self.as_fraction - other.as_fraction)

    def __neg__(self) -> "RatMod1":
        return RatMod1.of(-self.as_fraction)

    def scaled(self, k: int) -> "RatMod1":
        """k * q mod 1 for an integer k."""
        return RatMod1.of(self.as_fraction * k)

    def __bool__(self) -> bool:
        return self.numerator != 0

    def phase(self) -> "UnitPhase":
        return UnitPhase(self)


ZERO_MOD1 = RatMod1(0, 1)


@dataclass(frozen=True)
class UnitPhase:
    """exp(2*pi*i*q) with an exact exponent q in Q/Z."""

    exponent: RatMod1

    def __mul__(self, other: "UnitPhase") -> "UnitPhase":
        return UnitPhase(self.exponent + other.exponent)

    def conjugate(self) -> "UnitPhase":
        return UnitPhase(-self.exponent)

    def __complex__(self) -> complex:
        t = 2.0 * math.pi * self.exponent.numerator / self.exponent.denominator
        return complex(math.cos(t), math.sin(t))


# ---------------------------------------------------------------------------
# Z_p: truncated p-adic integers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PadicInt:
    """A p-adic integer truncated to N digits, i.e. a residue mod p^N.

    ``digits[v]`` is the coefficient of p^v, each in [0, p-1].
    """

    p: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if len(self.digits) < 1:
            raise ValueError("precision must be >= 1")
        if any(not (0 <= d < self.p) for d in self.digits):
            raise ValueError("digit out of range")

    @property
    def precision(self) -> int:
        return len(self.digits)

    @classmethod
    def from_int(cls, value: int, p: int, precision: int) -> "PadicInt":
        r = value % p**precision
        digits = []
        for _ in range(precision):
            r, d = divmod(r, p)
            digits.append(d)
        return cls(p, tuple(digits))

    @classmethod
    def from_rational(cls, q: Fraction, p: int, precision: int) -> "PadicInt":
        """The canonical image of a rational with denominator coprime to p."""
        if q.denominator % p == 0:
            raise ValueError(f"{q} is not a {p}-adic integer")
        inv = pow(q.denominator, -1, p**precision)
        return cls.from_int(q.numerator * inv, p, precision)

    def residue(self) -> int:
        """The integer representative in [0, p^N)."""
        return sum(d * self.p**v for v, d in enumerate(self.digits))

    def _binop(self, other: "PadicInt", op: str) -> "PadicInt":
        if not isinstance(other, PadicInt):
            return NotImplemented  # type: ignore[return-value]
        if self.p != other.p:
            raise ValueError(f"prime mismatch: {self.p} vs {other.p}")
        n = min(self.precision, other.precision)
        a, b = self.residue(), other.residue()
        if op == "add":
            r = a + b
        elif op == "sub":
            r = a - b
        else:
            r = a * b
        return PadicInt.from_int(r, self.p, n)

    def __add__(self, other: "PadicInt") -> "PadicInt":
        return self._binop(other, "add")

    def __sub__(self, other: "PadicInt") -> "PadicInt":
        return self._binop(other, "sub")

    def __mul__(self, other: "PadicInt") -> "PadicInt":
        return self._binop(other, "mul")

    def __neg__(self) -> "PadicInt":
        return PadicInt.from_int(-self.residue(), self.p, self.precision)

    def __repr__(self) -> str:
        return f"PadicInt(p={self.p}, digits={self.digits})"


def padic_arith(a: PadicInt, b: PadicInt, op: str) -> PadicInt:
    """Truncated arithmetic in Z_p; ``op`` is one of add, sub, mul."""
    if op not in ("add", "sub", "mul"):
        raise ValueError(f"unknown op {op!r}")
    return a._binop(b, op)


def padic_ord_abs(
    x: "PadicInt | Fraction | int", p: int | None = None
) -> tuple[int, Fraction]:
    """Valuation and absolute value (ord, p^-ord) of a nonzero element.

    For a truncated PadicInt whose digits are all zero the valuation is not
    determined by the available digits, so this raises PrecisionError.
    """
    if isinstance(x, PadicInt):
        for v, d in enumerate(x.digits):
            if d != 0:
                return v, Fraction(1, x.p**v)
        raise PrecisionError(
            f"valuation undetermined at precision {x.precision}: all digits zero"
        )
    if p is None:
        raise ValueError("p required for rational input")
    q = Fraction(x)
    if q == 0:
        raise ValueError("valuation of 0 is undefined")
    ord_ = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        ord_ += 1
    while den % p == 0:
        den //= p
        ord_ -= 1
    return ord_, Fraction(1, p) ** ord_


def ostrowski_product(q: "Fraction | int") -> Fraction:
    """|q|_inf * prod_p |q|_p over the primes dividing q; equals 1 exactly."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    out = abs(q)
    for p in set(factorize(abs(q.numerator))) | set(factorize(q.denominator)):
        _, absp = padic_ord_abs(q, p)
        out *= absp
    return out


def project_xi(a: PadicInt, k: int) -> int:
    """The truncation map xi_k: Z_p -> Z(p^k) (keep the first k digits)."""
    if not (1 <= k <= a.precision):
        raise PrecisionError(f"k={k} exceeds precision {a.precision}")
    return sum(d * a.p**v for v, d in enumerate(a.digits[:k]))


# ---------------------------------------------------------------------------
# Q_p/Z_p: fractional cosets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PadicFrac:
    """A coset in Q_p/Z_p represented with zero integer part.

    ``digits`` are d_{-k} .. d_{-1}; the value is sum d_v p^v over
    v = -k .. -1, i.e. a fraction m/p^k with 0 <= m < p^k.  Canonical form
    has the leading digit d_{-k} nonzero, so k = 0 encodes the zero coset.
    """

    p: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if any(not (0 <= d < self.p) for d in self.digits):
            raise ValueError("digit out of range")
        if self.digits and self.digits[0] == 0:
            raise ValueError("not canonical: leading digit is zero")

    @property
    def degree(self) -> int:
        """The support degree k: the coset lies in p^-k Z_p / Z_p."""
        return len(self.digits)

    @classmethod
    def zero(cls, p: int) -> "PadicFrac":
        return cls(p, ())

    @classmethod
    def from_fraction(cls, q: "Fraction | RatMod1", p: int) -> "PadicFrac":
        if isinstance(q, RatMod1):
            q = q.as_fraction
        q -= math.floor(q)
        if q == 0:
            return cls.zero(p)
        k = 0
        den = q.denominator
        while den % p == 0:
            den //= p
            k += 1
        if den != 1:
            raise ValueError(f"{q} has a denominator not a power of {p}")
        m = q.numerator * (p**k // q.denominator)
        digits = []
        for _ in range(k):
            m, d = divmod(m, p)
            digits.append(d)
        # digits[j] is d_{-k+j}: the low base-p digit of the numerator is d_{-k}
        return cls(p, tuple(digits))

    @property
    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator_int, self.p**self.degree)

    @property
    def numerator_int(self) -> int:
        return sum(d * self.p**j for j, d in enumerate(self.digits))

    @property
    def as_ratmod1(self) -> RatMod1:
        return RatMod1.of(self.as_fraction)

    def __add__(self, other: "PadicFrac") -> "PadicFrac":
        if self.p != other.p:
            raise ValueError("prime mismatch")
        return PadicFrac.from_fraction(self.as_fraction + other.as_fraction, self.p)

    def __neg__(self) -> "PadicFrac":
        return PadicFrac.from_fraction(-self.as_fraction, self.p)

    def __repr__(self) -> str:
        if not self.digits:
            return f"PadicFrac(p={self.p}, 0)"
        return f"PadicFrac(p={self.p}, {self.numerator_int}/{self.p}^{self.degree})"


def lift_tilde_xi(beta: int, k: int, p: int) -> PadicFrac:
    """The lift xi~_k: Z(p^k) -> Q_p/Z_p, beta |-> p^-k beta (canonical)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if not (0 <= beta < p**k or (k == 0 and beta == 0)):
        raise ValueError(f"beta={beta} out of range for Z({p}^{k})")
    return PadicFrac.from_fraction(Fraction(beta, p**k) if k else Fraction(0), p)


def frac_mul(a: PadicInt, b: PadicFrac) -> PadicFrac:
    """The coset product a*b in Q_p/Z_p; needs a known mod p^deg(b)."""
    if a.p != b.p:
        raise ValueError("prime mismatch")
    k = b.degree
    if k == 0:
        return b
    if a.precision < k:
        raise PrecisionError(
            f"need {k} digits of a to multiply by a degree-{k} coset, "
            f"have {a.precision}"
        )
    return PadicFrac.from_fraction(project_xi(a, k) * b.as_fraction, a.p)


# ---------------------------------------------------------------------------
# Zhat: profinite integers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProfiniteInt:
    """An element of Zhat: finitely many p-adic overrides over an integer tail.

    The component at an unlisted prime is the canonical p-adic image of
    ``tail``, materialized on demand at any requested precision.
    """

    overrides: Mapping[int, PadicInt] = field(default_factory=dict)
    tail: int = 0

    def __post_init__(self) -> None:
        for p, a in self.overrides.items():
            if a.p != p:
                raise ValueError(f"override at {p} has prime {a.p}")

    def component(self, p: int, precision: int) -> PadicInt:
        a = self.overrides.get(p)
        if a is None:
            return PadicInt.from_int(self.tail, p, precision)
        if a.precision < precision:
            raise PrecisionError(
                f"component at p={p} has precision {a.precision} < {precision}"
            )
        return PadicInt(p, a.digits[:precision])

    def residue(self, n: int) -> int:
        """The projection pi_n: Zhat -> Z(n) (per-prime truncations + CRT)."""
        comps = []
        for p, e in factorize(n).items():
            comps.append(project_xi(self.component(p, e), e))
        return crt_join_mu(n, tuple(comps))

    def is_even(self) -> bool:
        """True iff ord of the 2-adic component is >= 1."""
        return self.component(2, 1).digits[0] == 0

    def is_odd(self) -> bool:
        return not self.is_even()

    def _merge(self, other: "ProfiniteInt", op) -> "ProfiniteInt":
        primes = set(self.overrides) | set(other.overrides)
        out: dict[int, PadicInt] = {}
        for p in primes:
            n = min(
                self.overrides[p].precision if p in self.overrides else math.inf,
                other.overrides[p].precision if p in other.overrides else math.inf,
            )
            n = int(n)
            out[p] = op(self.component(p, n), other.component(p, n))
        return ProfiniteInt(out, op(self.tail, other.tail))

    def __add__(self, other: "ProfiniteInt") -> "ProfiniteInt":
        return self._merge(other, lambda x, y: x + y)

    def __sub__(self, other: "ProfiniteInt") -> "ProfiniteInt":
        return self._merge(other, lambda x, y: x - y)

    def __mul__(self, other: "ProfiniteInt") -> "ProfiniteInt":
        return self._merge(other, lambda x, y: x * y)

    def __neg__(self) -> "ProfiniteInt":
        return ProfiniteInt({p: -a for p, a in self.overrides.items()}, -self.tail)


# ---------------------------------------------------------------------------
# CRT: idempotents and the two index maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrtFactor:
    """Per-prime CRT data for n = prod p^e: u = n/p^e, t*u = 1 mod p^e, w = t*u."""

    p: int
    e: int
    q: int  # p^e
    u: int
    t: int
    w: int


@lru_cache(maxsize=65536)
def crt_idempotents(n: int) -> tuple[CrtFactor, ...]:
    if n < 2:
        raise ValueError("n must be >= 2")
    factors = []
    for p, e in factorize(n).items():
        q = p**e
        u = n // q
        t = pow(u, -1, q)
        factors.append(CrtFactor(p, e, q, u, t, (t * u) % n))
    for i, fi in enumerate(factors):
        for j, fj in enumerate(factors):
            d = 1 if i == j else 0
            assert (fi.w * fj.w) % n == (d * fj.w) % n
            assert (fi.w * fj.u) % n == (d * fj.u) % n
    return tuple(factors)


def crt_split_mu(n: int, mu: int) -> tuple[int, ...]:
    """mu |-> (mu mod p_i^{e_i}), the position-type index map."""
    if not 0 <= mu < n:
        raise ValueError(f"mu={mu} out of range for Z({n})")
    return tuple(mu % f.q for f in crt_idempotents(n))


def crt_join_mu(n: int, comps: tuple[int, ...]) -> int:
    """(mu_i) |-> sum mu_i w_i mod n, inverse of crt_split_mu."""
    factors = crt_idempotents(n)
    if len(comps) != len(factors):
        raise ValueError("component count mismatch")
    return sum(c * f.w for c, f in zip(comps, factors)) % n


def crt_split_nu_hat(n: int, nu: int) -> tuple[int, ...]:
    """nu |-> (nu t_i mod p_i^{e_i}), the momentum-type 'hat' index map.

    The defining property is the partial-fraction identity
    nu/n = sum nu_hat_i / p_i^{e_i} mod 1.
    """
    if not 0 <= nu < n:
        raise ValueError(f"nu={nu} out of range for Z({n})")
    return tuple((nu * f.t) % f.q for f in crt_idempotents(n))


def crt_join_nu_hat(n: int, comps: tuple[int, ...]) -> int:
    """(nu_hat_i) |-> sum nu_hat_i u_i mod n, inverse of crt_split_nu_hat."""
    factors = crt_idempotents(n)
    if len(comps) != len(factors):
        raise ValueError("component count mismatch")
    return sum(c * f.u for c, f in zip(comps, factors)) % n


def crt_maps(n: int, value, direction: str):
    """Spec-level dispatcher over the four CRT index maps."""
    if direction == "split_mu":
        return crt_split_mu(n, value)
    if direction == "join_mu":
        return crt_join_mu(n, tuple(value))
    if direction == "split_nu_hat":
        return crt_split_nu_hat(n, value)
    if direction == "join_nu_hat":
        return crt_join_nu_hat(n, tuple(value))
    raise ValueError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# Characters
# ---------------------------------------------------------------------------


def char_omega(n: int, alpha: int) -> UnitPhase:
    """omega_n(alpha) = exp(2 pi i alpha / n)."""
    return UnitPhase(RatMod1.of(alpha, n))


def char_chi_p(a: PadicInt, b: PadicFrac) -> UnitPhase:
    """chi_p(a*b) = exp(2 pi i a b) for a in Z_p, b in Q_p/Z_p."""
    return UnitPhase(frac_mul(a, b).as_ratmod1)


def char_chi_global(a: ProfiniteInt, b: Mapping[int, PadicFrac]) -> UnitPhase:
    """chi(a*b) = prod_p chi_p(a_p b_p), b given on its finite support."""
    q = ZERO_MOD1
    for p, bp in b.items():
        if bp.degree == 0:
            continue
        q = q + frac_mul(a.component(p, bp.degree), bp).as_ratmod1
    return UnitPhase(q)


def char_eval(kind: str, *args) -> UnitPhase:
    """Dispatcher: kind is ``omega_n``, ``chi_p`` or ``chi_global``."""
    if kind == "omega_n":
        return char_omega(*args)
    if kind == "chi_p":
        return char_chi_p(*args)
    if kind == "chi_global":
        return char_chi_global(*args)
    raise ValueError(f"unknown character kind {kind!r}")


# ---------------------------------------------------------------------------
# Q/Z <-> per-prime components
# ---------------------------------------------------------------------------


def rat_decompose(q: RatMod1) -> dict[int, PadicFrac]:
    """Split q in Q/Z into p-power components, q = sum_p a_p mod 1.

    The component at p is supported exactly when p divides the denominator.
    """
    if q.numerator == 0:
        return {}
    n = q.denominator
    out: dict[int, PadicFrac] = {}
    for f in crt_idempotents(n) if n >= 2 else ():
        kp = (q.numerator * f.t) % f.q
        if kp:
            out[f.p] = PadicFrac.from_fraction(Fraction(kp, f.q), f.p)
    return out


def rat_recombine(parts: Mapping[int, PadicFrac]) -> RatMod1:
    total = Fraction(0)
    for frac in parts.values():
        total += frac.as_fraction
    return RatMod1.of(total)
