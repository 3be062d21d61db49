"""The finite quantum system on Z(n): Fourier, displacements, parity, Wigner.

Measure conventions.  States carry a representation tag: position-side
functions use the normalized Haar weight 1/n in inner products, momentum-side
functions use the counting weight 1.  The Fourier transform always applies
the forward kernel omega_n(-XP) with the source representation's measure and
flips the tag, which makes F^2 = parity and F^4 = 1 hold at the level of
stored values.

Displacement conventions.  A displacement is determined by continuum data
(a, b, c) with a, c in Q/Z and b an integer, acting on position functions as

    f(x) |-> chi(c - a b + 2 a x) f(x - b).

On Z(n) the label a is alpha/n for odd n and alpha/(2n) for even n, so the
scalar prefactor for even n involves 2n-th roots of unity (the half phases).
Internally an element stores (alpha, beta, phase) with the phase the full
exact scalar exponent; the canonical constructor from (alpha, beta, gamma)
sets phase = (gamma - alpha beta)/n for odd n and gamma/n - alpha beta/(2n)
for even n.  All group arithmetic is exact in Q/Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numbers import (
    RatMod1,
    ZERO_MOD1,
    crt_idempotents,
    rat_decompose,
)

_TWO_PI = 2.0 * math.pi


def _dft_matrix(n: int, sign: int) -> np.ndarray:
    j = np.arange(n)
    return np.exp(sign * 2j * np.pi * np.outer(j, j) / n)


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

POSITION = "position"
MOMENTUM = "momentum"


@dataclass(eq=False)
class FiniteState:
    """A wavefunction on Z(n) in one of the two representations."""

    n: int
    rep: str
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.rep not in (POSITION, MOMENTUM):
            raise ValueError(f"unknown rep {self.rep!r}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.n,):
            raise ValueError("amplitude length does not match n")

    @property
    def measure_weight(self) -> float:
        return 1.0 / self.n if self.rep == POSITION else 1.0


def inner(f: FiniteState, g: FiniteState) -> complex:
    if f.n != g.n or f.rep != g.rep:
        raise ValueError("states must share dimension and representation")
    return f.measure_weight * complex(np.vdot(f.amplitudes, g.amplitudes))


def norm(f: FiniteState) -> float:
    return math.sqrt(max(inner(f, f).real, 0.0))


def random_state(n: int, rng, rep: str = POSITION, normalized: bool = True) -> FiniteState:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    f = FiniteState(n, rep, v)
    if normalized:
        f.amplitudes = f.amplitudes / norm(f)
    return f


def fourier(f: FiniteState) -> FiniteState:
    """Apply the Fourier operator: forward kernel, source measure, tag flip."""
    w = _dft_matrix(f.n, -1)
    return FiniteState(
        f.n,
        MOMENTUM if f.rep == POSITION else POSITION,
        f.measure_weight * (w @ f.amplitudes),
    )


def to_momentum(f: FiniteState) -> FiniteState:
    """Coordinate change: the momentum-side values of the same state."""
    if f.rep == MOMENTUM:
        return f
    return FiniteState(f.n, MOMENTUM, (_dft_matrix(f.n, -1) @ f.amplitudes) / f.n)


def to_position(f: FiniteState) -> FiniteState:
    """Coordinate change: the position-side values of the same state."""
    if f.rep == POSITION:
        return f
    return FiniteState(f.n, POSITION, _dft_matrix(f.n, +1) @ f.amplitudes)


def fourier_matrix(n: int) -> np.ndarray:
    """The fixed-representation unitary of the Fourier operator.

    Applying this to position values gives sqrt(n) times the values that
    ``fourier`` stores on the momentum side (the measure retag factor).
    """
    return _dft_matrix(n, -1) / math.sqrt(n)


# ---------------------------------------------------------------------------
# CRT index maps and Good's factorized transform
# ---------------------------------------------------------------------------


def _mu_flat_indices(n: int) -> tuple[np.ndarray, tuple[int, ...]]:
    factors = crt_idempotents(n)
    dims = tuple(f.q for f in factors)
    x = np.arange(n)
    comps = [x % f.q for f in factors]
    return np.ravel_multi_index(comps, dims), dims


def _nu_hat_flat_indices(n: int) -> tuple[np.ndarray, tuple[int, ...]]:
    factors = crt_idempotents(n)
    dims = tuple(f.q for f in factors)
    x = np.arange(n)
    comps = [(x * f.t) % f.q for f in factors]
    return np.ravel_multi_index(comps, dims), dims


def _axis_fourier(a: np.ndarray, axis: int, position_side: bool) -> np.ndarray:
    q = a.shape[axis]
    w = _dft_matrix(q, -1)
    if position_side:
        w = w / q
    return np.moveaxis(np.tensordot(w, np.moveaxis(a, axis, 0), axes=(1, 0)), 0, axis)


def fourier_good(f: FiniteState) -> FiniteState:
    """The Fourier transform via CRT index remaps and per-prime-power DFTs."""
    factors = crt_idempotents(f.n)
    if len(factors) == 1:
        return fourier(f)
    pos = f.rep == POSITION
    src, dims = (_mu_flat_indices if pos else _nu_hat_flat_indices)(f.n)
    dst, _ = (_nu_hat_flat_indices if pos else _mu_flat_indices)(f.n)
    a = np.zeros(dims, dtype=complex)
    a.flat[src] = f.amplitudes
    for axis in range(len(dims)):
        a = _axis_fourier(a, axis, pos)
    return FiniteState(
        f.n, MOMENTUM if pos else POSITION, a.flat[dst].copy()
    )


# ---------------------------------------------------------------------------
# The Heisenberg-Weyl group on Z(n)
# ---------------------------------------------------------------------------


def _chi_coeff(n: int) -> int:
    """c with position phase chi(2 a x) = omega_n(c alpha x): 2 odd, 1 even."""
    return 2 if n % 2 else 1


@dataclass(frozen=True)
class HWElement:
    """A displacement operator D on Z(n) with an exact scalar prefactor.

    Position action: f(X) |-> e(phase + c alpha X / n) f(X - beta) with
    c = 2 for odd n and c = 1 for even n.
    """

    n: int
    alpha: int
    beta: int
    phase: RatMod1 = ZERO_MOD1

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if not (0 <= self.alpha < self.n and 0 <= self.beta < self.n):
            raise ValueError("alpha, beta must be canonical residues in [0, n)")

    @classmethod
    def from_canonical(cls, n: int, alpha: int, beta: int, gamma: int) -> "HWElement":
        alpha, beta, gamma = alpha % n, beta % n, gamma % n
        if n % 2:
            phase = RatMod1.of(gamma - alpha * beta, n)
        else:
            phase = RatMod1.of(2 * gamma - alpha * beta, 2 * n)
        return cls(n, alpha, beta, phase)

    @classmethod
    def from_phase_space(
        cls, n: int, a: RatMod1, b: int, c: RatMod1 = ZERO_MOD1
    ) -> "HWElement":
        """Build from continuum data (a, b, c); requires 2a on the 1/n grid."""
        two_a = a.as_fraction * 2
        r = two_a * n
        if r.denominator != 1:
            raise ValueError(f"a={a} does not displace the Z({n}) momentum grid")
        r = int(r) % n
        if n % 2:
            alpha = (r * pow(2, -1, n)) % n
        else:
            alpha = r
        phase = RatMod1.of(c.as_fraction - a.as_fraction * b)
        return cls(n, alpha, b % n, phase)

    @property
    def frak_a(self) -> RatMod1:
        """The continuum label a in Q/Z (alpha/n odd, alpha/(2n) even)."""
        return RatMod1.of(_chi_coeff(self.n) * self.alpha, 2 * self.n)

    @property
    def frak_c(self) -> RatMod1:
        """The continuum label c in Q/Z (phase = c - a b)."""
        return self.phase + RatMod1.of(
            self.frak_a.as_fraction * self.beta
        )


def hw_identity(n: int) -> HWElement:
    return HWElement(n, 0, 0)


def hw_mul(d1: HWElement, d2: HWElement) -> HWElement:
    """Group law (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab'-a'b), exactly."""
    if d1.n != d2.n:
        raise ValueError("dimension mismatch")
    n, c = d1.n, _chi_coeff(d1.n)
    cross = RatMod1.of(c * d2.alpha * d1.beta, n)
    return HWElement(
        n,
        (d1.alpha + d2.alpha) % n,
        (d1.beta + d2.beta) % n,
        d1.phase + d2.phase - cross,
    )


def hw_adjoint(d: HWElement) -> HWElement:
    """The adjoint D(-a, -b, -c); also the group inverse."""
    n, c = d.n, _chi_coeff(d.n)
    t = RatMod1.of(c * d.alpha * d.beta, n)
    return HWElement(n, (-d.alpha) % n, (-d.beta) % n, -d.phase - t)


def hw_scalar_mul(d: HWElement, q: RatMod1) -> HWElement:
    """Multiply the operator by the scalar e(q)."""
    return HWElement(d.n, d.alpha, d.beta, d.phase + q)


def hw_x(n: int) -> HWElement:
    return HWElement.from_canonical(n, 0, 1, 0)


def hw_z(n: int) -> HWElement:
    alpha = 1 if n % 2 == 0 else pow(2, -1, n)
    return HWElement.from_canonical(n, alpha, 0, 0)


def displace(d: HWElement, f: FiniteState) -> FiniteState:
    if d.n != f.n:
        raise ValueError("dimension mismatch")
    n, c = d.n, _chi_coeff(d.n)
    x = np.arange(n)
    if f.rep == POSITION:
        angles = _TWO_PI * (
            float(d.phase.as_fraction) + (c * d.alpha % n) * x / n
        )
        out = np.exp(1j * angles) * f.amplitudes[(x - d.beta) % n]
    else:
        shift = (c * d.alpha) % n
        q = (x - shift) % n
        angles = _TWO_PI * (float(d.phase.as_fraction) - d.beta * q / n)
        out = np.exp(1j * angles) * f.amplitudes[q]
    return FiniteState(n, f.rep, out)


def hw_matrix(d: HWElement, rep: str = POSITION) -> np.ndarray:
    n, c = d.n, _chi_coeff(d.n)
    x = np.arange(n)
    m = np.zeros((n, n), dtype=complex)
    s = float(d.phase.as_fraction)
    if rep == POSITION:
        m[x, (x - d.beta) % n] = np.exp(
            2j * np.pi * (s + (c * d.alpha % n) * x / n)
        )
    else:
        q = (x - c * d.alpha) % n
        m[x, q] = np.exp(2j * np.pi * (s - d.beta * q / n))
    return m


# ---------------------------------------------------------------------------
# Parity operators and phase points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhasePoint:
    """A parity phase-space point: a-index, b-index over Z(n).

    For even n the ``doubled`` variant reads the a-index over Z(2n)
    (a/(4n) instead of a/(2n)); it is the exploratory grid.
    """

    n: int
    a: int
    b: int
    doubled: bool = False

    def __post_init__(self) -> None:
        if self.doubled and self.n % 2:
            raise ValueError("doubled grid applies to even n only")
        mod_a = 2 * self.n if self.doubled else self.n
        if not (0 <= self.a < mod_a and 0 <= self.b < self.n):
            raise ValueError("phase point out of range")

    @property
    def frak_a(self) -> RatMod1:
        if self.n % 2:
            return RatMod1.of(self.a, self.n)
        return RatMod1.of(self.a, 4 * self.n if self.doubled else 2 * self.n)

    def canonical(self) -> "PhasePoint":
        """Reduce the a-index by the exact quarter period when one exists."""
        q = parity_quarter_period(self.n, self.doubled)
        if q is None:
            return self
        return PhasePoint(self.n, self.a % q, self.b, self.doubled)


def parity_quarter_period(n: int, doubled: bool = False) -> int | None:
    """The a-index shift equal to 1/4 in Q/Z, when it lies on the grid."""
    if n % 2:
        return None  # 1/4 is not a multiple of 1/n for odd n
    return n if doubled else n // 2


def parity_displacement(pt: PhasePoint) -> HWElement:
    """The element D(2a, 2b, 0) whose composition with F^2 is the parity."""
    two_a = RatMod1.of(2 * pt.frak_a.as_fraction)
    return HWElement.from_phase_space(pt.n, two_a, 2 * pt.b)


def parity_apply(pt: PhasePoint, f: FiniteState) -> FiniteState:
    if pt.n != f.n:
        raise ValueError("dimension mismatch")
    g = displace(parity_displacement(pt), f)
    idx = (-np.arange(pt.n)) % pt.n
    return FiniteState(pt.n, g.rep, g.amplitudes[idx])


def parity_matrix(pt: PhasePoint, rep: str = POSITION) -> np.ndarray:
    n = pt.n
    neg = np.zeros((n, n))
    neg[np.arange(n), (-np.arange(n)) % n] = 1.0
    return neg @ hw_matrix(parity_displacement(pt), rep)


def weyl_wigner(
    f: FiniteState, a: int, b: int, kind: str, doubled: bool = False
) -> complex:
    """The Weyl function (f, D(a,b,0) f) or the Wigner function (f, P(a,b) f)."""
    if kind == "weyl":
        return inner(f, displace(HWElement.from_canonical(f.n, a, b, 0), f))
    if kind == "wigner":
        return inner(f, parity_apply(PhasePoint(f.n, a, b, doubled), f))
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# Operators, tomography identities
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class OperatorMatrix:
    """A dense operator on Z(n), stored as its position-representation matrix."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError("entries must be a square matrix")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.entries @ other.entries)

    def is_unitary(self, tol: float = 1e-10) -> bool:
        return is_unitary(self.entries, tol)


def _as_matrix(theta) -> np.ndarray:
    if isinstance(theta, OperatorMatrix):
        return theta.entries
    return np.asarray(theta, dtype=complex)


def is_unitary(m: np.ndarray, tol: float = 1e-10) -> bool:
    m = _as_matrix(m)
    return bool(
        np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))) <= tol
    )


def random_operator(n: int, rng) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_hermitian(n: int, rng) -> np.ndarray:
    a = random_operator(n, rng)
    return (a + a.conj().T) / 2


_GRID_CACHE: dict[int, list[list[np.ndarray]]] = {}
_PARITY_CACHE: dict[tuple[int, bool], list[list[np.ndarray]]] = {}


def _displacement_grid(n: int) -> list[list[np.ndarray]]:
    """The n x n grid of D(a, b, 0) position matrices (cached, read-only)."""
    if n not in _GRID_CACHE:
        _GRID_CACHE[n] = [
            [hw_matrix(HWElement.from_canonical(n, a, b, 0)) for b in range(n)]
            for a in range(n)
        ]
    return _GRID_CACHE[n]


def _parity_grid(n: int, doubled: bool = False) -> list[list[np.ndarray]]:
    if (n, doubled) not in _PARITY_CACHE:
        a_range = 2 * n if doubled else n
        _PARITY_CACHE[(n, doubled)] = [
            [parity_matrix(PhasePoint(n, a, b, doubled)) for b in range(n)]
            for a in range(a_range)
        ]
    return _PARITY_CACHE[(n, doubled)]


def resolution_identity_check(theta) -> float:
    """Residual of (1/n) sum_{a,b} D theta D^dagger = tr(theta) 1."""
    theta = _as_matrix(theta)
    n = theta.shape[0]
    grid = _displacement_grid(n)
    acc = np.zeros_like(theta)
    for a in range(n):
        for b in range(n):
            d = grid[a][b]
            acc += d @ theta @ d.conj().T
    acc /= n
    return float(np.max(np.abs(acc - np.trace(theta) * np.eye(n))))


def operator_expand(theta) -> tuple[np.ndarray, float]:
    """Expand theta over the displacement basis; return (coefficients, residual).

    theta = (1/n) sum_{a,b} D(a,b,0) tr[D(a,b,0)^dagger theta].  The adjoint
    here is the group adjoint D(-a,-b,0) of the continuum formalism; for odd
    n it coincides with canonical index negation, for even n the two differ
    by an exact sign (-1)^(a+b).
    """
    theta = _as_matrix(theta)
    n = theta.shape[0]
    grid = _displacement_grid(n)
    coeffs = np.zeros((n, n), dtype=complex)
    recon = np.zeros_like(theta)
    for a in range(n):
        for b in range(n):
            d = grid[a][b]
            coeffs[a, b] = np.trace(d.conj().T @ theta)
            recon += coeffs[a, b] * d
    recon /= n
    return coeffs, float(np.max(np.abs(recon - theta)))


def coherent_check(g: FiniteState) -> float:
    """Residual of the coherent-state resolution of the identity.

    The fiducial must be normalized; the projector carries the measure
    weight, so (1/n) sum_{a,b} |g_ab><g_ab| = 1.
    """
    if abs(norm(g) - 1.0) > 1e-9:
        raise ValueError("fiducial state must be normalized")
    n = g.n
    acc = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            v = displace(HWElement.from_canonical(n, a, b, 0), g).amplitudes
            acc += np.outer(v, v.conj())
    acc *= g.measure_weight / n
    return float(np.max(np.abs(acc - np.eye(n))))


@dataclass(frozen=True)
class ParityCheckResult:
    expansion_residual: float  # parity as character-weighted displacement sum
    sandwich_residual: float  # sum P theta P = tr(theta) 1
    tomography_residual: float  # theta = (1/n) sum P tr(theta P)


def parity_expand_check(theta, exploratory: bool = False) -> ParityCheckResult:
    """Finite analogs of the parity identities; guaranteed for odd n.

    For even n the doubled-grid variants are exploratory and only run when
    ``exploratory`` is set; residuals are then reported without any claim.
    """
    theta = _as_matrix(theta)
    n = theta.shape[0]
    if n % 2 == 0 and not exploratory:
        raise ValueError("unsupported regime: even n needs exploratory=True")
    doubled = n % 2 == 0
    a_range = 2 * n if doubled else n
    par = _parity_grid(n, doubled)
    disp = _displacement_grid(n)

    expansion = 0.0
    if not doubled:
        # P(a, b) = (1/n) sum_{a', b'} omega_n(2(a'b - ab')) D(a', b', 0),
        # evaluated over the whole grid with two tensor contractions
        stack = np.array(disp)  # (a', b', n, n)
        w = np.exp(2j * np.pi * np.arange(n)[:, None] * np.arange(n)[None, :] / n)
        w2 = w[:, (2 * np.arange(n)) % n]  # w2[x, y] = omega_n(2 x y)
        mid = np.tensordot(w2.conj(), stack, axes=(1, 1))  # (a, a', n, n)
        full = np.tensordot(w2, mid, axes=(0, 1))  # contract a': (b, a, n, n)
        for a in range(n):
            for b in range(n):
                acc = full[b, a] / n
                expansion = max(expansion, float(np.max(np.abs(acc - par[a][b]))))

    sandwich = np.zeros((n, n), dtype=complex)
    tomo = np.zeros((n, n), dtype=complex)
    for a in range(a_range):
        for b in range(n):
            p = par[a][b]
            sandwich += p @ theta @ p
            tomo += p * np.trace(theta @ p)
    weight = 1.0 / (2 * n if doubled else n)
    sandwich_res = float(
        np.max(np.abs(weight * sandwich - np.trace(theta) * np.eye(n)))
    )
    tomo_res = float(np.max(np.abs(weight * tomo - theta)))
    return ParityCheckResult(expansion, sandwich_res, tomo_res)


# ---------------------------------------------------------------------------
# Marginal operators
# ---------------------------------------------------------------------------


def _hat_values(momentum_values: np.ndarray) -> np.ndarray:
    """hat(y/2) = sum_P e(y P / 2n) F(P), indexed by y mod 2n."""
    n = len(momentum_values)
    y = np.arange(2 * n)
    kernel = np.exp(2j * np.pi * np.outer(y, np.arange(n)) / (2 * n))
    return kernel @ momentum_values


def marginal_a_matrix(n: int, a: int) -> np.ndarray:
    """A(a) = integral db D(a, b, 0), as a momentum-representation matrix.

    For even n the b-integral runs over Z(2n) with weight 1/(2n) because the
    half phases depend on b mod 2n.
    """
    x = np.arange(n)
    m = np.zeros((n, n), dtype=complex)
    if n % 2:
        shift = (x - 2 * a) % n
        for b in range(n):
            m[x, shift] += np.exp(2j * np.pi * (a * b - b * x) / n) / n
    else:
        shift = (x - a) % n
        for b in range(2 * n):
            m[x, shift] += (
                np.exp(2j * np.pi * (a * b / (2 * n) - b * x / n)) / (2 * n)
            )
    return m


def marginal_a_expected(gt: np.ndarray, ft: np.ndarray, a: int) -> complex:
    """[g~(a)]* f~(-a) on the momentum grid; 0 off-grid (odd a, even n)."""
    n = len(gt)
    if len(ft) != n:
        raise ValueError("dimension mismatch")
    if n % 2:
        return gt[a % n].conjugate() * ft[(-a) % n]
    if a % 2:
        return 0j
    return gt[(a // 2) % n].conjugate() * ft[(-(a // 2)) % n]


def marginal_b_matrix(n: int, b: int) -> np.ndarray:
    """B(b) = |2|-weighted integral da D(a, b, 0), momentum representation.

    Odd n: the plain sum over the a-grid.  Even n: the a-integrand for odd b
    depends on the coset section, so the operator is pinned by the canonical
    zero-integer-part phases, giving the rank-one kernel
    K[P, Q] = e(-b (P + Q) / 2n); for even b this equals the section sum.
    The index b runs mod 2n for even n.
    """
    x = np.arange(n)
    if n % 2:
        m = np.zeros((n, n), dtype=complex)
        for a in range(n):
            shift = (x - 2 * a) % n
            m[x, shift] += np.exp(2j * np.pi * (a * b - b * x) / n)
        return m
    p = np.arange(n)
    return np.exp(-2j * np.pi * b * (p[:, None] + p[None, :]) / (2 * n))


def marginal_b_expected(
    g_pos: np.ndarray, f_pos: np.ndarray, gt: np.ndarray, ft: np.ndarray, b: int
) -> complex:
    """[g(b/2)]* f(-b/2), through the hat transform when n is even."""
    n = len(ft)
    if n % 2:
        inv2 = pow(2, -1, n)
        return g_pos[(inv2 * b) % n].conjugate() * f_pos[(-inv2 * b) % n]
    gh = _hat_values(gt)
    fh = _hat_values(ft)
    return gh[b % (2 * n)].conjugate() * fh[(-b) % (2 * n)]


def parity_marginal_a_matrix(n: int, a: int) -> np.ndarray:
    """cal-A(a) = (1/n) sum_b P(a, b), momentum representation (odd n)."""
    if n % 2 == 0:
        raise ValueError("unsupported regime: parity marginals need odd n")
    acc = np.zeros((n, n), dtype=complex)
    for b in range(n):
        acc += parity_matrix(PhasePoint(n, a, b), MOMENTUM)
    return acc / n


def parity_marginal_b_matrix(n: int, b: int) -> np.ndarray:
    """cal-B(b) = sum_a P(a, b), momentum representation (odd n)."""
    if n % 2 == 0:
        raise ValueError("unsupported regime: parity marginals need odd n")
    acc = np.zeros((n, n), dtype=complex)
    for a in range(n):
        acc += parity_matrix(PhasePoint(n, a, b), MOMENTUM)
    return acc


def momentum_pairing(gt: np.ndarray, m: np.ndarray, ft: np.ndarray) -> complex:
    """(g~, M f~) with the counting measure on the momentum side."""
    return complex(np.vdot(gt, m @ ft))


# ---------------------------------------------------------------------------
# CRT tensor factorization
# ---------------------------------------------------------------------------


def _decompose_array(a: np.ndarray, tol: float) -> list[tuple[complex, list[np.ndarray]]]:
    if a.ndim == 1:
        return [(1.0 + 0j, [a.copy()])]
    m = a.reshape(a.shape[0], -1)
    scale = np.max(np.abs(m))
    if scale == 0.0:
        return []
    i0, j0 = np.unravel_index(np.argmax(np.abs(m)), m.shape)
    u = m[:, j0]
    v = m[i0, :] / m[i0, j0]
    if np.max(np.abs(m - np.outer(u, v))) <= tol * scale:
        rest = _decompose_array(v.reshape(a.shape[1:]), tol)
        return [(c, [u] + vecs) for c, vecs in rest]
    out = []
    basis = np.eye(a.shape[0])
    for i in range(a.shape[0]):
        sub = a[i]
        if np.max(np.abs(sub)) == 0.0:
            continue
        for c, vecs in _decompose_array(sub, tol):
            out.append((c, [basis[i].astype(complex)] + vecs))
    return out


def tensor_factor(
    f: FiniteState, tol: float = 1e-12
) -> list[tuple[complex, dict[int, FiniteState]]]:
    """Write f as a sum of product states over the prime-power components.

    Position indices split by the mu map, momentum indices by the nu-hat map.
    A product state comes back as a single term (factors up to scalar); the
    general fallback is the exact basis-slice decomposition with rank <= n.
    """
    factors = crt_idempotents(f.n)
    src, dims = (
        _mu_flat_indices if f.rep == POSITION else _nu_hat_flat_indices
    )(f.n)
    a = np.zeros(dims, dtype=complex)
    a.flat[src] = f.amplitudes
    terms = []
    for coeff, vecs in _decompose_array(a, tol):
        terms.append(
            (
                coeff,
                {
                    fac.p: FiniteState(fac.q, f.rep, vec)
                    for fac, vec in zip(factors, vecs)
                },
            )
        )
    return terms


def tensor_join(
    terms: list[tuple[complex, dict[int, FiniteState]]], n: int, rep: str
) -> FiniteState:
    factors = crt_idempotents(n)
    dims = tuple(f.q for f in factors)
    a = np.zeros(dims, dtype=complex)
    for coeff, parts in terms:
        cur = np.asarray(coeff, dtype=complex)
        for fac in factors:
            st = parts[fac.p]
            if st.n != fac.q or st.rep != rep:
                raise ValueError("factor does not match the prime-power component")
            cur = np.multiply.outer(cur, st.amplitudes)
        a = a + cur
    src, _ = (_mu_flat_indices if rep == POSITION else _nu_hat_flat_indices)(n)
    return FiniteState(n, rep, a.flat[src].copy())


def hw_factor(d: HWElement) -> dict[int, HWElement]:
    """Factor D on Z(n) into prime-power displacement operators.

    The continuum labels a and c split by exact partial fractions, the
    position shift b by reduction; the per-prime scalar phases absorb the
    half-phase bookkeeping so the matrix identity is exact.
    """
    factors = crt_idempotents(d.n)
    a_parts = rat_decompose(d.frak_a)
    c_parts = rat_decompose(d.frak_c)
    out = {}
    covered = ZERO_MOD1
    for fac in factors:
        ap = a_parts.get(fac.p)
        cp = c_parts.get(fac.p)
        c_local = cp.as_ratmod1 if cp is not None else ZERO_MOD1
        covered = covered + c_local
        out[fac.p] = HWElement.from_phase_space(
            fac.q,
            ap.as_ratmod1 if ap is not None else ZERO_MOD1,
            d.beta,
            c_local,
        )
    # scalar phase supported away from the primes of n rides on one factor
    extra = d.frak_c - covered
    if extra:
        p0 = factors[0].p
        out[p0] = hw_scalar_mul(out[p0], extra)
    return out


def hw_factor_matrix_check(d: HWElement) -> float:
    """Max-norm gap between matrix(D) and the remapped tensor of its factors."""
    factors = crt_idempotents(d.n)
    parts = hw_factor(d)
    full = np.array([[1.0 + 0j]])
    for fac in factors:
        full = np.kron(full, hw_matrix(parts[fac.p]))
    src, _ = _mu_flat_indices(d.n)
    remapped = full[np.ix_(src, src)]
    return float(np.max(np.abs(remapped - hw_matrix(d))))


# ---------------------------------------------------------------------------
# Generic unitary evolution
# ---------------------------------------------------------------------------


def evolve(u, f: FiniteState, tol: float = 1e-10) -> FiniteState:
    """Apply a unitary to the state's current-representation values."""
    u = _as_matrix(u)
    if u.shape != (f.n, f.n):
        raise ValueError("dimension mismatch")
    if not is_unitary(u, tol):
        raise ValueError("operator is not unitary to tolerance")
    return FiniteState(f.n, f.rep, u @ f.amplitudes)
