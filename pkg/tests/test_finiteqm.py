import math
from fractions import Fraction

import numpy as np
import pytest

from pqm.numbers import RatMod1
from pqm.finiteqm import (
    MOMENTUM,
    POSITION,
    FiniteState,
    HWElement,
    OperatorMatrix,
    PhasePoint,
    coherent_check,
    displace,
    evolve,
    fourier,
    fourier_good,
    fourier_matrix,
    hw_adjoint,
    hw_factor,
    hw_factor_matrix_check,
    hw_identity,
    hw_matrix,
    hw_mul,
    hw_x,
    hw_z,
    inner,
    is_unitary,
    marginal_a_expected,
    marginal_a_matrix,
    marginal_b_expected,
    marginal_b_matrix,
    momentum_pairing,
    norm,
    operator_expand,
    parity_apply,
    parity_expand_check,
    parity_marginal_a_matrix,
    parity_marginal_b_matrix,
    parity_matrix,
    parity_quarter_period,
    random_hermitian,
    random_operator,
    random_state,
    resolution_identity_check,
    tensor_factor,
    tensor_join,
    to_momentum,
    to_position,
    weyl_wigner,
)

RNG = np.random.default_rng(20240817)


def _frak_a(n: int, a: int, doubled: bool = False) -> Fraction:
    if n % 2:
        return Fraction(a, n)
    return Fraction(a, 4 * n if doubled else 2 * n)


def _parity_oracle(n: int, a: int, b: int, doubled: bool = False) -> np.ndarray:
    # position action straight from the phase-space formula:
    # P(a,b) f(x) = chi(-4a b - 4a x) f(-x - 2b)
    fa = _frak_a(n, a, doubled)
    m = np.zeros((n, n), dtype=complex)
    for x in range(n):
        ph = float(-4 * fa * (b + x))
        m[x, (-x - 2 * b) % n] = np.exp(2j * np.pi * ph)
    return m


class TestFourier:
    def test_uniform_goes_to_delta(self):
        for n in (2, 3, 5, 12):
            f = FiniteState(n, POSITION, np.ones(n))
            ft = fourier(f)
            want = np.zeros(n)
            want[0] = 1.0
            assert np.max(np.abs(ft.amplitudes - want)) < 1e-12

    def test_n2_basis_state(self):
        ft = fourier(FiniteState(2, POSITION, np.array([1.0, 0.0])))
        assert np.allclose(ft.amplitudes, [0.5, 0.5])
        assert ft.rep == MOMENTUM

    @pytest.mark.parametrize("n", range(2, 31))
    def test_involution_and_parseval(self, n):
        f = random_state(n, RNG)
        g = random_state(n, RNG)
        f4 = fourier(fourier(fourier(fourier(f))))
        assert np.max(np.abs(f4.amplitudes - f.amplitudes)) < 1e-12
        f2 = fourier(fourier(f))
        assert np.max(np.abs(f2.amplitudes - f.amplitudes[(-np.arange(n)) % n])) < 1e-12
        assert abs(inner(f, g) - inner(fourier(f), fourier(g))) < 1e-12

    def test_coordinate_change_roundtrip(self):
        f = random_state(7, RNG)
        assert np.max(np.abs(to_position(to_momentum(f)).amplitudes - f.amplitudes)) < 1e-12
        assert abs(inner(f, f) - inner(to_momentum(f), to_momentum(f))) < 1e-12

    def test_momentum_rep_source(self):
        f = random_state(6, RNG, rep=MOMENTUM)
        f4 = fourier(fourier(fourier(fourier(f))))
        assert np.max(np.abs(f4.amplitudes - f.amplitudes)) < 1e-12


class TestFourierGood:
    @pytest.mark.parametrize("n", [6, 10, 12, 15, 30, 36])
    def test_matches_direct(self, n):
        for rep in (POSITION, MOMENTUM):
            for _ in range(10):
                f = random_state(n, RNG, rep=rep)
                a = fourier(f).amplitudes
                b = fourier_good(f).amplitudes
                assert np.max(np.abs(a - b)) < 1e-12

    def test_prime_power_same_path(self):
        f = random_state(9, RNG)
        assert np.allclose(fourier_good(f).amplitudes, fourier(f).amplitudes)


class TestDisplacement:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 8, 12])
    def test_x_shifts(self, n):
        f = random_state(n, RNG)
        g = displace(hw_x(n), f)
        assert np.max(np.abs(g.amplitudes - f.amplitudes[(np.arange(n) - 1) % n])) < 1e-14

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 8, 12])
    def test_z_multiplies_by_character(self, n):
        f = random_state(n, RNG)
        g = displace(hw_z(n), f)
        w = np.exp(2j * np.pi * np.arange(n) / n)
        assert np.max(np.abs(g.amplitudes - w * f.amplitudes)) < 1e-13

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 8, 12, 16])
    def test_weyl_commutation(self, n):
        z, x = hw_matrix(hw_z(n)), hw_matrix(hw_x(n))
        for alpha in range(n):
            for beta in range(n):
                za = np.linalg.matrix_power(z, alpha)
                xb = np.linalg.matrix_power(x, beta)
                w = np.exp(2j * np.pi * alpha * beta / n)
                assert np.max(np.abs(za @ xb - w * (xb @ za))) < 1e-10

    @pytest.mark.parametrize("n", [2, 3, 4, 6, 9])
    def test_zn_xn_identity(self, n):
        for el in (hw_z(n), hw_x(n)):
            m = np.linalg.matrix_power(hw_matrix(el), n)
            assert np.max(np.abs(m - np.eye(n))) < 1e-12

    def test_zx_commutator_exact_phase(self):
        for n in (3, 4, 5, 6, 8):
            z, x = hw_z(n), hw_x(n)
            el = hw_mul(hw_mul(z, x), hw_mul(hw_adjoint(z), hw_adjoint(x)))
            assert (el.alpha, el.beta) == (0, 0)
            assert el.phase == RatMod1(1, n)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 8, 12, 16])
    def test_group_law_matches_matrices(self, n):
        for _ in range(20):
            a1, b1, g1 = RNG.integers(0, n, 3)
            a2, b2, g2 = RNG.integers(0, n, 3)
            d1 = HWElement.from_canonical(n, int(a1), int(b1), int(g1))
            d2 = HWElement.from_canonical(n, int(a2), int(b2), int(g2))
            lhs = hw_matrix(hw_mul(d1, d2))
            rhs = hw_matrix(d1) @ hw_matrix(d2)
            assert np.max(np.abs(lhs - rhs)) < 1e-12

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_adjoint_is_inverse_and_dagger(self, n):
        for _ in range(10):
            a, b, g = (int(v) for v in RNG.integers(0, n, 3))
            d = HWElement.from_canonical(n, a, b, g)
            assert hw_mul(d, hw_adjoint(d)) == hw_identity(n)
            m = hw_matrix(d)
            assert np.max(np.abs(hw_matrix(hw_adjoint(d)) - m.conj().T)) < 1e-12
            assert is_unitary(m, 1e-12)

    def test_cross_term_cancels_for_equal_labels(self):
        # the cross term a b' - a' b vanishes for equal labels, so the square
        # is the canonical element with doubled labels and gamma = 0
        d = HWElement.from_canonical(5, 2, 3, 0)
        assert hw_mul(d, d) == HWElement.from_canonical(5, 4, 6, 0)

    @pytest.mark.parametrize("n", [3, 4, 6, 8])
    def test_momentum_rep_consistent(self, n):
        # the momentum matrix is the conjugation of the position matrix by
        # the coordinate change
        w = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n) / n
        winv = np.exp(2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
        for _ in range(5):
            a, b, g = (int(v) for v in RNG.integers(0, n, 3))
            d = HWElement.from_canonical(n, a, b, g)
            assert np.max(np.abs(hw_matrix(d, MOMENTUM) - w @ hw_matrix(d) @ winv)) < 1e-11

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            displace(hw_x(3), random_state(4, RNG))


class TestParity:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 8, 12])
    def test_zero_point_is_reflection(self, n):
        f = random_state(n, RNG)
        g = parity_apply(PhasePoint(n, 0, 0), f)
        assert np.max(np.abs(g.amplitudes - f.amplitudes[(-np.arange(n)) % n])) < 1e-14

    @pytest.mark.parametrize("n", range(2, 13))
    def test_involution_and_hermitian(self, n):
        for _ in range(5):
            a = int(RNG.integers(0, n))
            b = int(RNG.integers(0, n))
            p = parity_matrix(PhasePoint(n, a, b))
            assert np.max(np.abs(p @ p - np.eye(n))) < 1e-12
            assert np.max(np.abs(p - p.conj().T)) < 1e-12
            if n % 2 == 0:
                pd = parity_matrix(PhasePoint(n, int(RNG.integers(0, 2 * n)), b, True))
                assert np.max(np.abs(pd @ pd - np.eye(n))) < 1e-12
                assert np.max(np.abs(pd - pd.conj().T)) < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 8])
    def test_matches_phase_space_formula(self, n):
        for a in range(n):
            for b in range(n):
                got = parity_matrix(PhasePoint(n, a, b))
                assert np.max(np.abs(got - _parity_oracle(n, a, b))) < 1e-12
        if n % 2 == 0:
            for a in range(2 * n):
                for b in range(n):
                    got = parity_matrix(PhasePoint(n, a, b, True))
                    assert np.max(np.abs(got - _parity_oracle(n, a, b, True))) < 1e-12

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
    def test_conjugation_definition(self, n):
        # P(a, b) = D(a,b,0)^dagger F^2 D(a,b,0) on the displacement grid
        neg = np.zeros((n, n))
        neg[np.arange(n), (-np.arange(n)) % n] = 1.0
        for _ in range(6):
            a, b = (int(v) for v in RNG.integers(0, n, 2))
            d = hw_matrix(HWElement.from_canonical(n, a, b, 0))
            want = d.conj().T @ neg @ d
            got = parity_matrix(PhasePoint(n, a, b))
            assert np.max(np.abs(got - want)) < 1e-12

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
    def test_equivalent_parity_factorizations(self, n):
        # D^dagger F^2 D = [D(2a,2b,0)]^dagger F^2 = F^2 D(2a,2b,0)
        from pqm.finiteqm import parity_displacement

        neg = np.zeros((n, n))
        neg[np.arange(n), (-np.arange(n)) % n] = 1.0
        for _ in range(6):
            a, b = (int(v) for v in RNG.integers(0, n, 2))
            dd = hw_matrix(parity_displacement(PhasePoint(n, a, b)))
            left = dd.conj().T @ neg
            right = neg @ dd
            assert np.max(np.abs(left - right)) < 1e-12
            assert np.max(np.abs(left - parity_matrix(PhasePoint(n, a, b)))) < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 8, 6, 12])
    def test_half_shift_sign_lemma(self, n):
        # shifting the a label by 1/2 fixes the operator for even shifts b
        # and negates it for odd b (the shift rides on the global
        # 2-component, so the parity of the integer b decides the sign)
        from pqm.numbers import RatMod1
        from fractions import Fraction

        for a in range(n):
            for b in range(n):
                el = HWElement.from_canonical(n, a, b, 0)
                shifted = HWElement.from_phase_space(
                    n,
                    RatMod1.of(el.frak_a.as_fraction + Fraction(1, 2)),
                    b,
                    el.frak_c,
                )
                sign = 1.0 if b % 2 == 0 else -1.0
                assert np.max(
                    np.abs(hw_matrix(shifted) - sign * hw_matrix(el))
                ) < 1e-12

    def test_quarter_period_even(self):
        for n in (2, 4, 6, 12):
            q = parity_quarter_period(n)
            assert q == n // 2
            for _ in range(4):
                a = int(RNG.integers(0, n - q))
                b = int(RNG.integers(0, n))
                p1 = parity_matrix(PhasePoint(n, a, b))
                p2 = parity_matrix(PhasePoint(n, a + q, b))
                assert np.max(np.abs(p1 - p2)) < 1e-12
                assert PhasePoint(n, a, b).canonical() == PhasePoint(n, a + q, b).canonical()
            qd = parity_quarter_period(n, doubled=True)
            assert qd == n
            pd1 = parity_matrix(PhasePoint(n, 1, 1, True))
            pd2 = parity_matrix(PhasePoint(n, 1 + n, 1, True))
            assert np.max(np.abs(pd1 - pd2)) < 1e-12

    def test_quarter_period_odd_absent(self):
        assert parity_quarter_period(9) is None
        pt = PhasePoint(9, 4, 2)
        assert pt.canonical() == pt


class TestWeylWigner:
    def test_weyl_at_origin_is_norm(self):
        for n in (3, 4, 7):
            f = random_state(n, RNG)
            assert abs(weyl_wigner(f, 0, 0, "weyl") - 1.0) < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 8])
    def test_wigner_real(self, n):
        f = random_state(n, RNG)
        for a in range(n):
            for b in range(n):
                w = weyl_wigner(f, a, b, "wigner")
                assert abs(w.imag) < 1e-12

    def test_n2_wigner_table(self):
        f = FiniteState(2, POSITION, np.array([1.0, 0.0]))
        # oracle: brute-force (f, P f) with the phase-space-formula parity
        for doubled in (False, True):
            a_range = 4 if doubled else 2
            for a in range(a_range):
                for b in range(2):
                    want = 0.5 * np.vdot(
                        f.amplitudes, _parity_oracle(2, a, b, doubled) @ f.amplitudes
                    )
                    got = weyl_wigner(f, a, b, "wigner", doubled)
                    assert abs(got - want) < 1e-12

    def test_weyl_matches_matrix_oracle(self):
        n = 5
        f = random_state(n, RNG)
        for a in range(n):
            for b in range(n):
                d = hw_matrix(HWElement.from_canonical(n, a, b, 0))
                want = np.vdot(f.amplitudes, d @ f.amplitudes) / n
                assert abs(weyl_wigner(f, a, b, "weyl") - want) < 1e-12

    @pytest.mark.parametrize("n", [3, 4, 6, 8])
    def test_values_representation_invariant(self, n):
        # (f, D f) and (f, P f) do not depend on the representation the
        # state happens to be stored in
        f = random_state(n, RNG)
        g = to_momentum(f)
        for _ in range(6):
            a, b = (int(v) for v in RNG.integers(0, n, 2))
            for kind in ("weyl", "wigner"):
                assert abs(
                    weyl_wigner(f, a, b, kind) - weyl_wigner(g, a, b, kind)
                ) < 1e-12


class TestTomography:
    def test_identity_input(self):
        assert resolution_identity_check(np.eye(4)) < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 12])
    def test_resolution_random(self, n):
        theta = random_operator(n, RNG)
        assert resolution_identity_check(theta) < 1e-11

    def test_expand_spike(self):
        n = 6
        el = HWElement.from_canonical(n, 2, 5, 0)
        coeffs, res = operator_expand(hw_matrix(el))
        assert res < 1e-12
        want = np.zeros((n, n))
        want[2, 5] = n
        assert np.max(np.abs(coeffs - want)) < 1e-11

    def test_expand_random_hermitian(self):
        theta = random_hermitian(5, RNG)
        _, res = operator_expand(theta)
        assert res < 1e-12

    def test_expand_zero(self):
        coeffs, res = operator_expand(np.zeros((3, 3)))
        assert res == 0.0
        assert np.max(np.abs(coeffs)) == 0.0

    def test_operator_matrix_wrapper(self):
        m = OperatorMatrix(np.eye(3))
        assert m.is_unitary()
        assert m.trace() == 3
        assert resolution_identity_check(m) < 1e-12

    def test_operator_matrix_product_and_adjoint(self):
        u = OperatorMatrix(hw_matrix(hw_z(4)))
        prod = u @ u.adjoint()
        assert np.max(np.abs(prod.entries - np.eye(4))) < 1e-12
        assert prod.n == 4
        with pytest.raises(ValueError):
            OperatorMatrix(np.ones((2, 3)))


class TestParityIdentities:
    @pytest.mark.parametrize("n", [3, 5, 7, 9])
    def test_odd_n_random(self, n):
        theta = random_operator(n, RNG)
        res = parity_expand_check(theta)
        assert res.expansion_residual < 1e-11
        assert res.sandwich_residual < 1e-11
        assert res.tomography_residual < 1e-11

    def test_theta_identity(self):
        res = parity_expand_check(np.eye(5))
        assert res.sandwich_residual < 1e-12

    def test_even_requires_flag(self):
        with pytest.raises(ValueError):
            parity_expand_check(np.eye(4))
        res = parity_expand_check(np.eye(4), exploratory=True)
        assert res.sandwich_residual < 1e-11  # doubled grid still averages to 1


class TestMarginals:
    @pytest.mark.parametrize("n", range(2, 11))
    def test_a_pairing(self, n):
        gt = random_state(n, RNG, rep=MOMENTUM)
        ft = random_state(n, RNG, rep=MOMENTUM)
        for a in range(n):
            got = momentum_pairing(gt.amplitudes, marginal_a_matrix(n, a), ft.amplitudes)
            want = marginal_a_expected(gt.amplitudes, ft.amplitudes, a)
            assert abs(got - want) < 1e-12

    @pytest.mark.parametrize("n", [3, 5, 7, 9, 15])
    def test_b_pairing_odd(self, n):
        gt = random_state(n, RNG, rep=MOMENTUM)
        ft = random_state(n, RNG, rep=MOMENTUM)
        g_pos = to_position(gt).amplitudes
        f_pos = to_position(ft).amplitudes
        for b in range(n):
            got = momentum_pairing(gt.amplitudes, marginal_b_matrix(n, b), ft.amplitudes)
            want = marginal_b_expected(g_pos, f_pos, gt.amplitudes, ft.amplitudes, b)
            assert abs(got - want) < 1e-12

    @pytest.mark.parametrize("n", [2, 4, 8, 16])
    def test_b_pairing_even_hat_path(self, n):
        gt = random_state(n, RNG, rep=MOMENTUM)
        ft = random_state(n, RNG, rep=MOMENTUM)
        g_pos = to_position(gt).amplitudes
        f_pos = to_position(ft).amplitudes
        for b in range(2 * n):
            got = momentum_pairing(gt.amplitudes, marginal_b_matrix(n, b), ft.amplitudes)
            want = marginal_b_expected(g_pos, f_pos, gt.amplitudes, ft.amplitudes, b)
            assert abs(got - want) < 1e-12
            if b % 2 == 0:
                # hat values at even arguments reduce to position values
                alt = g_pos[(b // 2) % n].conjugate() * f_pos[(-(b // 2)) % n]
                assert abs(want - alt) < 1e-12

    @pytest.mark.parametrize("n", [2, 4, 8])
    def test_b_even_b_matches_displacement_sum(self, n):
        # for even b the canonical kernel equals the plain section sum
        x = np.arange(n)
        for b in range(0, 2 * n, 2):
            acc = np.zeros((n, n), dtype=complex)
            for a in range(n):
                shift = (x - a) % n
                m = np.zeros((n, n), dtype=complex)
                m[x, shift] = np.exp(2j * np.pi * (a * b / (2 * n) - b * x / n))
                acc += m
            assert np.max(np.abs(acc - marginal_b_matrix(n, b))) < 1e-12

    @pytest.mark.parametrize("n", [3, 5, 7, 9, 15])
    def test_parity_marginals_odd(self, n):
        gt = random_state(n, RNG, rep=MOMENTUM)
        ft = random_state(n, RNG, rep=MOMENTUM)
        g_pos = to_position(gt).amplitudes
        f_pos = to_position(ft).amplitudes
        for a in range(n):
            got = momentum_pairing(
                gt.amplitudes, parity_marginal_a_matrix(n, a), ft.amplitudes
            )
            want = gt.amplitudes[(-2 * a) % n].conjugate() * ft.amplitudes[(-2 * a) % n]
            assert abs(got - want) < 1e-12
        for b in range(n):
            got = momentum_pairing(
                gt.amplitudes, parity_marginal_b_matrix(n, b), ft.amplitudes
            )
            want = g_pos[(-b) % n].conjugate() * f_pos[(-b) % n]
            assert abs(got - want) < 1e-12

    def test_a_zero_point(self):
        n = 6
        gt = random_state(n, RNG, rep=MOMENTUM)
        ft = random_state(n, RNG, rep=MOMENTUM)
        got = momentum_pairing(gt.amplitudes, marginal_a_matrix(n, 0), ft.amplitudes)
        assert abs(got - gt.amplitudes[0].conjugate() * ft.amplitudes[0]) < 1e-12


class TestCoherent:
    def test_basis_state_fiducial(self):
        n = 4
        v = np.zeros(n)
        v[1] = math.sqrt(n)  # normalized under the 1/n weight
        assert coherent_check(FiniteState(n, POSITION, v)) < 1e-12

    def test_random_fiducial_n6(self):
        assert coherent_check(random_state(6, RNG)) < 1e-12

    def test_momentum_fiducial(self):
        assert coherent_check(random_state(5, RNG, rep=MOMENTUM)) < 1e-12

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            coherent_check(FiniteState(3, POSITION, np.ones(3) * 2.0))


class TestTensor:
    def test_product_state_recovered(self):
        f2 = random_state(2, RNG)
        f3 = random_state(3, RNG)
        vals = np.array(
            [f2.amplitudes[x % 2] * f3.amplitudes[x % 3] for x in range(6)]
        )
        terms = tensor_factor(FiniteState(6, POSITION, vals))
        assert len(terms) == 1
        coeff, parts = terms[0]
        got = np.array(
            [coeff * parts[2].amplitudes[x % 2] * parts[3].amplitudes[x % 3] for x in range(6)]
        )
        assert np.max(np.abs(got - vals)) < 1e-12

    @pytest.mark.parametrize("n", [6, 12, 30])
    def test_join_inverts_factor(self, n):
        for rep in (POSITION, MOMENTUM):
            f = random_state(n, RNG, rep=rep)
            terms = tensor_factor(f)
            back = tensor_join(terms, n, rep)
            assert np.max(np.abs(back.amplitudes - f.amplitudes)) < 1e-12

    def test_fourier_factorizes(self):
        # F^(6) agrees with the tensor of component transforms via the remaps
        f = random_state(6, RNG)
        terms = tensor_factor(f)
        out_terms = [
            (c, {p: fourier(st) for p, st in parts.items()}) for c, parts in terms
        ]
        got = tensor_join(out_terms, 6, MOMENTUM)
        assert np.max(np.abs(got.amplitudes - fourier(f).amplitudes)) < 1e-12

    @pytest.mark.parametrize("n", [6, 10, 12, 15])
    def test_displacement_factorizes(self, n):
        for _ in range(8):
            a, b, g = (int(v) for v in RNG.integers(0, n, 3))
            assert hw_factor_matrix_check(HWElement.from_canonical(n, a, b, g)) < 1e-12

    def test_hw_factor_component_count(self):
        parts = hw_factor(HWElement.from_canonical(12, 5, 7, 1))
        assert set(parts) == {2, 3}
        assert parts[2].n == 4 and parts[3].n == 3

    def test_hw_factor_with_foreign_scalar_phase(self):
        # a scalar prefactor supported away from the primes of n must ride
        # on one factor and keep the matrix identity exact
        from pqm.finiteqm import hw_scalar_mul
        from pqm.numbers import RatMod1

        d = hw_scalar_mul(HWElement.from_canonical(6, 1, 5, 2), RatMod1(2, 7))
        assert hw_factor_matrix_check(d) < 1e-12


class TestEvolve:
    def test_identity(self):
        f = random_state(5, RNG)
        assert np.allclose(evolve(np.eye(5), f).amplitudes, f.amplitudes)

    def test_fourier_unitary(self):
        n = 6
        f = random_state(n, RNG)
        u = fourier_matrix(n)
        assert is_unitary(u, 1e-12)
        got = evolve(u, f)
        # the fixed-representation unitary stores sqrt(n) times the
        # measure-retagged fourier values
        assert np.max(
            np.abs(got.amplitudes - math.sqrt(n) * fourier(f).amplitudes)
        ) < 1e-12
        assert abs(norm(got) - norm(f)) < 1e-12

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            evolve(np.ones((3, 3)), random_state(3, RNG))
