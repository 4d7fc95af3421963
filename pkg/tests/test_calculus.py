"""Operators, star conventions, Laplacians, symbols, and metric diagnostics."""

import random
from fractions import Fraction

import pytest

from ahodge import calculus as C
from ahodge.algebra import (
    ONE,
    SI,
    ZERO,
    Form,
    Scalar,
    TrigPoly,
    all_basis,
    l2_inner,
    random_form,
    random_scalar,
)

HALF = Fraction(1, 2)


def const_gen(I, J, dims, c=ONE):
    return Form.generator(I, J, TrigPoly.constant(c, dims))


class TestApplyD:
    def test_constant_function(self, kt, hyper, torus):
        for m in (kt, hyper, torus):
            assert C.apply_d(m, m.constant_form(Scalar(5, 3))).is_zero()

    def test_character_kt(self, kt):
        # d(chi_{(1,0,0)}) = i chi (phi^1 + phibar^1) in pi-units
        chi = kt.character_form((1, 0, 0))
        want = Form.generator((1,), (), TrigPoly.character((1, 0, 0), SI)) + Form.generator(
            (), (1,), TrigPoly.character((1, 0, 0), SI)
        )
        assert C.apply_d(kt, chi) == want

    def test_components_sum_to_d(self, kt, hyper):
        rng = random.Random(17)
        for m in (kt, hyper):
            for _ in range(20):
                p, q = rng.randint(0, 2), rng.randint(0, 2)
                a = random_form(rng, m.n, m.fourier_dims, p, q)
                total = Form()
                for w in ("mu", "del", "delbar", "mubar"):
                    total = total + C.component(m, a, w)
                assert total == C.apply_d(m, a)


class TestComponents:
    def test_delbar_phi2(self, kt):
        got = C.component(kt, const_gen((2,), (), 3), "delbar")
        want = const_gen((1,), (2,), 3, Scalar(2)) + const_gen((2,), (1,), 3, Scalar(2))
        assert got == want

    def test_mubar_phi2(self, kt):
        got = C.component(kt, const_gen((2,), (), 3), "mubar")
        assert got == const_gen((), (1, 2), 3, Scalar(-2))

    def test_mu_torus_zero(self, torus):
        rng = random.Random(1)
        for _ in range(10):
            a = random_form(rng, 2, 4, rng.randint(0, 2), rng.randint(0, 2))
            assert C.component(torus, a, "mu").is_zero()

    def test_rejects_mixed(self, kt):
        mixed = const_gen((1,), (), 3) + const_gen((), (1,), 3)
        with pytest.raises(ValueError):
            C.component(kt, mixed, "del")


class TestStar:
    def test_star_one_is_volume(self, kt, hyper, torus):
        for m in (kt, hyper, torus):
            assert C.star(m, m.constant_form()) == m.metric.volume

    def test_omega_self_dual(self, kt, hyper, torus):
        for m in (kt, hyper, torus):
            assert C.star(m, m.metric.omega) == m.metric.omega

    def test_antiself_dual_generator(self, kt):
        g = const_gen((1,), (2,), 3)
        assert C.star(kt, g) == -g

    def test_table_matches_defining_relation_oracle(self, kt, hyper, torus):
        for m in (kt, hyper, torus):
            for p in range(3):
                for q in range(3):
                    for b in all_basis(2, p, q):
                        g = const_gen(b.I, b.J, m.fourier_dims)
                        assert C.star(m, g) == C.star_oracle(m, g)

    def test_oracle_on_random_forms(self, kt, hyper):
        rng = random.Random(23)
        for m in (kt, hyper):
            for _ in range(10):
                a = random_form(rng, 2, m.fourier_dims, rng.randint(0, 2), rng.randint(0, 2))
                assert C.star(m, a) == C.star_oracle(m, a)

    def test_star_squared_sign(self, kt, hyper, torus):
        for m in (kt, hyper, torus):
            for p in range(3):
                for q in range(3):
                    for b in all_basis(2, p, q):
                        g = const_gen(b.I, b.J, m.fourier_dims)
                        want = g if (p + q) % 2 == 0 else -g
                        assert C.star(m, C.star(m, g)) == want

    def test_defining_relation_holds(self, kt):
        # alpha ^ star(conj beta) = <alpha, beta> vol on random same-bidegree pairs
        from ahodge.algebra import inner

        rng = random.Random(31)
        for _ in range(20):
            p, q = rng.randint(0, 2), rng.randint(0, 2)
            a = random_form(rng, 2, 3, p, q)
            b = random_form(rng, 2, 3, p, q)
            lhs = a.wedge(C.star(kt, b.conj()))
            rhs = kt.metric.volume.mul_tp(inner(a, b, kt.metric.norms))
            assert lhs == rhs


class TestAdjoints:
    def test_del_star_kills_functions(self, kt, hyper, torus):
        for m in (kt, hyper, torus):
            assert C.adjoint(m, m.constant_form(), "del_star").is_zero()
            assert C.adjoint(m, m.character_form((1,) + (0,) * (m.fourier_dims - 1)), "del_star").is_zero()

    def test_d_star_e4_hyperelliptic(self, hyper):
        # e^4 = (phi^2 - phibar^2)/(2i) is coclosed
        e4 = const_gen((2,), (), 4, Scalar(0, Fraction(-1, 2))) + const_gen(
            (), (2,), 4, Scalar(0, HALF)
        )
        assert C.adjoint(hyper, e4, "d_star").is_zero()

    @pytest.mark.parametrize("op,opstar", [
        ("d", "d_star"), ("del", "del_star"), ("delbar", "delbar_star"),
        ("mu", "mu_star"), ("mubar", "mubar_star"),
    ])
    def test_adjointness_exact(self, kt, hyper, op, opstar):
        rng = random.Random(hash(op) % 1000)
        shifts = {"d": [(1, 0), (0, 1), (2, -1), (-1, 2)], "del": [(1, 0)],
                  "delbar": [(0, 1)], "mu": [(2, -1)], "mubar": [(-1, 2)]}
        for m in (kt, hyper):
            done = 0
            while done < 12:
                p, q = rng.randint(0, 2), rng.randint(0, 2)
                dp, dq = shifts[op][rng.randrange(len(shifts[op]))]
                p2, q2 = p + dp, q + dq
                if not (0 <= p2 <= 2 and 0 <= q2 <= 2):
                    continue
                done += 1
                a = random_form(rng, 2, m.fourier_dims, p, q)
                b = random_form(rng, 2, m.fourier_dims, p2, q2)
                ta = C.apply_d(m, a) if op == "d" else C.component(m, a, op)
                lhs = l2_inner(ta, b, m.metric.norms)
                rhs = l2_inner(a, C.adjoint(m, b, opstar), m.metric.norms)
                assert lhs == rhs

    def test_unknown_adjoint(self, kt):
        with pytest.raises(ValueError):
            C.adjoint(kt, kt.constant_form(), "nope")


class TestLaplacians:
    def test_lap_d_constant(self, kt):
        r = C.laplacian(kt, kt.constant_form(), "lap_d")
        assert r.order4.is_zero() and r.order2.is_zero()

    def test_lap_bc_harmonic_11(self, kt):
        r = C.laplacian(kt, const_gen((1,), (1,), 3), "lap_bc")
        assert r.is_zero()

    def test_lap_bc_phibar2_nonzero(self, kt_half):
        r = C.laplacian(kt_half, const_gen((), (2,), 3), "lap_bc")
        assert not r.is_zero()

    def test_bc_aeppli_star_duality(self, kt, hyper):
        rng = random.Random(41)
        for m in (kt, hyper):
            for _ in range(15):
                p, q = rng.randint(0, 2), rng.randint(0, 2)
                a = random_form(rng, 2, m.fourier_dims, p, q)
                lb = C.laplacian(m, a, "lap_bc")
                la = C.laplacian(m, C.star(m, a), "lap_aeppli")
                assert C.star(m, lb.order4) == la.order4
                assert C.star(m, lb.order2) == la.order2


class TestSymbols:
    def test_zero_covector_gives_zero_matrix(self, kt):
        mat = C.principal_symbol(kt, "lap_bc", (0, 0), [ZERO, ZERO])
        assert mat == [[ZERO]]

    def test_mu_rejected(self, kt):
        with pytest.raises(ValueError):
            C.principal_symbol(kt, "mu", (1, 1), [ONE, ONE])
        with pytest.raises(ValueError):
            C.ellipticity_check(kt, "mu")

    def test_lap_bc_on_functions_oracle(self, kt):
        # only one fourth-order composition survives on (0,0); expand it
        # explicitly through wedge and star primitives
        rng = random.Random(51)
        for _ in range(10):
            comps = [random_scalar(rng) for _ in range(2)]
            if not any(comps):
                continue
            xi10 = Form()
            xi01 = Form()
            for a, c in enumerate(comps, start=1):
                xi10 = xi10 + const_gen((a,), (), 3, c)
                xi01 = xi01 + const_gen((), (a,), 3, c.conjugate())
            one = kt.constant_form()
            s_delbar = xi01.wedge(one).scale(SI)
            s_del = xi10.wedge(s_delbar).scale(SI)
            s_del_star = -C.star(kt, xi01.wedge(C.star(kt, s_del)).scale(SI))
            s_final = -C.star(kt, xi10.wedge(C.star(kt, s_del_star)).scale(SI))
            mat = C.principal_symbol(kt, "lap_bc", (0, 0), comps)
            zmode = (0, 0, 0)
            want = s_final.coeffs.get(list(one.coeffs)[0])
            got = mat[0][0]
            assert got == (want.terms.get(zmode, ZERO) if want else ZERO)
            assert got.im == 0 and got.re > 0

    def test_lap_delbar_function_symbol_positive_multiple(self, kt):
        rng = random.Random(52)
        for _ in range(10):
            comps = [random_scalar(rng) for _ in range(2)]
            if not any(comps):
                continue
            norm01 = ZERO
            for a, c in enumerate(comps, start=1):
                norm01 = norm01 + c * c.conjugate() * kt.metric.norms[a - 1]
            mat = C.principal_symbol(kt, "lap_delbar", (0, 0), comps)
            assert mat[0][0] == norm01  # |xi^{0,1}|^2 exactly, with unit norms

    def test_ellipticity_reports(self, kt, hyper):
        rep = C.ellipticity_check(kt, "lap_bc", samples=8, seed=7)
        assert rep["all_invertible"] and rep["samples"] == 8
        rep = C.ellipticity_check(hyper, "lap_delbar", samples=8, seed=7)
        assert rep["all_invertible"]
        rep = C.ellipticity_check(kt, "L", samples=8, seed=7)
        assert rep["all_invertible"] and rep["sign"] in (1, -1) and rep["min_ratio"] > 0


class TestDiagnostics:
    def test_gauduchon_defect_zero_everywhere(self, kt, hyper, torus):
        # kt and torus are almost Kahler; the hyperelliptic metric happens to
        # be Gauduchon already: frozen regression value is the zero form
        for m in (kt, torus, hyper):
            assert C.gauduchon_defect(m).is_zero()

    def test_hyperelliptic_delbar_omega_hand_value(self, hyper):
        # hand expansion: delbar omega = -(1/4) phi^{1 1b 2b} in pi-units
        got = C.component(hyper, hyper.metric.omega, "delbar")
        want = Form.generator((1,), (1, 2), TrigPoly.constant(Scalar(Fraction(-1, 4)), 4))
        assert got == want

    def test_lck_hyperelliptic_theta_e4(self, hyper):
        theta = C.solve_theta(hyper)
        e4 = const_gen((2,), (), 4, Scalar(0, Fraction(-1, 2))) + const_gen(
            (), (2,), 4, Scalar(0, HALF)
        )
        assert theta == e4
        rep = C.lck_check(hyper, theta)
        assert rep["conformal_eq"] and rep["theta_closed"] and rep["theta_harmonic_nonzero"]
        assert rep["strict_lck"] and not rep["almost_kahler"]

    def test_lck_kt_almost_kahler(self, kt):
        theta = C.solve_theta(kt)
        assert theta is not None and theta.is_zero() or theta == Form()
        rep = C.lck_check(kt, Form())
        assert rep["conformal_eq"] and rep["theta_closed"] and rep["almost_kahler"]
        assert not rep["strict_lck"]

    def test_lck_wrong_candidate_fails(self, hyper):
        # e^3 = (phi^1 - phibar^1)/(2i): conformal equation (a) must fail
        e3 = const_gen((1,), (), 4, Scalar(0, Fraction(-1, 2))) + const_gen(
            (), (1,), 4, Scalar(0, HALF)
        )
        rep = C.lck_check(hyper, e3)
        assert not rep["conformal_eq"]

    def test_gauduchon_needs_n2(self, kt):
        kt3 = type(kt)(
            "x", 3, 3, kt.char_base, kt.delta, {1: [], 2: [], 3: []},
            kt.derivations, [], kt.metric,
        )
        with pytest.raises(ValueError):
            C.gauduchon_defect(kt3)
