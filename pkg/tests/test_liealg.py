import math
import random
from fractions import Fraction as F
from itertools import combinations

import numpy as np
import pytest
import sympy as sp

from emsym import expr as ex
from emsym import liealg as L

# --- independent oracle: the generators as vector fields on (t, x, A, Phi) ---

t, x, y, z, A1, A2, A3, P = sp.symbols("t x y z A1 A2 A3 Phi")
COORDS = (t, x, y, z, A1, A2, A3, P)
_FIELDS = {
    1: {x: 1}, 2: {y: 1}, 3: {z: 1},
    4: {y: x, x: -y, A2: A1, A1: -A2},
    5: {x: z, z: -x, A1: A3, A3: -A1},
    6: {z: y, y: -z, A3: A2, A2: -A3},
    7: {x: x, y: y, z: z, A1: A1, A2: A2, A3: A3, P: 2 * P},
    8: {t: t, A1: -A1, A2: -A2, A3: -A3, P: -2 * P},
    9: {P: 1},
}


def vf(i):
    return [sp.sympify(_FIELDS[i].get(c, 0)) for c in COORDS]


def commutator(a, b):
    return [sp.expand(sum(a[k] * sp.diff(b[m], COORDS[k]) - b[k] * sp.diff(a[m], COORDS[k]) for k in range(8)))
            for m in range(8)]


def decompose(w):
    """Coefficients of w in V1..V9 (solved symbolically)."""
    cs = sp.symbols("k1:10")
    combo = [sum(cs[i - 1] * vf(i)[m] for i in range(1, 10)) for m in range(8)]
    eqs = []
    for m in range(8):
        eqs += sp.Poly(sp.expand(combo[m] - w[m]), *COORDS).coeffs()
    sol = sp.solve(eqs, cs, dict=True)
    assert sol, "commutator left the algebra"
    return [F(str(sol[0].get(c, 0))) for c in cs]


@pytest.fixture(scope="module")
def oracle_table():
    return {(i, j): decompose(commutator(vf(i), vf(j))) for i in range(1, 10) for j in range(1, 10)}


def e(i, coeff=1):
    return L.EquivGenerator(tuple(F(coeff) if k == i else F(0) for k in range(1, 10)))


def random_generator(rng, rational=True):
    if rational:
        return L.EquivGenerator(tuple(F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(9)))
    return L.EquivGenerator(tuple(rng.uniform(-2, 2) for _ in range(9)))


class TestBracket:
    def test_all_81_entries_match_vector_field_oracle(self, oracle_table):
        for (i, j), coeffs in oracle_table.items():
            got = L.bracket(e(i), e(j))
            assert list(got.c) == coeffs, (i, j)
            assert list(L.STRUCTURE[i - 1, j - 1]) == coeffs

    @pytest.mark.parametrize("i,j,k,coeff", [(1, 4, 2, 1), (7, 9, 9, -2), (2, 4, 1, -1), (5, 6, 4, 1), (8, 9, 9, 2)])
    def test_printed_entries(self, i, j, k, coeff):
        assert L.bracket(e(i), e(j)) == e(k, coeff)

    def test_antisymmetry_and_self_bracket(self):
        rng = random.Random(0)
        for _ in range(50):
            U, V = random_generator(rng), random_generator(rng)
            assert L.bracket(V, V).is_zero()
            assert L.bracket(U, V).c == tuple(-c for c in L.bracket(V, U).c)

    def test_bilinear(self):
        rng = random.Random(1)
        for _ in range(30):
            U, V, W = (random_generator(rng) for _ in range(3))
            a = F(rng.randint(-4, 4), 3)
            lhs = L.bracket(U * a + V, W)
            rhs = L.bracket(U, W) * a + L.bracket(V, W)
            assert lhs.c == rhs.c

    def test_jacobi_all_84_triples(self):
        triples = list(combinations(range(1, 10), 3))
        assert len(triples) == 84
        for i, j, k in triples:
            assert L.jacobi_residual(e(i), e(j), e(k)).is_zero()

    def test_gauge_bracket_matches_formula(self):
        # [V, V_g] = grad((eta . grad g) + (c8 - 2 c7) g)
        g = ex.parse("x^2*y + sin(z)")
        V = L.EquivGenerator((F(1), F(2), F(0), F(1), F(0), F(3), F(2), F(1), F(0)))
        Vg = L.EquivGenerator((F(0),) * 9, g)
        out = L.bracket(V, Vg)
        assert all(c == 0 for c in out.c)
        eta = V.eta()
        expect = ex.add(sum((ex.mul(eta[i], ex.differentiate(g, v)) for i, v in enumerate("xyz")), ex.ZERO),
                        ex.mul(ex.Const(-3), g))
        pts = np.random.default_rng(0).uniform(-1, 1, (10, 3))
        for p in pts:
            b = dict(zip("xyz", p))
            lhs = [ex.evaluate(c, b) for c in ex.grad(out.gauge)]
            rhs = [ex.evaluate(c, b) for c in ex.grad(expect)]
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestAdjoint:
    def test_rotation_quarter_turn_exact(self):
        out = L.adjoint_apply(L.AdjointStep(4, math.pi / 2), e(1))
        assert all(isinstance(c, F) for c in out.c)
        assert out.c[:3] in ((F(0), F(1), F(0)), (F(0), F(-1), F(0)))

    def test_scaling_fixed_point(self):
        V = L.EquivGenerator((0, 0, 0, 0, 0, 0, F(2), F(2), F(5)))
        out = L.adjoint_apply(L.AdjointStep(9, F(7)), V)
        assert out.c[8] == F(5)

    def test_invariants_readoff(self):
        V = e(4) + e(7, 2) + e(8, 3)
        assert L.invariants(V) == (2, 3, 1)

    def test_invariants_preserved_exactly(self):
        rng = random.Random(2)
        V = random_generator(rng)
        inv = L.invariants(V)
        for _ in range(500):
            kind = rng.choice([1, 2, 3, 7, 8, 9])
            eps = F(rng.randint(-3, 3), rng.randint(1, 3)) if kind != 7 and kind != 8 else F(rng.randint(1, 3))
            V = L.adjoint_apply(L.AdjointStep(kind, eps), V)
            assert L.invariants(V) == inv

    def test_rotation_composition_preserves_norm(self):
        V = L.EquivGenerator((F(1), F(2), F(3), F(1), F(-2), F(2), F(1), F(0), F(0)))
        W = V
        for k, a in ((4, 0.3), (5, -1.1), (6, 2.2)):
            W = L.adjoint_apply(L.AdjointStep(k, a), W)
        assert L.invariants(W)[2] == pytest.approx(float(L.invariants(V)[2]), abs=1e-13)
        assert L.invariants(W)[:2] == L.invariants(V)[:2]

    def test_adjoint_matches_matrix_exponential(self):
        # each closed-form step is the exponential of ad of its generator
        from scipy.linalg import expm

        rng = random.Random(3)
        for k in range(1, 10):
            W = random_generator(rng, rational=False)
            eps = 0.37
            step = L.step_for_flow(k, eps)
            got = np.array([float(c) for c in L.adjoint_apply(step, W).c])
            ad = L.ad_matrix(L.step_generator(step)).astype(float)
            ref = expm(eps * ad) @ np.array([float(c) for c in W.c])
            np.testing.assert_allclose(got, ref, atol=1e-12, err_msg=f"V{k}")

    def test_gauge_step_makes_f_constant(self):
        # V3 + V_f: a g with dg/dz = f turns the gauge part into a constant
        f = ex.parse("x*y + 2*z")
        V = L.EquivGenerator((0, 0, F(1), 0, 0, 0, 0, 0, 0), f)
        g = ex.parse("x*y*z + z^2")
        out = L.adjoint_apply(L.AdjointStep("gauge", g=g), V)
        assert ex.simplify(out.gauge).free_symbols() <= set() or all(
            abs(ex.evaluate(d, {"x": .3, "y": .4, "z": .5})) < 1e-12 for d in ex.grad(out.gauge))


class TestProjection:
    def test_v9_and_gauge_project_to_zero(self):
        assert L.project_to_symmetry(e(9)).is_zero()
        assert L.project_to_symmetry(L.EquivGenerator((0,) * 9, ex.parse("x*y"))).is_zero()

    def test_rotation_plus_scaling(self):
        k, lam = F(3, 2), F(5)
        V = e(4) + (e(7) + e(8) + e(9, lam)) * k
        s = L.project_to_symmetry(V)
        assert s.c == (0, 0, 0, 1, 0, 0, k, k)
