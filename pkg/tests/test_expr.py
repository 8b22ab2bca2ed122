import math
import random

import numpy as np
import pytest
import sympy as sp

from emsym import expr as ex

STORMER_A1 = "-y/(x^2+y^2+z^2)^(3/2)"


def central(e, v, point, h=1e-5):
    lo, hi = dict(point), dict(point)
    lo[v] -= h
    hi[v] += h
    return (ex.evaluate(e, hi) - ex.evaluate(e, lo)) / (2 * h)


class TestParse:
    def test_sum_of_power(self):
        e = ex.parse("x^2 + y")
        assert isinstance(e, ex.Binary) and e.op == "add"
        assert e.left == ex.Binary("pow", ex.X, ex.Const(2))
        assert e.right == ex.Y

    def test_stormer_component_tree(self):
        e = ex.parse(STORMER_A1)
        assert e.free_symbols() == {"x", "y", "z"}
        val = ex.evaluate(e, {"x": 1, "y": 2, "z": 2})
        assert val == pytest.approx(-2 / 27, rel=1e-15)

    def test_parameters_and_trig(self):
        e = ex.parse("sin(z/k + a2)")
        assert ex.evaluate(e, {"z": math.pi, "k": 2, "a2": 0}) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("text,value", [
        ("-x^2", -4.0),           # unary minus binds looser than ^
        ("2^3^2", 512.0),         # right associative
        ("8/2/2", 2.0),
        ("-2*-x", 4.0),
        ("atan2(1, 1)*4", math.pi),
    ])
    def test_precedence(self, text, value):
        assert ex.evaluate(ex.parse(text), {"x": 2}) == pytest.approx(value)

    @pytest.mark.parametrize("text,offset", [("x +* y", 3), ("sin(x", 5), ("(x))", 3), ("x $ y", 2), ("", 0)])
    def test_syntax_errors_report_offset(self, text, offset):
        with pytest.raises(ex.ExprSyntaxError) as info:
            ex.parse(text)
        assert info.value.offset == offset
        assert f"at byte {offset}" in str(info.value)

    def test_offset_counts_bytes(self):
        with pytest.raises(ex.ExprSyntaxError) as info:
            ex.parse("λ + *")
        assert info.value.offset == len("λ + ".encode())

    @pytest.mark.parametrize("text", [STORMER_A1, "x*exp(-k*z)*cos(y)", "ln(z)/k - atan2(y, x)",
                                      "-(x - y)^2", "x - (y - z)", "x/(y*z)", "(-x)^2"])
    def test_round_trip(self, text):
        e = ex.parse(text)
        printed = ex.to_string(e)
        assert ex.parse(printed) == e
        assert ex.to_string(ex.parse(printed)) == printed


class TestDifferentiate:
    def test_power_rule(self):
        d = ex.differentiate(ex.parse("x^2 + y"), "x")
        assert ex.evaluate(d, {"x": 3.5, "y": 0}) == 7.0

    def test_log(self):
        d = ex.differentiate(ex.parse("ln(z)"), "z")
        assert ex.evaluate(d, {"z": 4.0}) == 0.25

    def test_stormer_against_central_difference(self):
        e = ex.parse(STORMER_A1)
        p = {"x": 1.0, "y": 1.0, "z": 1.0}
        exact = ex.evaluate(ex.differentiate(e, "x"), p)
        assert exact == pytest.approx(central(e, "x", p), rel=1e-8)

    def test_against_sympy(self):
        texts = ["x*exp(-k*z)*cos(y)", "sqrt(x^2+y^2)*atan2(y, x)", "ln(z/k)^3/(1+x^2)", STORMER_A1]
        xs, ys, zs, k = sp.symbols("x y z k")
        p = {"x": 0.7, "y": -0.4, "z": 1.3, "k": 2.0}
        for text in texts:
            e = ex.parse(text)
            se = sp.sympify(text.replace("^", "**").replace("ln", "log"), locals={"k": k})
            for v, s in zip("xyz", (xs, ys, zs)):
                ours = ex.evaluate(ex.differentiate(e, v), p)
                ref = float(sp.diff(se, s).subs({xs: p["x"], ys: p["y"], zs: p["z"], k: p["k"]}))
                assert ours == pytest.approx(ref, rel=1e-12, abs=1e-14), (text, v)

    def test_random_trees(self):
        rng = random.Random(1)

        def tree(depth):
            if depth == 0 or rng.random() < 0.2:
                return rng.choice(["x", "y", "z", str(rng.randint(1, 3)), "0.5"])
            kind = rng.randrange(7)
            a = tree(depth - 1)
            if kind < 3:
                return f"({a} {'+-*'[kind]} {tree(depth - 1)})"
            if kind == 3:
                return f"{rng.choice(['sin', 'cos'])}({a})"
            if kind == 4:
                return f"({a})^{rng.randint(2, 3)}"
            if kind == 5:
                return f"({a})/(1 + ({tree(depth - 1)})^2)"
            return f"exp(sin({a}))"

        for _ in range(1000):
            e = ex.parse(tree(6))
            p = {v: rng.uniform(-1, 1) for v in "xyz"}
            v = rng.choice("xyz")
            val = ex.evaluate(e, p)
            d = ex.evaluate(ex.differentiate(e, v), p)
            assert abs(d - central(e, v, p)) <= 1e-6 * (1 + abs(val) + abs(d))


class TestEvaluate:
    def test_product(self):
        assert ex.evaluate(ex.parse("x*y"), {"x": 2, "y": 3}) == 6

    def test_norm(self):
        assert ex.evaluate(ex.parse("sqrt(x^2+y^2)"), {"x": 3, "y": 4}) == 5

    def test_exponential_profile(self):
        from emsym.fields import CatalogKey, catalog_instance

        fs = catalog_instance(CatalogKey("sym2", 7, {"k": 1}, {"G": "1"}))
        assert "G" not in fs.Phi.free_symbols()
        assert ex.evaluate(fs.bound().Phi, {"x": 0.3, "y": 0.2, "z": 0.5}) == pytest.approx(math.exp(-1), rel=1e-14)

    def test_unbound(self):
        with pytest.raises(ex.UnboundSymbolError):
            ex.evaluate(ex.parse("x*k"), {"x": 1})

    @pytest.mark.parametrize("text", ["ln(x - 2)", "1/(x - 1)", "sqrt(-x)"])
    def test_domain_errors(self, text):
        with pytest.raises(ex.DomainError):
            ex.evaluate(ex.parse(text), {"x": 1})

    def test_vectorized_matches_scalar(self):
        e = ex.parse("x*exp(-y)*cos(z) + atan2(y, x)")
        pts = np.random.default_rng(0).uniform(0.2, 2, (50, 3))
        vec = ex.lambdify(e, vectorized=True)(pts[:, 0], pts[:, 1], pts[:, 2])
        sca = [ex.evaluate(e, dict(zip("xyz", p))) for p in pts]
        np.testing.assert_allclose(vec, sca, rtol=1e-14)


class TestVectorCalculus:
    def test_curl_of_linear_field(self):
        c = ex.curl([ex.parse("-y"), ex.parse("x"), ex.ZERO])
        assert [ex.evaluate(v, {"x": .1, "y": .2, "z": .3}) for v in c] == [0, 0, 2]

    def test_div_curl_vanishes(self):
        A = [ex.parse(STORMER_A1), ex.parse("x/(x^2+y^2+z^2)^(3/2)"), ex.ZERO]
        d = ex.divergence(ex.curl(A))
        f = ex.lambdify(d, vectorized=True)
        pts = np.random.default_rng(3).uniform(-2, 2, (100, 3))
        pts = pts[np.linalg.norm(pts, axis=1) > 0.3]
        assert np.max(np.abs(f(*pts.T))) < 1e-9

    def test_dipole_curl_on_axis(self):
        A = [ex.parse(STORMER_A1), ex.parse("x/(x^2+y^2+z^2)^(3/2)"), ex.ZERO]
        B = [ex.evaluate(c, {"x": 0, "y": 0, "z": 2}) for c in ex.curl(A)]
        # finite-difference curl oracle at the same point
        h = 1e-5
        comps = [ex.lambdify(a) for a in A]

        def d(i, j):
            p, m = [0.0, 0.0, 2.0], [0.0, 0.0, 2.0]
            p[j] += h
            m[j] -= h
            return (comps[i](*p) - comps[i](*m)) / (2 * h)

        fd = [d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)]
        np.testing.assert_allclose(B, [0, 0, 0.25], atol=1e-15)
        np.testing.assert_allclose(B, fd, atol=1e-9)

    def test_grad(self):
        g = ex.grad(ex.parse("x*y*z"))
        assert [ex.evaluate(c, {"x": 1, "y": 2, "z": 3}) for c in g] == [6, 3, 2]
