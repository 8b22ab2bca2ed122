import random
from fractions import Fraction as F

import numpy as np
import pytest

from emsym import expr as ex
from emsym import liealg as L
from emsym import optimal as O

B = L.EquivGenerator.basis


def close(a, b, tol=1e-10):
    return max(abs(float(x) - float(y)) for x, y in zip(a.c, b.c)) < tol


class TestTables:
    def test_row_counts(self):
        assert [len(O.TABLES[k]) for k in (2, 3, 4)] == [8, 13, 16]

    def test_two_dim_row_one(self):
        k1, k2 = F(2), F(3)
        Y1, Y2 = O.table_row(3, 1).basis({"k1": k1, "k2": k2})
        assert L.bracket(Y1, Y2) == B(3) * k1
        rep = O.check_subalgebra([Y1, Y2])
        assert rep.closed
        assert rep.structure[(0, 1)] == [k1, 0]
        assert rep.to_json()["structure"]["1,2"] == ["2", "0"]

    def test_translation_and_rotation_do_not_close(self):
        rep = O.check_subalgebra([B(1), B(4)])
        assert not rep.closed and rep.violations

    def test_rotation_triple_is_so3(self):
        rep = O.check_subalgebra(O.table_row(4, 5).basis({"lam": F(2)}))
        assert rep.closed and rep.gauge_residual < 1e-8
        assert rep.derived_dimension == 3
        assert O.is_compact_simple(rep)
        assert not O.has_2d_subalgebra(rep)
        # [Y_i, Y_j] = +-Y_k with a negative-definite Killing form
        np.testing.assert_allclose(rep.killing, -2 * np.eye(3))

    def test_rows_one_and_two_split_on_scaling_weights(self):
        assert O.canonicalize1D(B(4) + B(7) + B(8) * 2).class_id == 1
        assert O.canonicalize1D(B(4) + (B(7) + B(8)) * 2).class_id == 2

    def test_linearly_dependent_basis_rejected(self):
        with pytest.raises(ValueError):
            O.check_subalgebra([B(1), B(1) * 2])

    def test_full_sweep(self):
        res = O.verify_optimal_tables(3, seed=0)
        assert res["ok"]
        assert [res[f"table{k}"]["count"] for k in (2, 3, 4)] == [8, 13, 16]
        for row in res["table2"]["rows"].values():
            assert all(d["canonical_row"] == row["row"] and d["idempotent"] for d in row["draws"])
        for k in (3, 4):
            for row in res[f"table{k}"]["rows"].values():
                assert row["ok"], row
                assert all(d["closed"] for d in row["draws"])


class TestCanonicalize:
    def test_already_canonical(self):
        cc = O.canonicalize1D(B(4) + B(7) + B(8) * 2)
        assert (cc.class_id, cc.params, cc.witness, cc.scale) == (1, {"k1": 1, "k2": 2}, [], 1)

    def test_translation_killed_by_one_step(self):
        cc = O.canonicalize1D(B(1) + B(4))
        assert cc.class_id == 4 and cc.params == {"k": 0, "lam": 0}
        assert len(cc.witness) == 1
        step = cc.witness[0]
        assert step.kind == 2 and step.eps == 1
        assert cc.replay(B(1) + B(4)) == B(4)

    def test_row_eight(self):
        cc = O.canonicalize1D(B(3) + B(9) * 5 + B(8) * 0)
        assert cc.class_id == 8 and cc.params == {"lam": 5}

    @pytest.mark.parametrize("V", [B(9), B(8), B(8) * 3 + B(9), L.EquivGenerator.pure_gauge(ex.parse("x*y"))])
    def test_degenerate(self, V):
        cc = O.canonicalize1D(V)
        assert cc.degenerate and cc.class_id is None and cc.reason

    def test_generic_rotation_scaling_goes_to_row_one(self):
        rng = random.Random(5)
        for _ in range(50):
            c = [F(rng.randint(-4, 4)) for _ in range(6)] + [F(rng.randint(1, 4)), F(rng.randint(5, 8)), F(rng.randint(-3, 3))]
            if c[3] == c[4] == c[5] == 0:
                c[3] = F(1)
            V = L.EquivGenerator(tuple(c))
            cc = O.canonicalize1D(V)
            assert cc.class_id == 1
            assert close(cc.replay(V), cc.representative)

    def test_thousand_random_generators(self):
        rng = random.Random(7)
        counts = {}
        for _ in range(1000):
            V = O.random_generator(rng)
            cc = O.canonicalize1D(V)
            assert not cc.degenerate
            assert cc.class_id in range(1, 9)
            counts[cc.class_id] = counts.get(cc.class_id, 0) + 1
            assert close(cc.replay(V), cc.representative)
            # the representative is its own class
            again = O.canonicalize1D(cc.representative)
            assert again.class_id == cc.class_id and again.witness == [] and again.scale == 1
        assert len(counts) == 8

    def test_invariants_follow_rescaling(self):
        rng = random.Random(8)
        for _ in range(200):
            V = O.random_generator(rng)
            cc = O.canonicalize1D(V)
            c7, c8, c = (float(v) for v in L.invariants(V))
            r7, r8, r = (float(v) for v in L.invariants(cc.representative))
            s = float(cc.scale)
            assert r7 == pytest.approx(s * c7, abs=1e-10)
            assert r8 == pytest.approx(s * c8, abs=1e-10)
            assert r == pytest.approx(s * s * c, abs=1e-10)

    def test_exact_witness_without_rotations(self):
        V = B(1) * 3 + B(2) * F(-1, 2) + B(7) * 2 + B(8) + B(9) * 4
        cc = O.canonicalize1D(V)
        assert not any(s.is_rotation for s in cc.witness)
        assert cc.replay(V) == cc.representative
        assert all(isinstance(v, F) for v in cc.representative.c)

    def test_gauge_removal(self):
        V = L.EquivGenerator(B(3).c, ex.parse("x*y + sin(x) + z"))
        g = O.solve_related(V, V.gauge)
        assert g is not None
        out = L.adjoint_apply(L.AdjointStep("gauge", g=g), V)
        pts = np.random.default_rng(0).uniform(0.5, 1.5, (10, 3))
        vals = [ex.evaluate(out.gauge, dict(zip("xyz", p))) for p in pts]
        assert np.ptp(vals) < 1e-8
        cc = O.canonicalize1D(V, remove_gauge=True)
        assert cc.gauge_removed
