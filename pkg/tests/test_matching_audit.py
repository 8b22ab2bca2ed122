import numpy as np
import pytest

from emsym.audit import KNOWN_ISSUES, audit_catalog, audit_row, classify
from emsym.fields import monopole, stormer
from emsym.fields import transforms as T
from emsym.fields.catalog import ROWS
from emsym.liealg import SymGenerator
from emsym.matching import action_matrix, match_basis


@pytest.fixture(scope="module")
def stormer_report():
    return classify(stormer())


class TestMatching:
    def test_action_matrix_is_pushforward(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            h = T.GroupElement(eps7=float(rng.uniform(0.5, 2)), R=T.rotation(*rng.uniform(-3, 3, 3)),
                               shift=tuple(rng.uniform(-1, 1, 3)))
            c = rng.uniform(-1, 1, 8)
            img = T.pushforward(SymGenerator(0.0, tuple(c)), h)
            M = action_matrix(np.array(h.R, float), h.eps7, h.shift)
            np.testing.assert_allclose(M @ c, [float(v) for v in img.c], atol=1e-12)

    def test_stormer(self, stormer_report):
        m = stormer_report.match
        assert m["best"].startswith("sym3:6")
        assert m["bestTable"] == "Table 6 row 6 (k1=0,k2=3)"

    def test_stormer_moved_by_group_element(self):
        h = T.GroupElement(eps7=1.3, R=T.rotation(0.4, -0.7, 1.1), shift=(0.2, -0.1, 0.3))
        rep = classify(T.apply_equivalence(stormer(), h))
        assert rep.dimension == 2
        best = rep.match["matches"][0]
        assert best["key"] == "sym3:6"
        assert best["params"] == {"k1": "0", "k2": "3"}

    def test_monopole_contains_rotation_triple(self):
        rep = classify(monopole())
        assert rep.dimension == 4
        noe = rep.noether_match
        assert noe["bestTable"] == "Table 10 row 2"
        assert noe["matches"][0]["contained"]
        assert rep.match["bestTable"].startswith("Table 7 row 5")

    @pytest.mark.parametrize("key", ["sym2:3", "sym2:6", "sym3:2", "sym3:9", "sym4:5", "sym4:10", "noe2:2", "noe3:3"])
    def test_claimed_algebra_matches_its_own_row(self, key):
        S = np.array([g.as_array() for g in ROWS[key].claimed()])
        res = match_basis(S, key[:3])
        assert key in [m.key for m in res.matches]

    def test_empty_basis(self):
        assert match_basis(np.zeros((0, 8))).best is None

    def test_any_translation_is_the_z_translation_row(self):
        res = match_basis(np.array([[1, 0, 0, 0, 0, 0, 0, 0]], float))
        assert [m.key for m in res.matches] == ["sym2:8"]


class TestAudit:
    @pytest.mark.parametrize("key", ["sym3:5", "noe3:2"])
    def test_gauge_term_pair_is_warned(self, key):
        r = audit_row(key)
        assert r.status == "WARN"
        assert sorted(v.passed for v in r.variants) == [False, True]
        assert r.maxwell_ok

    def test_corrected_log_rows(self):
        r = audit_row("sym4:6", drift=False)
        assert r.status == "WARN"
        assert not r.variants[0].passed
        assert [v.passed for v in r.variants if v.variant == "corrected"] == [True]

    def test_clean_row_passes(self):
        r = audit_row("sym3:6")
        assert r.status == "PASS"
        assert all(c.field_residual < 1e-8 and c.oracle_residual < 1e-8 for c in r.variants[0].checks)

    def test_noether_rows_conserve_integrals(self):
        r = audit_row("noe4:2")
        v = r.variants[0]
        assert v.hamiltonian_drift < 1e-7
        assert all(c.drift < 1e-7 for c in v.checks)

    def test_full_catalog(self):
        rep = audit_catalog("all")
        assert rep.ok
        warned = {r.key for r in rep.rows if r.status == "WARN"}
        assert warned == set(KNOWN_ISSUES)
        assert rep.counts["FAIL"] == 0
        assert rep.counts["PASS"] + rep.counts["WARN"] == len(ROWS)
        assert "summary:" in rep.text()

    def test_unknown_scope(self):
        with pytest.raises(ValueError):
            audit_catalog("everything")
