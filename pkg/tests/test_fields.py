import math

import numpy as np
import pytest

from emsym import expr as ex
from emsym.fields import (CatalogError, CatalogKey, catalog_instance, catalog_row, catalog_rows,
                          field_from_strings, monopole, stormer)
from emsym.fields import io
from emsym.fields import transforms as T
from emsym.fields.catalog import ROWS, TABLE_KEYS

rng = np.random.default_rng(42)


def stormer_B(p):
    # dipole field from the closed form (3 (m.r) r - m r^2) / r^5 with m = e_z
    r = np.linalg.norm(p)
    return (3 * p[2] * p - np.array([0, 0, 1.0]) * r * r) / r**5


class TestFieldSpec:
    def test_stormer_matches_dipole_formula(self):
        fs = stormer()
        pts = fs.sample_points(20, seed=1)
        B, E = fs.fields(pts)
        np.testing.assert_allclose(B, [stormer_B(p) for p in pts], rtol=1e-12, atol=1e-14)
        assert np.all(E == 0)

    def test_monopole_field(self):
        fs = monopole(lam=2)
        pts = fs.sample_points(20, seed=2)
        B, _ = fs.fields(pts)
        r = np.linalg.norm(pts, axis=1)
        np.testing.assert_allclose(B, 2 * pts / r[:, None] ** 3, rtol=1e-10)

    def test_scalar_and_vector_paths_agree(self):
        fs = catalog_instance("sym3:6")
        pts = fs.sample_points(5, seed=3)
        B, E = fs.fields(pts)
        for p, b, e in zip(pts, B, E):
            bs, es = fs.field_at(p)
            np.testing.assert_allclose(bs, b, rtol=1e-13)
            np.testing.assert_allclose(es, e, rtol=1e-13, atol=1e-15)

    def test_sample_points_respect_domain(self):
        fs = monopole()
        pts = fs.sample_points(40, seed=0)
        assert fs.domain.mask(pts).all()
        rho = np.hypot(pts[:, 0], pts[:, 1])
        assert rho.min() > fs.domain.r_abort

    def test_unbound_parameter_is_an_error(self):
        with pytest.raises(ex.UnboundSymbolError):
            field_from_strings(["k*y", "0", "0"]).fields(np.ones((1, 3)))


class TestCatalog:
    def test_keys_and_sizes(self):
        assert set(TABLE_KEYS) == {k.split(":")[0] for k in ROWS}
        assert [len(catalog_rows(t)) for t in TABLE_KEYS] == [8, 13, 16, 4, 5, 6]

    def test_stormer_recovered(self):
        key = CatalogKey("sym3", 6, {"k1": 0, "k2": 3}, {"F1": "0", "F3": "0", "F2": "(u^2+1)^(-3/2)"})
        fs = catalog_instance(key)
        ref = stormer()
        pts = ref.sample_points(30, seed=4)
        pts = pts[pts[:, 2] > 0.1]  # row domain: z > 0
        A1, _ = fs.potentials(pts)
        A2, _ = ref.potentials(pts)
        np.testing.assert_allclose(A1, A2, rtol=1e-12)

    def test_monopole_row(self):
        fs = catalog_instance("noe4:2", lam=3)
        pts = fs.sample_points(20, seed=5)
        B, _ = fs.fields(pts)
        r = np.linalg.norm(pts, axis=1)
        np.testing.assert_allclose(B, 3 * pts / r[:, None] ** 3, rtol=1e-9)

    def test_profile_only_row(self):
        key = CatalogKey("sym2", 8, {"lam": 0}, {"F1": "0", "F2": "0", "F3": "u1^2*u2 + sin(u2)"})
        fs = catalog_instance(key)
        row = catalog_row("sym2", 8)
        assert row.invariants  # profile arguments are the row invariants
        pts = fs.sample_points(10, seed=6)
        B, _ = fs.fields(pts)
        F3 = fs.bound().A[2]
        dy = ex.lambdify(ex.differentiate(F3, "y"), vectorized=True)(*pts.T)
        dx = ex.lambdify(ex.differentiate(F3, "x"), vectorized=True)(*pts.T)
        np.testing.assert_allclose(B[:, 0], dy, atol=1e-12)
        np.testing.assert_allclose(B[:, 1], -dx, atol=1e-12)
        np.testing.assert_allclose(B[:, 2], 0, atol=1e-12)

    def test_bad_key(self):
        with pytest.raises(CatalogError):
            catalog_instance("sym9:1")
        with pytest.raises(CatalogError):
            catalog_instance("sym3:99")
        with pytest.raises(CatalogError):
            catalog_instance("sym3:6:nonsense")

    @pytest.mark.parametrize("key", sorted(ROWS))
    def test_every_row_satisfies_maxwell(self, key):
        fs = catalog_instance(key)
        pts = fs.sample_points(30, seed=7)
        div_b, curl_e = fs.maxwell_residual(pts)
        assert div_b < 1e-9 and curl_e < 1e-9


class TestFieldFile:
    TEXT = "[potential]\nA1 = -k*y/r^3\nA2 = k*x/r^3\nA3 = 0\nPhi = 0\n\n[params]\nk = 2\n\n[domain]\nexclude = origin\n"

    def test_parse(self):
        fs = io.parse_field_text(self.TEXT, name="dip")
        assert fs.params == {"k": 2} and fs.domain.origin
        B, _ = fs.fields(np.array([[0.0, 0.0, 2.0]]))
        np.testing.assert_allclose(B[0], [0, 0, 0.5])

    def test_round_trip(self, tmp_path):
        fs = io.parse_field_text(self.TEXT)
        path = tmp_path / "f.field"
        io.write_field_file(fs, path)
        back = io.read_field_file(path)
        pts = fs.sample_points(10, seed=1)
        np.testing.assert_array_equal(back.fields(pts)[0], fs.fields(pts)[0])

    @pytest.mark.parametrize("text,key,offset", [
        ("[potential]\nA1 = x +* y\n", "A1", 3),
        ("[potential]\nA1 = 0\nA2 = 0\nA3 = 0\nPhi = sin(\n", "Phi", 4),
    ])
    def test_expression_errors_carry_offset(self, text, key, offset):
        with pytest.raises(io.FieldFileError) as info:
            io.parse_field_text(text)
        assert info.value.key == key and info.value.offset == offset
        assert f"at byte {offset}" in str(info.value)

    @pytest.mark.parametrize("text", [
        "A1 = x\n",                                  # no section
        "[potential]\nA1 = x\nB1 = y\n",              # unknown key
        "[potential]\nA1 = k*x\n[params]\nk = two\n",  # bad number
        "[potential]\nA1 = x\n[domain]\nexclude = moon\n",
    ])
    def test_structural_errors(self, text):
        with pytest.raises(io.FieldFileError):
            io.parse_field_text(text)


def random_element(seed):
    r = np.random.default_rng(seed)
    R = T.rotation(*r.uniform(-math.pi, math.pi, 3))
    return T.GroupElement(eps7=float(r.uniform(0.5, 2)), R=R, shift=tuple(r.uniform(-0.3, 0.3, 3)),
                          eps8=float(r.uniform(0.5, 2)), eps9=float(r.uniform(-1, 1)))


class TestEquivalence:
    def test_identity(self):
        fs = catalog_instance("sym3:6")
        out = T.apply_equivalence(fs, T.GroupElement())
        pts = fs.sample_points(10, seed=0)
        np.testing.assert_array_equal(out.fields(pts)[0], fs.fields(pts)[0])

    def test_pure_gauge_leaves_fields(self):
        fs = catalog_instance("sym3:4")
        g = ex.parse("x^2*sin(y) + exp(z/3)")
        out = T.apply_equivalence(fs, T.GroupElement(g=g))
        pts = fs.sample_points(30, seed=1)
        (B0, E0), (B1, E1) = fs.fields(pts), out.fields(pts)
        assert np.max(np.abs(B1 - B0)) < 1e-9 and np.max(np.abs(E1 - E0)) < 1e-9

    def test_rotation_about_dipole_axis(self):
        fs = stormer()
        h = T.GroupElement(R=T.rotation(eps4=math.pi / 2))
        out = T.apply_equivalence(fs, h)
        pts = fs.sample_points(20, seed=2)
        R = np.array(h.R, dtype=float)
        B_new = out.fields(pts @ R.T)[0]
        np.testing.assert_allclose(B_new, fs.fields(pts)[0] @ R.T, rtol=1e-10, atol=1e-14)
        np.testing.assert_allclose(out.fields(pts)[0], fs.fields(pts)[0], rtol=1e-10, atol=1e-14)

    def test_general_element_transforms_fields(self):
        # x' = eps7 R x + a, t' = eps8 t  gives  B' = R B / eps8 and E' = eps7 R E / eps8^2
        fs = catalog_instance("sym2:5")
        h = random_element(3)
        out = T.apply_equivalence(fs, h)
        pts = fs.sample_points(20, seed=3)
        R = np.array(h.R, dtype=float)
        mapped = np.array([h.point(p) for p in pts])
        B0, E0 = fs.fields(pts)
        B1, E1 = out.fields(mapped)
        np.testing.assert_allclose(B1, B0 @ R.T / h.eps8, rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(E1, h.eps7 * E0 @ R.T / h.eps8**2, rtol=1e-9, atol=1e-12)

    def test_inverse(self):
        h = random_element(4)
        p = np.array([0.3, -0.2, 0.9])
        np.testing.assert_allclose(h.inverse().point(h.point(p)), p, atol=1e-14)

    def test_discrete_maps(self):
        fs = catalog_instance("sym3:4")
        pts = fs.sample_points(10, seed=5)
        same = T.apply_discrete(fs, 1)
        A1, P1 = same.potentials(-pts)
        A0, P0 = fs.potentials(pts)
        np.testing.assert_array_equal(A1, A0)
        np.testing.assert_array_equal(P1, P0)
        flipped = T.apply_discrete(fs, 2)
        np.testing.assert_allclose(flipped.fields(pts)[0], -fs.fields(pts)[0], rtol=1e-14)
        swapped = T.apply_discrete(fs, 4, axes=(1, 2))
        assert swapped.A[0] == ex.substitute(fs.A[1], {"x": ex.Y, "y": ex.X}) or \
            np.allclose(swapped.potentials(pts[:, [1, 0, 2]])[0][:, 0], fs.potentials(pts)[0][:, 1])
