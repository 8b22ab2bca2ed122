import csv
import io
import json

import pytest

from emsym import audit, cli

STORMER_FILE = """# dipole
[potential]
A1 = -y/r^3
A2 = x/r^3
A3 = 0
Phi = 0

[domain]
exclude = origin
"""


@pytest.fixture
def stormer_file(tmp_path):
    p = tmp_path / "stormer.field"
    p.write_text(STORMER_FILE)
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestClassify:
    def test_stormer_file(self, capsys, stormer_file):
        code, out, _ = run(capsys, "classify", stormer_file)
        assert code == cli.EXIT_OK
        rep = json.loads(out)
        assert rep["dimension"] == 2
        assert rep["match"]["bestTable"] == "Table 6 row 6 (k1=0,k2=3)"

    def test_monopole(self, capsys):
        code, out, _ = run(capsys, "classify", "builtin:monopole", "--format", "text")
        assert code == 0
        assert "dimension: 4  (noether: 4)" in out
        assert "noether match: Table 10 row 2" in out

    def test_byte_identical_json(self, capsys, stormer_file):
        _, a, _ = run(capsys, "classify", stormer_file, "--seed", "3")
        _, b, _ = run(capsys, "classify", stormer_file, "--seed", "3")
        assert a == b

    def test_parse_error_reports_byte_offset(self, capsys, tmp_path):
        p = tmp_path / "bad.field"
        p.write_text("[potential]\nA1 = x +* y\n")
        code, _, err = run(capsys, "classify", str(p))
        assert code == cli.EXIT_PARSE
        assert "at byte 3" in err and "A1" in err

    def test_missing_file_and_bad_catalog_key(self, capsys, tmp_path):
        assert run(capsys, "classify", str(tmp_path / "none.field"))[0] == cli.EXIT_PARSE
        assert run(capsys, "classify", "catalog:sym3:99")[0] == cli.EXIT_PARSE
        assert run(capsys, "classify", "builtin:sun")[0] == cli.EXIT_PARSE

    @pytest.mark.parametrize("attr,value,code", [("maxwell", (1e-3, 0.0), cli.EXIT_MAXWELL),
                                                  ("oracle_agreement", False, cli.EXIT_ORACLE)])
    def test_audit_failures_map_to_exit_codes(self, capsys, monkeypatch, attr, value, code):
        real = audit.classify

        def broken(*a, **kw):
            rep = real(*a, **kw)
            setattr(rep, attr, value)
            return rep

        monkeypatch.setattr(audit, "classify", broken)
        got, out, err = run(capsys, "classify", "builtin:stormer", "--no-match")
        assert got == code and err.startswith("error:")
        assert json.loads(out)  # the report is still written

    def test_out_file(self, capsys, tmp_path):
        dest = tmp_path / "rep.json"
        code, out, _ = run(capsys, "classify", "builtin:stormer", "--out", str(dest), "--no-match")
        assert code == 0 and out == ""
        assert json.loads(dest.read_text())["dimension"] == 2


class TestCanon:
    def test_already_canonical(self, capsys):
        code, out, _ = run(capsys, "canon", '{"c": [0, 0, 0, 1, 0, 0, 1, 2, 0]}')
        rep = json.loads(out)
        assert code == 0
        assert (rep["row"], rep["params"], rep["witness"]) == (1, {"k1": "1", "k2": "2"}, [])

    def test_translation_removed(self, capsys):
        code, out, _ = run(capsys, "canon", '{"c": [1, 0, 0, 1, 0, 0, 0, 0, 0]}')
        rep = json.loads(out)
        assert rep["row"] == 4 and rep["params"] == {"k": "0", "lam": "0"}
        assert rep["witness"] == [{"kind": 2, "eps": "1"}]

    def test_row_eight(self, capsys):
        _, out, _ = run(capsys, "canon", '{"c": [0, 0, 1, 0, 0, 0, 0, 0, 5]}', "--format", "text")
        assert out == "Table 2 row 8  lam=5\n"

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO('{"c": [0, 0, 1, 0, 0, 0, 0, 0, 0]}'))
        code, out, _ = run(capsys, "canon", "-")
        assert code == 0 and json.loads(out)["row"] == 8

    def test_degenerate(self, capsys):
        code, out, err = run(capsys, "canon", '{"c": [0, 0, 0, 0, 0, 0, 0, 1, 0]}')
        assert code == cli.EXIT_DEGENERATE
        assert json.loads(out)["degenerate"] and "degenerate" in err

    @pytest.mark.parametrize("arg", ['{"c": [1, 2', '{"c": [1, 2]}', '{"c": [0,0,0,0,0,0,0,0,0], "f": "x +"}'])
    def test_bad_input(self, capsys, arg):
        code, _, err = run(capsys, "canon", arg)
        assert code == cli.EXIT_PARSE and err.startswith("error:")


class TestVerifyTables:
    def test_optimal(self, capsys):
        code, out, _ = run(capsys, "verify-tables", "--scope", "optimal")
        rep = json.loads(out)
        assert code == 0 and rep["ok"]
        assert [rep["optimal"][f"table{k}"]["count"] for k in (2, 3, 4)] == [8, 13, 16]

    def test_symmetry_text(self, capsys):
        code, out, _ = run(capsys, "verify-tables", "--scope", "symmetry", "--format", "text")
        assert code == 0
        assert "WARN sym3:5" in out and "fail" in out and " 0 fail" in out

    def test_failure_gives_exit_one(self, capsys, monkeypatch):
        monkeypatch.setattr(audit.AuditReport, "ok", property(lambda self: False))
        assert run(capsys, "verify-tables", "--scope", "optimal")[0] == cli.EXIT_FAIL


class TestIntegrate:
    def test_csv_with_invariants(self, capsys, stormer_file):
        code, out, _ = run(capsys, "integrate", stormer_file, "--state", "1,0,0,0,0.3,0.1", "--t-end", "5",
                           "--invariant", "H", "--invariant", "L=x*vy - y*vx + (x^2+y^2)/r^3")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["t", "x", "y", "z", "vx", "vy", "vz", "H", "L"]
        H = [float(r[7]) for r in rows[1:]]
        L = [float(r[8]) for r in rows[1:]]
        assert float(rows[-1][0]) == 5.0
        assert max(H) - min(H) < 1e-9 and max(L) - min(L) < 1e-9

    def test_rk4_and_noether(self, capsys, stormer_file):
        code, out, _ = run(capsys, "integrate", stormer_file, "--state", "0,1,0,0,0,0.3,0.1", "--t-end", "1",
                           "--step", "0.01", "--invariant", "noether:0,0,0,0,1,0,0,0,0,0")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and len(rows) == 102 and rows[0][-1] == "I1"

    def test_domain_exit(self, capsys):
        code, out, err = run(capsys, "integrate", "builtin:monopole", "--state", "0.3,0,1,-5,0,0")
        assert code == cli.EXIT_DOMAIN
        assert "last valid state" in err
        assert len(out.strip().split("\n")) > 2

    @pytest.mark.parametrize("argv", [["--state", "1,2"], ["--state", "a,b,c,d,e,f"],
                                      ["--state", "1,0,0,0,0.3,0.1", "--invariant", "q*x"],
                                      ["--state", "1,0,0,0,0.3,0.1", "--invariant", "x +"]])
    def test_bad_arguments(self, capsys, argv):
        assert run(capsys, "integrate", "builtin:stormer", *argv)[0] == cli.EXIT_PARSE

    def test_bad_option_values(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["integrate", "builtin:stormer", "--state", "1,0,0,0,1,0", "--step", "-1"])
        assert info.value.code == 2


class TestInvolution:
    def test_monopole(self, capsys):
        code, out, _ = run(capsys, "involution", "builtin:monopole", "--states", "5", "--t-end", "5",
                           "--invariant", "H", "--invariant", "noether:0,0,0,0,0,0,1,0,0,0")
        rep = json.loads(out)
        assert code == 0 and rep["jacobianRank"] == 2
        assert max(max(r) for r in rep["brackets"]) < 1e-6
        assert max(rep["drift"]) < 1e-7

    def test_non_commuting_rotations_show_up(self, capsys):
        _, out, _ = run(capsys, "involution", "builtin:monopole", "--states", "3", "--t-end", "1",
                        "--invariant", "noether:0,0,0,0,0,0,1,0,0,0", "--invariant", "noether:0,0,0,0,1,0,0,0,0,0")
        assert json.loads(out)["brackets"][0][1] > 1e-3


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["--version"])
    assert info.value.code == 0
    assert capsys.readouterr().out.startswith("emsym ")
