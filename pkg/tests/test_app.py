import json

import pytest

import app
from constants.config import SCHEMA_VERSION
from services.selftest import CheckResult
from utils.errors import OracleBoundError

POINCARE = "M(0; (2,1) (3,1) (5,1) (1,-1))"
HANTZSCHE_WENDT = "M(-1; (2,1) (2,-1))"


def run_json(capsys, *argv):
    code = app.main([*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


class TestHomologyAndPairing:
    def test_homology_json(self, capsys):
        code, payload = run_json(capsys, "homology", POINCARE)
        assert code == 0
        assert payload["schema_version"] == SCHEMA_VERSION
        assert payload["free_rank"] == 0 and payload["divisors"] == []
        assert payload["euler_options"] == [[1, 1]]

    def test_homology_text(self, capsys):
        assert app.main(["homology", HANTZSCHE_WENDT]) == 0
        out = capsys.readouterr().out
        assert "H_1 = Z/4 + Z/4" in out

    def test_pairing_of_lens_space(self, capsys):
        code, payload = run_json(capsys, "pairing", "M(0; (1,5))")
        assert code == 0
        assert payload["group"]["divisors"] == [5]
        assert payload["hyperbolic"] is False


class TestVerdict:
    def test_inline_verdict(self, capsys):
        assert app.main(["verdict", HANTZSCHE_WENDT, "--category", "topological"]) == 0
        out = capsys.readouterr().out
        assert "LocallyFlat: DoesNotEmbed" in out
        assert "[FAIL] hyperbolic-pairing" in out

    def test_verdict_json(self, capsys):
        code, payload = run_json(capsys, "verdict", POINCARE)
        assert code == 0
        statuses = {v["category"]: v["status"] for v in payload["verdicts"]}
        assert statuses == {"LocallyFlat": "Embeds", "SmoothOnly": "DoesNotEmbed"}
        assert payload["limited_by_bound"] is False

    def test_needs_exactly_one_input(self, capsys):
        assert app.main(["verdict"]) == 1
        assert "exactly one input" in capsys.readouterr().err

    def test_batch_writes_table(self, capsys, tmp_path):
        batch = tmp_path / "manifolds.txt"
        batch.write_text(f"{POINCARE}\n\n{HANTZSCHE_WENDT}\n", encoding="utf-8")
        out = tmp_path / "verdicts.csv"
        assert app.main(["verdict", "--batch", str(batch), "--out", str(out)]) == 0
        assert out.is_file()
        assert HANTZSCHE_WENDT in capsys.readouterr().out

    def test_batch_with_bad_line_exits_one(self, tmp_path):
        batch = tmp_path / "manifolds.txt"
        batch.write_text("M(0; (4,2))\n", encoding="utf-8")
        assert app.main(["verdict", "--batch", str(batch)]) == 1

    def test_missing_batch_file(self, capsys, tmp_path):
        assert app.main(["verdict", "--batch", str(tmp_path / "absent.txt")]) == 1
        assert "not found" in capsys.readouterr().err


class TestErrors:
    def test_parse_error_exits_one(self, capsys):
        assert app.main(["homology", "M(0; (4,2))"]) == 1
        err = capsys.readouterr().err
        assert err.startswith("error:") and "column 6" in err

    def test_oracle_bound_exits_two(self, capsys, monkeypatch):
        def too_large(*args, **kwargs):
            raise OracleBoundError("group order 4096 exceeds the oracle bound 1024")

        monkeypatch.setattr(app, "realize", too_large)
        assert app.main(["realize", "lw(1/3)"]) == 2
        assert capsys.readouterr().err.startswith("unknown:")


class TestRealizeAndNilpotent:
    def test_realize_zero_mode(self, capsys):
        code, payload = run_json(capsys, "realize", "lw(1/4)", "--mode", "zero")
        assert code == 0
        assert payload["verified"] is True
        assert payload["epsilon"] == "0"

    def test_semidirect_over_prime(self, capsys):
        code, payload = run_json(capsys, "nilpotent", "--semidirect", "8,3", "--field", "2")
        assert code == 0
        assert (payload["betti"]["b1"], payload["betti"]["b2"]) == (2, 2)

    def test_semidirect_balance_report(self, capsys):
        code, payload = run_json(capsys, "nilpotent", "--semidirect", "7,8")
        assert code == 0
        assert payload["balanced"] is True
        assert payload["h2"]["divisors"] == [7]

    def test_abelian_group(self, capsys):
        code, payload = run_json(capsys, "nilpotent", "--abelian", "3,3", "--field", "3")
        assert code == 0
        assert (payload["betti"]["b1"], payload["betti"]["b2"]) == (2, 3)

    @pytest.mark.parametrize(
        "argv",
        [
            ["nilpotent"],
            ["nilpotent", "--semidirect", "8,3", "--field", "4"],
            ["nilpotent", "--semidirect", "8"],
            ["nilpotent", "--abelian", "3,x"],
        ],
    )
    def test_bad_nilpotent_arguments(self, argv, capsys):
        assert app.main(argv) == 1
        assert capsys.readouterr().err.startswith("error:")


class TestSelftestCommand:
    def test_failure_exits_one(self, capsys, monkeypatch):
        results = [CheckResult("lens sums", True, "ok"), CheckResult("realization", False, "l1/5")]
        monkeypatch.setattr(app, "run_selftest", lambda: results)
        code, payload = run_json(capsys, "selftest")
        assert code == 1
        assert (payload["passed"], payload["failed"]) == (1, 1)

    def test_all_passing(self, capsys, monkeypatch):
        monkeypatch.setattr(app, "run_selftest", lambda: [CheckResult("lens sums", True, "ok")])
        assert app.main(["selftest"]) == 0
        assert "1/1 checks passed" in capsys.readouterr().out
