import pytest

from scripts.scan_families import build_table, scan_families
from services.report_service import ReportService


def test_scan_writes_tables_without_mismatches(tmp_path, capsys):
    assert scan_families(["p22", "semidirect", "bundles"], limit=6, out=str(tmp_path)) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["bundles.csv", "p22.csv", "semidirect.csv"]
    assert "Total mismatches: 0" in capsys.readouterr().out


def test_dry_run_builds_nothing(tmp_path, capsys):
    assert scan_families(["lens"], out=str(tmp_path), dry_run=True) == 0
    assert "would build lens" in capsys.readouterr().out
    assert not any(tmp_path.iterdir())


def test_unknown_table():
    with pytest.raises(ValueError):
        build_table(ReportService(), "knots")
