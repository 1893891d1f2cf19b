"""
Family scan script.
Builds the standard family tables and compares them with their expected
columns where one exists.

Usage:
    python scripts/scan_families.py [--table NAME] [--limit N] [--out DIR] [--dry-run]

Options:
    --table NAME: One of classification, p22, bundles, lens, semidirect, all (default all)
    --limit N: Size parameter of the scans (|e| range, largest p, largest m)
    --out DIR: Write each table to DIR/<name>.csv
    --dry-run: List the tables that would be built without computing them
"""

import argparse
import sys
from pathlib import Path

import pandas as pd

# Add parent directory to path to import from services
sys.path.insert(0, str(Path(__file__).parent.parent))

from services.report_service import ReportService

TABLES = ["classification", "p22", "bundles", "lens", "semidirect"]


def build_table(service: ReportService, name: str, limit: int = None) -> pd.DataFrame:
    """Build one family table; limit scales the scan when given."""
    if name == "classification":
        return service.classification_table()
    if name == "p22":
        return service.p22_scan(-(limit or 20), limit or 20)
    if name == "bundles":
        return service.bundle_table(max_euler=limit or 14)
    if name == "lens":
        return service.lens_enumeration(max_p=limit or 9)
    if name == "semidirect":
        return service.semidirect_grid(max_m=limit or 30, max_n=limit or 30)
    raise ValueError(f"unknown table {name}")


# Column compared with "expected" in the tables that carry one
EXPECTATIONS = {
    "classification": "LocallyFlat",
    "p22": "hyperbolic",
    "lens": "status",
}


def scan_families(tables, limit: int = None, out: str = None, dry_run: bool = False) -> int:
    """
    Build and report the requested tables.

    Returns:
        Number of rows that disagree with their expected column
    """
    print("=" * 60)
    print("FAMILY SCAN")
    print("=" * 60)
    if dry_run:
        for name in tables:
            print(f"  would build {name} (limit {limit or 'default'})")
        return 0

    service = ReportService(category="both")
    out_dir = Path(out) if out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)

    total_bad = 0
    for name in tables:
        df = build_table(service, name, limit)
        print(f"\n{name}: {len(df)} rows")
        if name in EXPECTATIONS:
            bad = service.mismatches(df, EXPECTATIONS[name])
            total_bad += len(bad)
            print(f"  mismatches against expected: {len(bad)}")
            for row in bad[:5]:
                print(f"    {row}")
        elif name == "bundles":
            print(df.pivot(index="base", columns="e", values="status").to_string())
        elif name == "semidirect":
            print(f"  balanced: {int(df['balanced'].sum())}, nilpotent: {int(df['nilpotent'].sum())}")
            print(f"  inconsistent rows: {int((~df['consistent']).sum())}")
        if out_dir:
            service.export(df, str(out_dir / f"{name}.csv"))

    print("=" * 60)
    print(f"Total mismatches: {total_bad}")
    print("=" * 60)
    return total_bad


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Build the family tables")
    parser.add_argument("--table", choices=TABLES + ["all"], default="all", help="Table to build")
    parser.add_argument("--limit", type=int, default=None, help="Size parameter of the scans")
    parser.add_argument("--out", default=None, help="Directory for CSV exports")
    parser.add_argument("--dry-run", action="store_true", help="List the tables without computing them")

    args = parser.parse_args()
    selected = TABLES if args.table == "all" else [args.table]

    try:
        bad = scan_families(selected, limit=args.limit, out=args.out, dry_run=args.dry_run)
    except KeyboardInterrupt:
        print("\n\nOperation cancelled by user")
        sys.exit(1)
    sys.exit(1 if bad else 0)
