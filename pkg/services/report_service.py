"""
Report service module.
Evaluates batches of manifold descriptions in parallel and builds the
family tables (P(2,2) scan, circle bundles, lens sums, the classification
table and the Z/m x|_n Z grid) as pandas DataFrames.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations_with_replacement
from math import gcd
from pathlib import Path
from typing import Iterable, List, Optional

import pandas as pd

from constants.config import CONJ_BOUND, DEFAULT_CATEGORY, MAX_WORKERS, PARTITION_CAP
from services.linking_pairing import is_hyperbolic
from services.manifolds import LensSum, LensSummand, first_homology_of, is_double_of_mirror, lens_key
from services.nilpotent_homology import SemidirectGroup, divides_power, homologically_balanced
from services.obstructions import Status, evaluate, verdict_bundle, verdict_lens_sum
from services.seifert import SeifertData, normalize
from services.seifert_pairing import seifert_linking_pairing
from utils.errors import ToolkitError
from utils.parsers import parse_manifold

logger = logging.getLogger(__name__)

# The twelve manifolds that embed, plus the Poincare homology sphere
CLASSIFICATION_EMBEDS = [
    "M(0; (1,1))",
    "M(0; (2,1) (2,1) (2,1) (1,-2))",
    "M(0; (2,1) (3,1) (5,1) (1,-1))",
    "M(0; )",
    "TB[1,0;0,1]",
    "TB[-1,0;0,-1]",
    "TB[-1,4;0,-1]",
    "TB[1,1;0,1]",
    "M(-1; (2,1) (2,-1) (1,-2))",
    "NU[2,-1;1,0]",
    "NU[2,3;1,2]",
    "NU[2,-5;1,-2]",
    "NU[2,-9;1,-4]",
]

CLASSIFICATION_NEAR_MISSES = [
    "M(-1; (2,1) (2,-1))",
    "M(-1; (2,1) (2,-1) (1,-4))",
    "M(0; (3,1) (5,-2) (15,1))",
    "M(-1; (3,1) (3,2))",
    "SB(-1; 0)",
    "SB(-1; 4)",
    "SB(0; 2)",
    "SB(1; 2)",
    "SB(-2; 2)",
    "LS(+(3,1) # +(3,1))",
    "LS(+(2,1) # +(2,1))",
    "LS(+(5,1))",
    "LS(+(4,1) # -(4,1))",
    "TB[-1,2;0,-1]",
    "TB[1,2;0,1]",
    "TB[2,1;1,1]",
    "NU[6,-1;1,0]",
    "NU[2,7;1,4]",
    "NU[4,-1;1,0]",
    "NU[2,1;1,1]",
    "M(0; (2,1) (2,1) (4,3) (1,-2))",
]


class ReportService:
    """Service for batch verdicts and family tables."""

    def __init__(self, category: str = DEFAULT_CATEGORY, conj_bound: int = CONJ_BOUND, cap: int = PARTITION_CAP):
        """
        Initialize the report service.

        Args:
            category: Verdict categories to report ("topological", "smooth", "both")
            conj_bound: Entry bound for torus-bundle conjugator search
            cap: Partition enumeration cap
        """
        self.category = category
        self.conj_bound = conj_bound
        self.cap = cap
        self.df = pd.DataFrame()

    # ------------------------------------------------------------------
    # batch verdicts
    # ------------------------------------------------------------------

    def verdict_row(self, text: str) -> dict:
        """One table row for a manifold literal; input errors become an error column."""
        row = {"input": text.strip()}
        try:
            m = parse_manifold(text)
            row["kind"] = m.kind
            row["homology"] = str(first_homology_of(m))
            for verdict in evaluate(m, self.category, self.conj_bound, self.cap):
                row[verdict.category.value] = verdict.status.value
                if verdict.limited_by_bound:
                    row["limited"] = True
            row["error"] = ""
        except ToolkitError as e:
            row["error"] = str(e)
        return row

    def evaluate_batch(self, lines: Iterable[str]) -> pd.DataFrame:
        """
        Evaluate many descriptions in parallel; rows keep the input order.

        Args:
            lines: Manifold literals; blank lines and # comments are skipped

        Returns:
            DataFrame with one row per literal
        """
        texts = [line for line in lines if line.strip() and not line.lstrip().startswith("#")]
        logger.info("evaluating %d descriptions with %d workers", len(texts), MAX_WORKERS)
        with ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
            rows = list(executor.map(self.verdict_row, texts))
        self.df = pd.DataFrame(rows)
        if "limited" in self.df.columns:
            self.df["limited"] = self.df["limited"].fillna(False).astype(bool)
        return self.df

    # ------------------------------------------------------------------
    # family tables
    # ------------------------------------------------------------------

    def classification_table(self) -> pd.DataFrame:
        """The embedding list and its near misses with expected statuses."""
        df = self.evaluate_batch(CLASSIFICATION_EMBEDS + CLASSIFICATION_NEAR_MISSES)
        expected = [Status.EMBEDS.value] * len(CLASSIFICATION_EMBEDS)
        expected += [Status.DOES_NOT_EMBED.value] * len(CLASSIFICATION_NEAR_MISSES)
        df["expected"] = expected
        return df

    @staticmethod
    def p22_scan(low: int = -20, high: int = 20) -> pd.DataFrame:
        """Hyperbolicity of M(-1; (2,1), (2,-1), (1,-e)) against e = 2 mod 4."""
        rows = []
        for e in range(low, high + 1):
            s = SeifertData(-1, ((2, 1), (2, -1), (1, -e)))
            hyperbolic = is_hyperbolic(seifert_linking_pairing(normalize(s)))
            rows.append({"e": e, "data": str(s), "hyperbolic": hyperbolic, "expected": e % 4 == 2})
        return pd.DataFrame(rows)

    @staticmethod
    def bundle_table(max_genus: int = 5, max_crosscaps: int = 6, max_euler: int = 14) -> pd.DataFrame:
        """Circle-bundle verdicts over bases of genus <= max_genus or <= max_crosscaps crosscaps."""
        rows = []
        bases = list(range(0, max_genus + 1)) + [-c for c in range(1, max_crosscaps + 1)]
        for base in bases:
            for e in range(-max_euler, max_euler + 1):
                verdict = verdict_bundle(base, e)
                rows.append({"base": base, "e": e, "status": verdict.status.value})
        return pd.DataFrame(rows)

    @staticmethod
    def lens_enumeration(max_p: int = 9, max_summands: int = 3) -> pd.DataFrame:
        """Smooth verdicts for every sum of at most max_summands lens spaces with p <= max_p."""
        classes = sorted({lens_key(p, q) for p in range(2, max_p + 1) for q in range(1, p) if gcd(p, q) == 1})
        rows = []
        for size in range(1, max_summands + 1):
            for combo in combinations_with_replacement(classes, size):
                lens = LensSum(tuple(LensSummand(1, p, q) for p, q in combo))
                verdict = verdict_lens_sum(lens)
                rule = all(p % 2 for p, _ in combo) and is_double_of_mirror(lens)
                rows.append({
                    "lens": str(lens),
                    "summands": size,
                    "status": verdict.status.value,
                    "expected": (Status.EMBEDS if rule else Status.DOES_NOT_EMBED).value,
                })
        return pd.DataFrame(rows)

    @staticmethod
    def semidirect_grid(max_m: int = 30, max_n: int = 30) -> pd.DataFrame:
        """Balance and nilpotency of Z/m x|_n Z for 2 <= m <= max_m, |n| <= max_n."""
        rows = []
        for m in range(2, max_m + 1):
            for n in range(-max_n, max_n + 1):
                if n == 0 or gcd(m, n) != 1:
                    continue
                report = homologically_balanced(SemidirectGroup.cyclic(m, n))
                rows.append({
                    "m": m,
                    "n": n,
                    "balanced": report.balanced,
                    "nilpotent": report.nilpotent,
                    "m_divides_power": divides_power(m, n - 1),
                    "consistent": report.consistent,
                })
        return pd.DataFrame(rows)

    # ------------------------------------------------------------------
    # export
    # ------------------------------------------------------------------

    @staticmethod
    def export(df: pd.DataFrame, path: Optional[str]) -> None:
        """Write CSV, or JSON lines when the file name ends in .json."""
        if not path:
            return
        if Path(path).suffix == ".json":
            df.to_json(path, orient="records", lines=True)
        else:
            df.to_csv(path, index=False)
        logger.info("wrote %d rows to %s", len(df), path)

    @staticmethod
    def mismatches(df: pd.DataFrame, actual: str, expected: str = "expected") -> List[dict]:
        return df[df[actual] != df[expected]].to_dict("records")
