"""
Self-test module.
A quick acceptance pass over the whole toolkit, used by the selftest
sub-command. Every check recomputes published values from scratch.
"""

import logging
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Callable, List

from services.linking_pairing import orthogonal_sum, pairing_e, pairing_lw
from services.nilpotent_homology import SemidirectGroup, homologically_balanced, integral_h2, wang_betti
from services.obstructions import Status, verdict_seifert_orientable_e0
from services.realization import ORDER_TWO_CLAUSE, EpsilonMode, realize
from services.report_service import ReportService
from services.seifert import SeifertData, euler_number, first_homology, orientable_matrix, presentation_homology
from utils.errors import InadmissiblePairingError, ToolkitError
from utils.integer_matrix import determinant

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 3)}


def _random_pairs(rng: random.Random, count: int, max_alpha: int = 12) -> tuple:
    pairs = []
    while len(pairs) < count:
        a = rng.randint(1, max_alpha)
        b = rng.randint(-2 * a, 2 * a)
        if gcd(a, b) == 1:
            pairs.append((a, b))
    return tuple(pairs)


def check_classification(service: ReportService) -> str:
    df = service.classification_table()
    bad = service.mismatches(df, "LocallyFlat")
    if bad:
        raise AssertionError(f"{len(bad)} mismatches, first {bad[0]['input']}")
    return f"{len(df)} descriptions"


def check_p22_scan(service: ReportService) -> str:
    df = service.p22_scan()
    bad = service.mismatches(df, "hyperbolic")
    if bad:
        raise AssertionError(f"e = {bad[0]['e']} disagrees")
    return f"e in [{df['e'].min()}, {df['e'].max()}]"


def check_determinant_identity(rng: random.Random, samples: int = 200) -> str:
    for _ in range(samples):
        s = SeifertData(0, _random_pairs(rng, rng.randint(1, 5)))
        expected = abs(euler_number(s)) * prod(s.alphas)
        if Fraction(abs(determinant(orientable_matrix(s)))) != expected:
            raise AssertionError(f"determinant identity fails for {s}")
    return f"{samples} data sets"


def check_nonorientable_homology(rng: random.Random, samples: int = 100) -> str:
    for _ in range(samples):
        s = SeifertData(-rng.randint(1, 3), _random_pairs(rng, rng.randint(0, 4)))
        if first_homology(s) != presentation_homology(s):
            raise AssertionError(f"cone-order formula disagrees with Smith normal form for {s}")
    return f"{samples} data sets"


def check_skew_symmetric() -> str:
    embeds = verdict_seifert_orientable_e0(SeifertData(0, ((3, 1), (3, -1), (5, 2), (5, -2))))
    fails = verdict_seifert_orientable_e0(SeifertData(0, ((3, 1), (5, -2), (15, 1))))
    if embeds.status != Status.EMBEDS or fails.status != Status.DOES_NOT_EMBED:
        raise AssertionError(f"got {embeds.status.value} and {fails.status.value}")
    return "skew pair embeds, (3,1)(5,-2)(15,1) does not"


def check_lens_sums(service: ReportService) -> str:
    df = service.lens_enumeration(max_p=9, max_summands=2)
    bad = service.mismatches(df, "status")
    if bad:
        raise AssertionError(f"{len(bad)} mismatches, first {bad[0]['lens']}")
    return f"{len(df)} sums"


def check_realization() -> str:
    targets = [
        orthogonal_sum(pairing_lw(Fraction(1, 3)), pairing_lw(Fraction(1, 3))),
        orthogonal_sum(pairing_lw(Fraction(1, 5)), pairing_lw(Fraction(-1, 5))),
        pairing_lw(Fraction(1, 4)),
        pairing_e(1, 0),
    ]
    for target in targets:
        if not realize(target, EpsilonMode.ZERO).verified:
            raise AssertionError(f"{target} not realized")
    try:
        realize(orthogonal_sum(pairing_e(4, 0), pairing_e(1, 0)), EpsilonMode.ZERO)
    except InadmissiblePairingError as e:
        if e.clause != ORDER_TWO_CLAUSE:
            raise AssertionError(f"wrong clause: {e.clause}")
    else:
        raise AssertionError("E0(4) + E0(1) was realized")
    return f"{len(targets)} pairings realized, one rejected"


def check_semidirect_grid(service: ReportService) -> str:
    df = service.semidirect_grid()
    if not df["balanced"].all() or not df["consistent"].all():
        raise AssertionError("a Z/m x|_n Z group failed the balance classification")
    if (df["nilpotent"] != df["m_divides_power"]).any():
        raise AssertionError("nilpotency differs from m | (n - 1)^k")
    return f"{len(df)} groups"


def check_wang_examples() -> str:
    profile = wang_betti(SemidirectGroup.cyclic(5, 1), 5)
    if (profile.b1, profile.b2) != (2, 2):
        raise AssertionError("Z/5 x Z over F_5")
    profile = wang_betti(SemidirectGroup.cyclic(8, 3), 2)
    if (profile.b1, profile.b2) != (2, 2):
        raise AssertionError("Z/8 x|_3 Z over F_2")
    if homologically_balanced(SemidirectGroup.direct_product((3, 3))).balanced:
        raise AssertionError("(Z/3)^2 x Z reported balanced")
    if integral_h2(SemidirectGroup.cyclic(7, 8)).divisors != (7,):
        raise AssertionError("H_2 of Z/7 x|_8 Z")
    return "Wang examples reproduced"


def run_selftest(seed: int = 20240101) -> List[CheckResult]:
    """Run every check; a failure is recorded, never raised."""
    rng = random.Random(seed)
    service = ReportService(category="topological")
    checks: List[tuple] = [
        ("classification table", lambda: check_classification(service)),
        ("P(2,2) hyperbolicity scan", lambda: check_p22_scan(service)),
        ("determinant identity", lambda: check_determinant_identity(rng)),
        ("non-orientable homology", lambda: check_nonorientable_homology(rng)),
        ("skew-symmetric decisiveness", check_skew_symmetric),
        ("lens sums", lambda: check_lens_sums(service)),
        ("realization", check_realization),
        ("Z/m x|_n Z grid", lambda: check_semidirect_grid(service)),
        ("Wang sequence", check_wang_examples),
    ]
    return [_run(name, check) for name, check in checks]


def _run(name: str, check: Callable[[], str]) -> CheckResult:
    start = time.perf_counter()
    try:
        detail = check()
        passed = True
    except (AssertionError, ToolkitError) as e:
        detail = str(e)
        passed = False
        logger.error("selftest %s failed: %s", name, e)
    return CheckResult(name, passed, detail, time.perf_counter() - start)
