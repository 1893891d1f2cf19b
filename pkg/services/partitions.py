"""
Partition module.
Set-partition combinatorics on the fractions b_i / a_i of strict Seifert data
with positive Euler number: bounded partitions, the deficit lemma,
partitionability and the shape families for k = 2e - 1 and k = 2e.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple

from constants.config import PARTITION_CAP, SHAPE_SEARCH_BOUND
from utils.errors import UnsupportedError
from utils.residues import lcm

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]
Partition = Tuple[Tuple[int, ...], ...]


def bounded_partitions(weights: Sequence[Fraction], max_classes: int, cap: Fraction = Fraction(1)) -> Iterator[Partition]:
    """
    Yield every set partition of range(len(weights)) into at most max_classes
    classes whose weight sums are all <= cap.

    Elements are placed in index order, each into an existing class or a new
    one, so every partition is produced exactly once.
    """
    n = len(weights)
    classes: List[List[int]] = []
    sums: List[Fraction] = []

    def place(i: int) -> Iterator[Partition]:
        if i == n:
            yield tuple(tuple(c) for c in classes)
            return
        w = weights[i]
        for j in range(len(classes)):
            if sums[j] + w <= cap:
                classes[j].append(i)
                sums[j] += w
                yield from place(i + 1)
                sums[j] -= w
                classes[j].pop()
        if len(classes) < max_classes and w <= cap:
            classes.append([i])
            sums.append(w)
            yield from place(i + 1)
            sums.pop()
            classes.pop()

    yield from place(0)


def _weights(strict: Sequence[Pair]) -> List[Fraction]:
    return [Fraction(b, a) for a, b in strict]


def partition_lemma_violations(strict: Sequence[Pair], e: int) -> List[Partition]:
    """
    Partitions contradicting the deficit lemma for data whose torsion is a
    direct double: any partition into n <= e classes with class sums <= 1
    must have n = e and exactly one class with sum below 1, of deficit
    1 / lcm(a_i).

    Returns:
        The offending partitions (empty when the lemma holds)
    """
    weights = _weights(strict)
    deficit = Fraction(1, lcm(*[a for a, _ in strict])) if strict else Fraction(0)
    bad = []
    for partition in bounded_partitions(weights, e):
        sums = [sum((weights[i] for i in c), Fraction(0)) for c in partition]
        short = [1 - s for s in sums if s < 1]
        if len(partition) != e or len(short) != 1 or short[0] != deficit:
            bad.append(partition)
    return bad


def _target_partitions(weights: Sequence[Fraction], e: int, deficit: Fraction) -> List[frozenset]:
    found = []
    for partition in bounded_partitions(weights, e):
        if len(partition) != e:
            continue
        sums = sorted(sum((weights[i] for i in c), Fraction(0)) for c in partition)
        if sums[0] == 1 - deficit and all(s == 1 for s in sums[1:]):
            found.append(frozenset(frozenset(c) for c in partition))
    return found


def _separated(p: frozenset, q: frozenset) -> bool:
    # no non-empty union of a proper subset of classes of q is a union of classes of p
    q_classes = list(q)
    for size in range(1, len(q_classes)):
        for chosen in combinations(q_classes, size):
            union = frozenset().union(*chosen)
            if all(c <= union or not (c & union) for c in p):
                return False
    return True


def is_partitionable(strict: Sequence[Pair], e: int, direct_double: bool, cap: int = PARTITION_CAP) -> bool:
    """
    Two partitions into e classes, one of sum 1 - 1/lcm and the rest of sum
    1, such that no proper union of classes of the second is a union of
    classes of the first; the torsion must also be a direct double.

    Raises:
        UnsupportedError: More than cap cone points
    """
    if len(strict) > cap:
        raise UnsupportedError(f"{len(strict)} cone points exceed the partition cap {cap}")
    if not direct_double or e < 1 or not strict:
        return False
    weights = _weights(strict)
    deficit = Fraction(1, lcm(*[a for a, _ in strict]))
    candidates = _target_partitions(weights, e, deficit)
    logger.debug("%d candidate partitions into %d classes", len(candidates), e)
    for p in candidates:
        for q in candidates:
            if _separated(p, q):
                return True
    return False


# ==============================================================================
# SHAPE FAMILIES
# ==============================================================================


@dataclass(frozen=True)
class ShapeMatch:
    """Outcome of matching strict data against the k = 2e - 1 or k = 2e families."""

    case: str  # "odd" (k = 2e - 1) | "even" (k = 2e) | "none"
    matched: bool
    shape: Optional[int] = None
    parameters: tuple = ()
    exhaustive: bool = True


def odd_shape(strict: Sequence[Pair], e: int) -> Optional[int]:
    """alpha with S' = {e (alpha, alpha - 1), (e - 1) (alpha, 1)}, or None."""
    alphas = {a for a, _ in strict}
    if len(alphas) != 1:
        return None
    alpha = alphas.pop()
    expected = Counter({(alpha, alpha - 1): e})
    expected[(alpha, 1)] += e - 1
    return alpha if Counter(strict) == +expected else None


def _even_family(p: int, q: int, r: int, s: int, x: int, y: int, z: int) -> Counter:
    family = Counter()
    family[(p, q)] += x
    family[(r, s)] += y
    family[(p, p - q)] += x - 1
    family[(r, r - s)] += y - 1
    family[(p * r, 1)] += z
    family[(p * r, p * r - 1)] += z
    return +family


def even_shape(strict: Sequence[Pair], bound: int = SHAPE_SEARCH_BOUND) -> ShapeMatch:
    """
    Search p, q, r, s with 0 < q < p, 0 < s < r, ps + qr + 1 = pr and
    multiplicities x, y >= 1, z >= 0 such that S' is
    {x (p,q), y (r,s), (x-1) (p,p-q), (y-1) (r,r-s), z (pr,1), z (pr,pr-1)}.

    (p, q) and (r, s) are drawn from the pairs of S'; pairs with p or r above
    bound are skipped and make a negative answer non-exhaustive.
    """
    counts = Counter(strict)
    k = len(strict)
    exhaustive = True
    candidates = sorted(counts)
    for (p, q), (r, s) in ((u, v) for u in candidates for v in candidates):
        if p > bound or r > bound:
            exhaustive = False
            continue
        if p * s + q * r + 1 != p * r:
            continue
        for z in range(0, k // 2 + 1):
            # 2x + 2y - 2 + 2z = k
            if (k + 2 - 2 * z) % 2:
                continue
            xy = (k + 2 - 2 * z) // 2
            for x in range(1, xy):
                y = xy - x
                if _even_family(p, q, r, s, x, y, z) == counts:
                    shape = 1 if z == 0 else 2
                    return ShapeMatch("even", True, shape, (p, q, r, s, x, y, z))
    return ShapeMatch("even", False, exhaustive=exhaustive)
