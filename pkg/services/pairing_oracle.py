"""
Pairing oracle module.
Brute-force verifiers for hyperbolicity and isomorphism of linking pairings
on small groups. Independent of the invariant-based classification so the
two can check each other.
"""

import itertools
import logging
from collections import Counter
from math import gcd, isqrt
from typing import TYPE_CHECKING, Dict, List, Tuple

from constants.config import ORACLE_BOUND
from utils.errors import OracleBoundError

if TYPE_CHECKING:
    from services.linking_pairing import LinkingPairing

logger = logging.getLogger(__name__)

Element = Tuple[int, ...]


class PairingTable:
    """Integer view of a pairing: values are s/N with s computed mod N."""

    def __init__(self, pairing: "LinkingPairing"):
        self.orders = pairing.orders
        self.modulus, self.matrix = pairing.integer_form()

    def elements(self) -> List[Element]:
        return list(itertools.product(*(range(o) for o in self.orders)))

    def value(self, x: Element, y: Element) -> int:
        n = len(self.orders)
        total = 0
        for i in range(n):
            if x[i]:
                row = self.matrix[i]
                total += x[i] * sum(row[j] * y[j] for j in range(n))
        return total % self.modulus

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % o for a, b, o in zip(x, y, self.orders))

    def element_order(self, x: Element) -> int:
        order = 1
        for a, o in zip(x, self.orders):
            c = o // gcd(a, o)
            order = order * c // gcd(order, c)
        return order

    def self_value(self, x: Element) -> Tuple[int, int]:
        # (numerator, denominator) in lowest terms so tables with
        # different moduli compare correctly
        s = self.value(x, x)
        g = gcd(s, self.modulus)
        return s // g, self.modulus // g


def _check_bound(pairing: "LinkingPairing", bound: int) -> None:
    if pairing.order > bound:
        raise OracleBoundError(f"group order {pairing.order} exceeds oracle bound {bound}")


def _span(table: PairingTable, subgroup: frozenset, x: Element) -> frozenset:
    elements = set(subgroup)
    frontier = list(subgroup)
    multiple = x
    while multiple not in subgroup:
        for s in frontier:
            elements.add(table.add(s, multiple))
        multiple = table.add(multiple, x)
    return frozenset(elements)


def metabolizers(pairing: "LinkingPairing", bound: int = ORACLE_BOUND) -> List[frozenset]:
    """
    Enumerate all self-annihilating subgroups P (l(P,P)=0, |P|^2=|N|).

    Args:
        pairing: Nonsingular pairing
        bound: Largest group order to enumerate

    Returns:
        List of subgroups, each a frozenset of coefficient tuples
    """
    pairing = pairing.pruned()
    _check_bound(pairing, bound)
    total = pairing.order
    target = isqrt(total)
    if target * target != total:
        return []
    table = PairingTable(pairing)
    zero = tuple(0 for _ in pairing.orders)
    isotropic = [x for x in table.elements() if x != zero and table.value(x, x) == 0]
    found = []
    seen = {frozenset([zero])}
    stack = [(frozenset([zero]), ())]
    while stack:
        subgroup, generators = stack.pop()
        if len(subgroup) == target:
            found.append(subgroup)
            continue
        for x in isotropic:
            if x in subgroup or any(table.value(x, g) for g in generators):
                continue
            bigger = _span(table, subgroup, x)
            if target % len(bigger) or bigger in seen:
                continue
            seen.add(bigger)
            stack.append((bigger, generators + (x,)))
    logger.debug("found %d metabolizers in group of order %d", len(found), total)
    return found


def oracle_is_hyperbolic(pairing: "LinkingPairing", bound: int = ORACLE_BOUND) -> bool:
    """
    Decide hyperbolicity by exhaustive search for N = P + Q with P, Q
    self-annihilating.
    """
    pairing = pairing.pruned()
    _check_bound(pairing, bound)
    if pairing.order == 1:
        return True
    candidates = metabolizers(pairing, bound)
    zero = tuple(0 for _ in pairing.orders)
    for i, p in enumerate(candidates):
        for q in candidates[i + 1:]:
            if p & q == {zero}:
                return True
    return False


def _profile(table: PairingTable, elements: List[Element]) -> Counter:
    return Counter((table.element_order(x), table.self_value(x)) for x in elements)


def oracle_isomorphic(a: "LinkingPairing", b: "LinkingPairing", bound: int = ORACLE_BOUND) -> bool:
    """
    Decide isomorphism by searching for an isometric homomorphism from a to b.

    Images of a's basis vectors are chosen by backtracking; an isometry between
    nonsingular pairings on groups of equal order is automatically bijective.
    """
    a, b = a.pruned(), b.pruned()
    _check_bound(a, bound)
    _check_bound(b, bound)
    if a.group() != b.group():
        return False
    if a.order == 1:
        return True
    ta, tb = PairingTable(a), PairingTable(b)
    elements_b = tb.elements()
    if _profile(ta, ta.elements()) != _profile(tb, elements_b):
        return False

    n = len(a.orders)
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    # Compare values as exact fractions since the two tables use different moduli.
    target = [[a.value_fraction(basis[i], basis[j]) for j in range(n)] for i in range(n)]
    candidates: Dict[int, List[Element]] = {}
    for i, o in enumerate(a.orders):
        candidates[i] = [
            y for y in elements_b
            if tb.element_order(y) == o and b.value_fraction(y, y) == target[i][i]
        ]

    chosen: List[Element] = []

    def extend(i: int) -> bool:
        if i == n:
            return True
        for y in candidates[i]:
            if all(b.value_fraction(y, chosen[j]) == target[i][j] for j in range(i)):
                chosen.append(y)
                if extend(i + 1):
                    return True
                chosen.pop()
        return False

    return extend(0)
