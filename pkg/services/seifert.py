"""
Seifert data module.
Handles the Seifert invariants M(g; S), equivalence moves, the generalized
Euler number, first homology for orientable and non-orientable base orbifolds,
and arithmetic predicates on the data.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, prod
from typing import List, Sequence, Tuple

from sympy import mod_inverse

from utils.abelian_group import FiniteAbelianGroup, cokernel, presentation_group
from utils.errors import InputError
from utils.residues import p_adic_valuation

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True)
class SeifertData:
    """
    Seifert data M(g; (a_1,b_1), ..., (a_r,b_r)).

    base >= 0 is the genus of an orientable base; base = -c < 0 means a
    non-orientable base with c crosscaps.
    """

    base: int
    pairs: tuple = ()

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        for a, b in pairs:
            if a < 1:
                raise InputError(f"cone order must be at least 1 in pair ({a},{b})")
            if gcd(a, b) != 1:
                raise InputError(f"gcd({a},{b}) != 1 in pair ({a},{b})")
        object.__setattr__(self, "pairs", pairs)

    @property
    def orientable_base(self) -> bool:
        return self.base >= 0

    @property
    def genus(self) -> int:
        return self.base if self.base >= 0 else 0

    @property
    def crosscaps(self) -> int:
        return -self.base if self.base < 0 else 0

    @property
    def alphas(self) -> List[int]:
        return [a for a, _ in self.pairs]

    def cone_pairs(self) -> List[Pair]:
        """Pairs with a > 1 (the exceptional fibres)."""
        return [(a, b) for a, b in self.pairs if a > 1]

    def with_pairs(self, pairs: Sequence[Pair]) -> "SeifertData":
        return SeifertData(self.base, tuple(pairs))

    def __str__(self) -> str:
        body = " ".join(f"({a},{b})" for a, b in self.pairs)
        return f"M({self.base}; {body})" if body else f"M({self.base}; )"


def euler_number(s: SeifertData) -> Fraction:
    """Generalized Euler number -sum(b_i / a_i)."""
    return -sum((Fraction(b, a) for a, b in s.pairs), Fraction(0))


def normalize(s: SeifertData) -> SeifertData:
    """
    Strict form: 0 < b < a on every pair with a > 1, plus one pair (1, -e)
    when e != 0; pairs sorted by descending a, then descending b.
    """
    integral = 0
    strict = []
    for a, b in s.pairs:
        if a == 1:
            integral += b
            continue
        q, r = divmod(b, a)
        integral += q
        strict.append((a, r))
    strict.sort(key=lambda pair: (-pair[0], -pair[1]))
    if integral:
        strict.append((1, integral))
    return s.with_pairs(strict)


def strict_part(s: SeifertData) -> Tuple[List[Pair], int]:
    """
    Returns:
        (S', e) with normalize(s) = S' + {(1, -e)}
    """
    normal = normalize(s)
    cones = normal.cone_pairs()
    e = -sum(b for a, b in normal.pairs if a == 1)
    return cones, e


def orientable_matrix(s: SeifertData) -> List[List[int]]:
    """
    The (r+1) x (r+1) relation matrix of the orientable-base presentation:
    first row (0, 1, ..., 1), row i is (b_i, 0, ..., a_i, ..., 0).
    """
    r = len(s.pairs)
    rows = [[0] + [1] * r]
    for i, (a, b) in enumerate(s.pairs):
        row = [b] + [0] * r
        row[i + 1] = a
        rows.append(row)
    return rows


def _two_adic_sort(pairs: Sequence[Pair]) -> List[Pair]:
    return sorted(pairs, key=lambda pair: (-p_adic_valuation(pair[0], 2), pair[0], pair[1]))


def nonorientable_torsion(s: SeifertData) -> FiniteAbelianGroup:
    """
    Torsion of H_1 for a non-orientable base from the cone orders alone.

    Orders sorted by descending 2-adic valuation t_i; the parity parameter is
    the number of entries of maximal valuation when t_1 > 0, otherwise sum(b_i).
    Even parity gives Z/2a_1 + Z/2a_2 + sum Z/a_i, odd gives Z/4a_1 + sum Z/a_i.
    """
    pairs = _two_adic_sort(s.pairs)
    while len(pairs) < 2:
        pairs.append((1, 0))
    alphas = [a for a, _ in pairs]
    top = p_adic_valuation(alphas[0], 2)
    if top:
        parity = sum(1 for a in alphas if p_adic_valuation(a, 2) == top)
    else:
        parity = sum(b for _, b in s.pairs)
    if parity % 2 == 0:
        orders = [2 * alphas[0], 2 * alphas[1]] + alphas[2:]
    else:
        orders = [4 * alphas[0]] + alphas[1:]
    return FiniteAbelianGroup.from_orders(orders)


def abelianized_relations(s: SeifertData) -> Tuple[List[List[int]], int]:
    """
    Relation rows of the abelianized fundamental group presentation.

    Orientable base: generators (h, q_1..q_r) as in the matrix presentation,
    plus 2g free generators. Non-orientable base with c crosscaps: generators
    (v_1..v_c, q_1..q_r, h) with 2h = 0, a_i q_i + b_i h = 0 and
    sum q_i + 2 sum v_j = 0.

    Returns:
        (relation rows, number of generators)
    """
    r = len(s.pairs)
    if s.orientable_base:
        rows = [row + [0] * (2 * s.genus) for row in orientable_matrix(s)]
        return rows, r + 1 + 2 * s.genus
    c = s.crosscaps
    width = c + r + 1
    rows = [[0] * (width - 1) + [2]]
    for i, (a, b) in enumerate(s.pairs):
        row = [0] * width
        row[c + i] = a
        row[-1] = b
        rows.append(row)
    rows.append([2] * c + [1] * r + [0])
    return rows, width


def presentation_homology(s: SeifertData) -> FiniteAbelianGroup:
    """H_1 by Smith normal form of the abelianized presentation."""
    rows, generators = abelianized_relations(s)
    return presentation_group(rows, generators)


def first_homology(s: SeifertData) -> FiniteAbelianGroup:
    """
    First homology of M(g; S).

    Orientable base: Z^2g + Cok(A). Non-orientable base with c crosscaps:
    Z^(c-1) plus the torsion given by the cone-order formula.
    """
    if s.orientable_base:
        group = cokernel(orientable_matrix(s))
        return FiniteAbelianGroup(group.divisors, group.free_rank + 2 * s.genus)
    torsion = nonorientable_torsion(s)
    return FiniteAbelianGroup(torsion.divisors, s.crosscaps - 1)


def torsion_is_direct_double(s: SeifertData) -> bool:
    return first_homology(s).is_direct_double()


def valuation_profile(s: SeifertData, p: int) -> dict:
    """
    p-adic valuations of the cone orders (descending) and of e * prod(a_i),
    the data the direct-double conditions are phrased in.
    """
    valuations = sorted((p_adic_valuation(a, p) for a in s.alphas), reverse=True)
    product = 1
    for a in s.alphas:
        product *= a
    scaled = euler_number(s) * product
    return {
        "prime": p,
        "cone_valuations": valuations,
        "euler_valuation": None if scaled == 0 else p_adic_valuation(scaled, p),
    }


def is_skew_symmetric(s: SeifertData) -> bool:
    """
    Euler number zero and the cone pairs (a, b mod a) match up with
    (a, a - b mod a).
    """
    return euler_number(s) == 0 and cones_are_paired(s.pairs)


def cones_are_paired(pairs: Sequence[Pair]) -> bool:
    """Cone pairs (a, b mod a) match up with (a, a - b mod a)."""
    counts = Counter((a, b % a) for a, b in pairs if a > 1)
    for (a, b), n in counts.items():
        partner = (a, (a - b) % a)
        if partner == (a, b):
            if n % 2:
                return False
        elif counts.get(partner, 0) != n:
            return False
    return True


@dataclass(frozen=True)
class SpecialClass:
    homology_sphere: bool
    homology_handle: bool
    q_homology_sphere: bool
    free_rank: int


def classify_special(s: SeifertData) -> SpecialClass:
    """
    Homology sphere, homology handle (H_1 = Z) and rational homology sphere
    predicates.
    """
    homology = first_homology(s)
    product = 1
    for a in s.alphas:
        product *= a
    eps = euler_number(s)
    sphere = s.base == 0 and abs(eps) * product == 1
    cone_orders = [a for a, _ in s.cone_pairs()]
    coprime_triples = all(gcd(gcd(a, b), c) == 1 for a, b, c in combinations(cone_orders, 3))
    handle = s.orientable_base and eps == 0 and coprime_triples and homology.free_rank == 1
    return SpecialClass(sphere, handle, homology.free_rank == 0, homology.free_rank)


def fibre_sum(a: SeifertData, b: SeifertData) -> SeifertData:
    """
    Fibre sum: pair lists concatenate; bases add within the same sign and an
    orientable genus k summed with c crosscaps gives 2k + c crosscaps.
    """
    if (a.base >= 0) == (b.base >= 0):
        base = a.base + b.base
    else:
        genus = a.base if a.base > 0 else b.base
        crosscaps = -(b.base if a.base > 0 else a.base)
        base = -(2 * genus + crosscaps)
    return SeifertData(base, a.pairs + b.pairs)


def expansion(s: SeifertData, index: int) -> SeifertData:
    """
    Append (a_i, b_i), (a_i, -b_i) for the 1-based pair index.
    """
    if not 1 <= index <= len(s.pairs):
        raise InputError(f"pair index {index} out of range 1..{len(s.pairs)}")
    a, b = s.pairs[index - 1]
    return s.with_pairs(s.pairs + ((a, b), (a, -b)))


def homology_sphere_data(alphas: Sequence[int]) -> SeifertData:
    """
    Seifert data M(0; (a_1,b_1), ..., (a_k,b_k), (1, -n)) of a homology sphere.

    The b_i are the unique residues with 0 < b_i < a_i and
    sum(b_i A / a_i) = -1 mod A, A = prod(a_i); then
    n = sum(b_i / a_i) + 1 / A is an integer and e(M) = 1 / A.
    n = k - 1 only for some orders, e.g. (2, 3, 5) but not (2, 3, 7).

    Args:
        alphas: k >= 2 pairwise coprime integers greater than 1
    """
    alphas = [int(a) for a in alphas]
    if len(alphas) < 2 or any(a < 2 for a in alphas):
        raise InputError("need at least two cone orders greater than 1")
    if any(gcd(a, b) != 1 for a, b in combinations(alphas, 2)):
        raise InputError(f"cone orders must be pairwise coprime: {alphas}")
    product = prod(alphas)
    betas = [(-mod_inverse(product // a, a)) % a for a in alphas]
    n = sum(Fraction(b, a) for a, b in zip(alphas, betas)) + Fraction(1, product)
    return SeifertData(0, tuple(zip(alphas, betas)) + ((1, -int(n)),))
