"""
Seifert pairing module.
Computes torsion linking pairings of Seifert manifolds (orientable and
non-orientable base) and of mapping-cylinder unions N u_phi N glued along the
twisted I-bundle over the Klein bottle.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import mod_inverse

from services.linking_pairing import LinkingPairing, is_hyperbolic, orthogonal_sum
from services.seifert import SeifertData, euler_number, first_homology
from utils.abelian_group import FiniteAbelianGroup, localize_group, presentation_group
from utils.errors import InputError, UnsupportedError
from utils.integer_matrix import smith_normal_form
from utils.residues import ResidueQZ, p_adic_valuation, square_class

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True)
class GluingMatrix:
    """
    Gluing map phi = (a, b; c, d) of determinant 1 for M = N u_phi N.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            hint = ""
            if (self.a, self.b, self.c, self.d) == (2, -3, 1, 2):
                logger.warning("(2,-3;1,2) is a known misprint of M_{2,2} = (2,3;1,2)")
                hint = "; did you mean NU[2,3;1,2]?"
            raise InputError(
                f"gluing matrix ({self.a},{self.b};{self.c},{self.d}) must have determinant 1{hint}"
            )

    @classmethod
    def from_mn(cls, m: int, n: int) -> "GluingMatrix":
        """M_{m,n}: phi = (m, mn - 1; 1, n)."""
        return cls(m, m * n - 1, 1, n)

    def negated(self) -> "GluingMatrix":
        return GluingMatrix(-self.a, -self.b, -self.c, -self.d)

    def mn(self) -> Optional[Tuple[int, int]]:
        """(m, n) with phi = +-M_{m,n}, or None when |c| != 1."""
        if self.c == 1:
            return self.a, self.d
        if self.c == -1:
            return -self.a, -self.d
        return None

    def rows(self) -> List[List[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __str__(self) -> str:
        return f"NU[{self.a},{self.b};{self.c},{self.d}]"


@dataclass(frozen=True)
class GeneratedPairing:
    """
    A pairing given on a generating set together with the relations among
    the generators.

    relations are integer row vectors v with sum v_i e_i = 0; matrix holds
    l(e_i, e_j) for the (not necessarily independent) generators.
    """

    relations: tuple
    matrix: tuple
    labels: tuple = ()

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise InputError("generator pairing matrix must be square")
        if any(len(rel) != n for rel in self.relations):
            raise InputError("relation vectors must have one entry per generator")
        object.__setattr__(self, "relations", tuple(tuple(int(x) for x in rel) for rel in self.relations))
        object.__setattr__(
            self, "matrix", tuple(tuple(ResidueQZ(_fraction(v)) for v in row) for row in self.matrix)
        )

    @property
    def size(self) -> int:
        return len(self.matrix)

    def incompatible_relations(self) -> List[int]:
        """Indices of relations v with sum v_i l(e_i, e_j) != 0 for some j."""
        bad = []
        for index, rel in enumerate(self.relations):
            for j in range(self.size):
                total = sum((rel[i] * self.matrix[i][j].value for i in range(self.size)), Fraction(0))
                if total % 1:
                    bad.append(index)
                    break
        return bad

    def group(self) -> FiniteAbelianGroup:
        return presentation_group([list(r) for r in self.relations], self.size)

    def reduce(self) -> LinkingPairing:
        """
        Transport the pairing to a basis of the presented group.

        With left * R * right = D, the rows f_j of right^-1 form a basis of
        Z^n in which the relation lattice is spanned by d_j f_j, so the
        images of the f_j generate cyclic summands of orders d_j.

        Raises:
            UnsupportedError: A relation is incompatible or the group is infinite
        """
        bad = self.incompatible_relations()
        if bad:
            raise UnsupportedError(f"pairing does not respect relations {bad}")
        n = self.size
        snf = smith_normal_form([list(r) for r in self.relations], n)
        orders = list(snf.diagonal) + [0] * (n - len(snf.diagonal))
        if any(d == 0 for d in orders):
            raise UnsupportedError("presented group is infinite; no torsion pairing basis")
        vectors, kept = [], []
        for j, d in enumerate(orders):
            if abs(d) > 1:
                vectors.append(list(snf.right_inverse[j]))
                kept.append(abs(d))
        matrix = tuple(
            tuple(_pair(self.matrix, u, v) for v in vectors) for u in vectors
        )
        logger.debug("reduced %d generators to basis of orders %s", n, kept)
        return LinkingPairing(tuple(kept), matrix)


def _fraction(v) -> Fraction:
    return v.value if isinstance(v, ResidueQZ) else Fraction(v)


def _pair(matrix, u: Sequence[int], v: Sequence[int]) -> Fraction:
    total = Fraction(0)
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                if vj:
                    total += ui * vj * matrix[i][j].value
    return total % 1


# ==============================================================================
# ORIENTABLE BASE
# ==============================================================================


def _p_sorted(pairs: Sequence[Pair], p: int) -> List[Pair]:
    padded = list(pairs)
    while len(padded) < 2:
        padded.append((1, 0))
    return sorted(padded, key=lambda pair: -p_adic_valuation(pair[0], p))


def pairing_orientable(s: SeifertData, p: int, bezout_shift: int = 0) -> LinkingPairing:
    """
    p-primary part of the linking pairing of M(g; S), g >= 0.

    Pairs are sorted so that v_p(a_1) >= v_p(a_2) >= ...; the generators are
    q_i' (i >= 3, order the p-part of a_i) and, when e != 0, s of order the
    p-part of a_1 a_2 e.

    Args:
        s: Seifert data with orientable base
        p: A prime
        bezout_shift: Multiple of a_2 added to the Bezout coefficient n

    Returns:
        The p-primary pairing

    Raises:
        UnsupportedError: The generator formulas do not present the p-part
    """
    if not s.orientable_base:
        raise InputError("pairing_orientable needs an orientable base")
    target = localize_group(first_homology(s), p)
    if target.order == 1:
        return LinkingPairing.trivial()

    pairs = _p_sorted(s.pairs, p)
    (a1, _), (a2, b2) = pairs[0], pairs[1]
    eps = euler_number(s)
    n = (mod_inverse(b2, a2) if a2 > 1 else 0) + bezout_shift * a2

    generators: List[Tuple[str, int, int, int]] = []
    for a, b in pairs[2:]:
        order = p ** p_adic_valuation(a, p)
        if order > 1:
            generators.append(("q", order, a, b))

    values = {}
    for i, (_, _, ai, bi) in enumerate(generators):
        values[i, i] = Fraction(-b2 * bi * (ai * b2 + a2 * bi), ai * ai)
        for j in range(i + 1, len(generators)):
            _, _, aj, bj = generators[j]
            values[i, j] = Fraction(-b2 * bi * bj * a2, ai * aj)

    if eps != 0:
        scaled = a1 * a2 * eps
        if p_adic_valuation(scaled, p) < 0:
            raise UnsupportedError(f"a_1 a_2 e = {scaled} is not {p}-integral")
        order = p ** p_adic_valuation(scaled, p)
        if order > 1:
            index = len(generators)
            generators.append(("s", order, 0, 0))
            for i, (_, _, ai, bi) in enumerate(generators[:-1]):
                values[i, index] = Fraction(bi, ai)
            values[index, index] = -(a1 + n * a1 * a2 * eps) / (a1 * a2 * a2 * eps)

    size = len(generators)
    matrix = [[Fraction(0)] * size for _ in range(size)]
    for (i, j), v in values.items():
        projected = ResidueQZ(v).p_part(p).value
        matrix[i][j] = matrix[j][i] = projected
    orders = tuple(g[1] for g in generators)

    try:
        pairing = LinkingPairing(orders, tuple(tuple(r) for r in matrix))
    except InputError as exc:
        raise UnsupportedError(f"generator formulas fail at p={p} for {s}: {exc}") from exc
    if pairing.group() != target or not pairing.is_nonsingular():
        raise UnsupportedError(
            f"generator formulas do not present the {p}-part {target} of {s} "
            f"(got orders {list(orders)})"
        )
    return pairing


def determinant_class_formula(s: SeifertData, p: int) -> int:
    """
    Closed form of the determinant class of a homogeneous p-primary pairing
    with e = 0 and p odd: the class of
    (-1)^(r_p - 1) (a_1 / a_2) prod(b_i) prod_{j >= 3} u_j,
    with both products over the r_p cone points divisible by p and
    u_j = a_j / p^k.

    Returns:
        +1 or -1

    Raises:
        UnsupportedError: p = 2, e != 0, or the p-part is not homogeneous
    """
    if p == 2 or euler_number(s) != 0:
        raise UnsupportedError("closed form covers odd p with e = 0 only")
    divisible = [(a, b) for a, b in s.pairs if a % p == 0]
    r_p = len(divisible)
    if r_p < 3:
        raise UnsupportedError("closed form needs at least three cone points divisible by p")
    k = p_adic_valuation(divisible[0][0], p)
    if any(p_adic_valuation(a, p) != k for a, _ in divisible):
        raise UnsupportedError(f"{p}-part is not homogeneous")
    pk = p**k
    units = [a // pk for a, _ in divisible]
    value = (-1) ** (r_p - 1) * units[0] * mod_inverse(units[1], p)
    for _, b in divisible:
        value *= b
    for u in units[2:]:
        value *= u
    return square_class(value % p, p)


# ==============================================================================
# NON-ORIENTABLE BASE
# ==============================================================================


def nonorientable_generated_pairing(s: SeifertData) -> GeneratedPairing:
    """
    Pairing on the generators (q_1, ..., q_n, h, a) of the torsion of
    M(-c; S) with relations 2h = 0, a_i q_i + b_i h = 0, 2a + sum q_i = 0.
    """
    if s.orientable_base:
        raise InputError("nonorientable_generated_pairing needs a non-orientable base")
    pairs = list(s.pairs)
    n = len(pairs)
    c = s.crosscaps
    eps = euler_number(s)
    h, a = n, n + 1
    size = n + 2
    m = [[Fraction(0)] * size for _ in range(size)]
    for i, (ai, bi) in enumerate(pairs):
        m[i][i] = Fraction(bi, ai)
        m[a][i] = m[i][a] = Fraction(-bi, 2 * ai)
    m[a][h] = m[h][a] = Fraction(1, 2)
    m[a][a] = (2 * c - eps) / 4

    relations = []
    row = [0] * size
    row[h] = 2
    relations.append(row)
    for i, (ai, bi) in enumerate(pairs):
        row = [0] * size
        row[i] = ai
        row[h] = bi
        relations.append(row)
    row = [1] * n + [0, 2]
    relations.append(row)
    labels = tuple(f"q{i + 1}" for i in range(n)) + ("h", "a")
    return GeneratedPairing(tuple(relations), tuple(tuple(r) for r in m), labels)


def pairing_nonorientable(s: SeifertData) -> LinkingPairing:
    """
    Linking pairing of M(-c; S) by reduction of the generator pairing.

    Raises:
        UnsupportedError: The reduced group disagrees with the torsion of H_1
    """
    generated = nonorientable_generated_pairing(s)
    bad = generated.incompatible_relations()
    if bad:
        # the generator formulas always satisfy the relations
        raise AssertionError(f"relations {bad} incompatible for {s}")
    pairing = generated.reduce()
    expected = first_homology(s).torsion()
    if pairing.group() != expected:
        raise UnsupportedError(f"reduced group {pairing.group()} differs from torsion {expected}")
    return pairing


def seifert_linking_pairing(s: SeifertData) -> LinkingPairing:
    """
    Full linking pairing: orthogonal sum of the primary parts for an
    orientable base, generator reduction for a non-orientable one.
    """
    if not s.orientable_base:
        return pairing_nonorientable(s)
    torsion = first_homology(s).torsion()
    parts = [pairing_orientable(s, p) for p in torsion.primes()]
    return orthogonal_sum(*parts) if parts else LinkingPairing.trivial()


def reverse_orientation(pairing: LinkingPairing) -> LinkingPairing:
    """Reversing the orientation of M negates its linking pairing."""
    return pairing.negated()


# ==============================================================================
# UNIONS N u_phi N
# ==============================================================================


def union_relations(phi: GluingMatrix) -> List[List[int]]:
    """Relation rows over (x_1, y_1, x_2, y_2)."""
    return [
        [0, 2, 0, 0],
        [0, 0, 0, 2],
        [2 * phi.a, phi.b, -2, 0],
        [2 * phi.c, phi.d, 0, -1],
    ]


def union_homology(phi: GluingMatrix) -> FiniteAbelianGroup:
    """H_1(N u_phi N) from the abelianized presentation."""
    return presentation_group(union_relations(phi), 4)


def union_pairing_hyperbolic(phi: GluingMatrix) -> bool:
    """
    Hyperbolicity of the linking pairing of N u_phi N.

    Hyperbolic iff c = 0 and 4 | b, or |c| = 1, b odd, a and d even and not
    both divisible by 4. For c < 0 the criterion is applied to -phi, which
    gives the same manifold.
    """
    if phi.c < 0:
        phi = phi.negated()
    if phi.c == 0:
        return phi.b % 4 == 0
    if phi.c == 1 and phi.b % 2:
        return phi.a % 2 == 0 and phi.d % 2 == 0 and not (phi.a % 4 == 0 and phi.d % 4 == 0)
    return False


def union_pairing(phi: GluingMatrix) -> LinkingPairing:
    """
    Explicit linking pairing of N u_phi N where a closed form is known:
    c = 0 with b even, on (Z/2)^2; |c| = 1 with b odd, on (Z/4)^2.

    Raises:
        UnsupportedError: Any other gluing matrix
    """
    if phi.c < 0:
        phi = phi.negated()
    if phi.c == 0 and phi.b % 2 == 0:
        half = Fraction(1, 2)
        return LinkingPairing((2, 2), ((0, half), (half, Fraction(phi.b, 4))))
    if phi.c == 1 and phi.b % 2:
        quarter = Fraction(1, 4)
        return LinkingPairing(
            (4, 4),
            ((Fraction(2 + phi.d, 4), quarter), (quarter, Fraction(2 + phi.a, 4))),
        )
    raise UnsupportedError(f"no closed form pairing for {phi}")


def union_pairing_hyperbolic_direct(phi: GluingMatrix) -> bool:
    """Hyperbolicity of the explicit pairing, decided by invariants."""
    return is_hyperbolic(union_pairing(phi))
