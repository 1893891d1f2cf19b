"""
Nilpotent group homology module.
Homology of finitely generated abelian groups, Wang-sequence Betti numbers
of semidirect products A x|_psi Z, unipotency, homological balance and the
catalogue of torsion-free balanced nilpotent groups.

Fields are encoded as integers: 0 is Q, a prime p is F_p.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, gcd
from typing import List, Optional, Sequence, Tuple

from sympy import GF, QQ, factorint
from sympy.polys.matrices import DomainMatrix

from utils.abelian_group import FiniteAbelianGroup, cokernel
from utils.errors import InputError, UnsupportedError
from utils.integer_matrix import identity, mat_mul, smith_normal_form
from utils.residues import prime_divisors

logger = logging.getLogger(__name__)

Matrix = List[List[int]]

RATIONALS = 0


def field_label(p: int) -> str:
    return "Q" if p == RATIONALS else f"F_{p}"


def field_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of an integer matrix over Q (p = 0) or F_p."""
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    domain = QQ if p == RATIONALS else GF(p)
    entries = [[domain(int(x)) for x in r] for r in rows]
    return DomainMatrix(entries, (len(rows), len(rows[0])), domain).rank()


def _minus_identity(m: Sequence[Sequence[int]]) -> Matrix:
    return [[x - (i == j) for j, x in enumerate(row)] for i, row in enumerate(m)]


def _submatrix(m: Sequence[Sequence[int]], rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return [[m[i][j] for j in cols] for i in rows]


def _hstack(a: Matrix, b: Matrix) -> Matrix:
    return [ra + rb for ra, rb in zip(a, b)]


# ==============================================================================
# GROUPS AND PROFILES
# ==============================================================================


@dataclass(frozen=True)
class SemidirectGroup:
    """
    A x|_psi Z (one action) or A x| Z^2 (two commuting actions), where
    A = Z/orders[0] + ... with order 0 standing for Z.

    Column j of each action matrix is the image of the j-th generator.
    """

    orders: tuple
    actions: tuple

    def __post_init__(self):
        orders = tuple(abs(int(d)) for d in self.orders)
        if any(d == 1 for d in orders):
            raise InputError("generator orders must be 0 (infinite) or >= 2")
        actions = tuple(tuple(tuple(int(x) for x in row) for row in a) for a in self.actions)
        if len(actions) not in (1, 2):
            raise InputError("a semidirect product needs one or two actions")
        n = len(orders)
        for a in actions:
            if len(a) != n or any(len(row) != n for row in a):
                raise InputError(f"action must be a {n}x{n} matrix")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "actions", actions)
        for a in actions:
            self._check_action(a)
        if len(actions) == 2 and not self._commute(*actions):
            raise InputError("the two actions must commute on the base")

    def _reduce(self, m: Matrix) -> Matrix:
        return [[x % d if d else x for x in row] for row, d in zip(m, self.orders)]

    def _check_action(self, a) -> None:
        for i, di in enumerate(self.orders):
            for j, dj in enumerate(self.orders):
                image = dj * a[i][j]
                if (di == 0 and image != 0) or (di and image % di):
                    raise InputError(f"action entry ({i},{j}) = {a[i][j]} is not compatible with the orders {self.orders}")
        square = [list(row) + [d if k == i else 0 for k in range(len(self.orders))] for i, (row, d) in enumerate(zip(a, self.orders))]
        if square and not cokernel(square).is_trivial():
            raise InputError(f"action {a} is not an automorphism of the base")

    def _commute(self, x, y) -> bool:
        return self._reduce(mat_mul(x, y)) == self._reduce(mat_mul(y, x))

    @classmethod
    def cyclic(cls, m: int, n: int) -> "SemidirectGroup":
        """Z/m x|_n Z, where the generator acts by multiplication by n."""
        if m < 2:
            raise InputError("Z/m x|_n Z needs m >= 2")
        if gcd(m, n) != 1:
            raise InputError(f"multiplication by {n} is not an automorphism of Z/{m}")
        return cls((m,), (((n % m,),),))

    @classmethod
    def direct_product(cls, orders: Sequence[int]) -> "SemidirectGroup":
        """A x Z with the identity action."""
        return cls(tuple(orders), (tuple(map(tuple, identity(len(orders)))),))

    @property
    def extension_rank(self) -> int:
        return len(self.actions)

    @property
    def base(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup.from_orders(self.orders)

    @property
    def hirsch_length(self) -> int:
        return self.base.free_rank + self.extension_rank

    @property
    def free_indices(self) -> List[int]:
        return [i for i, d in enumerate(self.orders) if d == 0]

    def __str__(self) -> str:
        base = " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.orders) or "0"
        if len(self.orders) == 1 and self.orders[0]:
            return f"Z/{self.orders[0]} x|_{self.actions[0][0][0]} Z"
        quotient = "Z" if self.extension_rank == 1 else "Z^2"
        return f"({base}) x| {quotient}"


@dataclass(frozen=True)
class BettiProfile:
    """
    Betti numbers b1, b2 over one field.

    exact is False when the count comes from the associated graded of a
    non-split filtration (p = 2 with both Z/2 and Z/4-divisible summands).
    """

    field: int
    b1: int
    b2: int
    exact: bool = True

    @property
    def balanced(self) -> bool:
        return self.b2 <= self.b1

    def to_dict(self) -> dict:
        return {"field": field_label(self.field), "b1": self.b1, "b2": self.b2, "exact": self.exact}


# ==============================================================================
# ABELIAN GROUPS
# ==============================================================================


def h2_abelian(a: FiniteAbelianGroup) -> FiniteAbelianGroup:
    """
    H_2(A; Z) = A ^ A: Z^C(r,2) + (torsion)^r + sum over i < j of Z/gcd(d_i, d_j).
    """
    r = a.free_rank
    orders = [0] * comb(r, 2)
    orders += list(a.divisors) * r
    orders += [gcd(x, y) for x, y in combinations(a.divisors, 2)]
    return FiniteAbelianGroup.from_orders(orders)


def betti_fp_abelian(a: FiniteAbelianGroup, p: int) -> BettiProfile:
    """
    Betti numbers of a finitely generated abelian group.

    Over F_p: b1 = r + t and b2 = C(b1, 2) + t, where t counts the invariant
    factors divisible by p. Over Q: b1 = r and b2 = C(r, 2).
    """
    if p == RATIONALS:
        return BettiProfile(p, a.free_rank, comb(a.free_rank, 2))
    t = sum(1 for d in a.divisors if d % p == 0)
    b1 = a.free_rank + t
    return BettiProfile(p, b1, comb(b1, 2) + t)


def exterior_square(m: Sequence[Sequence[int]]) -> Matrix:
    """
    Matrix of the induced map on the exterior square, basis e_a ^ e_b with
    a < b in lexicographic order.
    """
    pairs = list(combinations(range(len(m)), 2))
    return [
        [m[i][a] * m[j][b] - m[j][a] * m[i][b] for a, b in pairs]
        for i, j in pairs
    ]


def symmetric_square(m: Sequence[Sequence[int]]) -> Matrix:
    """Induced map on the symmetric square, basis e_a e_b with a <= b."""
    n = len(m)
    pairs = [(a, b) for a in range(n) for b in range(a, n)]
    rows = []
    for i, j in pairs:
        row = []
        for a, b in pairs:
            if i == j:
                row.append(m[i][a] * m[i][b])
            else:
                row.append(m[i][a] * m[j][b] + m[j][a] * m[i][b])
        rows.append(row)
    return rows


# ==============================================================================
# UNIPOTENCY
# ==============================================================================


def _length_bound(orders: Sequence[int]) -> int:
    return sum(sum(factorint(d).values()) if d else 1 for d in orders) or 1


def is_unipotent(orders: Sequence[int], psi: Sequence[Sequence[int]]) -> bool:
    """
    True iff (psi - I)^k kills A = Z/orders[0] + ... for some k.

    A nilpotent endomorphism of A reaches zero within the composition length
    of A (free summands counting once), so the powers are checked that far.
    """
    n = len(orders)
    if n == 0:
        return True

    def reduce(m: Matrix) -> Matrix:
        return [[x % d if d else x for x in row] for row, d in zip(m, orders)]

    step = reduce(_minus_identity(psi))
    power = step
    for _ in range(_length_bound(orders)):
        if all(x == 0 for row in power for x in row):
            return True
        power = reduce(mat_mul(step, power))
    return all(x == 0 for row in power for x in row)


def is_nilpotent(g: SemidirectGroup) -> bool:
    """A x|_psi Z^k is nilpotent iff every action is unipotent on A."""
    return all(is_unipotent(g.orders, a) for a in g.actions)


# ==============================================================================
# WANG SEQUENCE
# ==============================================================================


def _h1_indices(orders: Sequence[int], p: int) -> List[int]:
    if p == RATIONALS:
        return [i for i, d in enumerate(orders) if d == 0]
    return [i for i, d in enumerate(orders) if d % p == 0]


def _torsion_action(orders: Sequence[int], psi, indices: Sequence[int], p: int) -> Matrix:
    # psi on the p-torsion basis (d_i / p) g_i
    return [[(psi[i][j] * orders[j] // orders[i]) % p for j in indices] for i in indices]


def _quotient_rank(m: Matrix, sub: List[int], p: int) -> int:
    """Rank of the map induced by m on V / span(e_i for i in sub)."""
    if not sub:
        return field_rank(m, p)
    columns = [[1 if r == i else 0 for i in sub] for r in range(len(m))]
    return field_rank(_hstack(m, columns), p) - len(sub)


def _h2_dimension_and_rank(orders: Sequence[int], psi, p: int) -> Tuple[int, int, bool]:
    """
    (dim H_2(A; F), rank(H_2(psi) - I), exact) for the field F.

    Odd p, Q, and p = 2 without Z/2 summands use the natural splitting into
    the exterior square of A/pA and Tor(A, F_p). For p = 2 with Z/2 summands
    the count runs through cohomology: the image of cup products (symmetric
    square of A* modulo squares of classes lifting to Z/4) and the dual of
    A[2] n 2A.
    """
    h1 = _h1_indices(orders, p)
    h1_action = _submatrix(psi, h1, h1)
    if p == RATIONALS:
        wedge = exterior_square(h1_action)
        return len(wedge), field_rank(_minus_identity(wedge), p), True
    torsion = [i for i in h1 if orders[i]]
    has_order_two = p == 2 and any(orders[i] % 4 for i in torsion)
    if not has_order_two:
        wedge = exterior_square(h1_action)
        tor = _torsion_action(orders, psi, torsion, p)
        rank = field_rank(_minus_identity(wedge), p) + field_rank(_minus_identity(tor), p)
        return len(wedge) + len(torsion), rank, True

    dual = [list(col) for col in zip(*h1_action)] if h1_action else []
    sym = symmetric_square(dual)
    pairs = [(a, b) for a in range(len(h1)) for b in range(a, len(h1))]
    liftable = {k for k, i in enumerate(h1) if orders[i] == 0 or orders[i] % 4 == 0}
    squares = [k for k, (a, b) in enumerate(pairs) if a == b and a in liftable]
    divisible = [i for i in torsion if orders[i] % 4 == 0]
    ext = _torsion_action(orders, psi, divisible, p)
    rank = _quotient_rank(_minus_identity(sym), squares, p) + field_rank(_minus_identity(ext), p)
    dim = len(sym) - len(squares) + len(divisible)
    exact = not liftable
    return dim, rank, exact


def wang_betti(g: SemidirectGroup, p: int) -> BettiProfile:
    """
    Betti numbers of A x|_psi Z over Q (p = 0) or F_p from the Wang sequence.

    b1 = dim Cok(H_1(psi) - I) + 1
    b2 = dim Cok(H_2(psi) - I) + dim Ker(H_1(psi) - I)

    Args:
        g: Semidirect product with a single action
        p: 0 for Q, otherwise a prime

    Returns:
        The Betti profile; a non-unipotent action is logged but still computed

    Raises:
        UnsupportedError: g has two actions
    """
    if g.extension_rank != 1:
        raise UnsupportedError("wang_betti handles extensions by Z; use torus_module_betti for Z^2")
    psi = g.actions[0]
    if not is_nilpotent(g):
        logger.debug("%s is not nilpotent; Wang counts are reported anyway", g)
    h1 = _h1_indices(g.orders, p)
    kernel_h1 = len(h1) - field_rank(_minus_identity(_submatrix(psi, h1, h1)), p)
    dim_h2, rank_h2, exact = _h2_dimension_and_rank(g.orders, psi, p)
    profile = BettiProfile(p, kernel_h1 + 1, dim_h2 - rank_h2 + kernel_h1, exact)
    logger.debug("%s over %s: %s", g, field_label(p), profile)
    return profile


def torus_module_betti(x: Sequence[Sequence[int]], y: Sequence[Sequence[int]], p: int) -> Tuple[int, int, int]:
    """
    (b0, b1, b2) of Z^2 with coefficients in F^n, where the basis of Z^2 acts
    by the commuting matrices x and y.

    Computed from the complex 0 -> A -> A^2 -> A -> 0 with
    d1(u, v) = (x - 1)u + (y - 1)v and d2(w) = ((y - 1)w, -(x - 1)w).
    """
    n = len(x)
    if n == 0:
        return 0, 0, 0
    xm, ym = _minus_identity(x), _minus_identity(y)
    d1 = _hstack(xm, ym)
    d2 = ym + [[-v for v in row] for row in xm]
    r1, r2 = field_rank(d1, p), field_rank(d2, p)
    return n - r1, 2 * n - r1 - r2, n - r2


def module_betti(g: SemidirectGroup, p: int) -> Tuple[int, int, int]:
    """torus_module_betti of H_1(A; F_p) for a rank-2 extension."""
    if g.extension_rank != 2 or p == RATIONALS:
        raise UnsupportedError("module_betti needs two actions and a prime field")
    h1 = _h1_indices(g.orders, p)
    x, y = (_submatrix(a, h1, h1) for a in g.actions)
    return torus_module_betti(x, y, p)


# ==============================================================================
# INTEGRAL HOMOLOGY
# ==============================================================================


def abelianization(g: SemidirectGroup) -> FiniteAbelianGroup:
    """G^ab = Z^k + Cok(psi - I) summed over the actions."""
    n = len(g.orders)
    rows = [[] for _ in range(n)]
    for a in g.actions:
        rows = _hstack(rows, _minus_identity(a))
    rows = _hstack(rows, [[d if k == i else 0 for k in range(n)] for i, d in enumerate(g.orders)])
    quotient = cokernel(rows) if n else FiniteAbelianGroup()
    return FiniteAbelianGroup(quotient.divisors, quotient.free_rank + g.extension_rank)


def integral_h2(g: SemidirectGroup) -> FiniteAbelianGroup:
    """
    H_2(A x|_psi Z; Z) from the integral Wang sequence
    0 -> Cok(H_2(psi) - I) -> H_2(G) -> Ker(H_1(psi) - I) -> 0.

    Supported bases are a single finite cyclic group, where H_2(A) = 0 and
    H_2(G) = Z/gcd(m, n - 1), and free abelian groups, where the kernel is
    free and the sequence splits.

    Raises:
        UnsupportedError: Other bases or two actions
    """
    if g.extension_rank != 1:
        raise UnsupportedError("integral H_2 is computed for extensions by Z")
    psi = g.actions[0]
    if len(g.orders) == 1 and g.orders[0]:
        m = g.orders[0]
        return FiniteAbelianGroup.from_orders([gcd(m, psi[0][0] - 1)])
    if any(g.orders):
        raise UnsupportedError(f"integral H_2 needs a cyclic or free base, got {g.base}")
    r = len(g.orders)
    wedge = exterior_square(psi)
    coinvariants = cokernel(_minus_identity(wedge), len(wedge)) if wedge else FiniteAbelianGroup()
    kernel_rank = r - smith_normal_form(_minus_identity(psi), r).rank if r else 0
    return FiniteAbelianGroup(coinvariants.divisors, coinvariants.free_rank + kernel_rank)


# ==============================================================================
# HOMOLOGICAL BALANCE
# ==============================================================================


@dataclass
class BalanceReport:
    group: str
    balanced: bool
    nilpotent: bool
    profiles: List[BettiProfile] = field(default_factory=list)
    cyclic_form: Optional[Tuple[int, int]] = None
    consistent: bool = True

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "balanced": self.balanced,
            "nilpotent": self.nilpotent,
            "profiles": [p.to_dict() for p in self.profiles],
            "cyclic_form": list(self.cyclic_form) if self.cyclic_form else None,
            "consistent": self.consistent,
        }


def relevant_primes(g: SemidirectGroup) -> List[int]:
    """
    Primes where Betti numbers can differ from the generic ones: divisors of
    the torsion order, and divisors of the invariant factors of psi - I and
    its exterior square on the free part.
    """
    primes = set(prime_divisors(g.base.torsion().order))
    free = g.free_indices
    for a in g.actions:
        block = _submatrix(a, free, free)
        for m in (_minus_identity(block), _minus_identity(exterior_square(block))):
            if not m:
                continue
            for d in smith_normal_form(m, len(m)).diagonal:
                if d:
                    primes.update(prime_divisors(abs(d)))
    return sorted(primes)


def homologically_balanced(g: SemidirectGroup) -> BalanceReport:
    """
    b2 <= b1 over Q and over F_p for every relevant prime.

    For a finite abelian base the result is cross-checked against the
    classification: a balanced nilpotent A x|_psi Z has A cyclic of order m
    with m dividing a power of n - 1.
    """
    if g.extension_rank != 1:
        raise UnsupportedError("homological balance is decided for extensions by Z")
    profiles = [wang_betti(g, p) for p in [RATIONALS] + relevant_primes(g)]
    balanced = all(p.balanced for p in profiles)
    nilpotent = is_nilpotent(g)
    cyclic_form = None
    if len(g.orders) == 1 and g.orders[0]:
        cyclic_form = (g.orders[0], g.actions[0][0][0])
    consistent = True
    if balanced and nilpotent and g.base.is_finite():
        consistent = g.base.is_cyclic()
        if cyclic_form:
            consistent = consistent and divides_power(cyclic_form[0], cyclic_form[1] - 1)
        if not consistent:
            logger.error("%s is balanced and nilpotent but its base %s is not cyclic", g, g.base)
    return BalanceReport(str(g), balanced, nilpotent, profiles, cyclic_form, consistent)


def divides_power(m: int, n: int) -> bool:
    """True iff m divides some power of n."""
    return all(n % q == 0 for q in prime_divisors(m))


# ==============================================================================
# TORSION-FREE CATALOGUE
# ==============================================================================


@dataclass(frozen=True)
class TorsionFreeCandidate:
    """
    Structural parameters of a torsion-free nilpotent group.

    q is the index parameter of [x, y] = z^q for Hirsch length 3.
    """

    hirsch_length: int
    nilpotency_class: int
    q: Optional[int] = None


NOT_IN_CATALOGUE = "NotInCatalogue"


def classify_balanced_torsionfree(candidate: TorsionFreeCandidate) -> str:
    """
    Catalogue lookup: Z, Z^2, Z^3 (abelian), Gamma_q (Hirsch length 3,
    class 2) or Omega (Hirsch length 4, class 3).
    """
    h, c = candidate.hirsch_length, candidate.nilpotency_class
    if c == 1:
        return {1: "Z", 2: "Z^2", 3: "Z^3"}.get(h, NOT_IN_CATALOGUE)
    if h == 3 and c == 2 and candidate.q and candidate.q >= 1:
        return f"Gamma_{candidate.q}"
    if h == 4 and c == 3:
        return "Omega"
    return NOT_IN_CATALOGUE


def _nilpotency_degree(psi: Sequence[Sequence[int]]) -> int:
    step = _minus_identity(psi)
    power = step
    degree = 1
    while any(x for row in power for x in row):
        power = mat_mul(step, power)
        degree += 1
        if degree > len(psi) + 1:
            raise InputError("action is not unipotent")
    return degree


def candidate_from_semidirect(g: SemidirectGroup) -> Optional[TorsionFreeCandidate]:
    """
    Parameters of Z^r x|_psi Z with psi unipotent, or None when the group
    has torsion or is not balanced.
    """
    if any(g.orders) or g.extension_rank != 1 or not is_nilpotent(g):
        return None
    if not homologically_balanced(g).balanced:
        return None
    psi = g.actions[0]
    degree = _nilpotency_degree(psi) if psi else 1
    q = None
    if len(psi) == 2 and degree == 2:
        step = _minus_identity(psi)
        q = gcd(*[abs(x) for row in step for x in row])
    return TorsionFreeCandidate(g.hirsch_length, degree, q)


def gamma(q: int) -> SemidirectGroup:
    """Gamma_q = Z^2 x| Z with monodromy (1, q; 0, 1)."""
    if q < 1:
        raise InputError("Gamma_q needs q >= 1")
    return SemidirectGroup((0, 0), (((1, q), (0, 1)),))


def omega() -> SemidirectGroup:
    """Omega = Z^3 x| Z with a single unipotent Jordan block."""
    return SemidirectGroup((0, 0, 0), (((1, 1, 0), (0, 1, 1), (0, 0, 1)),))
