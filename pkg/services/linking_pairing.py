"""
Linking pairing module.
Represents torsion linking pairings N x N -> Q/Z on finite abelian groups and
classifies them: primary and homogeneous splitting, rank and determinant
invariants, 2-adic parity and Arf classes, hyperbolicity and isomorphism.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

from sympy import Matrix

from constants.config import ORACLE_BOUND
from services.pairing_oracle import oracle_isomorphic
from utils.abelian_group import FiniteAbelianGroup
from utils.errors import InputError, SingularPairingError, UndecidedError
from utils.integer_matrix import smith_normal_form
from utils.residues import ResidueQZ, lcm, prime_divisors, square_class

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinkingPairing:
    """
    A symmetric pairing on Z/orders[0] + ... + Z/orders[n-1].

    Generator e_i has order orders[i]; matrix[i][j] = l(e_i, e_j) in Q/Z.
    """

    orders: tuple
    matrix: tuple

    def __post_init__(self):
        orders = tuple(int(o) for o in self.orders)
        n = len(orders)
        if any(o < 1 for o in orders):
            raise InputError(f"generator orders must be positive: {orders}")
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise InputError("pairing matrix must be square with one row per generator")
        matrix = tuple(tuple(ResidueQZ(v.value if isinstance(v, ResidueQZ) else v) for v in row)
                       for row in self.matrix)
        for i in range(n):
            for j in range(n):
                if matrix[i][j] != matrix[j][i]:
                    raise InputError(f"pairing matrix is not symmetric at ({i}, {j})")
                if not (orders[i] * matrix[i][j]).is_zero():
                    raise InputError(
                        f"entry ({i}, {j}) = {matrix[i][j]} is not killed by order {orders[i]}"
                    )
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def trivial(cls) -> "LinkingPairing":
        return cls((), ())

    @property
    def size(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        product = 1
        for o in self.orders:
            product *= o
        return product

    def group(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup.from_orders(self.orders)

    def value(self, x: Sequence[int], y: Sequence[int]) -> ResidueQZ:
        """l(x, y) for coefficient vectors x, y."""
        return ResidueQZ(self.value_fraction(x, y))

    def value_fraction(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        total += xi * yj * self.matrix[i][j].value
        return total % 1

    def integer_form(self) -> Tuple[int, List[List[int]]]:
        """
        Returns:
            (N, M) with N = lcm of orders and l(e_i, e_j) = M[i][j] / N
        """
        modulus = lcm(*self.orders) if self.orders else 1
        return modulus, [[int(v.value * modulus) for v in row] for row in self.matrix]

    def pruned(self) -> "LinkingPairing":
        keep = [i for i, o in enumerate(self.orders) if o > 1]
        return self.restricted_to(keep)

    def restricted_to(self, indices: Sequence[int]) -> "LinkingPairing":
        return LinkingPairing(
            tuple(self.orders[i] for i in indices),
            tuple(tuple(self.matrix[i][j] for j in indices) for i in indices),
        )

    def on_vectors(self, vectors: Sequence[Sequence[int]], orders: Sequence[int]) -> "LinkingPairing":
        """
        Pairing induced on new generators given as coefficient vectors.

        Args:
            vectors: New generators in current coordinates
            orders: Their orders (caller guarantees they form a basis)
        """
        return LinkingPairing(
            tuple(orders),
            tuple(tuple(self.value(u, v) for v in vectors) for u in vectors),
        )

    def negated(self) -> "LinkingPairing":
        return LinkingPairing(self.orders, tuple(tuple(-v for v in row) for row in self.matrix))

    def scaled(self, unit: int) -> "LinkingPairing":
        return LinkingPairing(self.orders, tuple(tuple(v * unit for v in row) for row in self.matrix))

    def elements(self) -> Iterator[Tuple[int, ...]]:
        return itertools.product(*(range(o) for o in self.orders))

    def is_nonsingular(self) -> bool:
        """The adjoint N -> Hom(N, Q/Z) is injective (hence bijective)."""
        pruned = self.pruned()
        if pruned.size == 0:
            return True
        modulus, m = pruned.integer_form()
        n = pruned.size
        stacked = [list(row) for row in m] + [[modulus * int(i == j) for j in range(n)] for i in range(n)]
        snf = smith_normal_form(stacked)
        index = 1
        for d in snf.diagonal:
            index *= d
        image_size = modulus**n // index
        return image_size == pruned.order

    def to_dict(self) -> dict:
        return {
            "orders": list(self.orders),
            "matrix": [[str(v) for v in row] for row in self.matrix],
        }

    def __str__(self) -> str:
        if not self.orders:
            return "trivial pairing"
        rows = "; ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.matrix)
        return f"orders={list(self.orders)} matrix=[{rows}]"


@dataclass(frozen=True)
class TwoAdicClass:
    """Isomorphism data of a homogeneous 2-primary block."""

    kind: str  # "Hyperbolic" | "EvenNonHyperbolic" | "OddDiagonal"
    diagonal: tuple = ()


@dataclass(frozen=True)
class PairingInvariants:
    prime: int
    exponent: int
    rank: int
    parity: Optional[str]
    det_class: Optional[int] = None
    two_adic_class: Optional[TwoAdicClass] = None


@dataclass(frozen=True)
class HomogeneousBlock:
    """A block of exponent prime**exponent together with its basis vectors."""

    prime: int
    exponent: int
    pairing: LinkingPairing
    basis: tuple = field(default=(), compare=False)


def pairing_lw(w) -> LinkingPairing:
    """
    The rank one pairing l_w on Z/q with l(1, 1) = w, where w = p/q reduced.
    """
    w = Fraction(w)
    q = w.denominator
    if q == 1:
        return LinkingPairing.trivial()
    return LinkingPairing((q,), ((ResidueQZ(w),),))


def pairing_e(k: int, variant: int) -> LinkingPairing:
    """
    The indecomposable even pairings E_0^k and E_1^k on (Z/2^k)^2.
    """
    if k < 1:
        raise InputError("exponent must be at least 1")
    if variant not in (0, 1):
        raise InputError("variant must be 0 or 1")
    if variant == 1 and k == 1:
        raise InputError("E_1^k requires k >= 2")
    off = Fraction(1, 2**k)
    diag = Fraction(2, 2**k) if variant == 1 else Fraction(0)
    return LinkingPairing((2**k, 2**k), ((diag, off), (off, diag)))


def orthogonal_sum(*pairings: LinkingPairing) -> LinkingPairing:
    orders = []
    for p in pairings:
        orders.extend(p.orders)
    n = len(orders)
    rows = [[Fraction(0)] * n for _ in range(n)]
    offset = 0
    for p in pairings:
        for i in range(p.size):
            for j in range(p.size):
                rows[offset + i][offset + j] = p.matrix[i][j].value
        offset += p.size
    return LinkingPairing(tuple(orders), tuple(tuple(r) for r in rows))


def _require_nonsingular(pairing: LinkingPairing) -> None:
    if not pairing.is_nonsingular():
        raise SingularPairingError(f"pairing is singular: {pairing}")


def primary_decompose(pairing: LinkingPairing) -> List[Tuple[int, LinkingPairing]]:
    """
    Split a nonsingular pairing into its p-primary orthogonal summands.

    Generator e_i of order p^a * m (p not dividing m) contributes m * e_i,
    a generator of order p^a of the p-primary part.

    Returns:
        List of (prime, p-primary pairing), primes ascending
    """
    pairing = pairing.pruned()
    _require_nonsingular(pairing)
    primes = sorted({p for o in pairing.orders for p in prime_divisors(o)})
    result = []
    for p in primes:
        vectors, orders = [], []
        for i, o in enumerate(pairing.orders):
            pa = 1
            while o % (pa * p) == 0:
                pa *= p
            if pa > 1:
                vector = [0] * pairing.size
                vector[i] = o // pa
                vectors.append(vector)
                orders.append(pa)
        result.append((p, pairing.on_vectors(vectors, orders)))
    return result


def _single_prime(pairing: LinkingPairing) -> int:
    primes = {p for o in pairing.orders for p in prime_divisors(o)}
    if len(primes) != 1:
        raise InputError(f"pairing is not primary: orders {pairing.orders}")
    return primes.pop()


def _exponent_of(order: int, p: int) -> int:
    k = 0
    while order > 1:
        order //= p
        k += 1
    return k


def homogeneous_split(pairing: LinkingPairing) -> List[HomogeneousBlock]:
    """
    Split a p-primary pairing into an orthogonal sum of homogeneous blocks.

    The generators of maximal order p^k span a block whose Gram matrix D
    (scaled by p^k) is invertible mod p. Each remaining generator f is replaced
    by f - (B D^-1) applied to the top generators, which kills its coupling with
    the block; then the procedure recurses on the remaining generators.

    Args:
        pairing: Nonsingular p-primary pairing

    Returns:
        Blocks ordered by decreasing exponent
    """
    pairing = pairing.pruned()
    if pairing.size == 0:
        return []
    p = _single_prime(pairing)
    _require_nonsingular(pairing)
    n = pairing.size
    current = [([int(i == j) for j in range(n)], _exponent_of(o, p)) for i, o in enumerate(pairing.orders)]
    blocks = []
    while current:
        k = max(e for _, e in current)
        modulus = p**k
        top = [v for v, e in current if e == k]
        rest = [(v, e) for v, e in current if e != k]
        gram = Matrix([[int(pairing.value_fraction(u, v) * modulus) % modulus for v in top] for u in top])
        try:
            gram_inv = gram.inv_mod(modulus)
        except ValueError as exc:
            raise SingularPairingError(f"block of exponent {p}^{k} is singular") from exc
        reduced = []
        for v, e in rest:
            coupling = Matrix([[int(pairing.value_fraction(v, t) * modulus) % modulus for t in top]])
            coeffs = (coupling * gram_inv).applyfunc(lambda x: x % modulus)
            new_v = list(v)
            for c, t in zip(coeffs, top):
                new_v = [a - int(c) * b for a, b in zip(new_v, t)]
            new_v = [a % o for a, o in zip(new_v, pairing.orders)]
            reduced.append((new_v, e))
        block = pairing.on_vectors(top, [modulus] * len(top))
        logger.debug("split block of exponent %d^%d and rank %d", p, k, len(top))
        blocks.append(HomogeneousBlock(p, k, block, tuple(tuple(v) for v in top)))
        current = reduced
    return blocks


def _scaled_matrix(block: LinkingPairing) -> Tuple[int, int, int, List[List[int]]]:
    p = _single_prime(block)
    modulus = block.orders[0]
    if any(o != modulus for o in block.orders):
        raise InputError(f"block is not homogeneous: orders {block.orders}")
    k = _exponent_of(modulus, p)
    m = [[int(v.value * modulus) % modulus for v in row] for row in block.matrix]
    return p, k, modulus, m


def arf_invariant(m: Sequence[Sequence[int]]) -> int:
    """
    Arf invariant of q(x) = x^T M x / 2 mod 2 for an even symmetric integer
    matrix M that is nonsingular mod 2, by symplectic reduction over F_2.
    """
    n = len(m)
    bilinear = [[m[i][j] % 2 for j in range(n)] for i in range(n)]

    def b(x, y):
        return sum(x[i] * bilinear[i][j] * y[j] for i in range(n) for j in range(n) if x[i] and y[j]) % 2

    def q(x):
        total = sum(m[i][i] // 2 * x[i] for i in range(n))
        total += sum(m[i][j] * x[i] * x[j] for i in range(n) for j in range(i + 1, n))
        return total % 2

    space = [[int(i == j) for j in range(n)] for i in range(n)]
    arf = 0
    while space:
        e = space.pop(0)
        partner_index = next((i for i, f in enumerate(space) if b(e, f)), None)
        if partner_index is None:
            raise SingularPairingError("even form is singular mod 2")
        f = space.pop(partner_index)
        arf ^= q(e) & q(f)
        orthogonalized = []
        for v in space:
            # v + b(v,f) e + b(v,e) f is orthogonal to e and f
            be, bf = b(v, e), b(v, f)
            orthogonalized.append([(vi + bf * ei + be * fi) % 2 for vi, ei, fi in zip(v, e, f)])
        space = orthogonalized
    return arf


@lru_cache(maxsize=None)
def diagonal_count_class(t: int, rho: int) -> int:
    """
    Arf class of an even homogeneous block whose scaled matrix has all
    off-diagonal entries odd, t diagonal entries divisible by 4 and the rest
    congruent to 2 mod 4, computed on the canonical matrix with those counts.
    """
    canonical = [[(0 if i < t else 2) if i == j else 1 for j in range(rho)] for i in range(rho)]
    return arf_invariant(canonical)


def diagonalize_odd_block(m: Sequence[Sequence[int]], modulus: int) -> List[int]:
    """
    Diagonalize an odd homogeneous 2-adic form M (scaled by 2^k).

    Repeatedly splits off a vector with odd self-link using
    f' = f - a^-1 b e. When the remainder is even, an already split odd
    vector e is re-mixed as e + u with a vector u of the remainder.

    Returns:
        Odd integers b_i with the block isomorphic to the sum of l_{b_i / 2^k}
    """
    n = len(m)

    def form(x, y):
        return sum(x[i] * m[i][j] * y[j] for i in range(n) for j in range(n) if x[i] and y[j]) % modulus

    rest = [[int(i == j) for j in range(n)] for i in range(n)]
    split: List[List[int]] = []
    while rest:
        odd = next((v for v in rest if form(v, v) % 2), None)
        if odd is None:
            if not split:
                raise InputError("block is even; nothing to diagonalize")
            e = split.pop()
            u = rest[0]
            odd = [(a + b) % modulus for a, b in zip(e, u)]
            rest = [odd] + rest
        rest.remove(odd)
        a = form(odd, odd)
        a_inv = pow(a, -1, modulus)
        rest = [
            [(vi - (form(v, odd) * a_inv % modulus) * oi) % modulus for vi, oi in zip(v, odd)]
            for v in rest
        ]
        split.append(odd)
    return [form(v, v) for v in split]


def invariants(block: LinkingPairing) -> PairingInvariants:
    """
    Invariants of a homogeneous p-primary block.

    Odd p: rank and the square class of det(L) for L = p^k * l.
    p = 2: parity; even blocks are classified by the Arf invariant of the
    associated quadratic refinement, odd blocks are diagonalized.
    """
    block = block.pruned()
    p, k, modulus, m = _scaled_matrix(block)
    rho = block.size
    if p != 2:
        det = int(Matrix(m).det()) % p
        if det == 0:
            raise SingularPairingError("homogeneous block is singular mod p")
        return PairingInvariants(p, k, rho, None, det_class=square_class(det, p))

    even = all(m[i][i] % 2 == 0 for i in range(rho))
    if even:
        if k == 1:
            cls = TwoAdicClass("Hyperbolic")
        else:
            off_diagonal_odd = all(m[i][j] % 2 for i in range(rho) for j in range(rho) if i != j)
            if off_diagonal_odd:
                t = sum(1 for i in range(rho) if m[i][i] % 4 == 0)
                arf = diagonal_count_class(t, rho)
            else:
                arf = arf_invariant(m)
            cls = TwoAdicClass("Hyperbolic" if arf == 0 else "EvenNonHyperbolic")
        return PairingInvariants(2, k, rho, "even", two_adic_class=cls)

    diagonal = diagonalize_odd_block(m, modulus)
    values = tuple(ResidueQZ(Fraction(b, modulus)) for b in diagonal)
    return PairingInvariants(2, k, rho, "odd", two_adic_class=TwoAdicClass("OddDiagonal", values))


def is_hyperbolic(pairing: LinkingPairing) -> bool:
    """
    True iff every homogeneous block of every primary component is hyperbolic.
    """
    for p, component in primary_decompose(pairing):
        for block in homogeneous_split(component):
            inv = invariants(block.pairing)
            if p == 2:
                if inv.two_adic_class.kind != "Hyperbolic":
                    return False
            elif inv.rank % 2 or inv.det_class != square_class((-1) ** (inv.rank // 2), p):
                return False
    return True


def is_even(pairing: LinkingPairing) -> bool:
    """2^(k-1) l(x, x) = 0 for every x of order 2^k (no odd 2-adic block)."""
    for p, component in primary_decompose(pairing):
        if p != 2:
            continue
        for block in homogeneous_split(component):
            if invariants(block.pairing).parity == "odd":
                return False
    return True


def _odd_block_key(inv: PairingInvariants) -> tuple:
    values = [int(v.value * 2**inv.exponent) for v in inv.two_adic_class.diagonal]
    det = 1
    for b in values:
        det = det * b % 8
    return inv.rank, det, sum(values) % 8


def are_isomorphic(a: LinkingPairing, b: LinkingPairing, bound: int = ORACLE_BOUND) -> bool:
    """
    Decide isomorphism of two nonsingular pairings.

    Odd primes compare (rank, det class) per exponent. The 2-primary parts
    compare invariants where they are complete (a single homogeneous block,
    or all blocks even) and otherwise fall back to the oracle.

    Raises:
        UndecidedError: 2-adic comparison inconclusive above the oracle bound
    """
    a, b = a.pruned(), b.pruned()
    if a.group() != b.group():
        return False
    parts_a, parts_b = dict(primary_decompose(a)), dict(primary_decompose(b))
    for p, comp_a in parts_a.items():
        comp_b = parts_b[p]
        blocks_a = homogeneous_split(comp_a)
        blocks_b = homogeneous_split(comp_b)
        inv_a = [invariants(blk.pairing) for blk in blocks_a]
        inv_b = [invariants(blk.pairing) for blk in blocks_b]
        if p != 2:
            if [(i.exponent, i.rank, i.det_class) for i in inv_a] != [(i.exponent, i.rank, i.det_class) for i in inv_b]:
                return False
            continue
        if [(i.exponent, i.parity) for i in inv_a] != [(i.exponent, i.parity) for i in inv_b]:
            return False
        if all(i.parity == "even" for i in inv_a):
            if [i.two_adic_class.kind for i in inv_a] != [i.two_adic_class.kind for i in inv_b]:
                return False
            continue
        if len(inv_a) == 1 and inv_a[0].exponent == 1:
            continue
        if len(inv_a) == 1 and inv_a[0].exponent >= 3:
            if _odd_block_key(inv_a[0]) != _odd_block_key(inv_b[0]):
                return False
            continue
        if comp_a.order > bound:
            raise UndecidedError(
                f"2-adic comparison needs the oracle but the 2-part has order {comp_a.order} > {bound}"
            )
        if not oracle_isomorphic(comp_a, comp_b, bound):
            return False
    return True
