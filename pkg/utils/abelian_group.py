"""
Finitely generated abelian groups.
Handles invariant-factor normal form, cokernels and localization.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, List, Sequence

from sympy import factorint

from utils.errors import InputError
from utils.integer_matrix import smith_normal_form, transpose


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """
    Z^free_rank + Z/d_1 + ... + Z/d_n with d_1 | d_2 | ... | d_n, all d_i >= 2.
    """

    divisors: tuple = ()
    free_rank: int = 0

    def __post_init__(self):
        divisors = tuple(int(d) for d in self.divisors)
        if any(d < 2 for d in divisors):
            raise InputError(f"invariant factors must be >= 2: {divisors}")
        if any(b % a for a, b in zip(divisors, divisors[1:])):
            raise InputError(f"invariant factors must form a divisibility chain: {divisors}")
        if self.free_rank < 0:
            raise InputError("free rank must be non-negative")
        object.__setattr__(self, "divisors", divisors)

    @classmethod
    def from_orders(cls, orders: Iterable[int], free_rank: int = 0) -> "FiniteAbelianGroup":
        """
        Build the group from an arbitrary list of cyclic orders.

        Args:
            orders: Orders of cyclic summands (0 means Z, 1 is dropped)
            free_rank: Additional free rank

        Returns:
            The group in invariant-factor form
        """
        prime_powers = {}
        for n in orders:
            n = abs(int(n))
            if n == 0:
                free_rank += 1
                continue
            for p, e in factorint(n).items():
                prime_powers.setdefault(p, []).append(p**e)
        length = max((len(v) for v in prime_powers.values()), default=0)
        factors = [1] * length
        for powers in prime_powers.values():
            for slot, q in enumerate(sorted(powers, reverse=True)):
                factors[length - 1 - slot] *= q
        return cls(tuple(f for f in factors if f > 1), free_rank)

    @property
    def order(self) -> int:
        """Order of the torsion subgroup."""
        product = 1
        for d in self.divisors:
            product *= d
        return product

    @property
    def exponent(self) -> int:
        return self.divisors[-1] if self.divisors else 1

    def torsion(self) -> "FiniteAbelianGroup":
        return FiniteAbelianGroup(self.divisors, 0)

    def is_trivial(self) -> bool:
        return not self.divisors and self.free_rank == 0

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_cyclic(self) -> bool:
        return self.free_rank == 0 and len(self.divisors) <= 1

    def elementary_divisors(self) -> List[int]:
        """Prime power orders of the primary cyclic summands, sorted."""
        powers = []
        for d in self.divisors:
            powers.extend(p**e for p, e in factorint(d).items())
        return sorted(powers)

    def p_rank(self, p: int) -> int:
        """Number of cyclic summands of order divisible by p."""
        return sum(1 for d in self.divisors if d % p == 0)

    def primes(self) -> List[int]:
        return sorted(factorint(self.order)) if self.order > 1 else []

    def is_direct_double(self) -> bool:
        """True iff the torsion subgroup is A + A for some A."""
        counts = Counter(self.elementary_divisors())
        return all(c % 2 == 0 for c in counts.values())

    def direct_sum(self, other: "FiniteAbelianGroup") -> "FiniteAbelianGroup":
        return FiniteAbelianGroup.from_orders(
            list(self.divisors) + list(other.divisors), self.free_rank + other.free_rank
        )

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "divisors": list(self.divisors)}

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.divisors)
        return " + ".join(parts) if parts else "0"


def cokernel(m: Sequence[Sequence[int]], cols: int = 0) -> FiniteAbelianGroup:
    """
    Cokernel Z^rows / m Z^cols of an integer matrix.

    Args:
        m: Integer matrix as a list of rows
        cols: Number of columns when m has no rows

    Returns:
        The cokernel in invariant-factor form
    """
    snf = smith_normal_form(m, cols)
    rows = len(m)
    torsion = [abs(d) for d in snf.diagonal if abs(d) > 1]
    return FiniteAbelianGroup(tuple(torsion), rows - snf.rank)


def presentation_group(relations: Sequence[Sequence[int]], generators: int) -> FiniteAbelianGroup:
    """
    Abelian group on the given number of generators modulo relation rows.
    """
    if not relations:
        return FiniteAbelianGroup((), generators)
    return cokernel(transpose(relations), len(relations))


def localize_group(g: FiniteAbelianGroup, p: int) -> FiniteAbelianGroup:
    """p-primary part of the torsion subgroup."""
    parts = []
    for d in g.divisors:
        q = 1
        while d % p == 0:
            d //= p
            q *= p
        if q > 1:
            parts.append(q)
    return FiniteAbelianGroup(tuple(parts), 0)
