"""
Residue and number theory utilities.
Handles Q/Z residues, p-adic valuations and square classes.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

from sympy import factorint, legendre_symbol, mod_inverse

from utils.errors import InputError

Rational = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class ResidueQZ:
    """An element of Q/Z, stored as its representative in [0, 1)."""

    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value) % 1)

    def __add__(self, other: "ResidueQZ") -> "ResidueQZ":
        return ResidueQZ(self.value + _as_fraction(other))

    def __sub__(self, other: "ResidueQZ") -> "ResidueQZ":
        return ResidueQZ(self.value - _as_fraction(other))

    def __neg__(self) -> "ResidueQZ":
        return ResidueQZ(-self.value)

    def __mul__(self, n: int) -> "ResidueQZ":
        return ResidueQZ(self.value * n)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def denominator(self) -> int:
        return self.value.denominator

    @property
    def numerator(self) -> int:
        return self.value.numerator

    def p_part(self, p: int) -> "ResidueQZ":
        """
        Project onto the p-primary summand Z[1/p]/Z of Q/Z.

        Args:
            p: A prime

        Returns:
            The residue c/p^v congruent to self modulo denominators prime to p
        """
        den = self.value.denominator
        v = p_adic_valuation(den, p) if den > 1 else 0
        if v == 0:
            return ResidueQZ(Fraction(0))
        pv = p**v
        cofactor = den // pv
        c = (self.value.numerator * mod_inverse(cofactor, pv)) % pv
        return ResidueQZ(Fraction(c, pv))

    def __str__(self) -> str:
        if self.value == 0:
            return "0"
        return f"{self.value.numerator}/{self.value.denominator}"


def _as_fraction(x) -> Fraction:
    if isinstance(x, ResidueQZ):
        return x.value
    return Fraction(x)


def p_adic_valuation(n: Rational, p: int) -> int:
    """
    Compute the p-adic valuation of a nonzero integer or rational.

    Args:
        n: Nonzero integer or Fraction
        p: A prime

    Returns:
        v such that n = p^v * u with u a p-unit (may be negative)
    """
    n = Fraction(n)
    if n == 0:
        raise InputError("p-adic valuation of 0 is undefined")
    v = 0
    num, den = abs(n.numerator), n.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def prime_power_part(n: int, p: int) -> int:
    """Largest power of p dividing the nonzero integer n."""
    if n == 0:
        raise InputError("prime power part of 0 is undefined")
    return p ** p_adic_valuation(n, p)


def prime_divisors(n: int) -> list:
    """Sorted primes dividing |n| (empty for 0 and +-1)."""
    n = abs(n)
    if n <= 1:
        return []
    return sorted(factorint(n))


def lcm(*values: int) -> int:
    result = 1
    for v in values:
        v = abs(v)
        if v:
            result = result * v // gcd(result, v)
    return result


def square_class(u: int, p: int) -> int:
    """
    Class of a p-unit in F_p^x / (F_p^x)^2 for odd p.

    Returns:
        +1 for squares, -1 for non-squares
    """
    u %= p
    if u == 0:
        raise InputError(f"{u} is not a unit mod {p}")
    return legendre_symbol(u, p)


def nonsquare_mod(p: int) -> int:
    """Smallest positive non-square modulo the odd prime p."""
    for x in range(2, p):
        if legendre_symbol(x, p) == -1:
            return x
    raise InputError(f"no non-square modulo {p}")


def sqrt_mod_prime_power(w: int, p: int, k: int) -> int:
    """
    A square root of a square unit w modulo p^k (p odd), by brute force
    modulo p followed by Hensel lifting.
    """
    modulus = p**k
    root = next((x for x in range(1, p) if (x * x - w) % p == 0), None)
    if root is None:
        raise InputError(f"{w} is not a square mod {p}")
    current = p
    while current < modulus:
        current *= p
        # Newton step: x <- x - (x^2 - w) / (2x)
        root = (root - (root * root - w) * mod_inverse(2 * root, current)) % current
    return root % modulus
