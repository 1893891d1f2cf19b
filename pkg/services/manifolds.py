"""
Manifold description module.
The closed orientable 3-manifolds the toolkit accepts (Seifert data, torus
bundles, unions N u_phi N, lens-space sums, circle bundles), their first
homology and linking pairings where known, and the GL(2,Z) normal form used
to classify torus-bundle monodromies.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import List, Optional, Tuple, Union

from sympy import mod_inverse
from sympy.core.intfunc import igcdex

from constants.config import CONJ_BOUND
from services.linking_pairing import LinkingPairing, orthogonal_sum, pairing_lw
from services.seifert import SeifertData, first_homology, normalize
from services.seifert_pairing import GluingMatrix, seifert_linking_pairing, union_homology, union_pairing
from utils.abelian_group import FiniteAbelianGroup, cokernel
from utils.errors import InputError, UnsupportedError
from utils.integer_matrix import mat_mul

logger = logging.getLogger(__name__)

Matrix2 = Tuple[Tuple[int, int], Tuple[int, int]]


@dataclass(frozen=True)
class SeifertManifold:
    data: SeifertData

    kind = "seifert"

    def __str__(self) -> str:
        return str(self.data)


@dataclass(frozen=True)
class TorusBundle:
    """Mapping torus of A in SL(2, Z) acting on the 2-torus."""

    a: int
    b: int
    c: int
    d: int

    kind = "torus_bundle"

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise InputError(f"monodromy {self} must have determinant 1")

    @property
    def matrix(self) -> Matrix2:
        return (self.a, self.b), (self.c, self.d)

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __str__(self) -> str:
        return f"TB[{self.a},{self.b};{self.c},{self.d}]"


@dataclass(frozen=True)
class UnionPhi:
    phi: GluingMatrix

    kind = "union"

    def __str__(self) -> str:
        return str(self.phi)


@dataclass(frozen=True)
class LensSummand:
    """sign * L(p, q); sign -1 is the orientation-reversed lens space."""

    sign: int
    p: int
    q: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InputError("lens summand sign must be +1 or -1")
        if self.p < 2:
            raise InputError(f"lens space L({self.p},{self.q}) needs p >= 2")
        if gcd(self.p, self.q) != 1:
            raise InputError(f"gcd({self.p},{self.q}) != 1 in L({self.p},{self.q})")

    def oriented_q(self) -> int:
        """q' with sign * L(p, q) = L(p, q') preserving orientation."""
        return (self.sign * self.q) % self.p

    def __str__(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}({self.p},{self.q})"


@dataclass(frozen=True)
class LensSum:
    summands: tuple

    kind = "lens_sum"

    def __post_init__(self):
        if not self.summands:
            raise InputError("a lens sum needs at least one summand")

    def __str__(self) -> str:
        return "LS(" + " # ".join(str(s) for s in self.summands) + ")"


@dataclass(frozen=True)
class SphereBundle:
    """
    Circle bundle with Euler number euler over the closed surface of genus
    base (base >= 0) or with -base crosscaps (base < 0).
    """

    base: int
    euler: int

    kind = "sphere_bundle"

    def as_seifert(self) -> SeifertData:
        return SeifertData(self.base, ((1, self.euler),))

    def __str__(self) -> str:
        return f"SB({self.base}; {self.euler})"


ManifoldDescription = Union[SeifertManifold, TorusBundle, UnionPhi, LensSum, SphereBundle]


# ==============================================================================
# HOMOLOGY
# ==============================================================================


def torus_bundle_homology(bundle: TorusBundle) -> FiniteAbelianGroup:
    """H_1 = Z + Cok(A - I)."""
    a, b, c, d = bundle.a, bundle.b, bundle.c, bundle.d
    group = cokernel([[a - 1, b], [c, d - 1]])
    return FiniteAbelianGroup(group.divisors, group.free_rank + 1)


def lens_sum_homology(lens: LensSum) -> FiniteAbelianGroup:
    return FiniteAbelianGroup.from_orders([s.p for s in lens.summands])


def sphere_bundle_homology(bundle: SphereBundle) -> FiniteAbelianGroup:
    return first_homology(bundle.as_seifert())


def first_homology_of(m: ManifoldDescription) -> FiniteAbelianGroup:
    if isinstance(m, SeifertManifold):
        return first_homology(m.data)
    if isinstance(m, TorusBundle):
        return torus_bundle_homology(m)
    if isinstance(m, UnionPhi):
        return union_homology(m.phi)
    if isinstance(m, LensSum):
        return lens_sum_homology(m)
    if isinstance(m, SphereBundle):
        return sphere_bundle_homology(m)
    raise InputError(f"unknown manifold description {m!r}")


def lens_sum_pairing(lens: LensSum) -> LinkingPairing:
    """
    Orthogonal sum of l_{q/p} over the summands; reversed summands
    contribute l_{-q/p}.
    """
    parts = [pairing_lw(Fraction(s.sign * s.q, s.p)) for s in lens.summands]
    return orthogonal_sum(*parts)


def linking_pairing_of(m: ManifoldDescription) -> LinkingPairing:
    """
    Linking pairing on the torsion of H_1(M).

    Raises:
        UnsupportedError: Torus bundles, and unions without a closed form
    """
    if isinstance(m, SeifertManifold):
        return seifert_linking_pairing(normalize(m.data))
    if isinstance(m, SphereBundle):
        return seifert_linking_pairing(normalize(m.as_seifert()))
    if isinstance(m, LensSum):
        return lens_sum_pairing(m)
    if isinstance(m, UnionPhi):
        return union_pairing(m.phi)
    raise UnsupportedError(f"no linking pairing computation for {m.kind} descriptions")


# ==============================================================================
# LENS SPACE CLASSIFICATION
# ==============================================================================


def lens_key(p: int, q: int) -> Tuple[int, int]:
    """
    Orientation-preserving homeomorphism class of L(p, q): q is determined
    up to q -> q^-1 mod p.
    """
    q %= p
    return p, min(q, mod_inverse(q, p))


def lens_mirror_key(key: Tuple[int, int]) -> Tuple[int, int]:
    p, q = key
    return lens_key(p, -q)


def is_double_of_mirror(lens: LensSum) -> bool:
    """
    True iff the sum is N # -N: every class occurs as often as its mirror,
    and amphicheiral classes occur an even number of times.
    """
    counts = Counter(lens_key(s.p, s.oriented_q()) for s in lens.summands)
    for key, n in counts.items():
        mirror = lens_mirror_key(key)
        if mirror == key:
            if n % 2:
                return False
        elif counts.get(mirror, 0) != n:
            return False
    return True


# ==============================================================================
# TORUS BUNDLE MONODROMY
# ==============================================================================


def _content(rows: List[List[int]]) -> int:
    g = 0
    for row in rows:
        for x in row:
            g = gcd(g, x)
    return g


def parabolic_type(bundle: TorusBundle) -> Optional[Tuple[int, int]]:
    """
    (t, n) with A conjugate in GL(2, Z) to (t, n; 0, t), t = +-1, n >= 0, or
    None when |trace| != 2. n is the content of A - tI.
    """
    if abs(bundle.trace) != 2:
        return None
    t = bundle.trace // 2
    return t, _content([[bundle.a - t, bundle.b], [bundle.c, bundle.d - t]])


def _inverse(p: List[List[int]]) -> List[List[int]]:
    det = p[0][0] * p[1][1] - p[0][1] * p[1][0]
    return [[p[1][1] * det, -p[0][1] * det], [-p[1][0] * det, p[0][0] * det]]


def _conjugate(p: List[List[int]], a: List[List[int]]) -> List[List[int]]:
    return mat_mul(mat_mul(_inverse(p), a), p)


def normal_form_conjugator(bundle: TorusBundle) -> Optional[List[List[int]]]:
    """
    P in GL(2, Z) with P^-1 A P = (t, n; 0, t), n >= 0, for parabolic A.

    The first column of P spans the kernel of A - tI; the second completes it
    to a unimodular basis.
    """
    kind = parabolic_type(bundle)
    if kind is None:
        return None
    t, n = kind
    a = [list(r) for r in bundle.matrix]
    if n == 0:
        return [[1, 0], [0, 1]]
    nilpotent = [[a[0][0] - t, a[0][1]], [a[1][0], a[1][1] - t]]
    # kernel of a rank one 2x2 matrix: orthogonal to a nonzero row
    row = nilpotent[0] if any(nilpotent[0]) else nilpotent[1]
    g = gcd(row[0], row[1])
    v = [-row[1] // g, row[0] // g]
    x, y, _ = igcdex(v[0], v[1])
    p = [[v[0], -int(y)], [v[1], int(x)]]
    form = _conjugate(p, a)
    if form[0][1] < 0:
        flip = [[1, 0], [0, -1]]
        p = mat_mul(p, flip)
    return p


def search_conjugator(source: Matrix2, target: Matrix2, bound: int = CONJ_BOUND) -> Optional[List[List[int]]]:
    """
    Brute-force search for P in GL(2, Z) with entries in [-bound, bound] and
    P^-1 source P = target.
    """
    src = [list(r) for r in source]
    tgt = [list(r) for r in target]
    span = range(-bound, bound + 1)
    for p00, p01, p10, p11 in product(span, repeat=4):
        if abs(p00 * p11 - p01 * p10) != 1:
            continue
        p = [[p00, p01], [p10, p11]]
        # P target = source P avoids the inverse
        if mat_mul(p, tgt) == mat_mul(src, p):
            return p
    return None


def conjugacy_witness(bundle: TorusBundle, target: Matrix2, bound: int = CONJ_BOUND) -> Optional[List[List[int]]]:
    """
    A verified conjugator taking A to target: the normal form conjugator
    when it lands on target, otherwise bounded search.
    """
    a = [list(r) for r in bundle.matrix]
    candidate = normal_form_conjugator(bundle)
    if candidate is not None and _conjugate(candidate, a) == [list(r) for r in target]:
        return candidate
    logger.debug("normal form missed %s for %s; searching with bound %d", target, bundle, bound)
    return search_conjugator(bundle.matrix, target, bound)
