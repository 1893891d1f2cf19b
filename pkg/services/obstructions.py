"""
Obstruction module.
The verdict engine: evaluates every implemented embedding criterion on a
manifold description and combines the results into Embeds, DoesNotEmbed or
Unknown, separately for locally flat and for smooth embeddings in S^4.

Criterion kinds:
    necessary   a failure obstructs embeddings of the tagged category
                (LocallyFlat failures obstruct smooth embeddings as well)
    sufficient  a pass produces an embedding of the tagged category
                (a SmoothOnly construction is also locally flat)
    decisive    an if-and-only-if result: a failure obstructs the tagged
                category and a pass comes with a smooth construction
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from constants.config import CONJ_BOUND, PARTITION_CAP, SHAPE_SEARCH_BOUND
from services.linking_pairing import LinkingPairing, is_even, is_hyperbolic
from services.manifolds import (
    LensSum,
    ManifoldDescription,
    SeifertManifold,
    SphereBundle,
    TorusBundle,
    UnionPhi,
    conjugacy_witness,
    first_homology_of,
    is_double_of_mirror,
    lens_sum_pairing,
    parabolic_type,
)
from services.partitions import ShapeMatch, even_shape, is_partitionable, odd_shape
from services.seifert import (
    SeifertData,
    classify_special,
    cones_are_paired,
    euler_number,
    first_homology,
    is_skew_symmetric,
    normalize,
    strict_part,
)
from services.seifert_pairing import (
    GluingMatrix,
    seifert_linking_pairing,
    union_homology,
    union_pairing_hyperbolic,
)
from utils.abelian_group import FiniteAbelianGroup
from utils.errors import InputError, ToolkitError, UnsupportedError
from utils.residues import p_adic_valuation

logger = logging.getLogger(__name__)


class Status(str, Enum):
    EMBEDS = "Embeds"
    DOES_NOT_EMBED = "DoesNotEmbed"
    UNKNOWN = "Unknown"


class Category(str, Enum):
    LOCALLY_FLAT = "LocallyFlat"
    SMOOTH = "SmoothOnly"


NECESSARY, SUFFICIENT, DECISIVE = "necessary", "sufficient", "decisive"

# ==============================================================================
# CITATIONS - EMBEDDED VERBATIM IN EVERY REPORT
# ==============================================================================

CITATIONS = {
    "direct-double": "Hantzsche: the torsion of H_1 of a 3-manifold in S^4 is a direct double A + A",
    "hyperbolic-pairing": "Kawauchi-Kojima: the torsion linking pairing of a 3-manifold in S^4 is hyperbolic",
    "even-self-linking": "Kawauchi-Kojima: 2^(k-1) l(x, x) = 0 for every x of order 2^k",
    "two-adic-homogeneity": "non-orientable base, hyperbolic pairing: all even cone orders share one 2-adic valuation",
    "eta-congruence": "non-orientable base, all cone orders odd, hyperbolic pairing: sum a_i b_i = 2c mod 4",
    "paired-nonorientable": "paired odd data over #^c RP^2: embeds iff -2c <= e(M) <= 2c and e(M) = 2c mod 4; all such embed smoothly",
    "circle-bundle": "circle bundles: embed iff orientable base with e in {0, +-1}, or c crosscaps with e in {-2c, 4-2c, ..., 2c} (Massey); all such embed smoothly",
    "im-euler-bound": "Issa-McCoy: strict data with e(M) > 0 and a direct double torsion has e <= k - 1",
    "im-2e-bound": "Issa-McCoy: a smooth embedding forces 2e <= k + 1",
    "im-partitionable": "Issa-McCoy: a smooth embedding forces M to be partitionable",
    "im-f2-betti": "Issa-McCoy: g = 0 and a smooth embedding force beta_1(M; F_2) <= 2e",
    "im-odd-shape": "Issa-McCoy: for k = 2e - 1, M embeds smoothly iff S' = {e (a, a-1), (e-1) (a, 1)}",
    "im-even-shape": "Issa-McCoy: for k = 2e, a smooth embedding forces one of two (p,q,r,s) shapes; the first shape always embeds smoothly",
    "donald-skew": "Donald: orientable base, e(M) = 0 and a smooth embedding force skew-symmetric Seifert data",
    "skew-symmetric-odd": "g = 0, e(M) = 0, all cone orders odd: M embeds iff the data is skew-symmetric (Blanchfield pairing neutrality)",
    "skew-symmetric-construction": "skew-symmetric data with odd cone orders (or one even pair) embeds smoothly as a double, stabilized by fibre sum",
    "freedman-homology-sphere": "Freedman: every integral homology 3-sphere embeds locally flatly in S^4",
    "catalogue-poincare-smooth": "Poincare homology sphere bounds the E_8 plumbing: nonzero Rochlin invariant, no smooth embedding",
    "catalogue-link-surgery": "0-framed surgery on the link 8^2_2 embeds M(-1; (2,1), (2,-1), (1,+-2)) smoothly",
    "torus-bundle-classification": "torus bundles: embed iff A is conjugate to I, -I, (1,1;0,1) or (-1,4;0,-1); all embed smoothly",
    "union-classification": "N u_phi N with c != 0 embeds iff phi = +-M_{m,n} with (m,n) in {(2,0), (2,2), (2,-2), (2,-4)} up to swap; all embed smoothly",
    "union-hyperbolic": "N u_phi N: pairing hyperbolic iff c = 0 and 4 | b, or c = 1, b odd, a and d even and not both divisible by 4",
    "donald-lens": "Donald: a sum of lens spaces embeds smoothly iff every p_i is odd and it is N # -N",
}


@dataclass(frozen=True)
class CriterionResult:
    """
    One criterion applied to one manifold; passed is None when the criterion
    does not apply or could not be evaluated (detail says why).
    """

    id: str
    passed: Optional[bool]
    kind: str
    category: Category
    detail: str = ""
    limited: bool = False

    @property
    def citation(self) -> str:
        return CITATIONS[self.id]

    def obstructs(self, category: Category) -> bool:
        if self.passed is not False or self.kind == SUFFICIENT:
            return False
        return category == Category.SMOOTH or self.category == Category.LOCALLY_FLAT

    def constructs(self, category: Category) -> bool:
        if self.passed is not True or self.kind == NECESSARY:
            return False
        if self.kind == DECISIVE:
            return True
        return category == Category.LOCALLY_FLAT or self.category == Category.SMOOTH

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "citation": self.citation,
            "passed": self.passed,
            "kind": self.kind,
            "category": self.category.value,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class EmbeddingVerdict:
    status: Status
    category: Category
    reasons: tuple = field(default=())

    @property
    def limited_by_bound(self) -> bool:
        """Unknown and some criterion was cut off by a search bound."""
        return self.status == Status.UNKNOWN and any(r.limited for r in self.reasons)

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "category": self.category.value,
            "reasons": [r.to_dict() for r in self.reasons],
        }


def _result(cid: str, passed: Optional[bool], kind: str, category: Category, detail: str = "", limited: bool = False) -> CriterionResult:
    return CriterionResult(cid, passed, kind, category, detail, limited)


def _skip(cid: str, kind: str, category: Category, why: str, limited: bool = False) -> CriterionResult:
    return CriterionResult(cid, None, kind, category, why, limited)


def decide(results: Sequence[CriterionResult], category: Category) -> EmbeddingVerdict:
    """
    Combine criterion results: a relevant obstruction gives DoesNotEmbed, a
    relevant construction gives Embeds, both at once is reported as Unknown.
    """
    reasons = tuple(sorted(results, key=lambda r: r.id))
    obstructions = [r for r in reasons if r.obstructs(category)]
    constructions = [r for r in reasons if r.constructs(category)]
    if obstructions and constructions:
        logger.error(
            "conflicting criteria (%s) vs (%s) in category %s",
            ", ".join(r.id for r in obstructions),
            ", ".join(r.id for r in constructions),
            category.value,
        )
        status = Status.UNKNOWN
    elif obstructions:
        status = Status.DOES_NOT_EMBED
    elif constructions:
        status = Status.EMBEDS
    else:
        status = Status.UNKNOWN
    return EmbeddingVerdict(status, category, reasons)


# ==============================================================================
# SHARED CRITERIA
# ==============================================================================


def _direct_double(group: FiniteAbelianGroup) -> CriterionResult:
    return _result("direct-double", group.is_direct_double(), NECESSARY, Category.LOCALLY_FLAT, f"H_1 = {group}")


def _freedman(group: FiniteAbelianGroup) -> CriterionResult:
    if not group.is_trivial():
        return _skip("freedman-homology-sphere", SUFFICIENT, Category.LOCALLY_FLAT, "not a homology sphere")
    return _result("freedman-homology-sphere", True, SUFFICIENT, Category.LOCALLY_FLAT, "H_1 = 0")


def _pairing_results(compute) -> List[CriterionResult]:
    try:
        pairing: LinkingPairing = compute()
        hyperbolic, even = is_hyperbolic(pairing), is_even(pairing)
    except ToolkitError as exc:
        why = f"pairing not computed: {exc}"
        return [
            _skip("hyperbolic-pairing", NECESSARY, Category.LOCALLY_FLAT, why),
            _skip("even-self-linking", NECESSARY, Category.LOCALLY_FLAT, why),
        ]
    detail = str(pairing)
    return [
        _result("hyperbolic-pairing", hyperbolic, NECESSARY, Category.LOCALLY_FLAT, detail),
        _result("even-self-linking", even, NECESSARY, Category.LOCALLY_FLAT, detail),
    ]


# ==============================================================================
# SEIFERT DATA
# ==============================================================================


def reversed_data(s: SeifertData) -> SeifertData:
    """Seifert data of -M."""
    return s.with_pairs(tuple((a, -b) for a, b in s.pairs))


def oriented_strict(s: SeifertData) -> Tuple[List[Tuple[int, int]], int]:
    """
    (S', e) for whichever of M, -M has e(M) >= 0.
    """
    if euler_number(s) < 0:
        s = reversed_data(s)
    return strict_part(s)


def _odd_cones(s: SeifertData) -> bool:
    return all(a % 2 for a, _ in s.cone_pairs())


def _is_poincare(s: SeifertData) -> bool:
    return classify_special(s).homology_sphere and sorted(a for a, _ in s.cone_pairs()) == [2, 3, 5]


_LINK_SURGERY_CATALOGUE = {
    normalize(SeifertData(-1, ((2, 1), (2, -1), (1, 2)))),
    normalize(SeifertData(-1, ((2, 1), (2, -1), (1, -2)))),
}


def bundle_criterion(base: int, e: int) -> CriterionResult:
    """The circle-bundle rule for M(base; (1, e)); e enters only up to sign."""
    if base >= 0:
        ok = abs(e) <= 1
        detail = f"orientable base of genus {base}, e = {e}"
    else:
        c = -base
        ok = abs(e) <= 2 * c and (e - 2 * c) % 4 == 0
        detail = f"{c} crosscaps, e = {e}"
    return _result("circle-bundle", ok, DECISIVE, Category.LOCALLY_FLAT, detail)


def paired_nonorientable_criterion(s: SeifertData) -> Optional[CriterionResult]:
    """
    Decisive rule for M(-c; S) whose cone pairs are odd and occur as
    (a, b), (a, a - b); None when the data has another shape.
    """
    if s.orientable_base:
        return None
    cones = s.cone_pairs()
    if not cones or not _odd_cones(s) or not cones_are_paired(cones):
        return None
    eps = euler_number(s)
    c = s.crosscaps
    ok = -2 * c <= eps <= 2 * c and (eps - 2 * c) % 4 == 0
    return _result("paired-nonorientable", ok, DECISIVE, Category.LOCALLY_FLAT, f"c = {c}, e(M) = {eps}")


def im_shape_check(strict: Sequence[Tuple[int, int]], e: int, bound: int = SHAPE_SEARCH_BOUND) -> ShapeMatch:
    """
    Shape test for strict data with e(M) > 0: k = 2e - 1 compares with
    {e (a, a-1), (e-1) (a, 1)}, k = 2e searches the (p,q,r,s) families.
    """
    k = len(strict)
    if k == 2 * e - 1:
        alpha = odd_shape(strict, e)
        return ShapeMatch("odd", alpha is not None, 1 if alpha is not None else None, (alpha,) if alpha else ())
    if k == 2 * e:
        return even_shape(strict, bound)
    return ShapeMatch("none", False)


def _issa_mccoy_results(s: SeifertData, homology: FiniteAbelianGroup, cap: int) -> List[CriterionResult]:
    results = []
    eps = euler_number(s)
    strict, e = oriented_strict(s)
    k = len(strict)
    smooth_ids = ("im-2e-bound", "im-partitionable", "im-f2-betti", "im-odd-shape", "im-even-shape")

    if not s.orientable_base or eps == 0:
        why = "needs an orientable base and e(M) != 0"
        results.append(_skip("im-euler-bound", NECESSARY, Category.LOCALLY_FLAT, why))
        results.extend(_skip(cid, NECESSARY, Category.SMOOTH, why) for cid in smooth_ids)
        return results

    if k > 1:
        results.append(_result("im-euler-bound", e <= k - 1, NECESSARY, Category.LOCALLY_FLAT, f"e = {e}, k = {k}"))
        # The general bound with the b_S term has an unsettled constant; only e <= k - 1 is used.
        logger.debug("%s: general Euler bound skipped, its constant is ambiguous", s)
    else:
        results.append(_skip("im-euler-bound", NECESSARY, Category.LOCALLY_FLAT, "needs k > 1"))

    if s.genus != 0 or k == 0:
        why = "needs g = 0" if s.genus else "no cone points"
        results.extend(_skip(cid, NECESSARY, Category.SMOOTH, why) for cid in smooth_ids)
        return results

    results.append(_result("im-2e-bound", 2 * e <= k + 1, NECESSARY, Category.SMOOTH, f"e = {e}, k = {k}"))

    try:
        partitionable = is_partitionable(strict, e, homology.is_direct_double(), cap)
        results.append(_result("im-partitionable", partitionable, NECESSARY, Category.SMOOTH, f"k = {k}, e = {e}"))
    except UnsupportedError as exc:
        results.append(_skip("im-partitionable", NECESSARY, Category.SMOOTH, str(exc), limited=True))

    betti = homology.free_rank + sum(1 for d in homology.divisors if d % 2 == 0)
    results.append(
        _result("im-f2-betti", betti <= 2 * e, NECESSARY, Category.SMOOTH, f"beta_1(M; F_2) = {betti}, 2e = {2 * e}")
    )

    shape = im_shape_check(strict, e)
    if shape.case == "odd":
        results.append(_result("im-odd-shape", shape.matched, DECISIVE, Category.SMOOTH, f"k = {k} = 2e - 1"))
    else:
        results.append(_skip("im-odd-shape", DECISIVE, Category.SMOOTH, "needs k = 2e - 1"))
    if shape.case == "even":
        if shape.matched:
            kind = DECISIVE if shape.shape == 1 else NECESSARY
            results.append(
                _result("im-even-shape", True, kind, Category.SMOOTH, f"shape {shape.shape}, (p,q,r,s,x,y,z) = {shape.parameters}")
            )
        elif shape.exhaustive:
            results.append(_result("im-even-shape", False, NECESSARY, Category.SMOOTH, "no (p,q,r,s) shape fits"))
        else:
            results.append(_skip("im-even-shape", NECESSARY, Category.SMOOTH, "search bound reached", limited=True))
    else:
        results.append(_skip("im-even-shape", NECESSARY, Category.SMOOTH, "needs k = 2e"))
    return results


def _skew_results(s: SeifertData) -> List[CriterionResult]:
    results = []
    eps = euler_number(s)
    skew = is_skew_symmetric(s)
    if s.orientable_base and eps == 0:
        results.append(_result("donald-skew", skew, NECESSARY, Category.SMOOTH))
    else:
        results.append(_skip("donald-skew", NECESSARY, Category.SMOOTH, "needs an orientable base and e(M) = 0"))

    if s.base == 0 and eps == 0 and _odd_cones(s):
        results.append(_result("skew-symmetric-odd", skew, DECISIVE, Category.LOCALLY_FLAT))
    else:
        results.append(_skip("skew-symmetric-odd", DECISIVE, Category.LOCALLY_FLAT, "needs g = 0, e(M) = 0 and odd cone orders"))

    even = [a for a, _ in s.cone_pairs() if a % 2 == 0]
    if s.orientable_base and skew and (not even or (len(even) == 2 and even[0] == even[1])):
        results.append(_result("skew-symmetric-construction", True, SUFFICIENT, Category.SMOOTH))
    else:
        results.append(
            _skip("skew-symmetric-construction", SUFFICIENT, Category.SMOOTH, "needs skew-symmetric data with at most one even pair")
        )
    return results


def _nonorientable_results(s: SeifertData) -> List[CriterionResult]:
    if s.orientable_base:
        why = "needs a non-orientable base"
        return [
            _skip("two-adic-homogeneity", NECESSARY, Category.LOCALLY_FLAT, why),
            _skip("eta-congruence", NECESSARY, Category.LOCALLY_FLAT, why),
        ]
    even = {p_adic_valuation(a, 2) for a, _ in s.pairs if a % 2 == 0}
    results = [_result("two-adic-homogeneity", len(even) <= 1, NECESSARY, Category.LOCALLY_FLAT, f"2-adic valuations {sorted(even)}")]
    if even:
        results.append(_skip("eta-congruence", NECESSARY, Category.LOCALLY_FLAT, "some cone order is even"))
    else:
        eta = sum(a * b for a, b in s.pairs)
        ok = (eta - 2 * s.crosscaps) % 4 == 0
        results.append(_result("eta-congruence", ok, NECESSARY, Category.LOCALLY_FLAT, f"eta = {eta}, c = {s.crosscaps}"))
    return results


def seifert_results(s: SeifertData, cap: int = PARTITION_CAP) -> List[CriterionResult]:
    """Every criterion for Seifert data, on its normal form."""
    s = normalize(s)
    homology = first_homology(s)
    results = [_direct_double(homology), _freedman(homology)]
    results.extend(_pairing_results(lambda: seifert_linking_pairing(s)))
    results.extend(_nonorientable_results(s))
    results.extend(_issa_mccoy_results(s, homology, cap))
    results.extend(_skew_results(s))

    if not s.cone_pairs():
        results.append(bundle_criterion(s.base, int(euler_number(s))))
    paired = paired_nonorientable_criterion(s)
    if paired is not None:
        results.append(paired)

    if _is_poincare(s):
        results.append(_result("catalogue-poincare-smooth", False, NECESSARY, Category.SMOOTH, "Poincare homology sphere"))
    if s in _LINK_SURGERY_CATALOGUE:
        results.append(_result("catalogue-link-surgery", True, SUFFICIENT, Category.SMOOTH))
    return results


# ==============================================================================
# TORUS BUNDLES, UNIONS, LENS SUMS
# ==============================================================================

_TORUS_TARGETS = {
    (1, 0): ((1, 0), (0, 1)),
    (1, 1): ((1, 1), (0, 1)),
    (-1, 0): ((-1, 0), (0, -1)),
    (-1, 4): ((-1, 4), (0, -1)),
}


def torus_bundle_criterion(bundle: TorusBundle, conj_bound: int = CONJ_BOUND) -> CriterionResult:
    """
    Parabolic type (trace and content of A - tI) is a complete conjugacy
    invariant; a passing type is confirmed by an explicit conjugator.
    """
    kind = parabolic_type(bundle)
    if kind not in _TORUS_TARGETS:
        return _result("torus-bundle-classification", False, DECISIVE, Category.LOCALLY_FLAT, f"parabolic type {kind}")
    target = _TORUS_TARGETS[kind]
    witness = conjugacy_witness(bundle, target, conj_bound)
    if witness is None:
        return _skip(
            "torus-bundle-classification", DECISIVE, Category.LOCALLY_FLAT,
            f"no conjugator to {target} with entries <= {conj_bound}", limited=True,
        )
    return _result("torus-bundle-classification", True, DECISIVE, Category.LOCALLY_FLAT, f"P = {witness} conjugates to {target}")


def torus_bundle_results(bundle: TorusBundle, conj_bound: int = CONJ_BOUND) -> List[CriterionResult]:
    homology = first_homology_of(bundle)
    return [_direct_double(homology), torus_bundle_criterion(bundle, conj_bound)]


UNION_EMBEDDINGS = {(2, 0), (2, 2), (2, -2), (2, -4)}


def union_in_embedding_set(phi: GluingMatrix) -> bool:
    mn = phi.mn()
    if mn is None:
        return False
    m, n = mn
    variants = {(m, n), (n, m), (-m, -n), (-n, -m)}
    return bool(variants & UNION_EMBEDDINGS)


def union_monodromy(phi: GluingMatrix) -> TorusBundle:
    """Torus bundle (-1, b; 0, -1) given by a gluing with c = 0 and a = 1."""
    if phi.c != 0:
        raise InputError(f"{phi} is not a torus bundle gluing")
    if phi.a == -1:
        phi = phi.negated()
    return TorusBundle(-1, phi.b, 0, -1)


def union_results(phi: GluingMatrix, conj_bound: int = CONJ_BOUND) -> List[CriterionResult]:
    homology = union_homology(phi)
    results = [
        _direct_double(homology),
        _result("union-hyperbolic", union_pairing_hyperbolic(phi), NECESSARY, Category.LOCALLY_FLAT, str(phi)),
    ]
    if phi.c == 0:
        results.append(torus_bundle_criterion(union_monodromy(phi), conj_bound))
    else:
        mn = phi.mn()
        detail = f"(m, n) = {mn}" if mn else f"|c| = {abs(phi.c)} > 1"
        results.append(_result("union-classification", union_in_embedding_set(phi), DECISIVE, Category.LOCALLY_FLAT, detail))
    return results


def lens_sum_results(lens: LensSum) -> List[CriterionResult]:
    homology = first_homology_of(lens)
    results = [_direct_double(homology)]
    results.extend(_pairing_results(lambda: lens_sum_pairing(lens)))
    odd = all(s.p % 2 for s in lens.summands)
    double = is_double_of_mirror(lens)
    results.append(
        _result("donald-lens", odd and double, DECISIVE, Category.SMOOTH, f"all p odd: {odd}, N # -N: {double}")
    )
    return results


# ==============================================================================
# ENGINE
# ==============================================================================


def criterion_results(m: ManifoldDescription, conj_bound: int = CONJ_BOUND, cap: int = PARTITION_CAP) -> List[CriterionResult]:
    """Every criterion applicable to the description kind, sorted by id."""
    if isinstance(m, SeifertManifold):
        results = seifert_results(m.data, cap)
    elif isinstance(m, SphereBundle):
        results = seifert_results(m.as_seifert(), cap)
    elif isinstance(m, TorusBundle):
        results = torus_bundle_results(m, conj_bound)
    elif isinstance(m, UnionPhi):
        results = union_results(m.phi, conj_bound)
    elif isinstance(m, LensSum):
        results = lens_sum_results(m)
    else:
        raise InputError(f"unknown manifold description {m!r}")
    return sorted(results, key=lambda r: r.id)


def necessary_battery(m: ManifoldDescription, conj_bound: int = CONJ_BOUND, cap: int = PARTITION_CAP) -> List[CriterionResult]:
    """The necessary conditions (including the obstruction side of decisive ones)."""
    return [r for r in criterion_results(m, conj_bound, cap) if r.kind != SUFFICIENT]


def categories_for(option: str) -> List[Category]:
    if option == "topological":
        return [Category.LOCALLY_FLAT]
    if option == "smooth":
        return [Category.SMOOTH]
    if option == "both":
        return [Category.LOCALLY_FLAT, Category.SMOOTH]
    raise InputError(f"unknown category {option!r}")


def evaluate(m: ManifoldDescription, category: str = "both", conj_bound: int = CONJ_BOUND, cap: int = PARTITION_CAP) -> List[EmbeddingVerdict]:
    """
    Verdicts for the requested categories ("topological", "smooth", "both").
    """
    results = criterion_results(m, conj_bound, cap)
    verdicts = [decide(results, c) for c in categories_for(category)]
    for v in verdicts:
        logger.info("%s: %s (%s)", m, v.status.value, v.category.value)
    return verdicts


def verdict_seifert_orientable_e0(s: SeifertData) -> EmbeddingVerdict:
    """
    g = 0, e(M) = 0, odd cone orders: embeds iff skew-symmetric. Other data
    falls back to the full battery.
    """
    s = normalize(s)
    if s.base == 0 and euler_number(s) == 0 and _odd_cones(s):
        skew = is_skew_symmetric(s)
        return decide([_result("skew-symmetric-odd", skew, DECISIVE, Category.LOCALLY_FLAT)], Category.LOCALLY_FLAT)
    logger.debug("%s outside the skew-symmetric family; using the full battery", s)
    return decide(seifert_results(s), Category.LOCALLY_FLAT)


def verdict_bundle(base: int, e: int) -> EmbeddingVerdict:
    return decide([bundle_criterion(base, e)], Category.LOCALLY_FLAT)


def verdict_nonorientable_paired(s: SeifertData) -> EmbeddingVerdict:
    s = normalize(s)
    criterion = paired_nonorientable_criterion(s)
    if criterion is None:
        logger.debug("%s is not paired odd data; using the full battery", s)
        return decide(seifert_results(s), Category.LOCALLY_FLAT)
    return decide([criterion], Category.LOCALLY_FLAT)


def verdict_union_phi(phi: GluingMatrix, conj_bound: int = CONJ_BOUND) -> EmbeddingVerdict:
    return decide(union_results(phi, conj_bound), Category.LOCALLY_FLAT)


def verdict_torus_bundle(bundle: TorusBundle, conj_bound: int = CONJ_BOUND) -> EmbeddingVerdict:
    return decide(torus_bundle_results(bundle, conj_bound), Category.LOCALLY_FLAT)


def verdict_lens_sum(lens: LensSum) -> EmbeddingVerdict:
    return decide(lens_sum_results(lens), Category.SMOOTH)


# ==============================================================================
# EULER CHARACTERISTIC AND GROUP CONSTRAINTS
# ==============================================================================


def complement_euler_options(beta: int) -> List[Tuple[int, int]]:
    """
    Possible (chi(X), chi(Y)) for the complementary regions of a 3-manifold
    with beta_1 = beta, labelled so that chi(X) <= chi(Y).
    """
    if beta < 0:
        raise InputError("beta must be non-negative")
    options = set()
    for b1 in range(beta + 1):
        chi_x = 1 + beta - 2 * b1
        chi_y = 2 - chi_x
        if chi_x <= chi_y:
            options.add((chi_x, chi_y))
    return sorted(options)


@dataclass(frozen=True)
class ConstraintReport:
    beta: int
    abelian_possible: bool
    abelian_shapes: tuple
    nilpotent_possible: bool
    nilpotent_shapes: tuple
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "abelian_possible": self.abelian_possible,
            "abelian_shapes": list(self.abelian_shapes),
            "nilpotent_possible": self.nilpotent_possible,
            "nilpotent_shapes": list(self.nilpotent_shapes),
            "notes": list(self.notes),
        }


def abelian_nilpotent_constraints(beta: int, torsion: Optional[FiniteAbelianGroup] = None) -> ConstraintReport:
    """
    Arithmetic constraints on embeddings with abelian or nilpotent
    complementary groups.

    Args:
        beta: beta_1(M)
        torsion: Torsion of H_1(M), when known; it must be A + A with A the
            torsion of pi_X
    """
    if beta < 0:
        raise InputError("beta must be non-negative")
    notes = []
    gamma = (beta + 1) // 2
    if beta in (0, 2):
        abelian_shapes = ("Z/n",) if beta == 0 else ("Z + Z/n",)
        abelian = True
        if torsion is not None:
            half = _half_of_double(torsion)
            abelian = half is not None and half.is_cyclic()
            if not abelian:
                notes.append(f"torsion {torsion} is not A + A with A cyclic")
    elif beta in (1, 3, 4, 6):
        abelian_shapes = ("Z" if gamma == 1 else f"Z^{gamma}",)
        abelian = torsion is None or torsion.order == 1
        if not abelian:
            notes.append("pi_X free abelian forces trivial torsion")
    else:
        abelian_shapes = ()
        abelian = False
        notes.append("abelian embeddings need beta <= 4 or beta = 6")

    if beta % 2:
        nilpotent = beta in (1, 3)
        nilpotent_shapes = {1: ("Z",), 3: ("Z^2",)}.get(beta, ())
        if nilpotent:
            notes.append("odd beta: X aspherical with chi(X) = 0")
    else:
        nilpotent = beta in (0, 2, 4, 6)
        nilpotent_shapes = ("Z^3",) if beta == 6 else (("homologically balanced, 3-generated",) if nilpotent else ())
        if nilpotent:
            notes.append("even beta: chi(X) = chi(Y) = 1")
    if abelian_shapes and not abelian:
        abelian_shapes = ()
    return ConstraintReport(beta, abelian, tuple(abelian_shapes), nilpotent, tuple(nilpotent_shapes), tuple(notes))


def _half_of_double(group: FiniteAbelianGroup) -> Optional[FiniteAbelianGroup]:
    """A with group = A + A, or None."""
    if not group.is_direct_double():
        return None
    powers = group.elementary_divisors()
    return FiniteAbelianGroup.from_orders(powers[::2])
