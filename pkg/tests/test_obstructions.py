import pytest

from services.manifolds import LensSum, LensSummand, SeifertManifold, TorusBundle
from services.obstructions import (
    CITATIONS,
    DECISIVE,
    NECESSARY,
    SUFFICIENT,
    Category,
    CriterionResult,
    EmbeddingVerdict,
    Status,
    abelian_nilpotent_constraints,
    bundle_criterion,
    categories_for,
    complement_euler_options,
    criterion_results,
    decide,
    evaluate,
    necessary_battery,
    oriented_strict,
    union_in_embedding_set,
    verdict_bundle,
    verdict_lens_sum,
    verdict_nonorientable_paired,
    verdict_seifert_orientable_e0,
    verdict_torus_bundle,
    verdict_union_phi,
)
from services.report_service import CLASSIFICATION_EMBEDS, CLASSIFICATION_NEAR_MISSES
from services.seifert import SeifertData
from services.seifert_pairing import GluingMatrix
from utils.abelian_group import FiniteAbelianGroup
from utils.errors import InputError
from utils.parsers import parse_manifold

SKEW = SeifertData(0, ((3, 1), (3, -1), (5, 2), (5, -2)))


def by_category(m, category="both") -> dict:
    return {v.category: v for v in evaluate(m, category)}


def reason(verdict: EmbeddingVerdict, cid: str) -> CriterionResult:
    return next(r for r in verdict.reasons if r.id == cid)


class TestClassification:
    @pytest.mark.parametrize("text", CLASSIFICATION_EMBEDS)
    def test_listed_manifolds_embed(self, text):
        [verdict] = evaluate(parse_manifold(text), "topological")
        assert verdict.status == Status.EMBEDS

    @pytest.mark.parametrize("text", CLASSIFICATION_NEAR_MISSES)
    def test_near_misses_do_not_embed(self, text):
        [verdict] = evaluate(parse_manifold(text), "topological")
        assert verdict.status == Status.DOES_NOT_EMBED


class TestSeifertVerdicts:
    def test_poincare_sphere(self, poincare_sphere):
        verdicts = by_category(SeifertManifold(poincare_sphere))
        assert verdicts[Category.LOCALLY_FLAT].status == Status.EMBEDS
        assert verdicts[Category.SMOOTH].status == Status.DOES_NOT_EMBED
        assert reason(verdicts[Category.SMOOTH], "catalogue-poincare-smooth").passed is False

    def test_hantzsche_wendt_fails_hyperbolicity(self, hantzsche_wendt):
        verdicts = by_category(SeifertManifold(hantzsche_wendt))
        assert verdicts[Category.LOCALLY_FLAT].status == Status.DOES_NOT_EMBED
        assert verdicts[Category.SMOOTH].status == Status.DOES_NOT_EMBED
        lf = verdicts[Category.LOCALLY_FLAT]
        assert reason(lf, "direct-double").passed is True
        assert reason(lf, "hyperbolic-pairing").passed is False

    def test_skew_symmetric_data_embeds_smoothly(self):
        verdicts = by_category(SeifertManifold(SKEW))
        assert verdicts[Category.LOCALLY_FLAT].status == Status.EMBEDS
        assert verdicts[Category.SMOOTH].status == Status.EMBEDS

    def test_skew_symmetric_family_verdict(self):
        assert verdict_seifert_orientable_e0(SKEW).status == Status.EMBEDS
        assert verdict_seifert_orientable_e0(SeifertData(0, ((3, 1), (5, -2), (15, 1)))).status == Status.DOES_NOT_EMBED

    @pytest.mark.parametrize("e, status", [(2, Status.EMBEDS), (-2, Status.EMBEDS), (0, Status.DOES_NOT_EMBED), (4, Status.DOES_NOT_EMBED)])
    def test_paired_nonorientable(self, e, status):
        s = SeifertData(-1, ((3, 1), (3, 2), (1, -e - 1)))
        assert verdict_nonorientable_paired(s).status == status

    def test_reasons_are_sorted_and_cited(self, poincare_sphere):
        [verdict] = evaluate(SeifertManifold(poincare_sphere), "smooth")
        ids = [r.id for r in verdict.reasons]
        assert ids == sorted(ids)
        assert all(r.citation == CITATIONS[r.id] for r in verdict.reasons)

    def test_oriented_strict_flips_negative_euler(self, poincare_sphere):
        assert oriented_strict(poincare_sphere) == ([(5, 4), (3, 2), (2, 1)], 2)

    def test_partition_cap_marks_criterion_limited(self, poincare_sphere):
        results = criterion_results(SeifertManifold(poincare_sphere), cap=2)
        partition = next(r for r in results if r.id == "im-partitionable")
        assert partition.passed is None and partition.limited

    def test_necessary_battery_drops_sufficient_criteria(self, poincare_sphere):
        battery = necessary_battery(SeifertManifold(poincare_sphere))
        assert battery and all(r.kind != SUFFICIENT for r in battery)


class TestCircleBundles:
    @pytest.mark.parametrize(
        "base, e, status",
        [
            (0, 0, Status.EMBEDS),
            (3, -1, Status.EMBEDS),
            (0, 2, Status.DOES_NOT_EMBED),
            (-1, 2, Status.EMBEDS),
            (-1, -2, Status.EMBEDS),
            (-1, 0, Status.DOES_NOT_EMBED),
            (-1, 4, Status.DOES_NOT_EMBED),
            (-2, 4, Status.EMBEDS),
            (-2, 0, Status.EMBEDS),
            (-2, 2, Status.DOES_NOT_EMBED),
        ],
    )
    def test_bundle_rule(self, base, e, status):
        assert verdict_bundle(base, e).status == status

    def test_rule_ignores_sign_of_e(self):
        for base in range(-4, 4):
            for e in range(-10, 11):
                assert bundle_criterion(base, e).passed == bundle_criterion(base, -e).passed


class TestOtherFamilies:
    def test_torus_bundles(self):
        assert verdict_torus_bundle(TorusBundle(2, 1, -1, 0)).status == Status.EMBEDS
        assert verdict_torus_bundle(TorusBundle(-1, 2, 0, -1)).status == Status.DOES_NOT_EMBED
        assert verdict_torus_bundle(TorusBundle(2, 1, 1, 1)).status == Status.DOES_NOT_EMBED

    def test_union_embedding_set(self):
        assert union_in_embedding_set(GluingMatrix.from_mn(2, -4))
        assert union_in_embedding_set(GluingMatrix.from_mn(-4, 2))
        assert union_in_embedding_set(GluingMatrix.from_mn(2, 0).negated())
        assert not union_in_embedding_set(GluingMatrix(6, -1, 1, 0))
        assert not union_in_embedding_set(GluingMatrix(1, 2, 0, 1))

    def test_union_with_torus_bundle_gluing(self):
        assert verdict_union_phi(GluingMatrix(1, 4, 0, 1)).status == Status.EMBEDS
        assert verdict_union_phi(GluingMatrix(-1, 2, 0, -1)).status == Status.DOES_NOT_EMBED

    def test_lens_sums(self):
        double = LensSum((LensSummand(1, 5, 1), LensSummand(-1, 5, 1)))
        even = LensSum((LensSummand(1, 2, 1), LensSummand(-1, 2, 1)))
        assert verdict_lens_sum(double).status == Status.EMBEDS
        assert verdict_lens_sum(even).status == Status.DOES_NOT_EMBED


class TestDecide:
    def test_conflict_is_unknown(self):
        results = [
            CriterionResult("direct-double", False, NECESSARY, Category.LOCALLY_FLAT),
            CriterionResult("freedman-homology-sphere", True, SUFFICIENT, Category.LOCALLY_FLAT),
        ]
        assert decide(results, Category.LOCALLY_FLAT).status == Status.UNKNOWN

    def test_smooth_obstruction_does_not_block_locally_flat(self):
        results = [CriterionResult("im-2e-bound", False, NECESSARY, Category.SMOOTH)]
        assert decide(results, Category.LOCALLY_FLAT).status == Status.UNKNOWN
        assert decide(results, Category.SMOOTH).status == Status.DOES_NOT_EMBED

    def test_decisive_construction_counts_in_both_categories(self):
        results = [CriterionResult("donald-lens", True, DECISIVE, Category.SMOOTH)]
        assert decide(results, Category.LOCALLY_FLAT).status == Status.EMBEDS

    def test_limited_only_when_unknown(self):
        limited = CriterionResult("im-partitionable", None, NECESSARY, Category.SMOOTH, "cap", limited=True)
        assert decide([limited], Category.SMOOTH).limited_by_bound
        blocked = CriterionResult("im-2e-bound", False, NECESSARY, Category.SMOOTH)
        assert not decide([limited, blocked], Category.SMOOTH).limited_by_bound

    def test_categories_for(self):
        assert categories_for("both") == [Category.LOCALLY_FLAT, Category.SMOOTH]
        assert categories_for("smooth") == [Category.SMOOTH]
        with pytest.raises(InputError):
            categories_for("pl")

    def test_to_dict(self, hantzsche_wendt):
        [verdict] = evaluate(SeifertManifold(hantzsche_wendt), "topological")
        payload = verdict.to_dict()
        assert payload["status"] == "DoesNotEmbed"
        assert payload["category"] == "LocallyFlat"
        assert {"id", "citation", "passed", "kind", "category", "detail"} <= set(payload["reasons"][0])


class TestConstraints:
    @pytest.mark.parametrize(
        "beta, options",
        [(0, [(1, 1)]), (1, [(0, 2)]), (2, [(-1, 3), (1, 1)]), (3, [(-2, 4), (0, 2)])],
    )
    def test_complement_euler_options(self, beta, options):
        assert complement_euler_options(beta) == options

    def test_odd_beta_nilpotent_only_for_one_and_three(self):
        assert abelian_nilpotent_constraints(1).nilpotent_shapes == ("Z",)
        assert abelian_nilpotent_constraints(3).nilpotent_shapes == ("Z^2",)
        assert not abelian_nilpotent_constraints(5).nilpotent_possible

    def test_beta_six(self):
        report = abelian_nilpotent_constraints(6)
        assert report.abelian_shapes == ("Z^3",)
        assert report.nilpotent_shapes == ("Z^3",)

    def test_beta_five_has_no_abelian_embedding(self):
        assert not abelian_nilpotent_constraints(5).abelian_possible

    def test_torsion_must_halve_to_cyclic(self):
        assert abelian_nilpotent_constraints(0, FiniteAbelianGroup((3, 3))).abelian_possible
        assert not abelian_nilpotent_constraints(0, FiniteAbelianGroup((3, 3, 3, 3))).abelian_possible
        assert not abelian_nilpotent_constraints(1, FiniteAbelianGroup((2, 2))).abelian_possible

    def test_negative_beta(self):
        with pytest.raises(InputError):
            complement_euler_options(-1)
