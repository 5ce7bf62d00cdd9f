"""Theorem checkers, gates, refutation control and seeded instances."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import HANKEL_RECIPE, LINEAR_RECIPE, POWER_RECIPE
from residua.algebra import QQ, AlgebraError, Ring
from residua.groebner import Ideal
from residua.homology import annihilator, depth_and_pd, dimension
from residua.residual import ResidualInstance, power_quotient
from residua.verify import (NOT_MET, REFUTED, STATUSES, UNDECIDABLE, VERIFIED, InstanceRecipe,
                            Verdict, _decide, check_canonical, check_cm, check_duality,
                            check_faithful, check_hilbert_stability, check_numerics, confirmed,
                            random_instance, reorder, run_suite)


def by_id(verdicts):
    return {v.theorem: v for v in verdicts}


@pytest.fixture(scope="module")
def thin_colon():
    """(x^2, xy) : (x, y) = (x) has codim 1 < s = 2."""
    R = Ring(QQ, ["x", "y", "z"])
    x, y, _ = R.gens
    return ResidualInstance([x, y], [x**2, x * y])


# ---------------------------------------------------------------------------
# individual checkers
# ---------------------------------------------------------------------------


def test_cm_examples(link, power_square, thin_colon):
    v = check_cm(link)
    assert v.status == VERIFIED and v.evidence["depth"] == 0 == v.evidence["dim"]
    v = check_cm(power_square)
    assert v.status == VERIFIED and v.evidence["dim"] == 0 == v.evidence["expected_dim"]
    v = check_cm(thin_colon)
    assert v.status == NOT_MET and v.hypotheses["residual"] is False


def test_canonical_link(link):
    v = check_canonical(link)
    assert v.status == VERIFIED and all(v.evidence["battery"].values())
    assert v.evidence["omega_series"].reduced()[0].to_dict() == {"-1": 2, "0": 1}


def test_canonical_power_square(power_square):
    v = check_canonical(power_square)
    assert v.status == VERIFIED
    assert v.evidence["mu_omega"] == v.evidence["mu_sym"] == 6


def test_canonical_hankel_gate(hankel):
    v = check_canonical(hankel)
    assert v.status == NOT_MET and v.hypotheses["SD2"] is False
    assert v.evidence["mu_omega"] == 16 and v.evidence["mu_sym"] == 21
    assert v.evidence["mu_power_quotient"] == 20
    assert v.evidence["naive_isomorphism_possible"] is False
    assert "21" in v.note and "16" in v.note and "20" in v.note


def test_duality_power_square(power_square):
    v = check_duality(power_square, 1)
    assert v.status == VERIFIED
    assert v.evidence["pairing_left"]["isomorphism"] and v.evidence["pairing_right"]["isomorphism"]
    # I^2/aI is annihilated by m^2 while Sym^1 is not, so no perfect pairing lands there
    witness = v.evidence["power_target_obstruction"]
    assert witness["witness"] == "x^2"
    assert witness["target_annihilator"] == Ideal.parse(
        power_square.ring, ["x^2", "x*y", "y^2", "x*z", "y*z", "z^2"]).to_strings()


def test_duality_out_of_range(link):
    v = check_duality(link, 1)
    assert v.status == NOT_MET and v.hypotheses["k_in_range"] is False


def test_numerics_link(link):
    v = by_id(check_numerics(link))
    assert v["numerics.type"].evidence["type"] == 2 == v["numerics.type"].evidence["formula"]
    assert v["numerics.regularity"].evidence["regularity"] == 1 == v["numerics.regularity"].evidence["formula"]
    rec = v["numerics.reciprocity"].evidence
    assert rec["P"] == {"0": 1, "1": 2} and rec["Q"] == {"3": 2, "4": 1} and rec["shift"] == 4
    assert all(x.status == VERIFIED for x in v.values())


def test_numerics_power_square(power_square):
    v = by_id(check_numerics(power_square))
    assert v["numerics.type"].evidence["type"] == 6
    assert v["numerics.power_type.k1"].evidence == {"k": 1, "type": 3, "formula": 3}
    assert v["numerics.bass.k1"].evidence["bass"] == 3
    assert v["numerics.multiplicity"].evidence == {"e_quotient": 10, "e_top": 10}
    assert all(x.status == VERIFIED for x in v.values())


def test_faithful_and_sharp(link, power_square):
    v = check_faithful(link)
    assert [x.theorem for x in v] == ["faithful.k1"] and v[0].status == VERIFIED
    # one step past the range the annihilator grows strictly
    ann = annihilator(link.sym_power(link.s - link.g + 2).presentation)
    assert link.J < ann and ann == link.I
    for x in check_faithful(power_square):
        assert x.status == VERIFIED and x.evidence["depth"] == x.evidence["dim"] == 0


def test_symmetric_powers_are_cohen_macaulay(power_square, linear_four):
    for inst in (power_square, linear_four):
        for k in range(inst.s - inst.g + 2):
            P = inst.sym_power(k).presentation
            depth, _ = depth_and_pd(P)
            assert depth == dimension(P) == inst.d - inst.s


def test_geometric_powers_match_symmetric_powers(linear_four):
    assert linear_four.is_geometric
    for k in range(1, linear_four.s - linear_four.g + 2):
        assert linear_four.sym_power(k).hilbert_series() == power_quotient(linear_four, k).hilbert_series()
    for k in range(1, linear_four.s - linear_four.g + 1):
        assert check_duality(linear_four, k).status == VERIFIED


# ---------------------------------------------------------------------------
# gates and refutation control
# ---------------------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.dictionaries(st.sampled_from(["residual", "SD1", "SD2", "strongly_cm", "tor1_vanishes"]),
                       st.sampled_from([True, False, "vacuous"]), min_size=1),
       st.booleans())
def test_gate_soundness(hyps, claim):
    v = _decide("probe", hyps, {}, claim)
    met = all(x is True or x == "vacuous" for x in hyps.values())
    assert (v.status == VERIFIED) == (met and claim)
    assert (v.status == REFUTED) == (met and not claim)
    if not met:
        assert v.status == NOT_MET


@pytest.mark.parametrize("name", ["link", "power_square", "linear_four", "hankel"])
def test_suite_verdicts_respect_gates(name, request):
    inst = request.getfixturevalue(name)
    suites = ("cm", "canonical", "duality", "faithful", "numerics")
    for v in run_suite(inst, suites):
        assert v.status in STATUSES and v.status != REFUTED
        if v.status == VERIFIED:
            assert all(x is True or x == "vacuous" for x in v.hypotheses.values())


def test_verdict_rejects_unknown_status():
    with pytest.raises(ValueError):
        Verdict("cm", "proved")


def test_reorder_keeps_colon(link):
    other = reorder(link, "lex")
    assert other.ring.order == "lex"
    assert other.J.hilbert_series() == link.J.hilbert_series()


def test_confirmed_downgrades_unreproduced_refutation(link):
    def flaky(inst):
        status = REFUTED if inst.ring.order == "grevlex" else VERIFIED
        return Verdict("probe", status, {"residual": True}, {})

    v = confirmed(flaky, link)
    assert v.status == UNDECIDABLE and "deglex" in v.note

    def stubborn(inst):
        return Verdict("probe", REFUTED, {"residual": True}, {})

    v = confirmed(stubborn, link)
    assert v.status == REFUTED and v.evidence["confirmed_under"] == "deglex"


# ---------------------------------------------------------------------------
# seeded instances and stability
# ---------------------------------------------------------------------------


def test_random_instances(hankel, power_square):
    assert hankel.s == 4 and hankel.is_residual and hankel.g == 3
    assert power_square.s == 3 and power_square.is_residual
    again = random_instance(POWER_RECIPE, 0)
    assert [str(x) for x in again.a] == [str(x) for x in power_square.a]
    assert again.lift.to_lists() == power_square.lift.to_lists()
    assert random_instance(POWER_RECIPE, 1).a != power_square.a


def test_attempt_cap():
    recipe = InstanceRecipe(**{**POWER_RECIPE.__dict__, "max_attempts": 0})
    with pytest.raises(AlgebraError, match="attempt cap"):
        random_instance(recipe, 0)


def test_hankel_recipe_shape():
    ring = HANKEL_RECIPE.ring()
    assert len(HANKEL_RECIPE.generators(ring)) == 6


def test_stability_power_recipe():
    v = check_hilbert_stability(POWER_RECIPE, trials=5)
    assert v.status == VERIFIED and v.evidence["samples"] == 5
    assert "consistent across 5 samples" == v.note


def test_stability_explicit_is_vacuous():
    recipe = InstanceRecipe(field="QQ", variables=["x", "y"], ideal=["x", "y"], a_explicit=["x^2", "y^2"])
    v = check_hilbert_stability(recipe)
    assert v.status == VERIFIED and v.evidence["vacuous"]


def test_stability_low_degrees_undecidable():
    # three general quadrics in (x, y)^2 span all of it, so a = I and the colon is the unit ideal
    recipe = InstanceRecipe(variables=["x", "y", "z"], family="power", params={"vars": 2, "exponent": 2},
                            a_degrees=[2, 2, 2], max_attempts=3)
    v = check_hilbert_stability(recipe, trials=3)
    assert v.status == UNDECIDABLE and v.evidence["samples"] == 0


def test_stability_linear_recipe():
    v = check_hilbert_stability(LINEAR_RECIPE, trials=3)
    assert v.status == VERIFIED
