"""Acceptance criteria, one test per criterion; each prints a single pass/fail line."""

from math import comb

import pytest

import test_groebner
import test_homology
import test_koszul
from conftest import POWER_RECIPE
from residua.algebra import QQ, LaurentPolynomial, Ring
from residua.groebner import HilbertSeries, Ideal
from residua.homology import annihilator, canonical_module, minimal_resolution, type_of
from residua.koszul import KoszulData, cycle_duality_map
from residua.residual import d_complex, disguised_residual, power_quotient, residual_complex
from residua.verify import (NOT_MET, VERIFIED, InstanceRecipe, check_canonical, check_cm,
                            check_duality, check_hilbert_stability, check_numerics, depth_report,
                            quotient_module, random_instance)
from test_residual import NOT_UNMIXED, SKEW_LINES

BOUND = 8


def verdicts(vs):
    return {v.theorem: v for v in vs}


def report(capsys, number, title, checks):
    """Print one line for the criterion, naming any failed check, then assert."""
    failed = [name for name, ok in checks if not ok]
    status = "PASS" if not failed else "FAIL (" + "; ".join(failed) + ")"
    with capsys.disabled():
        print(f"\ncriterion {number} [{title}]: {status}")
    assert not failed, failed


def guarded(fn):
    """Run a callable, turning an exception into a failed check."""
    try:
        fn()
    except Exception:
        return False
    return True


def test_criterion_1_link_end_to_end(link, capsys):
    R = link.ring
    sym1 = link.sym_power(1).relation_forms()
    sym2 = link.sym_power(2).presentation
    ann = annihilator(sym2)
    report(capsys, 1, "link end-to-end", [
        ("J = (x^2, xy, y^2)", link.J == Ideal.parse(R, ["x^2", "x*y", "y^2"])),
        ("Sym relations", sorted(sym1) == sorted(["x*T1", "y*T2", "-y*T1 + x*T2"])),
        ("Sym^2 resolution ranks (3,6,3)", minimal_resolution(sym2).ranks() == [3, 6, 3]),
        ("ann(Sym^2) = (x,y)", ann == Ideal.parse(R, ["x", "y"])),
        ("J strictly inside ann(Sym^2)", link.J < ann),
    ])


def test_criterion_2_link_numerics(link, capsys):
    hs = quotient_module(link).hilbert_series()
    v = verdicts(check_numerics(link))
    rec = v["numerics.reciprocity"].evidence
    report(capsys, 2, "link numerics", [
        ("H(t) = 1 + 2t", hs == HilbertSeries(LaurentPolynomial([1, 2]), ())),
        ("type 2 = C(2+0,1)", type_of(link.J) == 2 == comb(2, 1) == v["numerics.type"].evidence["formula"]),
        ("sigma(a) = 4", link.sigma == 4),
        ("reg 1 = 0+4-1-2", v["numerics.regularity"].evidence["regularity"] == 1 == 0 + 4 - 1 - 2
         == v["numerics.regularity"].evidence["formula"]),
        ("Q = 2t^3 + t^4", rec["Q"] == {"3": 2, "4": 1}),
        ("t^4 Q(1/t) = P", rec["P"] == {"0": 1, "1": 2} and rec["shift"] == 4),
        ("all numerics verified", all(x.status == VERIFIED for x in v.values())),
    ])


def _hankel_checks(hankel):
    rep = depth_report(hankel)
    v = check_canonical(hankel)
    return [
        ("4-residual intersection", hankel.is_residual and hankel.s == 4),
        ("SD holds", rep.sd(0)),
        ("SD2 fails", not rep.sd(2)),
        ("mu(omega) = 16", canonical_module(quotient_module(hankel)).minimal().num_generators() == 16),
        ("canonical hypotheses-not-met", v.status == NOT_MET and v.hypotheses["SD2"] is False),
        ("evidence 16 in note", "16" in v.note and v.evidence["mu_omega"] == 16),
        ("mu(I^2/aI) = 20", power_quotient(hankel, 2).num_generators() == 20),
    ]


@pytest.mark.xfail(strict=True, reason="Sym^2(I/a) of the Hankel instance has 21 minimal generators; "
                   "the count 20 belongs to I^2/aI")
def test_criterion_3_hankel(hankel, capsys):
    checks = _hankel_checks(hankel)
    checks.append(("mu(Sym^2(I/a)) = 20", hankel.sym_power(2).num_generators() == 20))
    report(capsys, 3, "hankel", checks)


def test_criterion_3_attainable_parts(hankel):
    # everything in the criterion other than the Sym^2 count; this holds exactly
    checks = _hankel_checks(hankel)
    assert all(ok for _, ok in checks), [n for n, ok in checks if not ok]
    assert hankel.sym_power(2).num_generators() == 21


def test_criterion_4_power_square(power_square, capsys):
    ps = power_square
    canon = check_canonical(ps)
    dual = check_duality(ps, 1)
    obstruction = dual.evidence.get("power_target_obstruction", {})
    m2 = Ideal.parse(ps.ring, ["x", "y", "z"]).power(2)
    report(capsys, 4, "power square", [
        ("strongly CM", depth_report(ps).strongly_cm),
        ("R/J artinian CM", check_cm(ps).status == VERIFIED and check_cm(ps).evidence["dim"] == 0),
        ("omega = Sym^2 battery", canon.status == VERIFIED and all(canon.evidence["battery"].values())),
        ("Sym^1 x Sym^1 -> Sym^2 perfect", dual.status == VERIFIED
         and dual.evidence["pairing_left"]["isomorphism"] and dual.evidence["pairing_right"]["isomorphism"]),
        ("I^2/aI pairing fails with witness", obstruction.get("witness") == "x^2"
         and Ideal.parse(ps.ring, obstruction.get("target_annihilator", ["1"])) == m2),
        ("type 6", type_of(ps.J) == 6),
    ])


DISGUISED_CASES = (
    [("ci (x,y) in 4 vars", InstanceRecipe(field="QQ", variables=["x", "y", "z", "w"], ideal=["x", "y"],
                                           a_degrees=[2, 2, 2]), s) for s in range(3)]
    + [("ci (x,y,z)", InstanceRecipe(variables=["x", "y", "z"], ideal=["x", "y", "z"],
                                     a_degrees=[2, 2, 2]), s) for s in range(2)]
    + [("ci (x^2,y^2)", InstanceRecipe(variables=["x", "y", "z"], ideal=["x^2", "y^2"], a_degrees=[3, 3]), 0)]
    + [("(x,y)^2", POWER_RECIPE, s) for s in range(3)]
    + [("(x,y)^2 in 4 vars", InstanceRecipe(variables=["x", "y", "z", "w"], family="power",
                                           params={"vars": 2, "exponent": 2}, a_degrees=[3, 3, 3]), 0)]
    + [("2x3 hankel", InstanceRecipe(variables=["x1", "x2", "x3", "x4"], family="hankel",
                                     params={"columns": 3}, a_degrees=[3] * s), 0) for s in (3, 4)]
)


def test_criterion_5_disguised_residual(hankel, capsys):
    checks = []
    for name, recipe, seed in DISGUISED_CASES:
        inst = random_instance(recipe, seed)
        checks.append((f"{name} seed {seed} strongly CM", depth_report(inst).strongly_cm))
        checks.append((f"{name} seed {seed} K = J", disguised_residual(inst) == inst.J))
    stress = [random_instance(r, s) for r in (SKEW_LINES, NOT_UNMIXED) for s in (0, 1)] + [hankel]
    for inst in stress:
        checks.append((f"stress {inst.f} K in J", disguised_residual(inst).issubset(inst.J)))
    checks.append(("at least 10 strongly CM cases", len(DISGUISED_CASES) >= 10))
    checks.append(("stress inputs include non-SD1", any(not depth_report(i).sd(1) for i in stress)))
    report(capsys, 5, "disguised residual", checks)


def test_criterion_6_acyclicity(link, power_square, capsys):
    checks = []
    for name, inst in (("link", link), ("power square", power_square)):
        for k in range(min(inst.s, inst.s - inst.g + 2) + 1):
            C = residual_complex(inst, k)
            for i in range(1, inst.s + 1):
                checks.append((f"{name} k={k} H_{i}", C.homology_vanishes(i, BOUND)))
    report(capsys, 6, "acyclicity", checks)


def test_criterion_7_duality_sweep(linear_four, capsys):
    inst = linear_four
    v = verdicts(check_numerics(inst))
    checks = [("strongly CM", depth_report(inst).strongly_cm), ("s - g >= 1", inst.s - inst.g >= 1)]
    for k in range(1, inst.s - inst.g + 1):
        checks.append((f"battery k={k}", check_duality(inst, k).status == VERIFIED))
        for name in ("power_reciprocity", "power_type", "bass"):
            key = f"numerics.{name}.k{k}"
            checks.append((key, key in v and v[key].status == VERIFIED))
    report(capsys, 7, "duality sweep", checks)


def _cycle_duality_isomorphisms():
    for names in (["x", "y", "z"], ["x", "y", "z", "w"]):
        R = Ring(QQ, names)
        K = KoszulData(R.gens)
        for i in range(len(names)):
            assert cycle_duality_map(R.gens, i, koszul=K).is_isomorphism


def _constructed_strands(instances):
    for inst in instances:
        for k in range(4):
            assert d_complex(inst, k).is_complex() and residual_complex(inst, k).is_complex()


def test_criterion_8_property_suites(link, power_square, linear_four, capsys):
    report(capsys, 8, "kernel property suites", [
        ("membership vs linear algebra (100 cases)", guarded(test_groebner.test_membership_matches_linear_algebra)),
        ("d^2 = 0 on syzygies", guarded(test_groebner.test_syzygies_compose_to_zero_and_match_cokernel)),
        ("d^2 = 0 on resolutions", guarded(test_homology.test_resolutions_are_minimal_complexes)),
        ("d^2 = 0 on Koszul complexes", guarded(test_koszul.test_koszul_homology_matches_linear_algebra)),
        ("d^2 = 0 on strands", guarded(lambda: _constructed_strands([link, power_square, linear_four]))),
        ("Auslander-Buchsbaum", guarded(test_homology.test_auslander_buchsbaum)),
        ("artinian graded duality", guarded(test_homology.test_graded_duality_for_artinian_quotients)),
        ("cycle duality for regular sequences", guarded(_cycle_duality_isomorphisms)),
    ])


def test_criterion_9_hilbert_stability(capsys):
    v = check_hilbert_stability(POWER_RECIPE, trials=5, bound=BOUND)
    fns = [random_instance(POWER_RECIPE, s).J.hilbert_series().coefficients(0, BOUND) for s in range(5)]
    report(capsys, 9, "Hilbert-function stability", [
        ("verified across 5 samples", v.status == VERIFIED and v.evidence["samples"] == 5),
        ("wording", v.note == "consistent across 5 samples"),
        ("H(R/J, n) equal for n <= 8", all(fn == fns[0] for fn in fns)),
    ])
