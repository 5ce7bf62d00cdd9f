"""Resolutions, depth, Ext, canonical modules and Bass numbers."""

import pytest
from hypothesis import given, settings

import oracles
from residua.algebra import QQ, AlgebraError, LaurentPolynomial, Ring
from residua.groebner import IMPROPER, HilbertSeries, Ideal, ModulePresentation
from residua.homology import (annihilator, bass_numbers_at_max, betti_table, canonical_module,
                              depth_and_pd, ext, hom, hilbert_series, minimal_resolution,
                              regularity, type_of)
from strategies import artinian_ideals, ideals, ring_and


def series(coeffs, den=()):
    return HilbertSeries(LaurentPolynomial(coeffs), den)


@pytest.fixture
def square(qq_xy):
    return Ideal.parse(qq_xy, ["x^2", "x*y", "y^2"]).quotient()


def free(ring, *degrees):
    return ModulePresentation.free(ring, list(degrees))


# ---------------------------------------------------------------------------
# examples
# ---------------------------------------------------------------------------


def test_resolution_of_square(square):
    res = minimal_resolution(square)
    assert res.ranks() == [1, 3, 2]
    assert betti_table(square).to_dict() == {"0,0": 1, "1,2": 3, "2,3": 2}
    assert hilbert_series(square) == series([1, 2])
    assert res.is_complex()


def test_resolution_of_hypersurface(qq_xy):
    res = minimal_resolution(Ideal.parse(qq_xy, ["x"]).quotient())
    assert res.ranks() == [1, 1] and res.twists() == [[0], [1]]


def test_resolution_of_sym_square(link):
    res = minimal_resolution(link.sym_power(2).presentation)
    assert res.ranks() == [3, 6, 3]
    assert [d.shape for d in res.maps] == [(3, 6), (6, 3)]


def test_depth_and_pd(qq_xy, square):
    assert depth_and_pd(square) == (0, 2)
    assert depth_and_pd(free(qq_xy, 0, 1)) == (2, 0)
    assert depth_and_pd(Ideal.parse(qq_xy, ["x"]).quotient()) == (1, 1)
    assert depth_and_pd(Ideal(qq_xy, [qq_xy.one]).quotient())[0] == IMPROPER


def test_hilbert_series_examples(qq_xy, link):
    assert hilbert_series(free(qq_xy, 0)) == series([1], (1, 1))
    assert hilbert_series(link.J) == series([1, 2])
    assert hilbert_series(link.quotient_presentation()) == series({1: 2, 2: 1})


def test_regularity_examples(qq_xy, link):
    assert regularity(link.J) == 1
    assert regularity(free(qq_xy, 0)) == 0
    assert regularity(Ideal.parse(qq_xy, ["x", "y"])) == 0
    weighted = Ring(QQ, ["x", "y"], [1, 2])
    with pytest.raises(AlgebraError, match="standard graded"):
        regularity(free(weighted, 0))


def test_hom_and_ext(qq_xy):
    k = Ideal.parse(qq_xy, ["x", "y"]).quotient()
    R = free(qq_xy, 0)
    assert hom(free(qq_xy, 1), R).generator_degrees == (-1,)
    E2 = ext(2, k, R)
    assert E2.generator_degrees == (-2,) and hilbert_series(E2) == series({-2: 1})
    assert ext(1, k, R).is_zero() and ext(0, k, R).is_zero()


def test_canonical_modules(qq_xy, link):
    assert hilbert_series(canonical_module(link.J)) == series({-1: 2, 0: 1})
    assert canonical_module(free(qq_xy, 0)).generator_degrees == (2,)
    k = Ideal.parse(qq_xy, ["x", "y"])
    assert hilbert_series(canonical_module(k)) == series([1])


def test_type_examples(qq_xy, link, power_square):
    assert type_of(link.J) == 2
    assert type_of(Ideal.parse(qq_xy, ["x"])) == 1
    assert type_of(power_square.J) == 6


def test_type_needs_cohen_macaulay():
    R = Ring(QQ, ["x", "y", "z"])
    with pytest.raises(AlgebraError, match="type requires CM module"):
        type_of(Ideal.parse(R, ["x*y", "x*z"]))


def test_bass_numbers(qq_xy, square):
    assert bass_numbers_at_max(square) == [2, 3, 1]
    assert bass_numbers_at_max(free(qq_xy, 0)) == [0, 0, 1]


def test_annihilators(qq_xy, link):
    ann = annihilator(link.sym_power(2).presentation)
    assert ann == Ideal.parse(qq_xy, ["x", "y"]) and link.J < ann
    I = Ideal.parse(qq_xy, ["x^2", "x*y^3"])
    assert annihilator(I) == I
    assert annihilator(free(qq_xy, 0, 3)).is_zero()


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------


def _no_units(res):
    for d in res.maps:
        for col in d.columns:
            for poly in d.target.entries(col):
                if poly and poly.degree() == 0:
                    return False
    return True


@settings(max_examples=30, deadline=None, derandomize=True)
@given(ring_and(ideals, (4, 3)))
def test_resolutions_are_minimal_complexes(case):
    ring, gens = case
    P = Ideal(ring, gens).quotient()
    res = minimal_resolution(P)
    assert res.is_complex()
    for a, b in zip(res.maps, res.maps[1:]):
        assert (a @ b).is_zero()
    assert _no_units(res)
    # the Betti numerator reproduces the Hilbert function
    weights, p = list(ring.degrees), ring.field.characteristic
    H = HilbertSeries(res.betti.numerator(), tuple(ring.degrees))
    for n in range(9):
        assert H.coefficient(n) == oracles.quotient_hf(gens, n, weights, p)


@settings(max_examples=25, deadline=None, derandomize=True)
@given(ring_and(ideals, (3, 3)))
def test_auslander_buchsbaum(case):
    ring, gens = case
    P = Ideal(ring, gens).quotient()
    if P.is_zero():
        return
    depth, pd = depth_and_pd(P)
    assert depth + pd == ring.nvars
    # depth is also the first index with a nonzero Bass number at the maximal ideal
    bass = bass_numbers_at_max(P)
    assert min(i for i, b in enumerate(bass) if b) == depth


@settings(max_examples=25, deadline=None, derandomize=True)
@given(ring_and(artinian_ideals, ()))
def test_graded_duality_for_artinian_quotients(case):
    ring, gens = case
    P = Ideal(ring, gens).quotient()
    if P.is_zero():
        return
    H = hilbert_series(P)
    assert hilbert_series(canonical_module(P)) == H.reciprocal()
    socle = bass_numbers_at_max(P)[0]
    # artinian quotients are CM; the type is the last Betti number and the socle dimension
    res = minimal_resolution(P)
    assert type_of(P) == res.ranks()[-1] == socle
