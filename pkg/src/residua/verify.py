"""Executable verdicts for the structure theorems on residual intersections.

Each checker gates on its hypotheses, then compares both sides of the claim
exactly.  ``refuted`` is only produced when every hypothesis holds and the
exact comparison fails; such verdicts are recomputed in a second monomial
order before they are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import AlgebraError, Field, Ring, binomial
from .groebner import Ideal, Submodule
from .homology import (
    ChainComplex,
    annihilator,
    bass_numbers_at_max,
    betti_table,
    canonical_module,
    depth_and_pd,
    dimension,
    ext_from_resolution,
    find_surjection,
    num_generators,
    regularity,
    type_of,
)
from .koszul import sliding_depth_report
from .residual import GammaLift, ResidualInstance, power_quotient

VERIFIED = "verified"
REFUTED = "refuted"
NOT_MET = "hypotheses-not-met"
UNDECIDABLE = "undecidable-at-scale"
STATUSES = (VERIFIED, REFUTED, NOT_MET, UNDECIDABLE)


class Verdict:
    """Outcome of one checker: hypothesis flags, a claim status and evidence."""

    def __init__(self, theorem, status, hypotheses=None, evidence=None, note=None):
        if status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        self.theorem = theorem
        self.status = status
        self.hypotheses = dict(hypotheses or {})
        self.evidence = dict(evidence or {})
        self.note = note

    def __repr__(self):
        return f"Verdict({self.theorem!r}, {self.status!r})"

    @property
    def ok(self):
        return self.status in (VERIFIED, NOT_MET)

    def to_dict(self):
        out = {
            "theorem": self.theorem,
            "status": self.status,
            "hypotheses": _jsonable(self.hypotheses),
            "evidence": _jsonable(self.evidence),
        }
        if self.note:
            out["note"] = self.note
        return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if hasattr(x, "to_dict"):
        return x.to_dict()
    return str(x)


def _decide(theorem, hypotheses, evidence, claim, note=None):
    if not all(v is True or v == "vacuous" for v in hypotheses.values()):
        return Verdict(theorem, NOT_MET, hypotheses, evidence, note)
    return Verdict(theorem, VERIFIED if claim else REFUTED, hypotheses, evidence, note)


# ---------------------------------------------------------------------------
# shared per-instance data
# ---------------------------------------------------------------------------


def depth_report(inst: ResidualInstance):
    if "depth" not in inst._flags:
        inst._flags["depth"] = sliding_depth_report(inst.f, koszul=inst.koszul)
    return inst._flags["depth"]


def _sd(inst, k):
    rep = depth_report(inst)
    if rep.vacuous:
        return "vacuous"
    return rep.sd(k)


def _scm(inst):
    return depth_report(inst).strongly_cm


def quotient_module(inst):
    if "quotient" not in inst._flags:
        inst._flags["quotient"] = inst.J.quotient()
    return inst._flags["quotient"]


def _omega(inst):
    """Canonical module of R/J, cached on the instance."""
    if "omega" not in inst._flags:
        inst._flags["omega"] = canonical_module(quotient_module(inst))
    return inst._flags["omega"]


def _mu(inst):
    """mu(I/a)."""
    return inst.sym_power(1).num_generators()


def _indeg(P):
    degs = P.minimal().generator_degrees
    return min(degs) if degs else None


def _twisted_top(inst, power, with_sigma=True):
    """Sym^power(I/a) (x) omega_R, twisted by sigma(a) when asked."""
    shift = inst.ring.canonical_degree
    P = inst.sym_power(power).presentation
    return P.twist(inst.sigma - shift) if with_sigma else P.twist(-shift)


def _series_list(hs):
    red = hs.reduced()
    return red[0].to_dict() if red else hs.to_dict()


def iso_battery(X, Y, rng):
    """Isomorphism evidence X ~ Y: series, annihilators, Betti tables, degree-0 surjection.

    A degree-0 surjection between modules with equal Hilbert series is an
    isomorphism, so all four together are a proof.
    """
    out = {}
    out["hilbert_series"] = X.hilbert_series() == Y.hilbert_series()
    out["annihilator"] = annihilator(X) == annihilator(Y)
    out["betti"] = betti_table(X) == betti_table(Y)
    out["surjection"] = out["hilbert_series"] and find_surjection(X, Y, rng) is not None
    return all(out.values()), out


def _rng(seed=0):
    return np.random.default_rng(np.random.SeedSequence(seed))


# ---------------------------------------------------------------------------
# checkers
# ---------------------------------------------------------------------------


def check_cm(inst: ResidualInstance) -> Verdict:
    """R/J is Cohen-Macaulay of dimension d - s."""
    Q = quotient_module(inst)
    hyps = {"residual": inst.is_residual, "SD1": _sd(inst, 1)}
    depth, pd = depth_and_pd(Q)
    dim = dimension(Q)
    ev = {"depth": depth, "dim": dim, "pd": pd, "expected_dim": inst.d - inst.s}
    return _decide("cm", hyps, ev, depth == dim == inst.d - inst.s)


def check_canonical(inst: ResidualInstance, seed=0) -> Verdict:
    """omega_{R/J} ~ Sym^{s-g+1}(I/a) (x) omega_R (sigma(a))."""
    m = inst.s - inst.g + 1
    hyps = {"residual": inst.is_residual, "SD2": _sd(inst, 2), "tor1_vanishes": True}
    omega = _omega(inst)
    ev = {"power": m, "mu_omega": num_generators(omega)}
    if m < 1:
        return Verdict("canonical", NOT_MET, hyps, ev, "s < g")
    X = _twisted_top(inst, m)
    ev["mu_sym"] = X.num_generators()
    if m >= 2:
        ev["mu_power_quotient"] = power_quotient(inst, m).num_generators()
    if hyps["SD2"] is not True and hyps["SD2"] != "vacuous":
        naive = ev["mu_sym"] == ev["mu_omega"]
        ev["naive_isomorphism_possible"] = naive
        if "mu_power_quotient" in ev:
            ev["surjection_omega_onto_power_quotient_possible"] = ev["mu_omega"] >= ev["mu_power_quotient"]
        note = (f"SD2 fails; Sym^{m}(I/a) needs {ev['mu_sym']} generators, "
                f"omega_(R/J) needs {ev['mu_omega']}")
        if "mu_power_quotient" in ev:
            power = "aI" if m == 2 else f"aI^{m - 1}"
            note += f", I^{m}/{power} needs {ev['mu_power_quotient']}"
        return Verdict("canonical", NOT_MET, hyps, ev, note)
    ok, battery = iso_battery(X, omega, _rng(seed))
    ev["battery"] = battery
    ev["omega_series"] = omega.hilbert_series()
    return _decide("canonical", hyps, ev, ok)


def multiplication_adjoint(inst: ResidualInstance, k, l):
    """Sym^k -> Hom(Sym^l, Sym^{k+l}) induced by multiplication, with iso evidence."""
    A = inst.sym_power(k)
    B = inst.sym_power(l)
    C = inst.sym_power(k + l)
    Bp, Cp = B.presentation, C.presentation
    res = ChainComplex([Bp.generators, Bp.relations.source], [Bp.relations], check=False)
    E = ext_from_resolution(0, res, Cp)
    q = Cp.generators.rank
    index = {al: i for i, al in enumerate(C.monomials)}
    ring = inst.ring
    ps = ring.pos_shift
    images = []
    for al in A.monomials:
        v = {}
        for j, be in enumerate(B.monomials):
            key = tuple(x + y for x, y in zip(al, be))
            v[(j * q + index[key]) << ps] = ring.field.one
        images.append(v)
    rels = [vec for j in range(Bp.generators.rank) for vec in _block_rels(Cp, j, q, ring)]
    target = Submodule(E.ambient, images + rels)
    onto = all(target.contains(c) for c in E.cocycles)
    equal = A.presentation.hilbert_series() == E.presentation.hilbert_series()
    return {"surjective": onto, "equal_series": equal, "isomorphism": onto and equal}


def _block_rels(Cp, j, q, ring):
    from .groebner import vec_shift

    return [vec_shift(ring, c, j * q) for c in Cp.relations.columns if c]


def power_target_witness(inst: ResidualInstance, k, l):
    """An element killing I^{k+l}/aI^{k+l-1} but not Sym^k(I/a), or None.

    Such an element rules out any perfect pairing Sym^k (x) Sym^l -> I^{k+l}/aI^{k+l-1}.
    """
    L = power_quotient(inst, k + l)
    ann_L = annihilator(L)
    ann_k = annihilator(inst.sym_power(k).presentation)
    for g in ann_L.minimal_generators():
        if not ann_k.contains(g):
            return {"witness": str(g), "target_annihilator": ann_L.to_strings(),
                    "source_annihilator": ann_k.to_strings()}
    return None


def check_duality(inst: ResidualInstance, k, seed=0) -> Verdict:
    """omega_{Sym^k} ~ Sym^{s-g+1-k} (x) omega(sigma) and multiplication is a perfect pairing."""
    m = inst.s - inst.g + 1
    hyps = {"residual": inst.is_residual, "strongly_cm": _scm(inst), "k_in_range": 1 <= k <= m - 1,
            "tor1_vanishes": True}
    ev = {"k": k, "power": m}
    if not all(v is True for v in hyps.values()):
        return Verdict(f"duality.k{k}", NOT_MET, hyps, ev)
    Sk = inst.sym_power(k).presentation
    omega_k = canonical_module(Sk)
    X = _twisted_top(inst, m - k)
    ok, battery = iso_battery(X, omega_k, _rng(seed))
    ev["canonical_battery"] = battery
    left = multiplication_adjoint(inst, k, m - k)
    right = multiplication_adjoint(inst, m - k, k)
    ev["pairing_left"] = left
    ev["pairing_right"] = right
    witness = power_target_witness(inst, k, m - k)
    ev["power_target_obstruction"] = witness
    claim = ok and left["isomorphism"] and right["isomorphism"]
    return _decide(f"duality.k{k}", hyps, ev, claim)


def check_faithful(inst: ResidualInstance) -> list:
    """ann(Sym^k(I/a)) = J for 1 <= k <= s-g+1, and CM of dimension d-s when strongly CM."""
    out = []
    m = inst.s - inst.g + 1
    for k in range(1, m + 1):
        hyps = {"residual": inst.is_residual, "SD1": _sd(inst, 1)}
        P = inst.sym_power(k).presentation
        ann = annihilator(P)
        ev = {"k": k, "annihilator": ann.to_strings()}
        claim = ann == inst.J
        if _scm(inst):
            depth, _ = depth_and_pd(P)
            ev["depth"] = depth
            ev["dim"] = dimension(P)
            claim = claim and depth == ev["dim"] == inst.d - inst.s
        out.append(_decide(f"faithful.k{k}", hyps, ev, claim))
    return out


def check_numerics(inst: ResidualInstance) -> list:
    """Type, regularity, Hilbert reciprocity, multiplicity; powers under strong CM."""
    ring = inst.ring
    s, g, d = inst.s, inst.g, inst.d
    m = s - g + 1
    sigma = inst.sigma
    a = math.lcm(*ring.degrees)
    mu = _mu(inst)
    Q = quotient_module(inst)
    sd2 = {"residual": inst.is_residual, "SD2": _sd(inst, 2), "tor1_vanishes": True}
    out = []

    expected = binomial(mu + s - g, mu - 1)
    ev = {"type": None, "formula": expected, "mu": mu}
    try:
        ev["type"] = type_of(Q)
    except AlgebraError as exc:
        ev["error"] = str(exc)
    out.append(_decide("numerics.type", sd2, ev, ev["type"] == expected))

    indeg = _indeg(inst.sym_power(1).presentation)
    expected = sigma - m * indeg - s
    ev = {"formula": expected, "sigma": sigma, "indeg": indeg}
    if ring.is_standard_graded:
        ev["regularity"] = regularity(Q)
        out.append(_decide("numerics.regularity", sd2, ev, ev["regularity"] == expected))
    else:
        out.append(Verdict("numerics.regularity", UNDECIDABLE, sd2, ev, "non-standard grading"))

    P = Q.hilbert_series().reduced(a)
    T = _twisted_top(inst, m, with_sigma=False).hilbert_series().reduced(a)
    ev = {"P": P[0].to_dict() if P else None, "Q": T[0].to_dict() if T else None,
          "shift": sigma + a * (d - s)}
    claim = bool(P and T) and P[1] == T[1] == d - s and P[0] == T[0].reciprocal().shift(sigma + a * (d - s))
    out.append(_decide("numerics.reciprocity", sd2, ev, claim))

    if ring.is_standard_graded:
        e1 = Q.hilbert_series().multiplicity()
        e2 = _twisted_top(inst, m, with_sigma=False).hilbert_series().multiplicity()
        out.append(_decide("numerics.multiplicity", sd2, {"e_quotient": e1, "e_top": e2}, e1 == e2))

    scm = {"residual": inst.is_residual, "strongly_cm": _scm(inst), "tor1_vanishes": True}
    for k in range(1, m):
        Pk = inst.sym_power(k).hilbert_series().reduced(a)
        Qk = _twisted_top(inst, m - k, with_sigma=False).hilbert_series().reduced(a)
        claim = bool(Pk and Qk) and Pk[0] == Qk[0].reciprocal().shift(sigma + a * (d - s))
        ev = {"k": k, "P": Pk[0].to_dict() if Pk else None, "Q": Qk[0].to_dict() if Qk else None}
        out.append(_decide(f"numerics.power_reciprocity.k{k}", scm, ev, claim))
        expected = binomial(mu + s - g - k, mu - 1)
        if scm["strongly_cm"]:
            t = type_of(inst.sym_power(k).presentation)
            bass = bass_numbers_at_max(_twisted_top(inst, k, with_sigma=False), up_to=d - s)[d - s]
        else:
            t = bass = None
        ev = {"k": k, "type": t, "formula": expected}
        out.append(_decide(f"numerics.power_type.k{k}", scm, ev, t == expected))
        ev = {"k": k, "bass": bass, "index": d - s, "formula": expected}
        out.append(_decide(f"numerics.bass.k{k}", scm, ev, bass == expected))
    return out


def check_disguised(inst: ResidualInstance) -> Verdict:
    """K is contained in J, with equality under SD_1."""
    from .residual import disguised_residual

    K = disguised_residual(inst)
    inst._flags["disguised"] = K
    contained = K.issubset(inst.J)
    equal = contained and inst.J.issubset(K)
    hyps = {"residual": inst.is_residual, "SD1": _sd(inst, 1)}
    ev = {"K": K.to_strings(), "contained": contained, "equal": equal}
    if not contained:
        return Verdict("disguised", REFUTED, {"residual": True}, ev, "K not contained in J")
    return _decide("disguised", hyps, ev, equal)


def check_acyclicity(inst: ResidualInstance, bound=8, M=None) -> Verdict:
    """H_i of the k-th residual approximation complex vanishes for i >= 1, 0 <= k <= min(s, s-g+2)."""
    from .residual import ResidualComplex

    s, g = inst.s, inst.g
    hyps = {"residual": inst.is_residual, "strongly_cm": _scm(inst)}
    ev = {}
    ok = True
    for k in range(0, min(s, s - g + 2) + 1):
        C = ResidualComplex(inst, k, M)
        vanish = {i: C.homology_vanishes(i, bound) for i in range(1, s + 1)}
        ev[f"k{k}"] = {"ranks": C.ranks(), "complex": C.is_complex(), "vanishing": vanish}
        ok = ok and C.is_complex() and all(vanish.values())
    return _decide("acyclicity", hyps, ev, ok)


# ---------------------------------------------------------------------------
# refutation control
# ---------------------------------------------------------------------------


def reorder(inst: ResidualInstance, order="deglex") -> ResidualInstance:
    """The same instance over the same ring with another monomial order."""
    ring = inst.ring
    R2 = ring.with_order(order)
    phi = ring.hom(R2, R2.gens)
    c = [[phi(x) for x in row] for row in inst.lift.c]
    f = [phi(x) for x in inst.f]
    a = [phi(x) for x in inst.a]
    return ResidualInstance(f, a, GammaLift(f, a, c), name=inst.name)


def confirmed(check, inst, *args, **kwargs):
    """Run a checker; a refuted verdict is recomputed in a second order before surfacing."""
    result = check(inst, *args, **kwargs)
    single = not isinstance(result, list)
    verdicts = [result] if single else result
    if any(v.status == REFUTED for v in verdicts):
        order = "deglex" if inst.ring.order != "deglex" else "grevlex"
        again = check(reorder(inst, order), *args, **kwargs)
        again = [again] if single else again
        fixed = []
        for v, w in zip(verdicts, again):
            if v.status == REFUTED and w.status != REFUTED:
                v = Verdict(v.theorem, UNDECIDABLE, v.hypotheses, v.evidence,
                            f"refutation not reproduced under {order}")
            elif v.status == REFUTED:
                v.evidence["confirmed_under"] = order
            fixed.append(v)
        verdicts = fixed
    return verdicts[0] if single else verdicts


# ---------------------------------------------------------------------------
# seeded instance generation
# ---------------------------------------------------------------------------


@dataclass
class InstanceRecipe:
    """How to build an instance: ring, the ideal I, and the a-generators.

    ``family`` is one of "explicit" (``ideal`` holds generator strings),
    "power" ((x_1..x_c)^e), "ci" (x_1^e_1, ..., x_c^e_c) or "hankel"
    (2 x 2 minors of the 2 x m Hankel matrix on x_1..x_{m+1}).
    """

    field: str = "GF(32003)"
    variables: list = dc_field(default_factory=lambda: ["x", "y", "z"])
    degrees: list = None
    order: str = "grevlex"
    family: str = "explicit"
    ideal: list = None
    params: dict = dc_field(default_factory=dict)
    a_degrees: list = None
    a_explicit: list = None
    max_attempts: int = 20

    def ring(self) -> Ring:
        return Ring(Field.from_name(self.field), self.variables, self.degrees, self.order)

    def generators(self, ring):
        x = ring.gens
        fam = self.family
        if fam == "explicit":
            if not self.ideal:
                raise AlgebraError("explicit family needs ideal generators")
            return [ring.parse(t) for t in self.ideal]
        if fam == "power":
            c = self.params.get("vars", len(x))
            e = self.params.get("exponent", 1)
            gens = Ideal(ring, x[:c]).power(e).minimal_generators()
            return sorted(gens, key=lambda p: sorted(p.coeffs), reverse=True)
        if fam == "ci":
            exps = self.params.get("exponents", [1] * len(x))
            return [x[i] ** e for i, e in enumerate(exps)]
        if fam == "hankel":
            m = self.params.get("columns", len(x) - 1)
            if m + 1 > len(x):
                raise AlgebraError("hankel family needs columns + 1 variables")
            top, bot = x[:m], x[1:m + 1]
            return [top[i] * bot[j] - top[j] * bot[i] for i in range(m) for j in range(i + 1, m)]
        raise AlgebraError(f"unknown family {fam!r}")

    def to_dict(self):
        return {k: v for k, v in self.__dict__.items() if v is not None}


def random_instance(recipe: InstanceRecipe, seed) -> ResidualInstance:
    """Seeded instance; a-generators are random combinations sum_j c_ij f_j with c recorded."""
    ring = recipe.ring()
    f = recipe.generators(ring)
    if recipe.a_explicit:
        a = [ring.parse(t) for t in recipe.a_explicit]
        return ResidualInstance(f, a)
    if recipe.max_attempts < 1:
        raise AlgebraError("attempt cap exceeded")
    if not recipe.a_degrees:
        raise AlgebraError("random recipe needs a_degrees")
    fdeg = [x.degree() for x in f]
    for e in recipe.a_degrees:
        if e < min(fdeg):
            raise AlgebraError("a-degree below every generator degree of I")
    children = np.random.SeedSequence(seed).spawn(recipe.max_attempts)
    for child in children:
        rng = np.random.default_rng(child)
        c = [[ring.zero] * len(recipe.a_degrees) for _ in f]
        a = []
        for i, e in enumerate(recipe.a_degrees):
            total = ring.zero
            for j, fj in enumerate(f):
                if e >= fdeg[j]:
                    c[j][i] = ring.random_form(e - fdeg[j], rng)
                    total = total + c[j][i] * fj
            a.append(total)
        if any(not x for x in a):
            continue
        inst = ResidualInstance(f, a, GammaLift(f, a, c))
        if inst.J.is_proper() and inst.is_residual:
            return inst
    raise AlgebraError("attempt cap exceeded")


def check_hilbert_stability(recipe: InstanceRecipe, trials=5, seed=0, bound=8) -> Verdict:
    """H(R/J, n), n <= bound, agrees across seeded samples of the recipe."""
    if recipe.a_explicit:
        return Verdict("stability", VERIFIED, {}, {"samples": 1, "vacuous": True},
                       "explicit a: a single instance, vacuously stable")
    functions = []
    seeds = []
    for t in range(trials):
        try:
            inst = random_instance(recipe, seed + t)
        except AlgebraError:
            continue
        seeds.append(seed + t)
        functions.append(inst.J.hilbert_series().coefficients(0, bound))
    if not functions:
        return Verdict("stability", UNDECIDABLE, {}, {"samples": 0},
                       "every seed failed the residual height gate")
    inst0 = random_instance(recipe, seeds[0])
    hyps = {"SD1": _sd(inst0, 1)}
    same = all(fn == functions[0] for fn in functions)
    ev = {"samples": len(functions), "seeds": seeds, "hilbert_function": [functions[0][n] for n in range(bound + 1)]}
    v = _decide("stability", hyps, ev, same)
    if v.status == VERIFIED:
        v.note = f"consistent across {len(functions)} samples"
    return v


SUITES = ("cm", "canonical", "duality", "faithful", "numerics", "disguised", "acyclicity")


def run_suite(inst: ResidualInstance, suites=SUITES, seed=0, bound=8) -> list:
    """All requested checkers, in a fixed order, flattened to a list of verdicts."""
    out = []
    for name in SUITES:
        if name not in suites:
            continue
        if name == "cm":
            out.append(confirmed(check_cm, inst))
        elif name == "canonical":
            out.append(confirmed(check_canonical, inst, seed=seed))
        elif name == "duality":
            m = inst.s - inst.g + 1
            if m < 2:
                out.append(Verdict("duality", NOT_MET, {"k_in_range": False}, {"power": m}))
            for k in range(1, m):
                out.append(confirmed(check_duality, inst, k, seed=seed))
        elif name == "faithful":
            out.extend(confirmed(check_faithful, inst))
        elif name == "numerics":
            out.extend(confirmed(check_numerics, inst))
        elif name == "disguised":
            out.append(confirmed(check_disguised, inst))
        elif name == "acyclicity":
            out.append(confirmed(check_acyclicity, inst, bound=bound))
    return out
