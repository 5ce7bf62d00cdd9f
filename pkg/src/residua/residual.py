"""Residual intersections J = a : I and their residual approximation complexes.

Elements of the totalized complex Z(f; M) (x) K(gamma; S), and of its Čech
localizations in the T-variables, are dicts keyed by (P, beta, J, L, g):

* P    tuple of T-indices inverted (Čech index, () for S itself),
* beta Laurent exponent of T (entries may be negative only inside P),
* J    exterior index of K(f),
* L    exterior index of K(gamma),
* g    generator index of the coefficient module,

with values Polynomials in R.  Top local cohomology H^r(S) is modelled by the
monomials whose exponents are all negative, and the transgression tau_k is
obtained by an explicit chase through the Čech complex.
"""

from __future__ import annotations

import itertools

from .algebra import AlgebraError, Polynomial
from .groebner import (
    FreeModule,
    Ideal,
    Lifter,
    Matrix,
    ModulePresentation,
    fitting_ideal,
    subquotient,
    syzygies,
)
from .homology import ChainComplex, SubquotientComplex
from .koszul import KoszulData, TermBasis, compositions


# ---------------------------------------------------------------------------
# the gamma lift and the instance bundle
# ---------------------------------------------------------------------------


class GammaLift:
    """a_i = sum_j c[j][i] f_j, and gamma_i = sum_j c[j][i] T_j."""

    def __init__(self, f, a, c):
        self.f = list(f)
        self.a = list(a)
        self.c = [list(row) for row in c]
        self.check()

    @property
    def ring(self):
        return self.f[0].ring

    def check(self):
        ring = self.ring
        for i, ai in enumerate(self.a):
            total = ring.zero
            for j, fj in enumerate(self.f):
                cji = self.c[j][i]
                if cji:
                    if cji.degree() != ai.degree() - fj.degree():
                        raise AlgebraError("lift coefficient has the wrong degree")
                    total = total + cji * fj
            if total != ai:
                raise AlgebraError(f"lift does not reproduce generator {i} of a")
        return True

    def column(self, i):
        return [self.c[j][i] for j in range(len(self.f))]

    def gamma_strings(self, names=None):
        names = names or [f"T{j + 1}" for j in range(len(self.f))]
        out = []
        for i in range(len(self.a)):
            terms = []
            for j, name in enumerate(names):
                cji = self.c[j][i]
                if cji:
                    s = str(cji)
                    terms.append(f"({s})*{name}" if len(cji) > 1 else f"{s}*{name}")
            out.append(" + ".join(terms) if terms else "0")
        return out

    def to_lists(self):
        return [[str(x) for x in row] for row in self.c]


def gamma_lift(a, f) -> GammaLift:
    """Deterministic lift of a into (f) by Gröbner division in the POT order."""
    a = list(a)
    f = list(f)
    ring = f[0].ring
    free = FreeModule(ring, [0])
    lifter = Lifter(free, [x.coeffs for x in f], [x.degree() for x in f])
    c = [[ring.zero] * len(a) for _ in f]
    for i, ai in enumerate(a):
        coeffs = lifter.lift(ai.coeffs)
        if coeffs is None:
            raise AlgebraError("a not contained in I")
        for j, p in enumerate(FreeModule(ring, [x.degree() for x in f]).entries(coeffs)):
            c[j][i] = p
    return GammaLift(f, a, c)


class ResidualInstance:
    """R, generators f of I, generators a of a, a lift, and the colon J = a : I."""

    def __init__(self, f, a, lift: GammaLift = None, name=None):
        f = [x for x in f]
        a = [x for x in a]
        if not f or not a:
            raise AlgebraError("I and a need generators")
        self.ring = f[0].ring
        self.f = f
        self.a = a
        self.lift = lift if lift is not None else gamma_lift(a, f)
        self.name = name
        self.I = Ideal(self.ring, f)
        self.A = Ideal(self.ring, a)
        self._J = None
        self._flags = {}
        self._koszul = None
        self._sym = {}

    @property
    def r(self):
        return len(self.f)

    @property
    def s(self):
        return len(self.a)

    @property
    def d(self):
        return self.ring.nvars

    @property
    def g(self):
        return self.I.codim()

    @property
    def J(self) -> Ideal:
        if self._J is None:
            self._J = self.A.colon(self.I)
        return self._J

    @property
    def sigma(self):
        """Sum of the degrees of a minimal generating set of a."""
        return sum(x.degree() for x in self.A.minimal_generators())

    @property
    def koszul(self) -> KoszulData:
        if self._koszul is None:
            self._koszul = KoszulData(self.f)
        return self._koszul

    def quotient_presentation(self) -> ModulePresentation:
        """I/a on generators f: relations syz(f) and the lift columns."""
        ring = self.ring
        target = FreeModule(ring, [x.degree() for x in self.f])
        syz = syzygies(FreeModule(ring, [0]), [x.coeffs for x in self.f],
                       [x.degree() for x in self.f], minimal=False)
        cols = list(syz.columns)
        degs = list(syz.source.degrees)
        for i, ai in enumerate(self.a):
            v = target.vector(self.lift.column(i))
            if v:
                cols.append(v)
                degs.append(ai.degree())
        return ModulePresentation(Matrix(FreeModule(ring, degs), target, cols))

    @property
    def is_residual(self):
        if "residual" not in self._flags:
            J = self.J
            self._flags["residual"] = J.is_proper() and J.codim() >= self.s
        return self._flags["residual"]

    @property
    def is_geometric(self):
        if "geometric" not in self._flags:
            self._flags["geometric"] = self.is_residual and (self.I + self.J).codim() >= self.s + 1
        return self._flags["geometric"]

    @property
    def is_arithmetic(self):
        if "arithmetic" not in self._flags:
            fitt = fitting_ideal(self.quotient_presentation(), 1)
            self._flags["arithmetic"] = self.is_residual and fitt.codim() >= self.s + 1
        return self._flags["arithmetic"]

    def classify(self, arithmetic=True):
        if not self.J.is_proper():
            raise AlgebraError("improper colon: not a residual intersection")
        out = {"residual": self.is_residual, "geometric": self.is_geometric}
        if arithmetic:
            out["arithmetic"] = self.is_arithmetic
        return out

    def sym_power(self, k) -> "SymPower":
        if k not in self._sym:
            self._sym[k] = SymPower(self, k)
        return self._sym[k]

    def to_dict(self):
        return {
            "I": [str(x) for x in self.f],
            "a": [str(x) for x in self.a],
            "s": self.s,
            "g": self.g,
            "lift": self.lift.to_lists(),
        }


def classify(inst: ResidualInstance, arithmetic=True):
    return inst.classify(arithmetic=arithmetic)


# ---------------------------------------------------------------------------
# symmetric powers of I/a
# ---------------------------------------------------------------------------


class SymPower:
    """Sym^k(I/a) on the generators T^alpha (|alpha| = k).

    Relations are the degree-k strand of L + (gamma), L generated by the
    linear forms sum_j z_j T_j of the syzygies z of f.  Attached to an
    instance, Sym^0 is R/J.
    """

    def __init__(self, inst: ResidualInstance, k):
        if k < 0:
            raise AlgebraError("symmetric powers need k >= 0")
        self.inst = inst
        self.k = k
        ring = inst.ring
        fdeg = [x.degree() for x in inst.f]
        r = inst.r
        if k == 0:
            self.monomials = [(0,) * r]
            self.presentation = inst.J.quotient()
            return
        self.monomials = list(compositions(k, r))
        basis = TermBasis(ring, self.monomials, [sum(a * e for a, e in zip(al, fdeg)) for al in self.monomials])
        self.basis = basis
        forms = [ring_vector for ring_vector in _linear_forms(inst)]
        cols = []
        degs = []
        for beta in compositions(k - 1, r):
            bdeg = sum(b * e for b, e in zip(beta, fdeg))
            for coeffs, deg in forms:
                parts = {}
                for q, cq in enumerate(coeffs):
                    if cq:
                        key = beta[:q] + (beta[q] + 1,) + beta[q + 1:]
                        parts[key] = parts[key] + cq if key in parts else cq
                v = basis.assemble(parts)
                if v:
                    cols.append(v)
                    degs.append(deg + bdeg)
        self.presentation = ModulePresentation(Matrix(FreeModule(ring, degs), basis.free, cols))

    def num_generators(self):
        return self.presentation.num_generators()

    def hilbert_series(self):
        return self.presentation.hilbert_series()

    def relation_forms(self, names=None):
        """Relations as strings in T (only meaningful for k = 1)."""
        r = self.inst.r
        names = names or [f"T{j + 1}" for j in range(r)]
        out = []
        for col in self.presentation.relations.columns:
            parts = self.basis.split(col)
            terms = []
            for key, p in sorted(parts.items(), reverse=True):
                mono = "*".join(
                    n if e == 1 else f"{n}^{e}" for n, e in zip(names, key) if e
                )
                terms.append(f"({p})*{mono}" if len(p) > 1 else f"{p}*{mono}")
            out.append(" + ".join(terms).replace("+ -", "- "))
        return out


def _linear_forms(inst: ResidualInstance):
    """(coefficients, degree) of the T-linear relations: syzygies of f, then gamma."""
    ring = inst.ring
    K = inst.koszul
    B1 = K.bases[1]
    out = []
    for z in K.cycles(1):
        parts = B1.split(z)
        coeffs = [parts.get(((q,), 0), ring.zero) for q in range(inst.r)]
        out.append((coeffs, B1.free.degree_of(z)))
    for i, ai in enumerate(inst.a):
        out.append((inst.lift.column(i), ai.degree()))
    return out


def sym_power(inst: ResidualInstance, k) -> SymPower:
    return inst.sym_power(k)


def power_quotient(inst: ResidualInstance, k) -> ModulePresentation:
    """I^k / a I^{k-1} on the products of k generators of I."""
    ring = inst.ring
    F = FreeModule(ring, [0])
    gens = [ring.one]
    for _ in range(k):
        gens = [g * x for g in gens for x in inst.f]
    low = [ring.one]
    for _ in range(k - 1):
        low = [g * x for g in low for x in inst.f]
    rels = [a * g for a in inst.a for g in low]
    gens = Ideal(ring, gens).minimal_generators()
    return subquotient(F, [g.coeffs for g in gens], [x.coeffs for x in rels]).minimal()


# ---------------------------------------------------------------------------
# element calculus on the Čech-localized totalization
# ---------------------------------------------------------------------------


def _add_into(out, key, poly, sign=1):
    if not poly:
        return
    if sign < 0:
        poly = -poly
    cur = out.get(key)
    if cur is None:
        out[key] = poly
    else:
        new = cur + poly
        if new:
            out[key] = new
        else:
            del out[key]


def _bump(beta, q):
    return beta[:q] + (beta[q] + 1,) + beta[q + 1:]


class _Total:
    """d_D, the Čech differential and its contraction for one instance."""

    def __init__(self, inst: ResidualInstance):
        self.inst = inst
        self.r = inst.r
        c = inst.lift.c
        # gamma_l = sum_q c[q][l] T_q
        self.gamma = [[(q, c[q][l]) for q in range(inst.r) if c[q][l]] for l in range(inst.s)]

    def d(self, elem):
        out = {}
        for (P, beta, J, L, g), p in elem.items():
            for pos, q in enumerate(J):
                _add_into(out, (P, _bump(beta, q), J[:pos] + J[pos + 1:], L, g), p, -1 if pos % 2 else 1)
            sJ = -1 if len(J) % 2 else 1
            for pos, l in enumerate(L):
                sg = sJ * (-1 if pos % 2 else 1)
                rest = L[:pos] + L[pos + 1:]
                for q, cq in self.gamma[l]:
                    _add_into(out, (P, _bump(beta, q), J, rest, g), cq * p, sg)
        return out

    def delta(self, elem):
        out = {}
        r = self.r
        for (P, beta, J, L, g), p in elem.items():
            for q in range(r):
                if q in P:
                    continue
                below = sum(1 for x in P if x < q)
                NP = tuple(sorted(P + (q,)))
                _add_into(out, (NP, beta, J, L, g), p, -1 if below % 2 else 1)
        return out

    def homotopy(self, elem):
        out = {}
        r = self.r
        for (P, beta, J, L, g), p in elem.items():
            free = [q for q in range(r) if beta[q] >= 0]
            if not free:
                raise AlgebraError("chase met a top local cohomology component")
            q = free[0]
            if q not in P:
                continue
            below = sum(1 for x in P if x < q)
            NP = tuple(x for x in P if x != q)
            _add_into(out, (NP, beta, J, L, g), p, -1 if below % 2 else 1)
        return out

    def transgression(self, elem):
        """tau: top Čech class in C^r(D_{r+k}) -> element of D_k (P = ())."""
        z = self.d(elem)
        for _ in range(self.r):
            y = self.homotopy(z)
            if self.delta(y) != z:
                raise AlgebraError("Čech lift failed: sign or convention bug")
            if all(P == () for (P, _, _, _, _) in y):
                if self.d(y):
                    raise AlgebraError("transgression image is not a cycle")
                return y
            z = self.d(y)
        raise AlgebraError("chase did not reach Čech degree 0")


# ---------------------------------------------------------------------------
# residual approximation complexes
# ---------------------------------------------------------------------------


class ResidualComplex:
    """The k-th residual approximation complex with coefficients in M.

    Terms i <= k are strands of D_i; terms i > k are strands of top local
    cohomology of D_{r-1+i}; tau_k joins them.  ``ambient`` is the free
    complex on all exterior indices, ``sub`` the subcomplex of cycle terms.
    """

    def __init__(self, inst: ResidualInstance, k, M=None):
        if k < 0:
            raise AlgebraError("k must be non-negative")
        self.inst = inst
        self.k = k
        ring = inst.ring
        if M is None:
            K = inst.koszul
        else:
            K = KoszulData(inst.f, M)
        self.K = K
        r, s = inst.r, inst.s
        G0 = K.M.generators
        fdeg = K.fdeg
        adeg = [x.degree() for x in inst.a]
        self.total = _Total(inst)
        self.r, self.s = r, s

        def deg(J, beta, L, g):
            return (sum(fdeg[q] for q in J) + sum(b * e for b, e in zip(beta, fdeg))
                    + sum(adeg[l] for l in L) + G0.degrees[g])

        self.bases = []
        self.layout = []
        for i in range(s + 1):
            keys = []
            blocks = []
            if i <= k:
                betas = list(compositions(k - i, r))
                for j in range(0, min(i, r - 1) + 1):
                    if i - j > s:
                        continue
                    for L in itertools.combinations(range(s), i - j):
                        for beta in betas:
                            blocks.append((j, beta, L))
            else:
                betas = [tuple(-a - 1 for a in al) for al in compositions(i - 1 - k, r)]
                for j in range(max(0, r - 1 + i - s), r):
                    width = r - 1 + i - j
                    if width < 0 or width > s:
                        continue
                    for L in itertools.combinations(range(s), width):
                        for beta in betas:
                            blocks.append((j, beta, L))
            for j, beta, L in blocks:
                for J in itertools.combinations(range(r), j):
                    for g in range(G0.rank):
                        keys.append((J, beta, L, g))
            self.layout.append(blocks)
            self.bases.append(TermBasis(ring, keys, [deg(*key) for key in keys]))
        maps = [self._map(i) for i in range(1, s + 1)]
        self.ambient = ChainComplex([b.free for b in self.bases], maps, check=False)
        gens, rels = {}, {}
        for i, blocks in enumerate(self.layout):
            B = self.bases[i]
            gl, rl = [], []
            for j, beta, L in blocks:
                src = K.bases[j]
                for z in K.cycles(j):
                    gl.append(B.assemble({(J, beta, L, g): p for (J, g), p in src.split(z).items()}))
                for v in K.relations[j]:
                    rl.append(B.assemble({(J, beta, L, g): p for (J, g), p in src.split(v).items()}))
            gens[i] = gl
            rels[i] = rl
        self.sub = SubquotientComplex(self.ambient, gens, rels)

    def _map(self, i):
        """d_i: term i -> term i-1."""
        k = self.k
        r = self.r
        src, tgt = self.bases[i], self.bases[i - 1]
        T = self.total
        top = tuple(range(r))
        if i <= k:
            def rule(key):
                J, beta, L, g = key
                for (_, b, J2, L2, g2), p in T.d({((), beta, J, L, g): src.ring.one}).items():
                    yield (J2, b, L2, g2), p
        elif i == k + 1:
            def rule(key):
                J, beta, L, g = key
                y = T.transgression({(top, beta, J, L, g): src.ring.one})
                for (_, b, J2, L2, g2), p in y.items():
                    yield (J2, b, L2, g2), p
        else:
            def rule(key):
                J, beta, L, g = key
                for (_, b, J2, L2, g2), p in T.d({(top, beta, J, L, g): src.ring.one}).items():
                    if all(x < 0 for x in b):
                        yield (J2, b, L2, g2), p
        return src.map_to(tgt, rule)

    def is_complex(self):
        return self.ambient.is_complex()

    def ranks(self):
        """Number of cycle generators in each term."""
        return self.sub.ranks()

    def summands(self, i):
        """Multiset of cycle indices j making up term i, with their multiplicities."""
        out = {}
        for j, _, _ in self.layout[i]:
            out[j] = out.get(j, 0) + 1
        return dict(sorted(out.items()))

    def homology_series(self, i):
        return self.sub.homology_series(i)

    def homology_vanishes(self, i, upto):
        return self.sub.vanishes_through(i, upto)

    def h0(self) -> ModulePresentation:
        B0 = self.bases[0]
        return subquotient(B0.free, self.sub.gens[0], self.sub.boundaries(0) + self.sub.rels[0])

    def tau_images(self):
        """tau_k of the cycle generators of term k+1."""
        k = self.k
        if k + 1 > self.s:
            return []
        return self.sub.boundaries(k)

    def to_dict(self):
        return {
            "k": self.k,
            "ranks": self.ranks(),
            "ambient_ranks": self.ambient.ranks(),
            "summands": [{str(j): m for j, m in self.summands(i).items()} for i in range(self.s + 1)],
        }


def residual_complex(inst: ResidualInstance, k, M=None) -> ResidualComplex:
    return ResidualComplex(inst, k, M)


class DStrand:
    """T-degree k strand of D^M = Tot(Z(f; M) (x) K(gamma; S)), all terms."""

    def __init__(self, inst: ResidualInstance, k, M=None):
        ring = inst.ring
        K = inst.koszul if M is None else KoszulData(inst.f, M)
        r, s = inst.r, inst.s
        G0 = K.M.generators
        fdeg = K.fdeg
        adeg = [x.degree() for x in inst.a]
        T = _Total(inst)
        self.bases = []
        layouts = []
        top = min(k, r - 1 + s)
        for i in range(top + 1):
            keys, blocks = [], []
            for j in range(0, min(i, r - 1) + 1):
                if i - j > s:
                    continue
                for L in itertools.combinations(range(s), i - j):
                    for beta in compositions(k - i, r):
                        blocks.append((j, beta, L))
            for j, beta, L in blocks:
                for J in itertools.combinations(range(r), j):
                    for g in range(G0.rank):
                        keys.append((J, beta, L, g))
            degs = [sum(fdeg[q] for q in J) + sum(b * e for b, e in zip(beta, fdeg))
                    + sum(adeg[l] for l in L) + G0.degrees[g] for J, beta, L, g in keys]
            self.bases.append(TermBasis(ring, keys, degs))
            layouts.append(blocks)

        def rule(key):
            J, beta, L, g = key
            for (_, b, J2, L2, g2), p in T.d({((), beta, J, L, g): ring.one}).items():
                yield (J2, b, L2, g2), p

        maps = [self.bases[i].map_to(self.bases[i - 1], rule) for i in range(1, top + 1)]
        self.ambient = ChainComplex([b.free for b in self.bases], maps, check=False)
        self.layout = layouts
        gens, rels = {}, {}
        for i, blocks in enumerate(layouts):
            B = self.bases[i]
            gl, rl = [], []
            for j, beta, L in blocks:
                src = K.bases[j]
                for z in K.cycles(j):
                    gl.append(B.assemble({(J, beta, L, g): p for (J, g), p in src.split(z).items()}))
                for v in K.relations[j]:
                    rl.append(B.assemble({(J, beta, L, g): p for (J, g), p in src.split(v).items()}))
            gens[i], rels[i] = gl, rl
        self.sub = SubquotientComplex(self.ambient, gens, rels)

    def is_complex(self):
        return self.ambient.is_complex()

    def component_counts(self):
        """Per term: {j: number of Z_j (x) S blocks}."""
        out = []
        for blocks in self.layout:
            c = {}
            for j, _, _ in blocks:
                c[j] = c.get(j, 0) + 1
            out.append(dict(sorted(c.items())))
        return out


def d_complex(inst: ResidualInstance, k, M=None) -> DStrand:
    return DStrand(inst, k, M)


def h0_residual(inst: ResidualInstance, k, M=None) -> ModulePresentation:
    """M[T]_k / (L M + L' + gamma M)_k built directly.

    L M + L' is generated by the T-linear forms sum_q z_q T_q of the cycles
    z of K_1(f; M), i.e. of the pairs with sum f_q z_q = 0 in M.
    """
    if k < 1:
        raise AlgebraError("the closed form needs k >= 1")
    ring = inst.ring
    K = inst.koszul if M is None else KoszulData(inst.f, M)
    r = inst.r
    G0 = K.M.generators
    fdeg = K.fdeg
    keys = [(al, g) for al in compositions(k, r) for g in range(G0.rank)]
    basis = TermBasis(ring, keys, [sum(a * e for a, e in zip(al, fdeg)) + G0.degrees[g] for al, g in keys])
    B1 = K.bases[1]
    cols, degs = [], []

    def push(parts, degree):
        v = basis.assemble(parts)
        if v:
            cols.append(v)
            degs.append(degree)

    for beta in compositions(k - 1, r):
        bdeg = sum(b * e for b, e in zip(beta, fdeg))
        for z in K.cycles(1):
            parts = {}
            for ((q,), g), p in B1.split(z).items():
                key = (_bump(beta, q), g)
                parts[key] = parts[key] + p if key in parts else p
            push(parts, B1.free.degree_of(z) + bdeg)
        for l, al in enumerate(inst.a):
            col = inst.lift.column(l)
            for g in range(G0.rank):
                parts = {}
                for q, cq in enumerate(col):
                    if cq:
                        key = (_bump(beta, q), g)
                        parts[key] = parts[key] + cq if key in parts else cq
                push(parts, al.degree() + bdeg + G0.degrees[g])
    for al in compositions(k, r):
        for rel in K.M.relations.columns:
            entries = G0.entries(rel)
            push({(al, g): p for g, p in enumerate(entries)}, G0.degree_of(rel) + sum(a * e for a, e in zip(al, fdeg)))
    return ModulePresentation(Matrix(FreeModule(ring, degs), basis.free, cols))


def disguised_residual(inst: ResidualInstance) -> Ideal:
    """K with H_0 of the 0-th residual approximation complex equal to R/K."""
    C = ResidualComplex(inst, 0)
    ring = inst.ring
    return Ideal(ring, [Polynomial(ring, dict(v)) for v in C.tau_images()])


def omega_coefficients(ring) -> ModulePresentation:
    """The canonical module A(-sum deg x_i) of the ambient ring."""
    return ModulePresentation.free(ring, [ring.canonical_degree])
