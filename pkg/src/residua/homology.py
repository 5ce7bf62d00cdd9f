"""Graded free resolutions and the invariants read off them.

Everything here works over the polynomial ambient ring, so depth comes from
Auslander-Buchsbaum and Ext is the cohomology of Hom(resolution, Q).
"""

from __future__ import annotations

import math

from .algebra import AlgebraError, LaurentPolynomial
from .groebner import (
    IMPROPER,
    FreeModule,
    HilbertSeries,
    Ideal,
    Matrix,
    ModulePresentation,
    Submodule,
    module_colon,
    module_dimension,
    nullspace,
    subquotient,
    syzygies,
    vec_restrict,
    vec_shift,
)


def as_presentation(X) -> ModulePresentation:
    """Ideals stand for their quotient rings R/I."""
    if isinstance(X, Ideal):
        return X.quotient()
    if isinstance(X, ModulePresentation):
        return X
    raise AlgebraError(f"cannot treat {type(X).__name__} as a module")


# ---------------------------------------------------------------------------
# complexes and Betti tables
# ---------------------------------------------------------------------------


class ChainComplex:
    """Graded free modules C_lo..C_hi with maps d_i: C_i -> C_{i-1}.

    ``maps[i]`` is d_{lo+i+1}.  Construction checks that consecutive maps
    compose to zero.
    """

    def __init__(self, modules, maps, lo=0, check=True):
        self.modules = list(modules)
        self.maps = list(maps)
        self.lo = lo
        if len(self.maps) != max(len(self.modules) - 1, 0):
            raise AlgebraError("a complex needs one map between consecutive modules")
        for i, d in enumerate(self.maps):
            if d.source != self.modules[i + 1] or d.target != self.modules[i]:
                raise AlgebraError(f"map {lo + i + 1} has the wrong source or target")
        if check and not self.is_complex():
            raise AlgebraError("consecutive maps do not compose to zero")

    @property
    def hi(self):
        return self.lo + len(self.modules) - 1

    @property
    def ring(self):
        return self.modules[0].ring

    def module(self, i) -> FreeModule:
        if self.lo <= i <= self.hi:
            return self.modules[i - self.lo]
        return FreeModule(self.ring, [])

    def differential(self, i) -> Matrix:
        """d_i: C_i -> C_{i-1}."""
        if self.lo < i <= self.hi:
            return self.maps[i - self.lo - 1]
        return Matrix.zero(self.module(i), self.module(i - 1))

    def ranks(self):
        return [m.rank for m in self.modules]

    def twists(self):
        return [list(m.degrees) for m in self.modules]

    def is_complex(self):
        for a, b in zip(self.maps, self.maps[1:]):
            if not (a @ b).is_zero():
                return False
        return True

    def homology_series(self, i) -> HilbertSeries:
        """Hilbert series of H_i = ker d_i / im d_{i+1}."""
        C = self.module(i)
        d_in = self.differential(i + 1)
        im = Submodule(C, d_in.columns).quotient_hilbert_series()
        ker = Submodule(C, kernel(self.differential(i)).columns).quotient_hilbert_series()
        return im - ker

    def is_exact_at(self, i):
        return self.homology_series(i).is_zero()

    def to_dict(self):
        return {
            "lo": self.lo,
            "ranks": self.ranks(),
            "twists": self.twists(),
        }

    def __repr__(self):
        return "ChainComplex(" + " <- ".join(str(r) for r in self.ranks()) + ")"


def kernel(d: Matrix) -> Matrix:
    """Generators of ker d as a map into the source of d."""
    src = d.source
    if src.rank == 0:
        return Matrix(FreeModule(d.ring, []), src, [])
    return syzygies(d.target, d.columns, src.degrees, minimal=False)


class BettiTable:
    """beta_{i,j}: number of degree-j generators of the i-th free module."""

    def __init__(self, entries=None):
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    @classmethod
    def from_complex(cls, C: ChainComplex):
        out = {}
        for i, F in enumerate(C.modules):
            for d in F.degrees:
                out[(C.lo + i, d)] = out.get((C.lo + i, d), 0) + 1
        return cls(out)

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def totals(self):
        if not self.entries:
            return []
        top = max(i for i, _ in self.entries)
        return [sum(v for (i, _), v in self.entries.items() if i == k) for k in range(top + 1)]

    def length(self):
        return max((i for i, _ in self.entries), default=-1)

    def regularity(self):
        return max((j - i for i, j in self.entries), default=-math.inf)

    def numerator(self) -> LaurentPolynomial:
        out = {}
        for (i, j), v in self.entries.items():
            out[j] = out.get(j, 0) + (-1) ** i * v
        return LaurentPolynomial(out)

    def rows(self):
        """Macaulay-style rows: row r lists beta_{i, i+r}."""
        if not self.entries:
            return {}
        cols = self.length() + 1
        out = {}
        for (i, j), v in self.entries.items():
            out.setdefault(j - i, [0] * cols)[i] = v
        return dict(sorted(out.items()))

    def to_dict(self):
        return {f"{i},{j}": v for (i, j), v in sorted(self.entries.items())}

    def __repr__(self):
        lines = [f"{r:>4}: " + " ".join(f"{v:>3}" if v else "  ." for v in row)
                 for r, row in self.rows().items()]
        return "\n".join(["total: " + " ".join(f"{t:>3}" for t in self.totals())] + lines)


class Resolution(ChainComplex):
    """Minimal graded free resolution of a presentation's cokernel."""

    def __init__(self, modules, maps):
        super().__init__(modules, maps, lo=0, check=False)

    @property
    def betti(self) -> BettiTable:
        return BettiTable.from_complex(self)

    @property
    def length(self):
        return len(self.modules) - 1 if self.modules[-1].rank else len(self.modules) - 2


def minimal_resolution(X, length_cap=None) -> Resolution:
    """Minimal graded free resolution; cached on the presentation."""
    P = as_presentation(X)
    cached = getattr(P, "_resolution", None)
    if cached is not None:
        return cached
    ring = P.ring
    n = ring.nvars
    cap = n + 1 if length_cap is None else length_cap
    M = P.minimal()
    modules = [M.generators]
    maps = []
    d = M.relations
    while d.source.rank:
        if len(maps) >= cap:
            raise AlgebraError("resolution longer than the number of variables")
        modules.append(d.source)
        maps.append(d)
        d = syzygies(d.target, d.columns, d.source.degrees, minimal=True)
    res = Resolution(modules, maps)
    if length_cap is None and res.length > n:
        raise AlgebraError("resolution longer than the number of variables")
    P._resolution = res
    return res


def betti_table(X) -> BettiTable:
    return minimal_resolution(X).betti


def hilbert_series(X) -> HilbertSeries:
    return as_presentation(X).hilbert_series()


def depth_and_pd(X):
    """(depth, projective dimension); the zero module gives (inf, -inf)."""
    P = as_presentation(X)
    if P.is_zero():
        return IMPROPER, -math.inf
    pd = minimal_resolution(P).length
    return P.ring.nvars - pd, pd


def depth(X):
    return depth_and_pd(X)[0]


def dimension(X):
    """Krull dimension; -1 for the zero module."""
    return module_dimension(as_presentation(X))


def is_cohen_macaulay(X):
    P = as_presentation(X)
    if P.is_zero():
        return True
    return depth(P) == dimension(P)


def regularity(X):
    P = as_presentation(X)
    if not P.ring.is_standard_graded:
        raise AlgebraError("regularity via Betti numbers needs a standard graded ring")
    if P.is_zero():
        return -math.inf
    return betti_table(P).regularity()


def multiplicity(X):
    return hilbert_series(X).multiplicity()


def num_generators(X) -> int:
    return as_presentation(X).num_generators()


# ---------------------------------------------------------------------------
# Hom and Ext
# ---------------------------------------------------------------------------


def _hom_term(F: FreeModule, Q: ModulePresentation):
    """Hom(F, Q) inside Q0^{rank F}: block j holds the image of e_j."""
    ring = F.ring
    Q0 = Q.generators
    q = Q0.rank
    degs = []
    for a in F.degrees:
        degs.extend(d - a for d in Q0.degrees)
    G = FreeModule(ring, degs)
    rels = []
    for j in range(F.rank):
        for c in Q.relations.columns:
            if c:
                rels.append(vec_shift(ring, c, j * q))
    return G, rels


def _hom_map(d: Matrix, q: int, G_src: FreeModule, G_tgt: FreeModule) -> Matrix:
    """Precomposition with d: F' -> F, as Hom(F, Q) -> Hom(F', Q)."""
    ring = d.ring
    ps = ring.pos_shift
    mm = ring.mono_mask
    # entry (j, l) of d, grouped by j
    by_row = [dict() for _ in range(d.target.rank)]
    for l, col in enumerate(d.columns):
        for t, c in col.items():
            by_row[t >> ps].setdefault(l, {})[t & mm] = c
    cols = []
    for j in range(d.target.rank):
        for k in range(q):
            v = {}
            for l, poly in by_row[j].items():
                pos = (l * q + k) << ps
                for m, c in poly.items():
                    v[m | pos] = c
            cols.append(v)
    return Matrix(G_src, G_tgt, cols)


class ExtModule:
    """Ext^i(P, Q) with explicit cocycle representatives in Hom(F_i, Q)."""

    def __init__(self, presentation, cocycles, ambient, index):
        self.presentation = presentation
        self.cocycles = cocycles
        self.ambient = ambient
        self.index = index


def ext_from_resolution(i, F: ChainComplex, X) -> ExtModule:
    """Cohomology at i of Hom(F, Q) for a free complex F (homological indexing)."""
    Q = as_presentation(X)
    ring = Q.ring
    q = Q.generators.rank
    G_i, rel_i = _hom_term(F.module(i), Q)
    if G_i.rank == 0:
        empty = ModulePresentation(Matrix(FreeModule(ring, []), FreeModule(ring, []), []))
        return ExtModule(empty, [], G_i, i)
    if F.module(i + 1).rank:
        G_next, rel_next = _hom_term(F.module(i + 1), Q)
        delta = _hom_map(F.differential(i + 1), q, G_i, G_next)
        gens = delta.columns + rel_next
        degs = list(G_i.degrees) + [G_next.degree_of(r) for r in rel_next]
        syz = syzygies(G_next, gens, degs, minimal=False)
        cocycles = []
        for c in syz.columns:
            v = vec_restrict(ring, c, 0, G_i.rank)
            if v:
                cocycles.append(v)
    else:
        cocycles = [G_i.basis(j) for j in range(G_i.rank)]
    boundaries = list(rel_i)
    if i - 1 >= F.lo and F.module(i - 1).rank:
        G_prev, _ = _hom_term(F.module(i - 1), Q)
        prev = _hom_map(F.differential(i), q, G_prev, G_i)
        boundaries += [c for c in prev.columns if c]
    P = subquotient(G_i, cocycles, boundaries) if cocycles else ModulePresentation(
        Matrix(FreeModule(ring, []), FreeModule(ring, []), []))
    return ExtModule(P, cocycles, G_i, i)


def ext(i, P, Q) -> ModulePresentation:
    """Ext^i(P, Q) as a minimal presentation."""
    res = minimal_resolution(P)
    return ext_from_resolution(i, res, Q).presentation.minimal()


def hom(P, Q) -> ModulePresentation:
    return ext(0, P, Q)


def canonical_module(X) -> ModulePresentation:
    """Ext^{n - dim}(P, A(-sum of variable degrees))."""
    P = as_presentation(X)
    ring = P.ring
    dim = dimension(P)
    if dim < 0:
        raise AlgebraError("the zero module has no canonical module")
    omega_A = ModulePresentation.free(ring, [ring.canonical_degree])
    return ext(ring.nvars - dim, P, omega_A)


def type_of(X) -> int:
    """Minimal number of generators of the canonical module of a CM module."""
    P = as_presentation(X)
    if not is_cohen_macaulay(P):
        raise AlgebraError("type requires CM module")
    return canonical_module(P).num_generators()


def koszul_resolution_of_field(ring) -> ChainComplex:
    """K(x_1..x_n; R) resolving the residue field."""
    from .koszul import koszul_complex

    return koszul_complex(list(ring.gens), ModulePresentation.free(ring, [0]))


def bass_numbers_at_max(X, up_to=None):
    """mu^i = dim_k Ext^i(k, P) for 0 <= i <= up_to (default: n)."""
    P = as_presentation(X)
    ring = P.ring
    n = ring.nvars if up_to is None else up_to
    K = koszul_resolution_of_field(ring)
    out = []
    for i in range(n + 1):
        E = ext_from_resolution(i, K, P).presentation
        hs = E.hilbert_series()
        out.append(int(hs.as_polynomial()(1)) if not hs.is_zero() else 0)
    return out


def annihilator(X) -> Ideal:
    """ann(P); cached on the presentation."""
    P = as_presentation(X)
    cached = getattr(P, "_annihilator", None)
    if cached is None:
        F = P.generators
        cached = module_colon(F, P.relations.columns, [F.basis(j) for j in range(F.rank)])
        P._annihilator = cached
    return cached


# ---------------------------------------------------------------------------
# degree-0 homomorphisms
# ---------------------------------------------------------------------------


def standard_basis(P: ModulePresentation, degree):
    """Vectors (single terms) of F0 in ``degree`` that are standard w.r.t. the relations."""
    ring = P.ring
    F0 = P.generators
    gb = P.submodule().gb()
    leads = gb.leads
    ps = ring.pos_shift
    out = []
    for k, dk in enumerate(F0.degrees):
        for m in ring.monomials_of_degree(degree - dk):
            t = m | (k << ps)
            if not any(ring.mono_divides(l, t) for l in leads if (l >> ps) == k):
                out.append(t)
    return out


def degree_zero_homs(P, Q):
    """A k-basis of Hom(P, Q)_0, each as the list of images of P's generators."""
    P = as_presentation(P)
    Q = as_presentation(Q)
    ring = P.ring
    field = ring.field
    p = field.characteristic
    gbQ = Q.submodule().gb()
    F0 = P.generators
    unknowns = []  # (generator j, basis term)
    for j, a in enumerate(F0.degrees):
        for t in standard_basis(Q, a):
            unknowns.append((j, t))
    if not unknowns:
        return []
    ps = ring.pos_shift
    mm = ring.mono_mask
    rows = {}
    for rel in P.relations.columns:
        by_gen = {}
        for t, c in rel.items():
            by_gen.setdefault(t >> ps, {})[t & mm] = c
        # NF of rel applied to each unknown, one linear functional per term
        for u, (j, b) in enumerate(unknowns):
            coeff = by_gen.get(j)
            if not coeff:
                continue
            v = {}
            for m, c in coeff.items():
                v[b + m] = c
            nf = gbQ.normal_form(v)
            for t, c in nf.items():
                rows.setdefault((id(rel), t), {})[u] = c
    basis = nullspace(field, list(rows.values()), len(unknowns))
    out = []
    for vec in basis:
        images = [dict() for _ in range(F0.rank)]
        for u, c in vec.items():
            j, b = unknowns[u]
            images[j][b] = (images[j].get(b, 0) + c) % p if p else images[j].get(b, 0) + c
        out.append([{t: c for t, c in im.items() if c} for im in images])
    return out


def random_degree_zero_hom(P, Q, rng):
    """A random k-combination of a basis of Hom(P, Q)_0 (None when it is zero)."""
    basis = degree_zero_homs(P, Q)
    if not basis:
        return None
    P = as_presentation(P)
    ring = P.ring
    field = ring.field
    p = field.characteristic
    images = [dict() for _ in range(P.generators.rank)]
    for hom_ in basis:
        c = field.random_element(rng)
        for j, im in enumerate(hom_):
            for t, v in im.items():
                w = images[j].get(t, 0) + c * v
                images[j][t] = w % p if p else w
    return [{t: c for t, c in im.items() if c} for im in images]


def is_surjective(images, Q) -> bool:
    """Do the images together with Q's relations generate all of Q0?"""
    Q = as_presentation(Q)
    F = Q.generators
    sub = Submodule(F, [v for v in images if v] + list(Q.relations.columns))
    return all(sub.contains(F.basis(k)) for k in range(F.rank))


def find_surjection(P, Q, rng, attempts=3):
    """Images of P's generators defining a degree-0 surjection P -> Q, or None."""
    for _ in range(attempts):
        images = random_degree_zero_hom(P, Q, rng)
        if images is None:
            return None
        if is_surjective(images, Q):
            return images
    return None


# ---------------------------------------------------------------------------
# complexes of subquotients of a free ambient complex
# ---------------------------------------------------------------------------


class SubquotientComplex:
    """Terms (<gens_i> + rels_i) / rels_i inside an ambient free complex.

    The ambient differential must map gens_i into <gens_{i-1}> + rels_{i-1}
    and rels_i into rels_{i-1}; then homology is computed without ever
    presenting the terms themselves.
    """

    def __init__(self, ambient: ChainComplex, gens, rels=None):
        self.ambient = ambient
        self.gens = {i: [g for g in gens.get(i, []) if g] for i in range(ambient.lo, ambient.hi + 1)}
        rels = rels or {}
        self.rels = {i: [r for r in rels.get(i, []) if r] for i in range(ambient.lo, ambient.hi + 1)}
        self._hs = {}

    @property
    def lo(self):
        return self.ambient.lo

    @property
    def hi(self):
        return self.ambient.hi

    def term(self, i) -> ModulePresentation:
        return subquotient(self.ambient.module(i), self.gens.get(i, []), self.rels.get(i, []))

    def cycles(self, i):
        """Generators of {v in <gens_i> : d v in rels_{i-1}}."""
        F = self.ambient.module(i)
        gens = self.gens.get(i, [])
        if not gens:
            return []
        if i == self.lo:
            return list(gens)
        d = self.ambient.differential(i)
        G = self.ambient.module(i - 1)
        images = [d.apply(g) for g in gens]
        rels = self.rels.get(i - 1, [])
        degs = [F.degree_of(g) for g in gens] + [G.degree_of(r) for r in rels]
        syz = syzygies(G, images + rels, degs, minimal=False)
        comb = Matrix(FreeModule(F.ring, degs[: len(gens)]), F, gens)
        out = []
        for c in syz.columns:
            v = comb.apply(vec_restrict(F.ring, c, 0, len(gens)))
            if v:
                out.append(v)
        return out

    def boundaries(self, i):
        if i + 1 > self.hi:
            return []
        d = self.ambient.differential(i + 1)
        return [v for v in (d.apply(g) for g in self.gens.get(i + 1, [])) if v]

    def homology_series(self, i) -> HilbertSeries:
        if i not in self._hs:
            F = self.ambient.module(i)
            rel = self.rels.get(i, [])
            im = Submodule(F, self.boundaries(i) + rel).quotient_hilbert_series()
            ker = Submodule(F, self.cycles(i) + rel).quotient_hilbert_series()
            self._hs[i] = im - ker
        return self._hs[i]

    def homology(self, i) -> ModulePresentation:
        F = self.ambient.module(i)
        return subquotient(F, self.cycles(i), self.boundaries(i) + self.rels.get(i, []))

    def homology_dims(self, i, upto):
        """dim_k H_i in every internal degree from the lowest generator degree to ``upto``."""
        hs = self.homology_series(i)
        F = self.ambient.module(i)
        lo = min(F.degrees, default=0)
        lo = min(lo, hs.numerator.low()) if hs.numerator else lo
        return hs.coefficients(lo, upto)

    def vanishes_through(self, i, upto):
        return all(v == 0 for v in self.homology_dims(i, upto).values())

    def is_complex(self):
        return self.ambient.is_complex()

    def ranks(self):
        return [len(self.gens.get(i, [])) for i in range(self.lo, self.hi + 1)]
