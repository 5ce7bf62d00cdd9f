"""Koszul complexes with module coefficients, their cycles and homology.

Exterior basis elements e_S are index tuples in lexicographic order and the
differential is contraction, e_S -> sum_l (-1)^l f_{S[l]} e_{S without S[l]}
(l counted from 0).  Cycles are stored as explicit lifts into K_i (x) G0.
"""

from __future__ import annotations

import itertools

from .algebra import AlgebraError, Polynomial
from .groebner import (
    IMPROPER,
    FreeModule,
    Ideal,
    Matrix,
    ModulePresentation,
    Submodule,
    subquotient,
    syzygies,
)
from .homology import (
    ChainComplex,
    SubquotientComplex,
    as_presentation,
    depth,
    dimension,
)


def compositions(total, parts):
    """Exponent tuples of length ``parts`` summing to ``total``, lex descending."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if total < 0:
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def wedge_sign(S, T):
    """Sign of e_S ^ e_T = sign * e_{S u T}; 0 when S and T meet."""
    if set(S) & set(T):
        return 0
    inv = sum(1 for s in S for t in T if s > t)
    return -1 if inv % 2 else 1


class TermBasis:
    """An ordered basis of a graded free module indexed by hashable keys."""

    def __init__(self, ring, keys, degrees):
        self.ring = ring
        self.keys = list(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        self.free = FreeModule(ring, degrees)

    def __len__(self):
        return len(self.keys)

    def element(self, key, poly=None):
        """poly * basis[key] as a vector (poly defaults to 1)."""
        ring = self.ring
        pos = self.index[key] << ring.pos_shift
        if poly is None:
            return {pos: ring.field.one}
        return {m | pos: c for m, c in ring(poly).coeffs.items()}

    def split(self, vec):
        """{key: Polynomial} for a vector."""
        ring = self.ring
        ps = ring.pos_shift
        mm = ring.mono_mask
        out = {}
        for t, c in vec.items():
            out.setdefault(self.keys[t >> ps], {})[t & mm] = c
        return {k: Polynomial(ring, v) for k, v in out.items()}

    def assemble(self, parts):
        """Inverse of split: {key: Polynomial} -> vector (zero parts dropped)."""
        ring = self.ring
        ps = ring.pos_shift
        out = {}
        for k, f in parts.items():
            if f:
                pos = self.index[k] << ps
                for m, c in f.coeffs.items():
                    out[m | pos] = c
        return out

    def map_to(self, target: "TermBasis", rule) -> Matrix:
        """Matrix whose column for key k is sum of coeff * target[k'] over rule(k)."""
        ring = self.ring
        p = ring.field.characteristic
        ps = ring.pos_shift
        one = ring.one
        cols = []
        for k in self.keys:
            v = {}
            for tk, coeff in rule(k):
                if isinstance(coeff, int):
                    coeff = one.scale(coeff)
                pos = target.index[tk] << ps
                for m, c in coeff.coeffs.items():
                    w = v.get(m | pos, 0) + c
                    if p:
                        w %= p
                    v[m | pos] = w
            cols.append({t: c for t, c in v.items() if c})
        return Matrix(self.free, target.free, cols)


def _coefficients(M):
    if M is None:
        return None
    return as_presentation(M)


class KoszulData:
    """K(f; M) for a presentation M = G0 / N, with cycles, boundaries and homology."""

    def __init__(self, f, M=None):
        f = list(f)
        if not f:
            raise AlgebraError("the Koszul complex needs at least one element")
        ring = f[0].ring
        for x in f:
            if not x or not x.is_homogeneous():
                raise AlgebraError("Koszul sequence entries must be nonzero and homogeneous")
        self.ring = ring
        self.f = f
        self.r = len(f)
        M = _coefficients(M) or ModulePresentation.free(ring, [0])
        self.M = M
        G0 = M.generators
        fdeg = [x.degree() for x in f]
        self.fdeg = fdeg
        self.bases = []
        for i in range(self.r + 1):
            keys = [(S, k) for S in itertools.combinations(range(self.r), i) for k in range(G0.rank)]
            degs = [sum(fdeg[j] for j in S) + G0.degrees[k] for S, k in keys]
            self.bases.append(TermBasis(ring, keys, degs))
        maps = []
        for i in range(1, self.r + 1):
            maps.append(self.bases[i].map_to(self.bases[i - 1], self._contract))
        self.complex = ChainComplex([b.free for b in self.bases], maps)
        rels = {}
        for i, B in enumerate(self.bases):
            out = []
            for S in itertools.combinations(range(self.r), i):
                for col in M.relations.columns:
                    entries = G0.entries(col)
                    out.append(B.assemble({(S, k): p for k, p in enumerate(entries)}))
            rels[i] = out
        self.relations = rels
        gens = {i: [B.element(k) for k in B.keys] for i, B in enumerate(self.bases)}
        self.sub = SubquotientComplex(self.complex, gens, rels)
        self._cycles = {}
        self._pieces = {}

    def _contract(self, key):
        S, k = key
        for l, j in enumerate(S):
            yield (S[:l] + S[l + 1:], k), self.f[j] if l % 2 == 0 else -self.f[j]

    @property
    def is_free(self):
        return not any(self.M.relations.columns)

    def module(self, i) -> FreeModule:
        return self.bases[i].free

    def cycles(self, i):
        """Generator lifts of Z_i(f; M) inside K_i (x) G0."""
        if i not in self._cycles:
            if i == 0 or not 0 <= i <= self.r:
                out = self.sub.gens.get(i, []) if i == 0 else []
            elif self.is_free:
                d = self.complex.differential(i)
                out = syzygies(d.target, d.columns, d.source.degrees, minimal=True).columns
            else:
                out = self.sub.cycles(i)
            self._cycles[i] = [v for v in out if v]
        return self._cycles[i]

    def boundaries(self, i):
        return self.sub.boundaries(i)

    def Z(self, i) -> ModulePresentation:
        return self._piece("Z", i, lambda: subquotient(self.module(i), self.cycles(i), self.relations[i]))

    def B(self, i) -> ModulePresentation:
        return self._piece("B", i, lambda: subquotient(self.module(i), self.boundaries(i), self.relations[i]))

    def H(self, i) -> ModulePresentation:
        return self._piece(
            "H", i,
            lambda: subquotient(self.module(i), self.cycles(i), self.boundaries(i) + self.relations[i]),
        )

    def _piece(self, name, i, build):
        key = (name, i)
        if key not in self._pieces:
            self._pieces[key] = build()
        return self._pieces[key]

    def homology_series(self, i):
        F = self.module(i)
        rel = self.relations[i]
        im = Submodule(F, self.boundaries(i) + rel).quotient_hilbert_series()
        ker = Submodule(F, self.cycles(i) + rel).quotient_hilbert_series()
        return im - ker


def koszul_complex(f, M=None) -> ChainComplex:
    """The free complex K(f; G0); with relations N it maps onto K(f; M)."""
    return KoszulData(f, M).complex


def koszul_pieces(f, M, i):
    """(Z_i, B_i, H_i) of K(f; M) as presentations."""
    K = KoszulData(f, M)
    return K.Z(i), K.B(i), K.H(i)


# ---------------------------------------------------------------------------
# sliding depth
# ---------------------------------------------------------------------------


class DepthReport:
    """Depths of Koszul homology (and optionally cycles) against the sliding bounds."""

    def __init__(self, d, r, g, h_depths, h_dims, z_depths, k_max):
        self.d = d
        self.r = r
        self.g = g
        self.h_depths = h_depths
        self.h_dims = h_dims
        self.z_depths = z_depths
        self.k_max = k_max

    @property
    def vacuous(self):
        return self.d == self.g

    def sd_bound(self, i, k):
        return min(self.d - self.g, self.d - self.r + i + k)

    def sdc_bound(self, i, k):
        return min(self.d - self.r + i + k, self.d - self.g + 2, self.d)

    def sd(self, k):
        return all(self.h_depths[i] >= self.sd_bound(i, k) for i in self.h_depths)

    def sdc(self, k):
        if self.z_depths is None:
            return None
        return all(self.z_depths[i] >= self.sdc_bound(i, k) for i in self.z_depths)

    @property
    def strongly_cm(self):
        return all(
            self.h_depths[i] == self.h_dims[i]
            for i in self.h_depths
            if self.h_depths[i] != IMPROPER
        )

    def status(self, k):
        """'vacuous', 'holds' or 'fails' for SD_k."""
        if self.vacuous:
            return "vacuous"
        return "holds" if self.sd(k) else "fails"

    def to_dict(self):
        def num(x):
            return "inf" if x == IMPROPER else x

        out = {
            "d": self.d,
            "r": self.r,
            "g": self.g,
            "homology_depths": {str(i): num(v) for i, v in self.h_depths.items()},
            "homology_dims": {str(i): v for i, v in self.h_dims.items()},
            "sd": {str(k): self.sd(k) for k in range(self.k_max + 1)},
            "strongly_cm": self.strongly_cm,
            "vacuous": self.vacuous,
        }
        if self.z_depths is not None:
            out["cycle_depths"] = {str(i): num(v) for i, v in self.z_depths.items()}
            out["sdc"] = {str(k): self.sdc(k) for k in range(self.k_max + 1)}
        return out


def sliding_depth_report(f, k_max=None, cycles=False, koszul=None) -> DepthReport:
    """Depth data for H_i(f; R) for i <= r - g (the rest vanish)."""
    f = list(f)
    ring = f[0].ring
    I = Ideal(ring, f)
    g = I.codim()
    if g == IMPROPER:
        raise AlgebraError("sliding depth needs a proper ideal")
    d = ring.nvars
    r = len(f)
    K = koszul or KoszulData(f)
    top = r - g
    h_depths = {}
    h_dims = {}
    for i in range(top + 1):
        H = K.H(i)
        if H.is_zero():
            h_depths[i] = IMPROPER
            h_dims[i] = -1
        else:
            h_depths[i] = depth(H)
            h_dims[i] = dimension(H)
    z_depths = None
    if cycles:
        z_depths = {}
        for i in range(top + 1):
            Z = K.Z(i)
            z_depths[i] = IMPROPER if Z.is_zero() else depth(Z)
    if k_max is None:
        k_max = max(top, 2)
    return DepthReport(d, r, g, h_depths, h_dims, z_depths, k_max)


# ---------------------------------------------------------------------------
# cycle duality
# ---------------------------------------------------------------------------


class CycleDuality:
    """psi_i: Z_i -> Hom(Z_{r-1-i}, R), given on generators, with iso evidence."""

    def __init__(self, i, matrix, hom_generators, injective, surjective):
        self.i = i
        self.matrix = matrix
        self.hom_generators = hom_generators
        self.injective = injective
        self.surjective = surjective

    @property
    def is_isomorphism(self):
        return self.injective and self.surjective

    def to_dict(self):
        return {
            "i": self.i,
            "injective": self.injective,
            "surjective": self.surjective,
            "isomorphism": self.is_isomorphism,
            "shape": list(self.matrix.shape),
        }


def wedge(K: KoszulData, z, a, w, b):
    """z ^ w for z in K_a and w in K_b (coefficients R, i.e. M free of rank 1)."""
    Ba, Bb, Bc = K.bases[a], K.bases[b], K.bases[a + b]
    zp = Ba.split(z)
    wp = Bb.split(w)
    out = {}
    for (S, _), p in zp.items():
        for (T, _), q in wp.items():
            sg = wedge_sign(S, T)
            if not sg:
                continue
            key = (tuple(sorted(S + T)), 0)
            term = p * q if sg > 0 else -(p * q)
            out[key] = out[key] + term if key in out else term
    return Bc.assemble(out)


def cycle_duality_map(f, i, koszul=None) -> CycleDuality:
    f = list(f)
    ring = f[0].ring
    I = Ideal(ring, f)
    if I.is_unit():
        raise AlgebraError("cycle duality requires a proper ideal with ht(I) >= 2")
    if I.codim() < 2:
        raise AlgebraError("cycle duality requires ht(I) >= 2")
    K = koszul or KoszulData(f)
    r = K.r
    j = r - 1 - i
    if not 0 <= j <= r - 1:
        raise AlgebraError("index out of range")
    zs = K.cycles(i)
    ws = K.cycles(j)
    total = sum(K.fdeg)
    Bz = K.bases[i].free
    Bw = K.bases[j].free
    # Hom(Z_j, R)(-total): the kernel of the transposed relation matrix of Z_j
    w_deg = [Bw.degree_of(w) for w in ws]
    rel = syzygies(Bw, ws, w_deg, minimal=False)
    H0 = FreeModule(ring, [total - e for e in w_deg])
    rel_t = rel.transpose()
    rel_t = Matrix(H0, rel_t.target.twist(-total), rel_t.columns)
    hom_gens = syzygies(rel_t.target, rel_t.columns, H0.degrees, minimal=False).columns
    # psi(z)(w) = c with z ^ w = c * d(e_[r])
    top = K.bases[r - 1]
    cols = []
    for z in zs:
        entries = []
        for w in ws:
            prod = top.split(wedge(K, z, i, w, j))
            c = None
            for q in range(r):
                key = (tuple(x for x in range(r) if x != q), 0)
                val = prod.get(key, ring.zero)
                # the coefficient of e_{[r]-q} in d(e_[r]) is (-1)^q f_q
                unit = f[q] if q % 2 == 0 else -f[q]
                cq = val.divide_exact(unit)
                if c is None:
                    c = cq
                elif cq != c:
                    raise AlgebraError("wedge product is not a multiple of the top boundary")
            entries.append(c)
        cols.append(H0.vector(entries))
    zdeg = [Bz.degree_of(z) for z in zs]
    psi = Matrix(FreeModule(ring, zdeg), H0, cols)
    psi.check_graded()
    # injective: every relation among the psi(z) is a relation among the z
    ker = syzygies(H0, psi.columns, zdeg, minimal=False)
    comb = Matrix(FreeModule(ring, zdeg), Bz, zs)
    injective = all(not comb.apply(c) for c in ker.columns)
    # surjective: the image equals Hom(Z_j, R) (containment plus equal series)
    hom_sub = Submodule(H0, hom_gens)
    img_sub = Submodule(H0, psi.columns)
    surjective = all(hom_sub.contains(c) for c in psi.columns if c) and (
        hom_sub.quotient_hilbert_series() == img_sub.quotient_hilbert_series()
    )
    return CycleDuality(i, psi, hom_gens, injective, surjective)


# ---------------------------------------------------------------------------
# approximation complex
# ---------------------------------------------------------------------------


class ApproximationStrand:
    """T-degree k strand of Z(f; M): terms Z_i^M (x) S_{k-i}, differential by T-contraction."""

    def __init__(self, f, M, k, koszul=None):
        K = koszul or KoszulData(f, M)
        self.K = K
        self.k = k
        ring = K.ring
        r = K.r
        G0 = K.M.generators
        self.bases = []
        top = min(k, r)
        for i in range(top + 1):
            keys = []
            degs = []
            for S in itertools.combinations(range(r), i):
                for beta in compositions(k - i, r):
                    for g in range(G0.rank):
                        keys.append((S, beta, g))
                        degs.append(sum(K.fdeg[j] for j in S)
                                    + sum(b * e for b, e in zip(beta, K.fdeg)) + G0.degrees[g])
            self.bases.append(TermBasis(ring, keys, degs))

        def rule(key):
            S, beta, g = key
            for l, j in enumerate(S):
                nb = beta[:j] + (beta[j] + 1,) + beta[j + 1:]
                yield (S[:l] + S[l + 1:], nb, g), (1 if l % 2 == 0 else -1)

        maps = [self.bases[i].map_to(self.bases[i - 1], rule) for i in range(1, top + 1)]
        self.complex = ChainComplex([b.free for b in self.bases], maps)
        gens = {}
        rels = {}
        for i in range(top + 1):
            B = self.bases[i]
            src = K.bases[i]
            gl, rl = [], []
            for beta in compositions(k - i, r):
                for z in K.cycles(i):
                    gl.append(B.assemble({(S, beta, g): p for (S, g), p in src.split(z).items()}))
                for v in K.relations[i]:
                    rl.append(B.assemble({(S, beta, g): p for (S, g), p in src.split(v).items()}))
            gens[i] = gl
            rels[i] = rl
        self.sub = SubquotientComplex(self.complex, gens, rels)

    def h0(self) -> ModulePresentation:
        return subquotient(self.bases[0].free, self.sub.gens[0], self.sub.boundaries(0) + self.sub.rels[0])


def approximation_complex(f, M=None, k=1) -> ApproximationStrand:
    return ApproximationStrand(f, M, k)
