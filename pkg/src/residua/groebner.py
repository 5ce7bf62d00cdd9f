"""Gröbner bases for ideals and graded submodules, and the calculus built on them.

Module elements are plain dicts mapping packed terms (monomial plus basis
position, see :mod:`residua.algebra`) to field coefficients.  All inputs are
homogeneous, so the Buchberger loop runs degree by degree; this gives truncated
bases for free and lets one run report which inputs are minimal generators and
which syzygies are minimal.
"""

from __future__ import annotations

import heapq
import itertools
import math
from fractions import Fraction

from .algebra import AlgebraError, LaurentPolynomial, Polynomial, Ring

IMPROPER = math.inf


# ---------------------------------------------------------------------------
# graded free modules, vectors, matrices
# ---------------------------------------------------------------------------


class FreeModule:
    """Graded free module with basis e_i generated in degree ``degrees[i]``."""

    __slots__ = ("ring", "degrees")

    def __init__(self, ring: Ring, degrees):
        self.ring = ring
        self.degrees = tuple(int(d) for d in degrees)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def __eq__(self, other):
        return isinstance(other, FreeModule) and self.ring == other.ring and self.degrees == other.degrees

    def __hash__(self):
        return hash((self.ring, self.degrees))

    def __repr__(self):
        parts = [f"R({-d})" if d else "R" for d in self.degrees]
        return " + ".join(parts) if parts else "0"

    def __add__(self, other):
        return FreeModule(self.ring, self.degrees + other.degrees)

    def basis(self, i):
        return {i << self.ring.pos_shift: self.ring.field.one}

    def vector(self, entries):
        """Vector from a list of Polynomials (or things the ring can coerce)."""
        if len(entries) != self.rank:
            raise AlgebraError("wrong number of entries")
        ring = self.ring
        ps = ring.pos_shift
        out = {}
        for i, f in enumerate(entries):
            f = ring(f)
            for m, c in f.coeffs.items():
                out[m | (i << ps)] = c
        return out

    def entries(self, vec):
        ring = self.ring
        ps = ring.pos_shift
        mm = ring.mono_mask
        rows = [dict() for _ in range(self.rank)]
        for t, c in vec.items():
            rows[t >> ps][t & mm] = c
        return [Polynomial(ring, r) for r in rows]

    def degree_of(self, vec):
        """Degree of a nonzero homogeneous vector."""
        if not vec:
            raise AlgebraError("zero vector has no degree")
        ring = self.ring
        t = next(iter(vec))
        return ring.mdeg(t) + self.degrees[t >> ring.pos_shift]

    def is_homogeneous(self, vec):
        ring = self.ring
        ps = ring.pos_shift
        degs = {ring.mdeg(t) + self.degrees[t >> ps] for t in vec}
        return len(degs) <= 1

    def dual(self):
        return FreeModule(self.ring, [-d for d in self.degrees])

    def twist(self, k):
        """F(k): generators move from degree e to e - k."""
        return FreeModule(self.ring, [d - k for d in self.degrees])


def vec_add(p, a, b, c=1):
    """a + c*b as a new dict."""
    out = dict(a)
    for t, v in b.items():
        w = out.get(t, 0) + c * v
        if p:
            w %= p
        if w:
            out[t] = w
        else:
            out.pop(t, None)
    return out


def vec_scale(p, a, c):
    if p:
        c %= p
        return {t: v * c % p for t, v in a.items()} if c else {}
    return {t: v * c for t, v in a.items()} if c else {}


def poly_times_vec(ring: Ring, f: Polynomial, vec):
    p = ring.field.characteristic
    out = {}
    for m, c in f.coeffs.items():
        for t, v in vec.items():
            nt = t + m
            w = out.get(nt, 0) + c * v
            if p:
                w %= p
            out[nt] = w
    return {t: v for t, v in out.items() if v}


def vec_shift(ring: Ring, vec, offset):
    """Move every basis position up by ``offset``."""
    sh = offset << ring.pos_shift
    return {t + sh: c for t, c in vec.items()}


def vec_restrict(ring: Ring, vec, lo, hi):
    """Keep positions in [lo, hi) and renumber them from 0."""
    ps = ring.pos_shift
    sh = lo << ps
    return {t - sh: c for t, c in vec.items() if lo <= (t >> ps) < hi}


class Matrix:
    """Degree-0 graded map source -> target; ``columns[j]`` is the image of e_j.

    Entry (i, j) has degree ``source.degrees[j] - target.degrees[i]``.
    """

    __slots__ = ("source", "target", "columns")

    def __init__(self, source: FreeModule, target: FreeModule, columns):
        columns = list(columns)
        if len(columns) != source.rank:
            raise AlgebraError("one column per source generator is required")
        self.source = source
        self.target = target
        self.columns = columns

    @property
    def ring(self):
        return self.target.ring

    @classmethod
    def from_rows(cls, ring: Ring, rows, target_degrees, source_degrees=None):
        """Build from a row-major nested list of polynomials."""
        rows = [[ring(e) for e in row] for row in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        target = FreeModule(ring, target_degrees)
        if target.rank != nrows:
            raise AlgebraError("target degrees do not match the row count")
        cols = [[rows[i][j] for i in range(nrows)] for j in range(ncols)]
        if source_degrees is None:
            source_degrees = []
            for col in cols:
                degs = {f.degree() + target.degrees[i] for i, f in enumerate(col) if f}
                if len(degs) > 1 or "inhomogeneous" in {f.degree() for f in col if f}:
                    raise AlgebraError("column is not homogeneous")
                if not degs:
                    raise AlgebraError("zero column needs an explicit source degree")
                source_degrees.append(degs.pop())
        source = FreeModule(ring, source_degrees)
        m = cls(source, target, [target.vector(c) for c in cols])
        m.check_graded()
        return m

    @classmethod
    def from_vectors(cls, target: FreeModule, vectors, degrees=None):
        vectors = list(vectors)
        if degrees is None:
            degrees = [target.degree_of(v) for v in vectors]
        return cls(FreeModule(target.ring, degrees), target, vectors)

    @classmethod
    def identity(cls, free: FreeModule):
        return cls(free, free, [free.basis(i) for i in range(free.rank)])

    @classmethod
    def zero(cls, source: FreeModule, target: FreeModule):
        return cls(source, target, [{} for _ in range(source.rank)])

    def check_graded(self):
        ring = self.ring
        ps = ring.pos_shift
        for j, col in enumerate(self.columns):
            dj = self.source.degrees[j]
            for t in col:
                if ring.mdeg(t) + self.target.degrees[t >> ps] != dj:
                    raise AlgebraError(f"column {j} is not of degree {dj}")
        return True

    @property
    def shape(self):
        return (self.target.rank, self.source.rank)

    def entry(self, i, j) -> Polynomial:
        ring = self.ring
        ps = ring.pos_shift
        mm = ring.mono_mask
        return Polynomial(ring, {t & mm: c for t, c in self.columns[j].items() if t >> ps == i})

    def rows(self):
        return [[self.entry(i, j) for j in range(self.source.rank)] for i in range(self.target.rank)]

    def to_strings(self):
        return [[str(e) for e in row] for row in self.rows()]

    def is_zero(self):
        return not any(self.columns)

    def apply(self, vec):
        """Image of a source vector."""
        ring = self.ring
        p = ring.field.characteristic
        ps = ring.pos_shift
        mm = ring.mono_mask
        cols = self.columns
        out = {}
        for t, c in vec.items():
            col = cols[t >> ps]
            m = t & mm
            for ct, cc in col.items():
                nt = ct + m
                out[nt] = out.get(nt, 0) + c * cc
        if p:
            return {t: v % p for t, v in out.items() if v % p}
        return {t: v for t, v in out.items() if v}

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if other.target.rank != self.source.rank:
            raise AlgebraError("composition shape mismatch")
        return Matrix(other.source, self.target, [self.apply(c) for c in other.columns])

    def transpose(self) -> "Matrix":
        """The dual map target^* -> source^*."""
        ring = self.ring
        ps = ring.pos_shift
        mm = ring.mono_mask
        cols = [dict() for _ in range(self.target.rank)]
        for j, col in enumerate(self.columns):
            for t, c in col.items():
                cols[t >> ps][(t & mm) | (j << ps)] = c
        return Matrix(self.target.dual(), self.source.dual(), cols)

    def columns_of(self, indices) -> "Matrix":
        indices = list(indices)
        return Matrix(
            FreeModule(self.ring, [self.source.degrees[j] for j in indices]),
            self.target,
            [self.columns[j] for j in indices],
        )

    def hstack(self, other: "Matrix") -> "Matrix":
        if other.target != self.target:
            raise AlgebraError("hstack needs a common target")
        return Matrix(self.source + other.source, self.target, self.columns + other.columns)

    def direct_sum(self, other: "Matrix") -> "Matrix":
        ring = self.ring
        k = self.target.rank
        cols = list(self.columns) + [vec_shift(ring, c, k) for c in other.columns]
        return Matrix(self.source + other.source, self.target + other.target, cols)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.source == other.source
            and self.target == other.target
            and self.columns == other.columns
        )

    def __repr__(self):
        return f"Matrix({self.target.rank}x{self.source.rank})"


# ---------------------------------------------------------------------------
# the Buchberger engine
# ---------------------------------------------------------------------------


def _term_key(ring: Ring, order: str, cutoff=None):
    """Sort key on packed module terms restricted to one total degree.

    With ``order="top"`` and a ``cutoff``, positions below the cutoff beat
    every tag position, so term-over-position is used inside each block.
    """
    ps = ring.pos_shift
    mm = ring.mono_mask
    em = ring.exp_mask
    big = (1 << 24) - 1
    if ring.order == "grevlex":
        mono = lambda m: m + em - ((m & em) << 1)
    elif ring.order == "deglex":
        mono = lambda m: m
    else:
        mono = lambda m: m & em
    if order == "pot":
        return lambda t: ((big - (t >> ps)) << ps) | mono(t & mm)
    if order == "top":
        if cutoff is None:
            return lambda t: (mono(t & mm) << 24) | (big - (t >> ps))
        flag = 1 << (ps + 26)
        return lambda t: ((mono(t & mm) << 24) | (big - (t >> ps))) | (flag if (t >> ps) < cutoff else 0)
    raise AlgebraError(f"unknown module order {order!r}")


class _Engine:
    """Homogeneous Buchberger with normal selection and Gebauer-Möller criteria.

    ``cutoff`` marks the first position of an appended tag block (cofactor
    tracking).  Elements whose leading term sits at or above it are syzygies.
    With ``keep_syzygies=False`` such elements are collected but not inserted,
    which is enough when only a generating set of syzygies or a lift is needed.
    """

    def __init__(self, free: FreeModule, order="pot", cutoff=None, keep_syzygies=True):
        ring = self.ring = free.ring
        self.free = free
        self.degs = free.degrees
        self.p = ring.field.characteristic
        self.field = ring.field
        self.cutoff = cutoff if cutoff is not None else free.rank
        self.key = _term_key(ring, order, cutoff if cutoff is not None and cutoff < free.rank else None)
        self.keep_syzygies = keep_syzygies
        self.ps = ring.pos_shift
        self.elems = []
        self.leads = []
        self.tails = []
        self.ntails = []
        self.edeg = []
        self.origin = []
        self.by_pos = {}
        self.pairs = {}
        self.memo = {}
        self.minimal_inputs = []
        self.raw_syzygies = []
        self.done_degree = -math.inf
        self.rank1 = free.rank == 1

    # -- basic operations ----------------------------------------------------
    def degree(self, vec):
        ring = self.ring
        t = next(iter(vec))
        return ring.mdeg(t) + self.degs[t >> self.ps]

    def find_divisor(self, t):
        pos = t >> self.ps
        cands = self.by_pos.get(pos)
        if not cands:
            return -1
        hit = self.memo.get(t)
        start = 0
        if hit is not None:
            j, stamp = hit
            if j >= 0 or stamp == len(cands):
                return j
            start = stamp
        guard = self.ring.guard
        dmask = self.ring.div_mask
        leads = self.leads
        for idx in range(start, len(cands)):
            j = cands[idx]
            if ((t + guard - leads[j]) & dmask) == guard:
                self.memo[t] = (j, 0)
                return j
        self.memo[t] = (-1, len(cands))
        return -1

    def reduce(self, f):
        """Full normal form of the dict f (consumed)."""
        if not f:
            return {}
        key = self.key
        p = self.p
        heap = [(-key(t), t) for t in f]
        heapq.heapify(heap)
        out = {}
        ntails = self.ntails
        leads = self.leads
        find = self.find_divisor
        pop = heapq.heappop
        push = heapq.heappush
        get = f.get
        if p:
            # coefficients are kept unreduced mod p until their term is popped
            while heap:
                t = pop(heap)[1]
                c = f.pop(t) % p
                if not c:
                    continue
                j = find(t)
                if j < 0:
                    out[t] = c
                    continue
                u = t - leads[j]
                for gt, gc in ntails[j]:
                    nt = gt + u
                    v = get(nt)
                    if v is None:
                        f[nt] = c * gc
                        push(heap, (-key(nt), nt))
                    else:
                        f[nt] = v + c * gc
            return out
        while heap:
            t = pop(heap)[1]
            c = f.pop(t, None)
            if c is None:
                continue
            j = find(t)
            if j < 0:
                out[t] = c
                continue
            u = t - leads[j]
            for gt, gc in ntails[j]:
                nt = gt + u
                v = get(nt)
                if v is None:
                    f[nt] = c * gc
                    push(heap, (-key(nt), nt))
                else:
                    v += c * gc
                    if v:
                        f[nt] = v
                    else:
                        del f[nt]
        return out

    def spoly(self, i, j, lcm):
        p = self.p
        ui = lcm - self.leads[i]
        uj = lcm - self.leads[j]
        out = {}
        for t, c in self.tails[i]:
            out[t + ui] = c
        for t, c in self.tails[j]:
            nt = t + uj
            v = out.get(nt, 0) - c
            if p:
                v %= p
            if v:
                out[nt] = v
            else:
                out.pop(nt, None)
        return out

    def insert(self, h, origin):
        key = self.key
        p = self.p
        lead = max(h, key=key)
        lc = h[lead]
        if lc != 1:
            inv = self.field.inv(lc)
            h = {t: (c * inv) % p for t, c in h.items()} if p else {t: c * inv for t, c in h.items()}
        idx = len(self.elems)
        self.elems.append(h)
        self.leads.append(lead)
        self.tails.append(tuple((t, c) for t, c in h.items() if t != lead))
        self.ntails.append(tuple((t, (p - c) if p else -c) for t, c in h.items() if t != lead))
        self.edeg.append(self.degree(h))
        self.origin.append(origin)
        self._update_pairs(idx)
        self.by_pos.setdefault(lead >> self.ps, []).append(idx)
        return idx

    def _update_pairs(self, h):
        ring = self.ring
        leads = self.leads
        lt = leads[h]
        pos = lt >> self.ps
        others = self.by_pos.get(pos, [])
        new = {i: ring.mono_lcm(leads[i], lt) for i in others}
        guard = ring.guard
        dmask = ring.div_mask
        dead = []
        for ij, (L, _) in self.pairs.items():
            if L >> self.ps != pos:
                continue
            if ((L + guard - lt) & dmask) == guard:
                i, j = ij
                if new.get(i) != L and new.get(j) != L:
                    dead.append(ij)
        for ij in dead:
            del self.pairs[ij]
        key = self.key
        mdeg = ring.mdeg
        items = sorted(new.items(), key=lambda kv: (mdeg(kv[1]), -key(kv[1]), kv[0]))
        kept = []
        for i, L in items:
            if any(((L + guard - Lk) & dmask) == guard for _, Lk in kept):
                continue
            kept.append((i, L))
        dp = self.degs[pos]
        for i, L in kept:
            if self.rank1 and ring.mono_coprime(leads[i], lt):
                continue
            self.pairs[(i, h)] = (L, mdeg(L) + dp)

    # -- main loop -----------------------------------------------------------------
    def run(self, inputs, max_degree=None):
        """Process homogeneous inputs; ``inputs`` is a list of (vector, degree)."""
        limit = math.inf if max_degree is None else max_degree
        queue = {}
        for n, (vec, d) in enumerate(inputs):
            queue.setdefault(d, []).append((n, vec))
        cut = self.cutoff
        ps = self.ps
        key = self.key
        while True:
            cand = [d for _, d in self.pairs.values()]
            d = min(cand) if cand else math.inf
            if queue:
                d = min(d, min(queue))
            if d == math.inf or d > limit:
                break
            batch = sorted(
                (ij for ij, (_, pd) in self.pairs.items() if pd == d),
                key=lambda ij: (-(self.pairs[ij][0] >> ps), key(self.pairs[ij][0]), ij),
            )
            for ij in batch:
                entry = self.pairs.pop(ij, None)
                if entry is None:
                    continue
                L = entry[0]
                h = self.reduce(self.spoly(ij[0], ij[1], L))
                if h:
                    self._accept(h, "syzpair" if (L >> ps) >= cut else "pair")
            for n, vec in queue.pop(d, []):
                h = self.reduce(dict(vec))
                if not h:
                    continue
                if max(h, key=key) >> ps < cut:
                    self.minimal_inputs.append(n)
                self._accept(h, ("input", n))
        self.done_degree = max(self.done_degree, limit) if limit < math.inf else math.inf
        return self

    def _accept(self, h, origin):
        lead_pos = max(h, key=self.key) >> self.ps
        if lead_pos >= self.cutoff:
            minimal = origin != "syzpair"
            if not self.keep_syzygies:
                self.raw_syzygies.append(h)
                return
            idx = self.insert(h, origin)
            if minimal:
                self.raw_syzygies.append(self.elems[idx])
            return
        self.insert(h, origin)

    # -- results -------------------------------------------------------------
    def basis(self, below_cutoff=True):
        ps = self.ps
        return [e for e, l in zip(self.elems, self.leads) if not below_cutoff or (l >> ps) < self.cutoff]

    def interreduced(self):
        """Reduced basis (tails fully reduced), in insertion order, monic."""
        out = []
        key = self.key
        for idx, e in enumerate(self.elems):
            if (self.leads[idx] >> self.ps) >= self.cutoff:
                continue
            lead = self.leads[idx]
            tail = {t: c for t, c in e.items() if t != lead}
            red = self.reduce(tail)
            red[lead] = self.field.one
            out.append((self.edeg[idx], -key(lead), red))
        out.sort(key=lambda e: (e[0], e[1]))
        return [e[2] for e in out]


# ---------------------------------------------------------------------------
# Gröbner bases, syzygies and lifts
# ---------------------------------------------------------------------------


class GroebnerBasis:
    """A reduced Gröbner basis of a graded submodule of a free module."""

    def __init__(self, free: FreeModule, elements, engine: _Engine):
        self.free = free
        self.elements = elements
        self._engine = engine
        key = engine.key
        self.leads = [max(e, key=key) for e in elements]

    @property
    def ring(self):
        return self.free.ring

    def __len__(self):
        return len(self.elements)

    def normal_form(self, vec):
        return self._engine.reduce(dict(vec))

    def contains(self, vec):
        return not self.normal_form(vec)

    def leading_monomials(self):
        """Per basis position, the exponent tuples of leading monomials."""
        ring = self.ring
        out = [[] for _ in range(self.free.rank)]
        for t in self.leads:
            out[t >> ring.pos_shift].append(ring.unpack(t & ring.mono_mask))
        return out

    def hilbert_series(self) -> "HilbertSeries":
        """Hilbert series of free/submodule."""
        ring = self.ring
        num = LaurentPolynomial()
        for pos, gens in enumerate(self.leading_monomials()):
            num = num + monomial_hilbert_numerator(gens, ring.degrees).shift(self.free.degrees[pos])
        return HilbertSeries(num, ring.degrees)

    def vectors(self):
        return [dict(e) for e in self.elements]


def _homogeneous_inputs(free: FreeModule, gens, degrees=None):
    out = []
    for n, g in enumerate(gens):
        if not g:
            continue
        if not free.is_homogeneous(g):
            raise AlgebraError("Gröbner input must be homogeneous")
        d = free.degree_of(g)
        if degrees is not None and degrees[n] != d:
            raise AlgebraError("generator degree does not match its declared degree")
        out.append((g, d))
    return out


def groebner_basis(free: FreeModule, gens, order="pot", max_degree=None) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule of ``free`` generated by ``gens``."""
    eng = _Engine(free, order=order)
    eng.run(_homogeneous_inputs(free, gens), max_degree=max_degree)
    return GroebnerBasis(free, eng.interreduced(), eng)


def minimal_generator_indices(free: FreeModule, gens, order="pot"):
    """Indices of a minimal generating subset, processing gens degree by degree."""
    eng = _Engine(free, order=order)
    inputs = []
    index = []
    for n, g in enumerate(gens):
        if g:
            inputs.append((g, free.degree_of(g)))
            index.append(n)
    eng.run(inputs, max_degree=max((d for _, d in inputs), default=None))
    return sorted(index[i] for i in eng.minimal_inputs)


def _augmented(free: FreeModule, gens, degrees):
    """Vectors (g_j, e_j) in free + R^m with the tag block after free."""
    ring = free.ring
    n = free.rank
    ps = ring.pos_shift
    one = ring.field.one
    aug = FreeModule(ring, tuple(free.degrees) + tuple(degrees))
    inputs = []
    for j, g in enumerate(gens):
        v = dict(g)
        v[(n + j) << ps] = one
        inputs.append((v, degrees[j]))
    return aug, inputs


def _gen_degrees(free, gens, degrees):
    if degrees is not None:
        return list(degrees)
    out = []
    for g in gens:
        if not g:
            raise AlgebraError("zero generator needs a declared degree")
        out.append(free.degree_of(g))
    return out


def syzygies(free: FreeModule, gens, degrees=None, minimal=True, max_degree=None) -> Matrix:
    """Syzygy module of gens, as a map R^{#syz} -> R^{#gens}.

    With ``minimal`` the columns are a minimal generating set; otherwise a
    (possibly redundant) Schreyer generating set from one Buchberger run.
    """
    ring = free.ring
    degrees = _gen_degrees(free, gens, degrees)
    target = FreeModule(ring, degrees)
    m = len(gens)
    if m == 0:
        return Matrix(FreeModule(ring, []), target, [])
    for j, g in enumerate(gens):
        if g and free.degree_of(g) != degrees[j]:
            raise AlgebraError("generator degree does not match its declared degree")
    aug, inputs = _augmented(free, gens, degrees)
    eng = _Engine(aug, order="top", cutoff=free.rank, keep_syzygies=False)
    eng.run(inputs, max_degree=max_degree)
    if minimal and eng.raw_syzygies:
        # minimal syzygies live in degrees up to the top Schreyer generator
        top = max(eng.degree(h) for h in eng.raw_syzygies)
        eng = _Engine(aug, order="top", cutoff=free.rank, keep_syzygies=True)
        eng.run(inputs, max_degree=top if max_degree is None else min(top, max_degree))
    n = free.rank
    cols = []
    for h in eng.raw_syzygies:
        v = vec_restrict(ring, h, n, n + m)
        if v:
            cols.append(v)
    if not minimal:
        cols = _dedupe(cols)
    cols.sort(key=lambda v: target.degree_of(v))
    return Matrix.from_vectors(target, cols)


def _dedupe(cols):
    seen = set()
    out = []
    for c in cols:
        k = frozenset(c.items())
        if k not in seen:
            seen.add(k)
            out.append(c)
    return out


class Lifter:
    """Express vectors of a submodule in terms of its generators."""

    def __init__(self, free: FreeModule, gens, degrees=None):
        self.free = free
        self.gens = list(gens)
        self.degrees = _gen_degrees(free, gens, degrees)
        aug, inputs = _augmented(free, self.gens, self.degrees)
        self.aug = aug
        self.eng = _Engine(aug, order="top", cutoff=free.rank, keep_syzygies=False)
        self.eng.run(inputs)

    def lift(self, vec):
        """Coefficient vector c (dict over R^m) with sum c_j g_j = vec, or None."""
        ring = self.free.ring
        n = self.free.rank
        nf = self.eng.reduce(dict(vec))
        ps = ring.pos_shift
        if any((t >> ps) < n for t in nf):
            return None
        p = ring.field.characteristic
        coeffs = vec_restrict(ring, nf, n, n + len(self.gens))
        return vec_scale(p, coeffs, -1) if p else {t: -c for t, c in coeffs.items()}


def lift(free: FreeModule, gens, vec, degrees=None):
    return Lifter(free, gens, degrees).lift(vec)


# ---------------------------------------------------------------------------
# submodules and ideals
# ---------------------------------------------------------------------------


class Submodule:
    """Graded submodule of a free module given by generators."""

    def __init__(self, free: FreeModule, gens):
        self.free = free
        self.gens = [dict(g) for g in gens]
        self._gb = None

    @property
    def ring(self):
        return self.free.ring

    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = groebner_basis(self.free, self.gens)
        return self._gb

    def contains(self, vec):
        return self.gb().contains(vec)

    def normal_form(self, vec):
        return self.gb().normal_form(vec)

    def contains_submodule(self, other: "Submodule"):
        return all(self.contains(g) for g in other.gens)

    def __eq__(self, other):
        return self.contains_submodule(other) and other.contains_submodule(self)

    def quotient_hilbert_series(self) -> "HilbertSeries":
        return self.gb().hilbert_series()

    def minimal_generators(self):
        idx = minimal_generator_indices(self.free, self.gens)
        return [self.gens[i] for i in idx]

    def is_everything(self):
        return all(self.contains(self.free.basis(i)) for i in range(self.free.rank))


class Ideal:
    """Homogeneous ideal; generators are Polynomials."""

    def __init__(self, ring: Ring, gens=()):
        self.ring = ring
        gens = [ring(g) for g in gens]
        for g in gens:
            if not g.is_homogeneous():
                raise AlgebraError(f"ideal generator {g} is not homogeneous")
        self.gens = [g for g in gens if g]
        self._sub = Submodule(FreeModule(ring, [0]), [g.coeffs for g in self.gens])
        self._codim = None
        self._mingens = None

    def __repr__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")"

    @classmethod
    def parse(cls, ring, texts):
        return cls(ring, [ring.parse(t) for t in texts])

    @property
    def submodule(self) -> Submodule:
        return self._sub

    def groebner_basis(self):
        """Reduced GB as Polynomials, leading terms pairwise non-divisible."""
        return [Polynomial(self.ring, dict(e)) for e in self._sub.gb().elements]

    gb = groebner_basis

    def normal_form(self, f) -> Polynomial:
        f = self.ring(f)
        return Polynomial(self.ring, self._sub.gb().normal_form(f.coeffs))

    def contains(self, f) -> bool:
        f = self.ring(f)
        return not f or self._sub.gb().contains(f.coeffs)

    __contains__ = contains

    def issubset(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.gens)

    __le__ = issubset

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.issubset(other) and other.issubset(self)

    def __lt__(self, other):
        return self <= other and not other <= self

    def __hash__(self):
        return id(self)

    def is_zero(self):
        return not self.gens

    def is_unit(self):
        return self.contains(self.ring.one)

    def is_proper(self):
        return not self.is_unit()

    def minimal_generators(self):
        if self._mingens is None:
            idx = minimal_generator_indices(self._sub.free, self._sub.gens)
            self._mingens = [self.gens[i] for i in idx]
        return list(self._mingens)

    def generator_degrees(self):
        return [g.degree() for g in self.minimal_generators()]

    def __add__(self, other):
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other):
        return Ideal(self.ring, [f * g for f in self.gens for g in other.gens])

    def power(self, k):
        out = Ideal(self.ring, [self.ring.one])
        for _ in range(k):
            out = Ideal(self.ring, (out * self).minimal_generators())
        return out

    def colon_element(self, f) -> "Ideal":
        """(self : f) via syzygies of (f, generators of self)."""
        f = self.ring(f)
        if not f:
            return Ideal(self.ring, [self.ring.one])
        free = FreeModule(self.ring, [0])
        gens = [f.coeffs] + [g.coeffs for g in self.gens]
        syz = syzygies(free, gens, minimal=False)
        ring = self.ring
        first = [Polynomial(ring, vec_restrict(ring, c, 0, 1)) for c in syz.columns]
        out = Ideal(ring, [g for g in first if g] + self.gens)
        return Ideal(ring, out.groebner_basis())

    def colon(self, other: "Ideal") -> "Ideal":
        """(self : other), computed in one module Gröbner run (see module_colon)."""
        ring = self.ring
        if not other.gens:
            return Ideal(ring, [ring.one])
        free = FreeModule(ring, [0])
        return module_colon(free, [g.coeffs for g in self.gens], [f.coeffs for f in other.gens])

    def colon_by_generators(self, other: "Ideal") -> "Ideal":
        """(self : other) as the intersection of the colons by each generator."""
        if not other.gens:
            return Ideal(self.ring, [self.ring.one])
        out = None
        for f in other.gens:
            q = self.colon_element(f)
            out = q if out is None else out.intersect(q)
        return out

    def intersect(self, other: "Ideal") -> "Ideal":
        """Intersection via syzygies of the concatenated generator lists."""
        ring = self.ring
        if not self.gens or not other.gens:
            return Ideal(ring, [])
        free = FreeModule(ring, [0])
        gens = [g.coeffs for g in self.gens] + [g.coeffs for g in other.gens]
        syz = syzygies(free, gens, minimal=False)
        k = len(self.gens)
        rel = FreeModule(ring, [g.degree() for g in self.gens])
        elems = []
        src = Matrix(rel, free, [g.coeffs for g in self.gens])
        for c in syz.columns:
            part = vec_restrict(ring, c, 0, k)
            if part:
                v = src.apply(part)
                if v:
                    elems.append(Polynomial(ring, v))
        out = Ideal(ring, elems)
        return Ideal(ring, out.groebner_basis())

    def saturate(self, other: "Ideal") -> "Ideal":
        cur = self
        while True:
            nxt = cur.colon(other)
            if nxt <= cur:
                return cur
            cur = nxt

    def hilbert_series(self) -> "HilbertSeries":
        """Hilbert series of R/self."""
        return self._sub.gb().hilbert_series()

    def leading_monomials(self):
        return self._sub.gb().leading_monomials()[0]

    def dimension(self):
        """Krull dimension of R/self (-1 for the unit ideal)."""
        return monomial_dimension(self.leading_monomials(), self.ring.nvars)

    def codim(self):
        if self._codim is None:
            if self.is_unit():
                self._codim = IMPROPER
            else:
                self._codim = self.ring.nvars - self.dimension()
        return self._codim

    def quotient(self) -> "ModulePresentation":
        """R/self as a presentation (cached)."""
        if getattr(self, "_quotient", None) is None:
            self._quotient = ModulePresentation.cokernel(
                Matrix.from_vectors(FreeModule(self.ring, [0]), [g.coeffs for g in self.gens])
            )
        return self._quotient

    def to_strings(self):
        return [str(g) for g in self.gens]


def module_colon(free: FreeModule, rels, targets) -> Ideal:
    """{r in R : r*v in <rels> for every v in targets}.

    This is the kernel of R -> (free/<rels>)^m, 1 -> (v_1, ..., v_m).  One POT
    Gröbner run on (v_1, ..., v_m | 1) together with the relations in every
    copy; the elements living only in the final slot are a basis of the kernel.
    """
    ring = free.ring
    targets = [t for t in targets if t]
    if not targets:
        return Ideal(ring, [ring.one])
    n = free.rank
    m = len(targets)
    ps = ring.pos_shift
    degs = []
    top = {}
    for c, v in enumerate(targets):
        dv = free.degree_of(v)
        degs.extend(d - dv for d in free.degrees)
        top.update(vec_shift(ring, v, c * n))
    top[(m * n) << ps] = ring.field.one
    big = FreeModule(ring, degs + [0])
    inputs = [(top, 0)]
    for c in range(m):
        for rel in rels:
            if rel:
                v = vec_shift(ring, rel, c * n)
                inputs.append((v, big.degree_of(v)))
    eng = _Engine(big, order="pot", cutoff=m * n)
    eng.run(inputs)
    out = [Polynomial(ring, vec_restrict(ring, h, m * n, m * n + 1))
           for h, lead in zip(eng.elems, eng.leads) if (lead >> ps) >= m * n]
    return Ideal(ring, Ideal(ring, out).groebner_basis())


def nullspace(field, rows, ncols):
    """Basis of {u : sum_j row[j]*u_j = 0 for every row}; rows are dicts col -> value."""
    p = field.characteristic
    inv = field.inv
    pivots = {}
    for row in rows:
        row = {j: v for j, v in row.items() if v}
        # reduce against existing pivots
        for pc in sorted(pivots):
            if pc in row:
                c = row[pc]
                for j, v in pivots[pc].items():
                    w = row.get(j, 0) - c * v
                    if p:
                        w %= p
                    if w:
                        row[j] = w
                    else:
                        row.pop(j, None)
        if not row:
            continue
        pc = min(row)
        c = inv(row[pc])
        row = {j: (v * c) % p if p else v * c for j, v in row.items()}
        for qc, prow in pivots.items():
            if pc in prow:
                d = prow[pc]
                for j, v in row.items():
                    w = prow.get(j, 0) - d * v
                    if p:
                        w %= p
                    if w:
                        prow[j] = w
                    else:
                        prow.pop(j, None)
        pivots[pc] = row
    free_cols = [j for j in range(ncols) if j not in pivots]
    basis = []
    for fc in free_cols:
        u = {fc: field.one}
        for pc, prow in pivots.items():
            v = prow.get(fc)
            if v:
                u[pc] = (-v) % p if p else -v
        basis.append(u)
    return basis


def matrix_rank(field, rows, ncols):
    nonzero = [r for r in rows if r]
    return ncols - len(nullspace(field, nonzero, ncols))


def ideal_ops(op, A: Ideal, B: Ideal) -> Ideal:
    if A.ring != B.ring:
        raise AlgebraError("ring mismatch")
    if op == "sum":
        return A + B
    if op == "product":
        return A * B
    if op == "intersection":
        return A.intersect(B)
    if op == "saturation":
        return A.saturate(B)
    raise AlgebraError(f"unknown ideal operation {op!r}")


def colon(a: Ideal, I: Ideal) -> Ideal:
    return a.colon(I)


# ---------------------------------------------------------------------------
# module presentations
# ---------------------------------------------------------------------------


class ModulePresentation:
    """Cokernel of a degree-0 map ``relations``: F1 -> F0."""

    def __init__(self, relations: Matrix):
        self.relations = relations
        self._sub = None
        self._pruned = None
        self._hs = None

    @classmethod
    def cokernel(cls, relations: Matrix):
        return cls(relations)

    @classmethod
    def free(cls, ring: Ring, degrees):
        F = FreeModule(ring, degrees)
        return cls(Matrix(FreeModule(ring, []), F, []))

    @property
    def ring(self):
        return self.relations.ring

    @property
    def generators(self) -> FreeModule:
        return self.relations.target

    @property
    def generator_degrees(self):
        return self.relations.target.degrees

    def submodule(self) -> Submodule:
        if self._sub is None:
            self._sub = Submodule(self.generators, self.relations.columns)
        return self._sub

    def hilbert_series(self) -> "HilbertSeries":
        if self._hs is None:
            self._hs = self.submodule().quotient_hilbert_series()
        return self._hs

    def is_zero(self):
        return self.prune()[0].generators.rank == 0

    def twist(self, k):
        """M(k)."""
        rel = self.relations
        return ModulePresentation(Matrix(rel.source.twist(k), rel.target.twist(k), rel.columns))

    def direct_sum(self, other):
        return ModulePresentation(self.relations.direct_sum(other.relations))

    def prune(self):
        """Minimal presentation plus the quotient map old generators -> new generators."""
        if self._pruned is None:
            self._pruned = _prune(self)
        return self._pruned

    def minimal(self) -> "ModulePresentation":
        return self.prune()[0]

    def num_generators(self) -> int:
        return self.minimal().generators.rank

    def contains(self, vec):
        return self.submodule().contains(vec)

    def __repr__(self):
        return f"coker({self.relations.target.rank}x{self.relations.source.rank})"


def _prune(P: ModulePresentation):
    ring = P.ring
    p = ring.field.characteristic
    field = ring.field
    ps = ring.pos_shift
    F0 = P.generators
    n = F0.rank
    cols = [dict(c) for c in P.relations.columns if c]
    col_deg = [F0.degree_of(c) for c in cols]
    # image of each old generator in the (shrinking) set of live generators
    image = [F0.basis(i) for i in range(n)]
    alive = set(range(n))
    while True:
        found = None
        for ci, c in enumerate(cols):
            if not c:
                continue
            units = [t >> ps for t in c if (t & ring.mono_mask) == 0]
            if units:
                found = (ci, min(units))
                break
        if found is None:
            break
        ci, r = found
        pivot = cols[ci]
        u = pivot[r << ps]
        inv = field.inv(u)
        # e_r = -(1/u) * (pivot - u e_r)
        rest = {t: c for t, c in pivot.items() if t >> ps != r}
        sub_r = vec_scale(p, rest, -inv) if p else {t: -c * inv for t, c in rest.items()}
        pmask = ring.mono_mask

        def substitute(vec):
            hit = {t: c for t, c in vec.items() if t >> ps == r}
            if not hit:
                return vec
            out = {t: c for t, c in vec.items() if t >> ps != r}
            for t, c in hit.items():
                m = t & pmask
                for st, sc in sub_r.items():
                    nt = st + m
                    w = out.get(nt, 0) + c * sc
                    if p:
                        w %= p
                    if w:
                        out[nt] = w
                    else:
                        out.pop(nt, None)
            return out

        newcols = []
        newdeg = []
        for cj, c in enumerate(cols):
            if cj == ci:
                continue
            c2 = substitute(c)
            if c2:
                newcols.append(c2)
                newdeg.append(col_deg[cj])
        cols, col_deg = newcols, newdeg
        image = [substitute(v) for v in image]
        alive.discard(r)
    keep = sorted(alive)
    renum = {old: new for new, old in enumerate(keep)}
    mm = ring.mono_mask

    def renumber(vec):
        return {(t & mm) | (renum[t >> ps] << ps): c for t, c in vec.items()}

    G0 = FreeModule(ring, [F0.degrees[i] for i in keep])
    cols = [renumber(c) for c in cols]
    idx = minimal_generator_indices(G0, cols)
    cols = [cols[i] for i in idx]
    rel = Matrix.from_vectors(G0, cols)
    to_min = Matrix(F0, G0, [renumber(v) for v in image])
    from_min = Matrix(G0, F0, [F0.basis(i) for i in keep])
    return ModulePresentation(rel), to_min, from_min


def subquotient(ambient: FreeModule, gens, rels, gen_degrees=None) -> ModulePresentation:
    """(<gens> + <rels>) / <rels> as a presentation on the given generators."""
    ring = ambient.ring
    gens = list(gens)
    rels = [r for r in rels if r]
    gdeg = _gen_degrees(ambient, gens, gen_degrees)
    m = len(gens)
    target = FreeModule(ring, gdeg)
    if m == 0:
        return ModulePresentation(Matrix(FreeModule(ring, []), target, []))
    rdeg = [ambient.degree_of(r) for r in rels]
    syz = syzygies(ambient, gens + rels, gdeg + rdeg, minimal=False)
    cols = []
    for c in syz.columns:
        v = vec_restrict(ring, c, 0, m)
        if v:
            cols.append(v)
    cols = _dedupe(cols)
    return ModulePresentation(Matrix.from_vectors(target, cols))


# ---------------------------------------------------------------------------
# Hilbert series and dimension of monomial data
# ---------------------------------------------------------------------------


def _minimalize(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def monomial_hilbert_numerator(gens, weights) -> LaurentPolynomial:
    """Numerator of HS(R/(gens)) over prod (1 - t^w_i) for a monomial ideal."""
    weights = tuple(weights)
    cache = {}

    def deg(g):
        return sum(e * w for e, w in zip(g, weights))

    def hn(gens):
        gens = _minimalize(gens)
        if not gens:
            return {0: 1}
        if any(sum(g) == 0 for g in gens):
            return {}
        keyg = tuple(gens)
        if keyg in cache:
            return cache[keyg]
        supports = [frozenset(i for i, e in enumerate(g) if e) for g in gens]
        # split into variable-disjoint blocks
        blocks = []
        for g, s in zip(gens, supports):
            merged = [(g_list, sup) for g_list, sup in blocks if sup & s]
            rest = [(g_list, sup) for g_list, sup in blocks if not (sup & s)]
            new_list = [g]
            new_sup = set(s)
            for gl, sup in merged:
                new_list.extend(gl)
                new_sup |= sup
            blocks = rest + [(new_list, frozenset(new_sup))]
        if len(blocks) > 1:
            out = {0: 1}
            for gl, _ in blocks:
                out = _pmul(out, hn(gl))
            cache[keyg] = out
            return out
        if len(gens) == 1:
            out = {0: 1, deg(gens[0]): -1}
            cache[keyg] = out
            return out
        # pivot on a variable of a mixed generator; its exponents there stay
        # below any pure power of that variable, so the pivot is new
        mixed = [g for g, s in zip(gens, supports) if len(s) > 1]
        counts = {}
        for g in mixed:
            for i, e in enumerate(g):
                if e:
                    counts[i] = counts.get(i, 0) + 1
        v = max(sorted(counts), key=lambda i: counts[i])
        exps = sorted(g[v] for g in mixed if g[v])
        e = exps[len(exps) // 2]
        pivot = tuple(e if i == v else 0 for i in range(len(weights)))
        plus = gens + [pivot]
        colon_ = [tuple(max(0, a - e) if i == v else a for i, a in enumerate(g)) for g in gens]
        out = _padd(hn(plus), _pshift(hn(colon_), e * weights[v]))
        cache[keyg] = out
        return out

    return LaurentPolynomial(hn(list(gens)))


def _pmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def _pshift(a, k):
    return {e + k: c for e, c in a.items()}


def monomial_dimension(gens, n) -> int:
    """Krull dimension of k[x_1..x_n]/(gens); -1 when a generator is 1.

    Equals n minus the least size of a variable set meeting every support.
    """
    gens = _minimalize(gens)
    if any(sum(g) == 0 for g in gens):
        return -1
    supports = _minimalize_sets([frozenset(i for i, e in enumerate(g) if e) for g in gens])
    best = [n]

    def search(chosen, remaining):
        if len(chosen) >= best[0]:
            return
        open_ = [s for s in remaining if not (s & chosen)]
        if not open_:
            best[0] = len(chosen)
            return
        s = min(open_, key=len)
        for v in sorted(s):
            search(chosen | {v}, open_)

    search(frozenset(), supports)
    return n - best[0]


def _minimalize_sets(sets):
    sets = sorted(set(sets), key=len)
    out = []
    for s in sets:
        if not any(t <= s for t in out):
            out.append(s)
    return out


class HilbertSeries:
    """Rational function numerator / prod_i (1 - t^{d_i})."""

    def __init__(self, numerator: LaurentPolynomial, denominator):
        self.numerator = numerator if isinstance(numerator, LaurentPolynomial) else LaurentPolynomial(numerator)
        self.denominator = tuple(denominator)

    def __repr__(self):
        den = "*".join(f"(1-t^{d})" if d != 1 else "(1-t)" for d in self.denominator)
        return f"({self.numerator})/{den}" if den else f"{self.numerator}"

    def __eq__(self, other):
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        lhs = self.numerator * _den_poly(other.denominator)
        rhs = other.numerator * _den_poly(self.denominator)
        return lhs == rhs

    def __hash__(self):
        return hash(self.denominator)

    def __add__(self, other):
        if self.denominator == other.denominator:
            return HilbertSeries(self.numerator + other.numerator, self.denominator)
        return HilbertSeries(
            self.numerator * _den_poly(other.denominator) + other.numerator * _den_poly(self.denominator),
            self.denominator + other.denominator,
        )

    def __neg__(self):
        return HilbertSeries(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-other)

    def shift(self, k):
        """Multiply by t^k (the series of M(-k))."""
        return HilbertSeries(self.numerator.shift(k), self.denominator)

    def is_zero(self):
        return not self.numerator

    def coefficients(self, lo, hi):
        """H(M, n) for lo <= n <= hi."""
        if hi < lo or not self.numerator:
            return {n: 0 for n in range(lo, hi + 1)}
        low = self.numerator.low()
        span = hi - min(lo, low)
        series = [0] * (max(span, 0) + 1)
        series[0] = 1
        for d in self.denominator:
            for k in range(d, len(series)):
                series[k] += series[k - d]
        out = {}
        for n in range(lo, hi + 1):
            total = 0
            for e, c in self.numerator.coeffs.items():
                k = n - e
                if 0 <= k < len(series):
                    total += c * series[k]
            out[n] = total
        return out

    def coefficient(self, n):
        return self.coefficients(n, n)[n]

    def order_at_one(self):
        """Multiplicity of t = 1 as a root of the numerator."""
        num = self.numerator
        k = 0
        while num:
            q = num.divide_one_minus_t_power(1)
            if q is None:
                break
            num = q
            k += 1
        return k, num

    def dimension(self):
        """Krull dimension (pole order at t = 1); -1 for the zero series."""
        if not self.numerator:
            return -1
        k, _ = self.order_at_one()
        return len(self.denominator) - k

    def multiplicity(self):
        """e(M): leading coefficient data; the length when the module has finite length."""
        if not self.numerator:
            return 0
        k, num = self.order_at_one()
        dim = len(self.denominator) - k
        if dim < 0:
            raise AlgebraError("numerator vanishes to too high order")
        value = Fraction(num(1))
        for d in self.denominator:
            value /= d
        # each cancelled (1-t) factor came from some (1-t^d) = (1-t)(1+...+t^{d-1})
        return int(value) if value.denominator == 1 else value

    def reduced(self, a=None):
        """(P, dim) with the series equal to P(t)/(1-t^a)^dim, or None if not polynomial."""
        if a is None:
            a = math.lcm(*self.denominator) if self.denominator else 1
        num = self.numerator
        for d in self.denominator:
            if a % d:
                raise AlgebraError("a must be a multiple of every denominator degree")
            num = num * LaurentPolynomial({i * d: 1 for i in range(a // d)})
        dim = self.dimension()
        for _ in range(len(self.denominator) - max(dim, 0)):
            q = num.divide_one_minus_t_power(a)
            if q is None:
                return None
            num = q
        return num, max(dim, 0)

    def is_polynomial(self):
        return self.dimension() <= 0

    def as_polynomial(self):
        """Laurent polynomial for finite-length modules."""
        red = self.reduced(1) if all(d == 1 for d in self.denominator) else self.reduced()
        if red is None or red[1] != 0:
            raise AlgebraError("series is not a polynomial")
        return red[0]

    def reciprocal(self):
        """Series in t^{-1} for finite-length modules."""
        return HilbertSeries(self.as_polynomial().reciprocal(), ())

    def to_dict(self):
        red = self.reduced()
        out = {
            "numerator": self.numerator.to_dict(),
            "denominator_degrees": list(self.denominator),
            "dimension": self.dimension(),
        }
        if red is not None:
            out["reduced_numerator"] = red[0].to_dict()
            out["reduced_a"] = math.lcm(*self.denominator) if self.denominator else 1
        return out


def _den_poly(degrees):
    out = LaurentPolynomial({0: 1})
    for d in degrees:
        out = out * LaurentPolynomial({0: 1, d: -1})
    return out


# ---------------------------------------------------------------------------
# dimension, codimension and Fitting ideals of presentations
# ---------------------------------------------------------------------------


def module_dimension(P: ModulePresentation) -> int:
    """Krull dimension of coker; -1 for the zero module."""
    gb = P.submodule().gb()
    n = P.ring.nvars
    return max((monomial_dimension(g, n) for g in gb.leading_monomials()), default=-1)


def codim(X) -> float:
    """n - dim for an Ideal (IMPROPER for the unit ideal) or a presentation."""
    if isinstance(X, Ideal):
        return X.codim()
    dim = module_dimension(X)
    if dim < 0:
        return IMPROPER
    return X.ring.nvars - dim


def fitting_ideal(P: ModulePresentation, i: int) -> Ideal:
    """Ideal of (n - i)-minors of a minimal presentation matrix."""
    M = P.minimal()
    ring = P.ring
    n = M.generators.rank
    t = n - i
    if t <= 0:
        return Ideal(ring, [ring.one])
    rows = M.relations.rows()
    ncols = M.relations.source.rank
    if t > ncols:
        return Ideal(ring, [])
    return Ideal(ring, [g for g in all_minors(rows, n, ncols, t, ring) if g])


def all_minors(rows, nrows, ncols, t, ring):
    """All t x t minors by Laplace expansion along the last chosen column."""
    memo = {}

    def det(rset, cset):
        key = (rset, cset)
        if key in memo:
            return memo[key]
        if len(cset) == 1:
            val = rows[rset[0]][cset[0]]
        else:
            c = cset[-1]
            rest_c = cset[:-1]
            val = ring.zero
            k = len(rset)
            for idx, r in enumerate(rset):
                a = rows[r][c]
                if not a:
                    continue
                sub = det(rset[:idx] + rset[idx + 1:], rest_c)
                if not sub:
                    continue
                term = a * sub
                val = val + term if (k - 1 - idx) % 2 == 0 else val - term
        memo[key] = val
        return val

    out = []
    seen = set()
    for cset in itertools.combinations(range(ncols), t):
        for rset in itertools.combinations(range(nrows), t):
            d = det(rset, cset)
            if d:
                k = frozenset(d.monic().coeffs.items())
                if k not in seen:
                    seen.add(k)
                    out.append(d)
    return out
