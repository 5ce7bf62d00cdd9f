"""Brute-force degreewise linear algebra used as an independent oracle.

Everything here works on plain exponent tuples and sympy domain matrices; the
only contact with residua is reading terms off polynomials and vectors.
"""

from fractions import Fraction
from itertools import product

from sympy.polys.domains import GF as SGF
from sympy.polys.domains import QQ as SQQ
from sympy.polys.matrices import DomainMatrix


def domain(p):
    return SGF(p) if p else SQQ


def _elt(K, p, c):
    if p:
        return K(int(c) % p)
    c = Fraction(c)
    return K(c.numerator, c.denominator)


def rank(rows, p):
    """Rank of a list of sparse rows (dict column -> value)."""
    rows = [r for r in rows if any(r.values())]
    if not rows:
        return 0
    cols = sorted({c for r in rows for c in r})
    index = {c: i for i, c in enumerate(cols)}
    K = domain(p)
    data = [[K.zero] * len(cols) for _ in rows]
    for i, r in enumerate(rows):
        for c, v in r.items():
            data[i][index[c]] = _elt(K, p, v)
    return DomainMatrix(data, (len(rows), len(cols)), K).rank()


def monomials(weights, d):
    """Exponent tuples of weighted degree d."""
    if d < 0:
        return []
    out = []
    for e in product(*(range(d // w + 1) for w in weights)):
        if sum(a * w for a, w in zip(e, weights)) == d:
            out.append(e)
    return out


def terms(poly):
    return dict(poly.terms())


def times(mono, tms):
    return {tuple(a + b for a, b in zip(mono, e)): c for e, c in tms.items()}


def wdeg(weights, e):
    return sum(a * w for a, w in zip(e, weights))


def ideal_span(gens, d, weights):
    """Rows spanning I_d: all monomial multiples of generators landing in degree d."""
    rows = []
    for g in gens:
        t = terms(g)
        if not t:
            continue
        gd = wdeg(weights, next(iter(t)))
        for m in monomials(weights, d - gd):
            rows.append(times(m, t))
    return rows


def in_ideal(f, gens, weights, p):
    t = terms(f)
    if not t:
        return True
    d = wdeg(weights, next(iter(t)))
    span = ideal_span(gens, d, weights)
    return rank(span + [t], p) == rank(span, p)


def quotient_hf(gens, n, weights, p):
    """dim (R/I)_n."""
    return len(monomials(weights, n)) - rank(ideal_span(gens, n, weights), p)


def colon_hf(a_gens, i_gens, n, weights, p):
    """dim (a : I)_n computed as the kernel of R_n -> prod_j (R/a)_{n + deg f_j}."""
    basis = monomials(weights, n)
    if not basis:
        return 0
    blocks = []
    for f in i_gens:
        t = terms(f)
        fd = wdeg(weights, next(iter(t)))
        span = ideal_span(a_gens, n + fd, weights)
        blocks.append((t, span))
    # r in (a:I)_n iff r*f_j in span_j for every j; count via ranks of a stacked system
    # kernel of R_n -> (+)_j R_{n+d_j} / a_{n+d_j}
    rows = []
    for j, (t, span) in enumerate(blocks):
        for s in span:
            rows.append({(j, e): c for e, c in s.items()})
    r0 = rank(rows, p)
    images = []
    for m in basis:
        img = {}
        for j, (t, _) in enumerate(blocks):
            for e, c in times(m, t).items():
                img[(j, e)] = c
        images.append(img)
    return len(basis) - (rank(rows + images, p) - r0)


def module_hf(gen_degrees, relations, n, weights, p):
    """dim of a cokernel coker(R^m -> (+) R(-gen_degrees)) in degree n.

    ``relations`` is a list of columns, each a list of polynomials (one per generator).
    """
    basis = sum(len(monomials(weights, n - e)) for e in gen_degrees)
    rows = []
    for col in relations:
        pos = [(k, terms(q)) for k, q in enumerate(col) if terms(q)]
        if not pos:
            continue
        k0, t0 = pos[0]
        cd = wdeg(weights, next(iter(t0))) + gen_degrees[k0]
        for m in monomials(weights, n - cd):
            row = {}
            for k, t in pos:
                for e, c in times(m, t).items():
                    row[(k, e)] = c
            rows.append(row)
    return basis - rank(rows, p)


def presentation_hf(P, n):
    """dim P_n for a residua ModulePresentation, by the oracle above."""
    ring = P.ring
    G = P.generators
    cols = [G.entries(c) for c in P.relations.columns if c]
    return module_hf(list(G.degrees), cols, n, list(ring.degrees), ring.field.characteristic)


def _matrix(rows, cols, p):
    K = domain(p)
    index = {c: i for i, c in enumerate(cols)}
    data = [[K.zero] * len(cols) for _ in rows]
    for i, r in enumerate(rows):
        for c, v in r.items():
            data[i][index[c]] = _elt(K, p, v)
    return DomainMatrix(data, (len(rows), len(cols)), K)


def left_kernel(rows, p):
    """Basis of {lambda : sum lambda_i rows_i = 0} as lists of field elements."""
    if not rows:
        return []
    cols = sorted({c for r in rows for c in r}) or [None]
    A = _matrix(rows, cols, p).transpose()
    null = A.nullspace().to_Matrix()
    return [list(null.row(i)) for i in range(null.rows)]


def _subsets(r, i):
    from itertools import combinations
    return list(combinations(range(r), i))


def koszul_homology_dims(f, N, n, weights, p):
    """dim_k H_i(f; R/N)_n for every i, from ranks of the degree-n differentials."""
    r = len(f)
    fdeg = [wdeg(weights, next(iter(terms(x)))) for x in f]
    ft = [terms(x) for x in f]

    def rel_rows(i):
        rows = []
        for S in _subsets(r, i):
            for row in ideal_span(N, n - sum(fdeg[j] for j in S), weights):
                rows.append({(S, e): c for e, c in row.items()})
        return rows

    def dim_k(i):
        total = sum(len(monomials(weights, n - sum(fdeg[j] for j in S))) for S in _subsets(r, i))
        return total - rank(rel_rows(i), p)

    def rank_d(i):
        if i == 0 or i > r:
            return 0
        images = []
        for S in _subsets(r, i):
            for m in monomials(weights, n - sum(fdeg[j] for j in S)):
                img = {}
                for l, j in enumerate(S):
                    T = S[:l] + S[l + 1:]
                    sign = 1 if l % 2 == 0 else -1
                    for e, c in times(m, ft[j]).items():
                        img[(T, e)] = img.get((T, e), 0) + sign * c
                images.append(img)
        base = rel_rows(i - 1)
        return rank(base + images, p) - rank(base, p)

    return [dim_k(i) - rank_d(i) - rank_d(i + 1) for i in range(r + 1)]


def approximation_h0_hf(f, N, k, n, weights, p, gammas=()):
    """dim of (M[T]/(L_M + gamma M))_{[k], n} for M = R/N.

    L_M is spanned by the forms sum c_q T_q with c in Z_1(f; M); ``gammas`` are
    extra linear forms given by their coefficient lists (c_1, ..., c_r).
    """
    r = len(f)
    fdeg = [wdeg(weights, next(iter(terms(x)))) for x in f]
    ft = [terms(x) for x in f]

    def tdeg(alpha):
        return sum(a * e for a, e in zip(alpha, fdeg))

    from itertools import combinations_with_replacement

    def comps(total):
        out = []
        for c in combinations_with_replacement(range(r), total):
            out.append(tuple(c.count(q) for q in range(r)))
        return out

    alphas = comps(k)
    coords = sum(len(monomials(weights, n - tdeg(a))) for a in alphas)
    rows = []
    for a in alphas:
        for row in ideal_span(N, n - tdeg(a), weights):
            rows.append({(a, e): c for e, c in row.items()})
    for beta in comps(k - 1):
        e_deg = n - tdeg(beta)
        # c = (c_q) with c_q in R_{e_deg - deg f_q} and sum c_q f_q in N
        gens = []
        for q in range(r):
            for m in monomials(weights, e_deg - fdeg[q]):
                gens.append((q, m))
        if not gens:
            continue
        span = ideal_span(N, e_deg, weights)
        system = []
        for q, m in gens:
            system.append({e: c for e, c in times(m, ft[q]).items()})
        system += span
        for lam in left_kernel(system, p):
            row = {}
            for (q, m), c in zip(gens, lam[:len(gens)]):
                if c:
                    key = (beta[:q] + (beta[q] + 1,) + beta[q + 1:], m)
                    row[key] = row.get(key, 0) + (int(c) if p else Fraction(int(c.numerator), int(c.denominator)))
            rows.append(row)
        for cs in gammas:
            tm = [(q, terms(c)) for q, c in enumerate(cs) if terms(c)]
            if not tm:
                continue
            q0, t0 = tm[0]
            gdeg = wdeg(weights, next(iter(t0))) + fdeg[q0]
            for m in monomials(weights, e_deg - gdeg):
                row = {}
                for q, t in tm:
                    key_beta = beta[:q] + (beta[q] + 1,) + beta[q + 1:]
                    for e, c in times(m, t).items():
                        row[(key_beta, e)] = row.get((key_beta, e), 0) + c
                rows.append(row)
    return coords - rank(rows, p)
