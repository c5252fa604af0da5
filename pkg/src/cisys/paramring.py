"""Groebner toolkit for the parameter ring Q[a].

Everything here works on :class:`~cisys.polyalg.Poly` objects with rational
coefficients.  ``buchberger_reduced`` is the workhorse; radical membership
goes through the Rabinowitsch adjunction, and ``facvar`` extracts
square-free, pairwise coprime factors (not irreducible ones).
"""

import functools
import heapq
import itertools

from .polyalg import (
    Poly,
    PolyRing,
    mono_divides,
    mono_lcm,
    mono_mul,
    monomial_quotient,
    reduce_by_set,
)

__all__ = [
    "spoly",
    "buchberger_reduced",
    "is_reduced_groebner",
    "ideal_member",
    "radical_member",
    "gcd",
    "content",
    "primitive_part",
    "squarefree_part",
    "facvar",
    "coprime_basis",
    "poly_sort_key",
]


def spoly(f, g):
    lcm = mono_lcm(f.lm, g.lm)
    return f.mul_term(monomial_quotient(lcm, f.lm), 1 / f.lc) - g.mul_term(
        monomial_quotient(lcm, g.lm), 1 / g.lc
    )


def poly_sort_key(f):
    """Ascending sort key under the ring ordering (LM first, then the tail)."""
    key = f.ring.order.key
    return tuple((key(e), c) for e, c in f.terms)


def _autoreduce(G):
    """Minimal, monic, tail-reduced version of a Groebner basis."""
    G = sorted((g.monic() for g in G), key=poly_sort_key)
    minimal = []
    for g in G:
        if not any(mono_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        out.append(reduce_by_set(g, others).monic())
    return sorted(out, key=poly_sort_key)


def buchberger_reduced(F, criteria=True):
    """Reduced Groebner basis of ``<F>``, sorted ascending; ``[]`` for the zero ideal.

    Pairs are selected by the normal strategy (smallest lcm first, ties by
    insertion order).  With ``criteria`` on, the coprime-lcm criterion and the
    chain criterion discard pairs.
    """
    F = [f for f in F if f]
    if not F:
        return []
    ring = F[0].ring
    key = ring.order.key
    G = []
    heap = []
    done = set()
    seq = itertools.count()

    def push_pairs(j):
        for i in range(j):
            lcm = mono_lcm(G[i].lm, G[j].lm)
            heapq.heappush(heap, (key(lcm), next(seq), i, j, lcm))

    def add(h):
        if h.is_constant():
            G.clear()
            G.append(ring.one)
            heap.clear()
            return True
        G.append(h.monic())
        push_pairs(len(G) - 1)
        return False

    for f in sorted(F, key=poly_sort_key):
        h = reduce_by_set(f, G)
        if h and add(h):
            return [ring.one]

    while heap:
        _, _, i, j, lcm = heapq.heappop(heap)
        done.add((i, j))
        fi, fj = G[i], G[j]
        if criteria:
            if mono_mul(fi.lm, fj.lm) == lcm:
                continue
            chained = False
            for k, gk in enumerate(G):
                if k in (i, j):
                    continue
                if mono_divides(gk.lm, lcm):
                    a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
                    if a in done and b in done:
                        chained = True
                        break
            if chained:
                continue
        h = reduce_by_set(spoly(fi, fj), G)
        if h and add(h):
            return [ring.one]
    return _autoreduce(G)


def is_reduced_groebner(G):
    """Buchberger's criterion plus monic/reducedness, checked on every pair."""
    for g in G:
        if g.lc != 1:
            return False
    for f, g in itertools.combinations(G, 2):
        if reduce_by_set(spoly(f, g), G):
            return False
    for i, g in enumerate(G):
        others = G[:i] + G[i + 1:]
        for e, _ in g.terms:
            if any(mono_divides(h.lm, e) for h in others):
                return False
    return True


def ideal_member(h, G):
    """Membership of ``h`` in the ideal with Groebner basis ``G``."""
    if not h:
        return True
    return not reduce_by_set(h, G)


def _extend_ring(ring):
    name = "_t"
    while name in ring.names:
        name += "_"
    return PolyRing(ring.names + (name,), ring.order.extended(1))


def _lift(f, ring):
    return Poly.from_dict(ring, {e + (0,): c for e, c in f.terms})


def radical_member(h, N):
    """True iff ``h`` vanishes on every common zero of ``N``."""
    if not h:
        return True
    N = [n for n in N if n]
    G = buchberger_reduced(N)
    if G and G[0].is_constant():
        return True
    if not N:
        return False
    if ideal_member(h, G):
        return True
    if h.is_constant():
        return False
    if len(G) == 1:
        # principal: the radical is generated by the square-free part
        return not reduce_by_set(h, [squarefree_part(G[0])])
    ring = h.ring
    ext = _extend_ring(ring)
    t = ext.gen(ring.nvars)
    lifted = [_lift(g, ext) for g in G] + [ext.one - t * _lift(h, ext)]
    GB = buchberger_reduced(lifted)
    return len(GB) == 1 and GB[0].is_constant()


# -- gcd and factor extraction ------------------------------------------------


def _coeffs_in(f, v):
    """Map degree in variable ``v`` to the coefficient polynomial (free of v)."""
    buckets = {}
    for e, c in f.terms:
        k = e[v]
        buckets.setdefault(k, {})[e[:v] + (0,) + e[v + 1:]] = c
    return {k: Poly.from_dict(f.ring, d) for k, d in buckets.items()}


def content(f, v):
    """Gcd of the coefficients of ``f`` viewed as a polynomial in variable ``v``."""
    g = None
    for c in _coeffs_in(f, v).values():
        g = c.monic() if g is None else gcd(g, c)
        if g.is_constant():
            return f.ring.one
    return g if g is not None else f.ring.zero


def primitive_part(f, v):
    if not f:
        return f
    c = content(f, v)
    return f if c.is_constant() else f.exact_div(c)


def _prem(f, g, v):
    dg = g.degree(v)
    lcg = _coeffs_in(g, v)[dg]
    r = f
    while r and r.degree(v) >= dg:
        dr = r.degree(v)
        lcr = _coeffs_in(r, v)[dr]
        shift = tuple(dr - dg if i == v else 0 for i in range(f.ring.nvars))
        r = (lcg * r - (lcr * g).mul_monomial(shift)).monic()
    return r


def gcd(f, g):
    """Monic greatest common divisor in Q[a]; ``gcd(0, 0) = 0``."""
    if not f:
        return g.monic()
    if not g:
        return f.monic()
    one = f.ring.one
    if f.is_constant() or g.is_constant():
        return one
    if f == g:
        return f.monic()
    vf, vg = set(f.variables()), set(g.variables())
    common = vf & vg
    if not common:
        # Coefficients free of a shared variable: reduce through contents.
        v = min(vf)
        return gcd(content(f, v), g)
    # the cheapest main variable keeps the remainder sequence short
    v = min(common, key=lambda i: (max(f.degree(i), g.degree(i)), i))
    cf, cg = content(f, v), content(g, v)
    c = gcd(cf, cg)
    pf = f if cf.is_constant() else f.exact_div(cf)
    pg = g if cg.is_constant() else g.exact_div(cg)
    if pf.degree(v) < pg.degree(v):
        pf, pg = pg, pf
    while pg:
        if pg.degree(v) == 0:
            pf = one
            break
        r = _prem(pf, pg, v)
        pf, pg = pg, primitive_part(r, v) if r else r
    return (c * primitive_part(pf, v)).monic()


def squarefree_part(p):
    """Product of the distinct factors of ``p``, monic; 1 for nonzero constants."""
    if not p:
        raise ValueError("squarefree_part of the zero polynomial")
    if p.is_constant():
        return p.ring.one
    d = p
    for v in p.variables():
        d = gcd(d, p.diff(v))
        if d.is_constant():
            return p.monic()
    return p.exact_div(d).monic()


def _yun(pp, v):
    """Square-free factors of ``pp`` (primitive in variable ``v``)."""
    out = []
    da = pp.diff(v)
    a0 = gcd(pp, da)
    b = pp.exact_div(a0)
    c = da.exact_div(a0)
    d = c - b.diff(v)
    while not b.is_constant():
        a = gcd(b, d)
        if not a.is_constant():
            out.append(a.monic())
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.diff(v)
    return out


def _content_split(q):
    for v in q.variables():
        c = content(q, v)
        if not c.is_constant():
            return _content_split(c) + _content_split(q.exact_div(c))
    return [q.monic()]


def _sqf_factors(p):
    if p.is_constant():
        return []
    v = p.variables()[0]
    c = content(p, v)
    pp = p if c.is_constant() else p.exact_div(c)
    out = _sqf_factors(c)
    for q in _yun(pp, v):
        out.extend(_content_split(q))
    return out


def coprime_basis(polys):
    """Refine a list into pairwise coprime, monic, nonconstant, distinct factors."""
    work = []
    for p in polys:
        if p and not p.is_constant() and p.monic() not in work:
            work.append(p.monic())
    changed = True
    while changed:
        changed = False
        for i, j in itertools.combinations(range(len(work)), 2):
            g = gcd(work[i], work[j])
            if not g.is_constant():
                p, q = work[i], work[j]
                rest = [w for k, w in enumerate(work) if k not in (i, j)]
                for piece in (g, p.exact_div(g), q.exact_div(g)):
                    if not piece.is_constant() and piece.monic() not in rest:
                        rest.append(piece.monic())
                work = rest
                changed = True
                break
    return work


def facvar(p):
    """Square-free, pairwise coprime, monic factors of ``p`` in ascending order.

    The product of the factors has the same zero set as ``p``; constants
    contribute nothing.  Factors are not guaranteed irreducible.
    """
    if not p:
        raise ValueError("facvar of the zero polynomial")
    return list(_facvar_cached(p))


@functools.lru_cache(maxsize=4096)
def _facvar_cached(p):
    return tuple(sorted(coprime_basis(_sqf_factors(p)), key=poly_sort_key))
