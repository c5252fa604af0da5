"""Point-wise oracles for checking comprehensive involutive systems.

Nothing here touches the completion machinery: the multiplicative split,
involutive reduction and Buchberger closure are re-derived from scratch on
top of the plain polynomial layer, so the checks stay independent of the
code they judge.
"""

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .polyalg import (
    PolyRing,
    mono_divides,
    mono_lcm,
    monomial_quotient,
    reduce_by_set,
)

__all__ = [
    "specialize",
    "satisfies_spec",
    "nonmultiplicative",
    "is_involutive_basis",
    "is_l_autoreduced",
    "is_minimal_involutive",
    "reduced_groebner",
    "is_groebner_basis",
    "same_ideal",
    "random_rational",
    "sample_point",
    "sample_cell_point",
    "matching_cells",
    "verify_cis",
    "VerifyReport",
]


# -- specialization -------------------------------------------------------------


@lru_cache(maxsize=64)
def _ground(ring):
    return PolyRing(ring.names, ring.order)


def _point_vector(point, param_ring):
    if isinstance(point, dict):
        return tuple(Fraction(point[n]) for n in param_ring.names)
    return tuple(Fraction(v) for v in point)


def specialize(f, point):
    """Evaluate the parameter coefficients of ``f`` at ``point``.

    ``point`` is a mapping from parameter name to a rational, or a sequence
    in parameter-ring order.  Parameter-free polynomials come back unchanged.
    """
    ring = f.ring
    if ring.coeff is None:
        return f
    vec = _point_vector(point, ring.coeff)
    target = _ground(ring)
    return f.map_coeffs(lambda c: c.evaluate(vec), target)


def _value(q, point):
    if q.ring.coeff is not None:
        raise TypeError("condition polynomials live in the parameter ring")
    return q.evaluate(_point_vector(point, q.ring))


def satisfies_spec(point, spec):
    """All null conditions vanish and no nonnull condition does."""
    return all(_value(p, point) == 0 for p in spec.null) and all(
        _value(q, point) != 0 for q in spec.nonnull
    )


# -- involutive checks -----------------------------------------------------------


def _above(u, v, division):
    ku, kv = division.order.key(u), division.order.key(v)
    return ku < kv if division.inverse else ku > kv


def nonmultiplicative(U, division):
    """``{u: NM(u, U)}`` straight from the pairwise rule, no shortcuts."""
    U = list(dict.fromkeys(U))
    out = {}
    for u in U:
        nm = set()
        for v in U:
            if v == u or _above(u, v, division) or mono_divides(v, u):
                continue
            for j in division.rho:
                if u[j] < v[j]:
                    nm.add(j)
                    break
        out[u] = frozenset(nm)
    return out


def _inv_divides(u, t, nm):
    if not mono_divides(u, t):
        return False
    return all(t[j] == u[j] for j in nm)


def _inv_reduce(f, G, nm):
    """Full involutive normal form (every term), ``G`` keyed by leading monomial."""
    h = f
    changed = True
    while h and changed:
        changed = False
        for e, c in h.terms:
            for u, g in G.items():
                if _inv_divides(u, e, nm[u]):
                    h = h - g.mul_term(monomial_quotient(e, u), c / g.lc)
                    changed = True
                    break
            if changed:
                break
    return h


def is_involutive_basis(G, division):
    """Every nonmultiplicative prolongation has involutive normal form zero."""
    G = [g for g in G if g]
    if not G:
        return True
    lead = {}
    for g in G:
        lead.setdefault(g.lm, g)
    nm = nonmultiplicative(list(lead), division)
    # Repeated leading monomials: the extra copies must lie in the span of the rest.
    if len(lead) < len(G) and any(_inv_reduce(g, lead, nm) for g in G if lead[g.lm] is not g):
        return False
    n = len(G[0].lm)
    for g in G:
        for j in nm[g.lm]:
            x = tuple(1 if i == j else 0 for i in range(n))
            if _inv_reduce(g.mul_monomial(x), lead, nm):
                return False
    return True


def is_l_autoreduced(G, division):
    """Distinct leading monomials and no term involutively divisible by another element."""
    G = [g for g in G if g]
    lms = [g.lm for g in G]
    if len(set(lms)) != len(lms):
        return False
    nm = nonmultiplicative(lms, division)
    for g in G:
        for e, _ in g.terms:
            for u in lms:
                if u != g.lm and _inv_divides(u, e, nm[u]):
                    return False
    return True


def is_minimal_involutive(G, division):
    """Monic-autoreduced, and no proper subset obtained by dropping one element
    is still an involutive basis of the same ideal."""
    G = [g.monic() for g in G if g]
    if not is_l_autoreduced(G, division):
        return False
    for i in range(len(G)):
        rest = G[:i] + G[i + 1:]
        if is_involutive_basis(rest, division) and same_ideal(rest, G):
            return False
    return True


# -- reference Buchberger --------------------------------------------------------


def _spoly(f, g):
    lcm = mono_lcm(f.lm, g.lm)
    return f.mul_term(monomial_quotient(lcm, f.lm), 1 / f.lc) - g.mul_term(
        monomial_quotient(lcm, g.lm), 1 / g.lc
    )


def reduced_groebner(F):
    """Reduced Groebner basis by the textbook pair loop (no criteria)."""
    G = [f.monic() for f in F if f]
    pairs = list(itertools.combinations(range(len(G)), 2))
    while pairs:
        i, j = pairs.pop()
        h = reduce_by_set(_spoly(G[i], G[j]), G)
        if h:
            G.append(h.monic())
            pairs.extend((k, len(G) - 1) for k in range(len(G) - 1))
    minimal = []
    for g in sorted(G, key=lambda p: p.ring.order.key(p.lm)):
        if not any(mono_divides(m.lm, g.lm) for m in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        out.append(reduce_by_set(g, minimal[:i] + minimal[i + 1:]).monic())
    return sorted(out, key=lambda p: p.ring.order.key(p.lm))


def is_groebner_basis(G):
    """Every S-polynomial reduces to zero by ordinary division."""
    G = [g for g in G if g]
    return all(not reduce_by_set(_spoly(f, g), G) for f, g in itertools.combinations(G, 2))


def same_ideal(F, G):
    F = [f for f in F if f]
    G = [g for g in G if g]
    if not F or not G:
        return not F and not G
    GF, GG = reduced_groebner(F), reduced_groebner(G)
    return all(not reduce_by_set(g, GF) for g in G) and all(not reduce_by_set(f, GG) for f in F)


# -- sampling --------------------------------------------------------------------


def random_rational(rng, bound=5, max_den=4, zero_bias=0.3):
    if rng.random() < zero_bias:
        return Fraction(0)
    return Fraction(rng.randint(-bound, bound), rng.randint(1, max_den))


def sample_point(param_ring, rng, **kw):
    return tuple(random_rational(rng, **kw) for _ in param_ring.names)


def _divisors(n, cap=10**6):
    n = abs(n)
    if n == 0 or n > cap:
        return [1] if n else []
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.extend((d, n // d))
        d += 1
    return sorted(set(out))


def _rational_roots(coeffs):
    """Rational roots of ``sum coeffs[k] t^k`` (Fractions, nonzero polynomial)."""
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if len(coeffs) <= 1:
        return []
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    roots = set()
    low = 0
    while ints[low] == 0:
        low += 1
    if low:
        roots.add(Fraction(0))
    ints = ints[low:]
    if len(ints) > 1:
        for p in _divisors(ints[0]):
            for q in _divisors(ints[-1]):
                for r in (Fraction(p, q), Fraction(-p, q)):
                    if sum(c * r**k for k, c in enumerate(ints)) == 0:
                        roots.add(r)
    return sorted(roots)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _univariate(q, idx, vec):
    """Coefficients in variable ``idx`` after substituting the assigned values."""
    coeffs = {}
    for e, c in q.terms:
        v = Fraction(c)
        for j, k in enumerate(e):
            if j != idx and k:
                v *= vec[j] ** k
        coeffs[e[idx]] = coeffs.get(e[idx], 0) + v
    top = max(coeffs) if coeffs else 0
    return [Fraction(coeffs.get(k, 0)) for k in range(top + 1)]


def sample_cell_point(spec, param_ring, rng, attempts=200):
    """A rational point satisfying ``spec``, or None.

    Parameters are assigned from the smallest variable upward; null
    conditions that become univariate are solved over the rationals.
    """
    n = len(param_ring.names)
    order_idx = sorted(range(n), key=lambda i: param_ring.order.key(
        tuple(1 if j == i else 0 for j in range(n))))
    for _ in range(attempts):
        vec = [None] * n
        done = set()
        ok = True
        for i in order_idx:
            polys = []
            for p in spec.null:
                vs = set(p.variables())
                if i in vs and vs - {i} <= done:
                    uni = _univariate(p, i, vec)
                    if any(uni):
                        polys.append(uni)
            if polys:
                roots = [r for r in _rational_roots(polys[0])
                         if all(sum(c * r**k for k, c in enumerate(u)) == 0 for u in polys[1:])]
                if not roots:
                    ok = False
                    break
                vec[i] = rng.choice(roots)
            else:
                vec[i] = random_rational(rng)
            done.add(i)
        if ok:
            point = tuple(vec)
            if satisfies_spec(point, spec):
                return point
    return None


def matching_cells(cells, point):
    return [k for k, c in enumerate(cells) if satisfies_spec(point, c.spec)]


# -- full check ------------------------------------------------------------------


@dataclass
class VerifyReport:
    checked: int = 0
    partition_points: int = 0
    unsampled_cells: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def as_dict(self):
        return {
            "ok": self.ok,
            "checked_points": self.checked,
            "partition_points": self.partition_points,
            "unsampled_cells": list(self.unsampled_cells),
            "failures": list(self.failures),
        }


def _fmt_point(param_ring, point):
    return ", ".join(f"{n}={v}" for n, v in zip(param_ring.names, point))


def check_point(F, cells, point, division, k=None):
    """Failure messages for one parameter point (empty list when all good).

    ``k`` names the cell the point was drawn for; it must be the unique match.
    """
    hits = matching_cells(cells, point)
    msgs = []
    if len(hits) != 1 or (k is not None and hits != [k]):
        msgs.append(f"point matches cells {hits}")
        return msgs
    cell = cells[hits[0]]
    sF = [specialize(f, point) for f in F]
    sG = [specialize(g, point) for g in cell.basis]
    if any(not g for g in sG):
        msgs.append(f"cell {hits[0]}: a basis element vanishes")
        return msgs
    if not is_involutive_basis(sG, division):
        msgs.append(f"cell {hits[0]}: not involutive")
    if not same_ideal(sF, sG):
        msgs.append(f"cell {hits[0]}: ideal differs")
    if not is_minimal_involutive(sG, division):
        msgs.append(f"cell {hits[0]}: not minimal")
    return msgs


def verify_cis(F, cells, division, samples=25, seed=0, partition_points=None, pool=None):
    """Sample ``samples`` points per cell plus random points for the partition check."""
    rng = random.Random(seed)
    report = VerifyReport()
    F = [f for f in F if f]
    ring = F[0].ring if F else None
    if ring is None or ring.coeff is None:
        # No parameters: the single cell must be right at the empty point.
        for msg in check_point(F, cells, (), division, 0 if len(cells) == 1 else None):
            report.failures.append(msg)
        report.checked = 1
        return report
    prm = ring.coeff
    jobs = []
    for k, cell in enumerate(cells):
        got = 0
        for _ in range(samples):
            point = sample_cell_point(cell.spec, prm, rng)
            if point is None:
                break
            jobs.append((k, point))
            got += 1
        if got == 0 and samples:
            report.unsampled_cells.append(k)
    m = samples * max(1, len(cells)) if partition_points is None else partition_points
    for _ in range(m):
        jobs.append((None, sample_point(prm, rng)))
    mapper = pool.map if pool is not None else map
    results = mapper(_check_job, [(F, cells, p, division, k) for k, p in jobs])
    for (k, point), msgs in zip(jobs, results):
        if k is None:
            report.partition_points += 1
        else:
            report.checked += 1
        for msg in msgs:
            report.failures.append(f"({_fmt_point(prm, point)}): {msg}")
    return report


def _check_job(args):
    return check_point(*args)
