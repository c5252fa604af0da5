"""Comprehensive involutive systems for parametric polynomial ideals.

The parameter space is split by null conditions ``N`` (must vanish) and
nonnull conditions ``W`` (must not vanish).  Each leading coefficient met
during the involutive completion is either decided by the current
conditions or split into two branches.  Every leaf yields a
:class:`Cell`: a basis whose specialization at any point of the cell is a
minimal involutive basis of the specialized ideal.

The branch tree is walked depth-first with an explicit stack, nonnull branch
first.  The first stage ("seeding") examines the leading coefficient of each
input generator in turn, for every open specification, before any completion
starts.
"""

import itertools
from dataclasses import dataclass, field, replace
from functools import reduce
from operator import mul

from .involution import DivisionSpec, InvolutiveCompletion, Stats, Triple, normalize
from .paramring import buchberger_reduced, coprime_basis, facvar, gcd, poly_sort_key, radical_member
from .polyalg import mono_divides, reduce_by_set

__all__ = [
    "Specification",
    "Cell",
    "canspec",
    "newcond",
    "reduce_coefficients",
    "head_normal_form",
    "head_reduce",
    "gbi_param",
    "cominvsys",
    "CISEngine",
    "format_conditions",
]


@dataclass(frozen=True)
class Specification:
    """Null conditions ``null`` and nonnull conditions ``nonnull`` in Q[a]."""

    null: tuple = ()
    nonnull: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "null", tuple(self.null))
        object.__setattr__(self, "nonnull", tuple(self.nonnull))


@dataclass
class Cell:
    """One piece of the parameter space with its basis (empty list = zero ideal)."""

    basis: list
    spec: Specification
    path: tuple = field(default=(), compare=False)


def _is_one(G):
    return len(G) == 1 and G[0].is_constant()


def _dedupe_sorted(polys):
    out = []
    for p in polys:
        if p not in out:
            out.append(p)
    return sorted(out, key=poly_sort_key)


def _facvar_all(polys):
    out = []
    for q in polys:
        if q:
            out.extend(facvar(q))
    return _dedupe_sorted(coprime_basis(out))


def reduce_coefficients(f, N):
    """Reduce every Q[a]-coefficient of the parametric polynomial ``f`` modulo ``N``."""
    if not N or not f:
        return f
    return f.map_coeffs(lambda c: reduce_by_set(c, N))


def canspec(N, W):
    """Quasi-canonical form of the condition pair ``(N, W)``.

    Returns ``(compatible, N', W')``.  ``N'`` is a reduced Groebner basis of
    square-free generators with factors lying in ``W'`` removed; ``W'`` are
    the pairwise coprime square-free factors of ``W`` reduced modulo ``N'``.  An incompatible
    pair (the product of ``W`` vanishes wherever ``N`` does) gives
    ``(False, [1], W')``.
    """
    N = [n for n in N if n]
    W = [w for w in W if w]
    G = buchberger_reduced(N)
    if G and _is_one(G):
        return False, G, _facvar_all(W)
    reduced = [reduce_by_set(q, G) for q in W]
    if any(not q for q in reduced):
        return False, [G[0].ring.one if G else W[0].ring.one], _facvar_all(W)
    Wp = _facvar_all(reduced)
    if Wp and radical_member(reduce(mul, Wp), G):
        return False, [Wp[0].ring.one], Wp
    while G:
        stripped = []
        for p in G:
            keep = [f for f in facvar(p) if f not in Wp]
            stripped.append(reduce(mul, keep, p.ring.one))
        G2 = buchberger_reduced(stripped)
        if G2 == G:
            break
        G = G2
        if _is_one(G):
            return False, G, Wp
        reduced = [reduce_by_set(q, G) for q in Wp]
        if any(not q for q in reduced):
            return False, [G[0].ring.one], Wp
        Wp = _facvar_all(reduced)
    if G and Wp and radical_member(reduce(mul, Wp), G):
        return False, [G[0].ring.one], Wp
    return True, G, Wp


def newcond(f, N, W):
    """Strip leading terms that vanish under ``N`` and look for a new condition.

    Returns ``(cd, f', N', W')``: ``cd`` is empty when the leading coefficient
    of ``f'`` is decided (a unit, or all its factors are nonnull conditions),
    otherwise it holds the smallest undecided factor.  ``N'`` only grows by
    elements of the radical of ``N``.
    """
    Np = list(N)
    h = f
    while h and radical_member(h.lc, Np):
        Np = buchberger_reduced(Np + [h.lc])
        h = h.tail()
    h = normalize(reduce_coefficients(h, Np))
    if len(Np) == len(N):
        Wp = _dedupe_sorted(w.monic() for w in W if w and not w.is_constant())
    else:
        Wp = _facvar_all(reduce_by_set(w, Np) for w in W)
    cd = []
    if h and not h.lc.is_constant():
        # strip the parts of each factor of LC(h) already known to be nonnull
        for q in facvar(h.lc):
            for w in Wp:
                g = gcd(q, w)
                if not g.is_constant():
                    q = q.exact_div(g).monic()
                    if q.is_constant():
                        break
            if not q.is_constant():
                cd = [q]
                break
    return cd, h, Np, Wp


def format_conditions(polys):
    return "{" + ", ".join(p.primitive().to_str() for p in reversed(list(polys))) + "}"


def _format_spec(spec):
    if spec is None:
        return "{}, {}"
    return f"{format_conditions(spec.null)}, {format_conditions(spec.nonnull)}"


class CISEngine:
    """Driver for one comprehensive involutive system computation."""

    def __init__(self, ring, division=None, use_criteria=True, tracer=None, stats=None):
        self.ring = ring
        self.division = division or DivisionSpec.janet(ring.nvars)
        self.use_criteria = use_criteria
        self.tracer = tracer
        self.stats = stats if stats is not None else Stats()
        self.core = InvolutiveCompletion(
            self.division,
            ring.order,
            use_criteria,
            decide=self._decide if ring.coeff is not None else None,
            tracer=tracer,
            stats=self.stats,
            render=lambda p: p.to_str(),
        )

    # -- traced subalgorithms

    def newcond(self, f, spec):
        tr = self.tracer
        if tr:
            tr.enter("NewCond", f"{f.to_str()}, {_format_spec(spec)}")
        cd, h, Np, Wp = newcond(f, spec.null, spec.nonnull)
        if tr:
            tr.leave(
                f"({format_conditions(cd)}, {h.to_str()}, {format_conditions(Np)}, {format_conditions(Wp)})",
                kind="NewCond",
                cd=[q.primitive().to_str() for q in cd],
            )
        return cd, h, Specification(Np, Wp)

    def canspec(self, spec):
        ok, Np, Wp = canspec(spec.null, spec.nonnull)
        return ok, Specification(Np, Wp)

    def _decide(self, h, spec):
        if not h:
            return [], h, spec
        return self.newcond(h, spec)

    # -- state helpers

    def _fresh(self, t):
        """Make a triple consistent after coefficient reduction."""
        if not t.poly:
            return t
        if not t.anc or not mono_divides(t.anc.lm, t.poly.lm):
            return replace(t, anc=t.poly, nm=frozenset())
        return t

    def _reduce_triple(self, t, N):
        if not N:
            return t
        poly = normalize(reduce_coefficients(t.poly, N))
        anc = normalize(reduce_coefficients(t.anc, N))
        return self._fresh(replace(t, poly=poly, anc=anc))

    def _reduce_resume(self, T, Q, N):
        T2, Q2 = [], []
        for t in T:
            r = self._reduce_triple(t, N)
            if r.poly and r.poly.lm == t.poly.lm:
                T2.append(r)
            elif r.poly:
                Q2.append(replace(r, anc=r.poly, nm=frozenset()))
        for q in Q:
            r = self._reduce_triple(q, N)
            if r.poly:
                Q2.append(r)
        return T2, Q2

    def _cell(self, T, spec, path):
        N = list(spec.null)
        basis = []
        for t in T:
            g = normalize(reduce_coefficients(t.poly, N))
            if g:
                basis.append(g)
        basis.sort(key=lambda g: self.ring.order.key(g.lm))
        return Cell(basis, spec, path)

    # -- main loop

    def run(self, F, parallel=False):
        tr = self.tracer
        F = [normalize(f) for f in F if f]
        if tr:
            tr.call("ComInvSys", "F, L, ≺x, ≺a", depth=0)
        if not F:
            cell = Cell([], Specification())
            if tr:
                tr.note("List := ({0}, {}, {})", name="List")
            return [cell]
        B = [self.core.triple(f) for f in F]
        if self.ring.coeff is None:
            # Nothing to split on: one cell, plain completion.
            _, _, T, _, _ = self.core.run(B, Specification())
            cell = self._cell(T, Specification(), ())
            if tr:
                tr.note(f"List := ({{{', '.join(g.to_str() for g in cell.basis) or '0'}}}, {{}}, {{}})",
                        name="List")
            return [cell]
        phase = [(B, Specification(), [], ())]
        cells = []
        for i in range(len(F)):
            last = i == len(F) - 1
            nxt = []
            roots = [("seed", Bs[i], Bs, spec, P, i, path) for Bs, spec, P, path in phase]
            if last and parallel and not tr and len(roots) > 1:
                cells.extend(self._walk_parallel(roots, parallel))
                break
            for root in roots:
                self._walk(root, last, nxt, cells)
            phase = nxt
            if tr and not last:
                tr.depth = 1
                tr.note(f"ind := {i + 2}")
        return cells

    def _walk_parallel(self, roots, workers):
        """Independent subtrees in worker processes; output order is unchanged."""
        from concurrent.futures import ProcessPoolExecutor

        top = max((t.seq for root in roots for t in root[2]), default=0)
        args = [(self.ring, self.division, self.use_criteria, root, top) for root in roots]
        n = None if workers is True else int(workers)
        with ProcessPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(_walk_root, args))
        out = []
        for cells, stats in results:
            out.extend(cells)
            for k, v in vars(stats).items():
                setattr(self.stats, k, getattr(self.stats, k) + v)
        return out

    def _walk(self, root, last, nxt, cells):
        tr = self.tracer
        stack = [(root, 1)]
        while stack:
            (mode, p, B, spec, P, i, path), depth = stack.pop()
            if tr:
                tr.call("Branch",
                        f"{self.core._fmt_triple(p)}, B, {_format_spec(spec)}, {self.core._fmt_triples(P)}",
                        depth=depth, null=[q.primitive().to_str() for q in spec.null],
                        nonnull=[q.primitive().to_str() for q in spec.nonnull])
            ok, spec = self.canspec(spec)
            if not ok:
                if tr:
                    tr.note("STOP (incompatible specification)", name="STOP")
                continue
            N = list(spec.null)
            if mode == "seed":
                B = [self._reduce_triple(t, N) for t in B]
                p = B[i]
            else:
                B, P = self._reduce_resume(B, P, N)
                p = self._reduce_triple(p, N)
            cd, f2, spec = self.newcond(p.poly, spec)
            N2 = list(spec.null)
            anc = normalize(reduce_coefficients(p.anc, N2))
            p = self._fresh(Triple(f2, anc, p.nm, p.seq))
            if mode == "seed":
                B = [p if k == i else self._reduce_triple(t, N2) for k, t in enumerate(B)]
            if cd:
                self.stats.branches += 1
                q = cd[0]
                null = Specification(_dedupe_sorted(N2 + [q]), spec.nonnull)
                nonnull = Specification(spec.null, _dedupe_sorted(list(spec.nonnull) + [q]))
                stack.append(((mode, p, B, null, P, i, path + (0,)), depth + 1))
                stack.append(((mode, p, B, nonnull, P, i, path + (1,)), depth + 1))
                continue
            if mode == "seed" and not last:
                nxt.append((B, spec, P, path))
                continue
            if mode == "seed":
                done, pend, T, st, Q = self.core.run(B, spec)
            else:
                queue = list(P) + ([p] if p.poly else [])
                done, pend, T, st, Q = self.core.run(B, spec, queue, resume=True)
            if done:
                cell = self._cell(T, st, path)
                cells.append(cell)
                if tr:
                    tr.note(f"List := {len(cells)} cell(s); added ({{{', '.join(g.to_str() for g in cell.basis) or '0'}}}, "
                            f"{_format_spec(cell.spec)})", name="List")
            else:
                stack.append((("resume", pend, T, st, Q, i, path), depth + 1))


def _walk_root(args):
    ring, division, use_criteria, root, top = args
    eng = CISEngine(ring, division, use_criteria)
    # Fresh triples must still sort after every inherited one.
    eng.core._seq = itertools.count(top + 1)
    cells = []
    eng._walk(root, True, [], cells)
    return cells, eng.stats


def cominvsys(F, division=None, use_criteria=True, tracer=None, stats=None, parallel=False):
    """Minimal comprehensive involutive system of ``<F>``.

    ``F`` is a list of parametric polynomials over one ring (x-ring whose
    coefficient ring is the parameter ring).  Returns the list of cells in
    emission order.  ``parallel`` (True or a worker count) hands the final
    seeding subtrees to worker processes; the result is the same.
    """
    F = list(F)
    if not F:
        return [Cell([], Specification())]
    engine = CISEngine(F[0].ring, division, use_criteria, tracer, stats)
    return engine.run(F, parallel)


# -- single-step entry points ---------------------------------------------------


def _engine_for(polys, division=None, use_criteria=True):
    ring = next(p.ring for p in polys if p is not None)
    return CISEngine(ring, division, use_criteria)


def head_normal_form(p, B, spec, division=None, use_criteria=True):
    """``(ok, h, spec')`` for the triple ``p`` modulo the triples ``B``."""
    eng = _engine_for([p.poly] + [t.poly for t in B], division, use_criteria)
    return eng.core.head_normal_form(p, list(B), spec)


def head_reduce(T, spec, Q, division=None, use_criteria=True):
    """``(ok, p, T, spec', Q')`` head-reducing the queue ``Q`` modulo ``T``."""
    eng = _engine_for([t.poly for t in list(T) + list(Q)], division, use_criteria)
    return eng.core.head_reduce(list(T), spec, list(Q))


def gbi_param(B, spec, P=(), division=None, use_criteria=True):
    """One parametric completion pass: ``(done, p, T, spec', P')``."""
    eng = _engine_for([t.poly for t in list(B) + list(P)], division, use_criteria)
    return eng.core.run(list(B), spec, list(P))
