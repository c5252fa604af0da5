"""Exact polynomial arithmetic over Q and Q[a].

A :class:`PolyRing` fixes variable names, a monomial ordering and the
coefficient domain: ``coeff=None`` means the rationals, otherwise another
:class:`PolyRing` (the parameter ring).  A parametric polynomial in
``Q[a][x]`` is therefore a :class:`Poly` over an x-ring whose coefficients
are :class:`Poly` objects over the a-ring.

Polynomials are immutable.  Terms are stored as a tuple of
``(exponent, coefficient)`` pairs sorted in descending monomial order, so
the leading data is the first entry.
"""

from fractions import Fraction
from math import gcd
from numbers import Rational

__all__ = [
    "LT",
    "EQ",
    "GT",
    "MonomialOrder",
    "EliminationOrder",
    "compare",
    "compare_elim",
    "monomial_quotient",
    "mono_mul",
    "mono_lcm",
    "mono_divides",
    "mono_degree",
    "PolyRing",
    "Poly",
    "divide",
    "reduce_by_set",
    "format_rational",
]

LT, EQ, GT = -1, 0, 1


# -- monomials ----------------------------------------------------------------


def mono_mul(m1, m2):
    return tuple(a + b for a, b in zip(m1, m2))


def mono_lcm(m1, m2):
    return tuple(a if a > b else b for a, b in zip(m1, m2))


def mono_divides(m1, m2):
    """True when ``m1`` divides ``m2``."""
    return all(a <= b for a, b in zip(m1, m2))


def mono_degree(m):
    return sum(m)


def monomial_quotient(m1, m2):
    """Return ``m1 / m2`` when ``m2`` divides ``m1``, else ``None``."""
    if len(m1) != len(m2):
        raise ValueError(f"dimension mismatch: {len(m1)} vs {len(m2)}")
    out = []
    for a, b in zip(m1, m2):
        if b > a:
            return None
        out.append(a - b)
    return tuple(out)


# -- orderings ----------------------------------------------------------------


class MonomialOrder:
    """Lex or degrevlex with a variable precedence permutation.

    ``perm`` lists variable indices from most to least significant, so
    ``perm=(1, 0)`` makes the second variable dominate.  Comparison goes
    through :meth:`key`, a tuple that sorts ascending with the ordering.
    """

    KINDS = ("lex", "degrevlex")

    def __init__(self, kind, nvars, perm=None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial ordering {kind!r}")
        perm = tuple(range(nvars)) if perm is None else tuple(int(i) for i in perm)
        if sorted(perm) != list(range(nvars)):
            raise ValueError(f"{perm} is not a permutation of 0..{nvars - 1}")
        self.kind = kind
        self.nvars = nvars
        self.perm = perm
        self._cache = {}
        self._rev = tuple(reversed(perm))

    def key(self, m):
        k = self._cache.get(m)
        if k is None:
            if len(m) != self.nvars:
                raise ValueError(f"dimension mismatch: monomial of length {len(m)} in a ring of {self.nvars}")
            if self.kind == "lex":
                k = tuple(m[i] for i in self.perm)
            else:
                k = (sum(m),) + tuple(-m[i] for i in self._rev)
            self._cache[m] = k
        return k

    def extended(self, extra=1):
        """Same ordering with ``extra`` fresh variables appended last."""
        n = self.nvars + extra
        return MonomialOrder(self.kind, n, self.perm + tuple(range(self.nvars, n)))

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and (self.kind, self.nvars, self.perm) == (other.kind, other.nvars, other.perm)
        )

    def __hash__(self):
        return hash((self.kind, self.nvars, self.perm))

    def __repr__(self):
        return f"MonomialOrder({self.kind!r}, {self.nvars}, perm={self.perm})"


def compare(m1, m2, order):
    """Three-way comparison of two exponent tuples: LT, EQ or GT."""
    if len(m1) != len(m2):
        raise ValueError(f"dimension mismatch: {len(m1)} vs {len(m2)}")
    k1, k2 = order.key(m1), order.key(m2)
    return (k1 > k2) - (k1 < k2)


class EliminationOrder:
    """Block ordering on (x-part, a-part): x decides, a breaks ties."""

    def __init__(self, var_order, param_order):
        self.var_order = var_order
        self.param_order = param_order

    def key(self, pair):
        xe, ae = pair
        return (self.var_order.key(xe), self.param_order.key(ae))


def compare_elim(p1, p2, order):
    k1, k2 = order.key(p1), order.key(p2)
    return (k1 > k2) - (k1 < k2)


# -- rings and polynomials ------------------------------------------------------


def format_rational(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class PolyRing:
    """Polynomial ring over Q (``coeff=None``) or over another PolyRing."""

    def __init__(self, names, order="lex", coeff=None):
        self.names = tuple(names)
        self.nvars = len(self.names)
        if isinstance(order, str):
            order = MonomialOrder(order, self.nvars)
        if order.nvars != self.nvars:
            raise ValueError("ordering dimension does not match the ring")
        self.order = order
        self.coeff = coeff
        self.one_exp = (0,) * self.nvars

    # coefficient domain helpers
    def czero(self):
        return Fraction(0) if self.coeff is None else self.coeff.zero

    def cone(self):
        return Fraction(1) if self.coeff is None else self.coeff.one

    def coerce_coeff(self, c):
        if self.coeff is None:
            if isinstance(c, Poly):
                if c.is_constant():
                    return c.constant_value()
                raise TypeError("parametric coefficient in a ring over Q")
            return Fraction(c)
        if isinstance(c, Poly):
            if c.ring != self.coeff:
                raise ValueError("coefficient from a different ring")
            return c
        return self.coeff.const(c)

    @property
    def zero(self):
        return Poly(self, ())

    @property
    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.coerce_coeff(c)
        return Poly(self, ((self.one_exp, c),) if c else ())

    def gen(self, name):
        i = self.names.index(name) if isinstance(name, str) else name
        e = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Poly(self, ((e, self.cone()),))

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exp, coeff=1):
        c = self.coerce_coeff(coeff)
        return Poly(self, ((tuple(exp), c),) if c else ())

    def from_dict(self, d):
        return Poly.from_dict(self, d)

    def sort_key(self, m):
        return self.order.key(m)

    def with_order(self, order):
        return PolyRing(self.names, order, self.coeff)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.order == other.order
            and self.coeff == other.coeff
        )

    def __hash__(self):
        return hash((self.names, self.order, self.coeff))

    def __repr__(self):
        base = "QQ" if self.coeff is None else repr(self.coeff)
        return f"{base}[{', '.join(self.names)}]"


class Poly:
    """Immutable sparse polynomial with terms sorted in descending order."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_dict(cls, ring, d):
        key = ring.order.key
        items = sorted(((e, c if isinstance(c, Poly) else Fraction(c)) for e, c in d.items() if c),
                       key=lambda t: key(t[0]), reverse=True)
        return cls(ring, tuple(items))

    # -- leading data

    def __bool__(self):
        return bool(self.terms)

    def _require(self):
        if not self.terms:
            raise ValueError("no leading term: zero polynomial")

    @property
    def lm(self):
        self._require()
        return self.terms[0][0]

    @property
    def lc(self):
        self._require()
        return self.terms[0][1]

    @property
    def lt(self):
        self._require()
        return Poly(self.ring, self.terms[:1])

    def leading_data(self):
        self._require()
        return self.lm, self.lc, self.lt

    def tail(self):
        return Poly(self.ring, self.terms[1:])

    def monomials(self):
        return [e for e, _ in self.terms]

    def coefficients(self):
        return [c for _, c in self.terms]

    def coeff_of(self, exp):
        for e, c in self.terms:
            if e == exp:
                return c
        return self.ring.czero()

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == self.ring.one_exp)

    def constant_value(self):
        if not self.terms:
            return self.ring.czero()
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.terms[0][1]

    def degree(self, i=None):
        if not self.terms:
            return -1
        if i is None:
            return max(sum(e) for e, _ in self.terms)
        return max(e[i] for e, _ in self.terms)

    def variables(self):
        """Indices of variables that occur."""
        used = set()
        for e, _ in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return sorted(used)

    # -- arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly) and other.ring == self.ring:
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        d = dict(self.terms)
        for e, c in other.terms:
            d[e] = d[e] + c if e in d else c
        return Poly.from_dict(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Poly) and other.ring == self.ring:
            if not self.terms or not other.terms:
                return self.ring.zero
            if len(other.terms) == 1:
                (e, c), = other.terms
                return self.mul_term(e, c)
            d = {}
            for e1, c1 in self.terms:
                for e2, c2 in other.terms:
                    e = mono_mul(e1, e2)
                    c = c1 * c2
                    d[e] = d[e] + c if e in d else c
            return Poly.from_dict(self.ring, d)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c):
        c = self.ring.coerce_coeff(c)
        if not c:
            return self.ring.zero
        if self.ring.coeff is None:
            return Poly(self.ring, tuple((e, k * c) for e, k in self.terms))
        return Poly.from_dict(self.ring, {e: k * c for e, k in self.terms})

    def mul_term(self, exp, c):
        """Multiply by the term ``c * x^exp``; ordering is preserved."""
        if not c:
            return self.ring.zero
        if self.ring.coeff is None:
            return Poly(self.ring, tuple((mono_mul(e, exp), k * c) for e, k in self.terms))
        out = []
        for e, k in self.terms:
            kc = k * c
            if kc:
                out.append((mono_mul(e, exp), kc))
        return Poly(self.ring, tuple(out))

    def mul_monomial(self, exp):
        return Poly(self.ring, tuple((mono_mul(e, exp), k) for e, k in self.terms))

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, c):
        if isinstance(c, Poly):
            return self.exact_div(c)
        c = Fraction(c)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self.scale(1 / c)

    def exact_div(self, other):
        """Quotient of exact division; raises ValueError on a nonzero remainder."""
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        (q,), r = divide(self, [other])
        if r:
            raise ValueError("inexact division")
        return q

    def monic(self):
        if not self.terms:
            return self
        lc = self.lc
        if self.ring.coeff is None:
            if lc == 1:
                return self
            inv = 1 / lc
            return Poly(self.ring, tuple((e, c * inv) for e, c in self.terms))
        raise TypeError("monic() needs field coefficients")

    def primitive(self):
        """Scale by a rational so all coefficients are coprime integers and the
        leading rational coefficient is positive."""
        if not self.terms:
            return self
        flat = [c for _, _, c in self.flat_terms()]
        den = 1
        for c in flat:
            den = den * c.denominator // gcd(den, c.denominator)
        num = 0
        for c in flat:
            num = gcd(num, (c * den).numerator)
        factor = Fraction(den, num)
        if flat[0] < 0:
            factor = -factor
        if factor == 1:
            return self
        return self.scale(factor)

    def diff(self, i):
        d = {}
        for e, c in self.terms:
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                d[ne] = c * e[i]
        return Poly.from_dict(self.ring, d)

    def evaluate(self, point):
        """Value at ``point`` (sequence of rationals, one per variable)."""
        total = Fraction(0)
        for e, c in self.terms:
            v = Fraction(c)
            for x, k in zip(point, e):
                if k:
                    v *= Fraction(x) ** k
            total += v
        return total

    def map_coeffs(self, fn, ring=None):
        ring = ring or self.ring
        d = {}
        for e, c in self.terms:
            v = fn(c)
            if v:
                d[e] = v
        return Poly.from_dict(ring, d)

    def reorder(self, ring):
        """Same terms viewed in ``ring`` (same names, possibly another ordering)."""
        return Poly.from_dict(ring, dict(self.terms))

    # -- comparison and display

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def flat_terms(self):
        """Terms as ``(x_exp, a_exp, rational)`` in elimination order."""
        if self.ring.coeff is None:
            return [(e, (), c) for e, c in self.terms]
        return [(e, ae, ac) for e, c in self.terms for ae, ac in c.terms]

    def to_str(self):
        if not self.terms:
            return "0"
        xnames = self.ring.names
        anames = self.ring.coeff.names if self.ring.coeff is not None else ()
        parts = []
        for xe, ae, c in self.flat_terms():
            factors = [_mono_str(anames, ae), _mono_str(xnames, xe)]
            factors = [f for f in factors if f]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not factors:
                body = format_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_rational(mag)] + factors)
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()!r})"


def _mono_str(names, e):
    out = []
    for name, k in zip(names, e):
        if k == 1:
            out.append(name)
        elif k > 1:
            out.append(f"{name}^{k}")
    return "*".join(out)


def divide(f, G):
    """Multivariate division of ``f`` by the list ``G`` over a field.

    Returns ``(quotients, remainder)`` with ``f == sum(q*g) + remainder`` and
    no remainder monomial divisible by any leading monomial of ``G``.
    """
    ring = f.ring
    if ring.coeff is not None:
        raise TypeError("divide() needs field coefficients")
    G = list(G)
    if any(not g for g in G):
        raise ValueError("division by the zero polynomial")
    leads = [(g.lm, g.lc) for g in G]
    quots = [dict() for _ in G]
    rem = {}
    p = f
    while p.terms:
        lm, lc = p.terms[0]
        for i, (glm, glc) in enumerate(leads):
            q = monomial_quotient(lm, glm)
            if q is not None:
                c = lc / glc
                quots[i][q] = quots[i].get(q, 0) + c
                p = p - G[i].mul_term(q, c)
                break
        else:
            rem[lm] = lc
            p = Poly(ring, p.terms[1:])
    return [Poly.from_dict(ring, q) for q in quots], Poly.from_dict(ring, rem)


def reduce_by_set(f, G):
    """Remainder of the multivariate division of ``f`` by ``G``."""
    G = [g for g in G if g]
    if not G:
        return f
    return divide(f, G)[1]
