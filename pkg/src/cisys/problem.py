"""Problem files and reports.

A problem file is line based; ``#`` starts a comment::

    params: a, b
    vars: x, y
    order_vars: lex x > y
    order_params: lex a > b
    division: janet
    generators:
      a*x^2
      b*y^2

``order_*`` take ``lex`` or ``degrevlex`` optionally followed by the
variables from most to least significant (``>``- or comma-separated).  When
omitted the declaration order is used.  ``division`` is ``janet`` or
``pair:<perm>:<lex|degrevlex>:<adm|inv>`` with a 1-based permutation such as
``pair:2,1:lex:adm``.  Generators are written with integers or rationals,
``+ - * / ^`` and parentheses; division is only by a nonzero constant.
"""

import ast
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .involution import DivisionSpec
from .polyalg import MonomialOrder, Poly, PolyRing

__all__ = [
    "ProblemError",
    "Problem",
    "parse_problem",
    "parse_order",
    "parse_division",
    "parse_poly",
    "render_problem",
    "report_dict",
    "report_json",
    "report_text",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
KEYS = ("params", "vars", "order_vars", "order_params", "division", "generators")


class ProblemError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.line, self.col = line, col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        super().__init__(where + msg)


@dataclass
class Problem:
    params: tuple
    vars: tuple
    order_vars: MonomialOrder
    order_params: MonomialOrder
    division: DivisionSpec
    generators: list = field(default_factory=list)

    @property
    def ring(self):
        return self.generators[0].ring if self.generators else make_ring(self)

    @property
    def param_ring(self):
        return self.ring.coeff


def make_ring(p):
    A = PolyRing(p.params, p.order_params) if p.params else None
    return PolyRing(p.vars, p.order_vars, coeff=A)


def _split_names(text):
    return [t for t in text.replace(">", ",").replace("[", " ").replace("]", " ").replace(",", " ").split()]


def parse_order(text, names, line=None):
    """``"lex"``, ``"degrevlex y > x"`` or ``"lex [y, x]"`` into a MonomialOrder."""
    parts = text.strip().split(None, 1)
    if not parts:
        return MonomialOrder("lex", len(names))
    kind = parts[0]
    if kind not in MonomialOrder.KINDS:
        raise ProblemError(f"unknown ordering {kind!r} (expected lex or degrevlex)", line)
    if len(parts) == 1:
        return MonomialOrder(kind, len(names))
    seq = _split_names(parts[1])
    if sorted(seq) != sorted(names) or len(set(seq)) != len(seq):
        raise ProblemError(f"ordering must list each of {', '.join(names)} exactly once", line)
    return MonomialOrder(kind, len(names), [names.index(v) for v in seq])


def parse_division(text, nvars, line=None):
    text = text.strip()
    if text in ("", "janet"):
        return DivisionSpec.janet(nvars)
    parts = text.split(":")
    if len(parts) != 4 or parts[0] != "pair":
        raise ProblemError(f"malformed division {text!r} (janet or pair:<perm>:<order>:<adm|inv>)", line)
    _, perm, kind, flag = parts
    try:
        rho = tuple(int(i) - 1 for i in perm.split(","))
    except ValueError:
        raise ProblemError(f"malformed permutation {perm!r}", line) from None
    if sorted(rho) != list(range(nvars)):
        raise ProblemError(f"{perm!r} is not a permutation of 1..{nvars}", line)
    if kind not in MonomialOrder.KINDS:
        raise ProblemError(f"unknown ordering {kind!r}", line)
    if flag not in ("adm", "inv"):
        raise ProblemError(f"flag must be adm or inv, got {flag!r}", line)
    return DivisionSpec(rho, MonomialOrder(kind, nvars, rho), flag == "inv")


# -- expressions -----------------------------------------------------------------


def _scope(ring):
    env = {n: ring.gen(n) for n in ring.names}
    if ring.coeff is not None:
        for n in ring.coeff.names:
            env[n] = ring.const(ring.coeff.gen(n))
    return env


def _constant_of(p):
    if not p.terms:
        return Fraction(0)
    if not p.is_constant():
        return None
    c = p.terms[0][1]
    if isinstance(c, Poly):
        return c.constant_value() if c.is_constant() else None
    return Fraction(c)


def _orig_col(text, pos):
    """Column in ``text`` of offset ``pos`` after rewriting ``^`` as ``**``."""
    shifted = 0
    for i, ch in enumerate(text):
        if shifted >= pos:
            return i
        shifted += 2 if ch == "^" else 1
    return len(text)


def parse_poly(text, ring, line=None, col0=0):
    """Parse one polynomial over ``ring`` (parameters allowed when it has a coefficient ring)."""
    src = text.replace("^", "**")
    lead = len(src) - len(src.lstrip())
    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError as exc:
        raise ProblemError(f"syntax error: {exc.msg}", line, col0 + _orig_col(text, lead + (exc.offset or 1) - 1) + 1) from None
    env = _scope(ring)

    def err(node, msg):
        raise ProblemError(msg, line, col0 + _orig_col(text, lead + getattr(node, "col_offset", 0)) + 1)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                err(node, f"unsupported literal {node.value!r}")
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in env:
                err(node, f"unknown name {node.id!r}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            op = node.op
            if isinstance(op, ast.Add):
                return left + right
            if isinstance(op, ast.Sub):
                return left - right
            if isinstance(op, ast.Mult):
                return left * right
            if isinstance(op, ast.Div):
                if isinstance(right, Poly):
                    right = _constant_of(right)
                    if right is None:
                        err(node, "division by a non-constant")
                if right == 0:
                    err(node, "division by zero")
                return left / right
            if isinstance(op, ast.Pow):
                if not isinstance(node.right, ast.Constant) or not isinstance(node.right.value, int) \
                        or node.right.value < 0:
                    err(node, "exponent must be a non-negative integer literal")
                return left ** node.right.value
        err(node, f"unsupported syntax {type(node).__name__}")

    value = ev(tree)
    return value if isinstance(value, Poly) else ring.const(value)


# -- problem files -----------------------------------------------------------------


def parse_problem(text):
    fields = {}
    gens = []
    in_gens = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if in_gens and body[:1].isspace():
            gens.append((lineno, body, 0))
            continue
        in_gens = False
        if ":" not in body:
            raise ProblemError("expected 'key: value'", lineno, 1)
        key, value = body.split(":", 1)
        key = key.strip()
        if key not in KEYS:
            raise ProblemError(f"unknown key {key!r}", lineno, 1)
        if key in fields:
            raise ProblemError(f"duplicate key {key!r}", lineno, 1)
        fields[key] = (lineno, value)
        if key == "generators":
            in_gens = True
            if value.strip():
                for item in value.split(";"):
                    if item.strip():
                        gens.append((lineno, item, len(body) - len(value) + value.index(item)))
    if "vars" not in fields:
        raise ProblemError("missing 'vars'")
    params = tuple(_split_names(fields.get("params", (None, ""))[1]))
    vars_ = tuple(_split_names(fields["vars"][1]))
    if not vars_:
        raise ProblemError("no variables declared", fields["vars"][0])
    names = params + vars_
    for n in names:
        if not n.isidentifier():
            raise ProblemError(f"bad name {n!r}")
    if len(set(names)) != len(names):
        raise ProblemError("names must be distinct across params and vars")
    ln, ov = fields.get("order_vars", (None, ""))
    order_vars = parse_order(ov, vars_, ln)
    ln, op = fields.get("order_params", (None, ""))
    order_params = parse_order(op, params, ln) if params else MonomialOrder("lex", 0)
    ln, dv = fields.get("division", (None, "janet"))
    division = parse_division(dv, len(vars_), ln)
    prob = Problem(params, vars_, order_vars, order_params, division, [])
    ring = make_ring(prob)
    prob.generators = [parse_poly(t, ring, ln, col) for ln, t, col in gens]
    return prob


def _order_str(order, names):
    seq = " > ".join(names[i] for i in order.perm)
    return f"{order.kind} {seq}" if seq else order.kind


def render_problem(p):
    lines = []
    if p.params:
        lines.append("params: " + ", ".join(p.params))
    lines.append("vars: " + ", ".join(p.vars))
    lines.append("order_vars: " + _order_str(p.order_vars, p.vars))
    if p.params:
        lines.append("order_params: " + _order_str(p.order_params, p.params))
    lines.append("division: " + p.division.describe())
    lines.append("generators:")
    lines.extend("  " + g.to_str() for g in p.generators)
    return "\n".join(lines) + "\n"


# -- reports -----------------------------------------------------------------------


def _cond(q):
    return q.primitive().to_str()


def cell_dict(cell):
    return {
        "basis": [g.to_str() for g in cell.basis] or ["0"],
        "null": [_cond(q) for q in reversed(cell.spec.null)],
        "nonnull": [_cond(q) for q in reversed(cell.spec.nonnull)],
    }


def report_dict(problem, cells, stats=None, extra=None):
    from . import __version__

    meta = {
        "params": list(problem.params),
        "vars": list(problem.vars),
        "order_vars": _order_str(problem.order_vars, problem.vars),
        "order_params": _order_str(problem.order_params, problem.params) if problem.params else "",
        "division": problem.division.describe(),
        "engine_version": __version__,
    }
    if stats is not None:
        meta["stats"] = {
            "branches": stats.branches,
            "reductions": stats.reductions,
            "criteria_hits": stats.criteria_hits,
            "prolongations": stats.prolongations,
        }
    out = {"schema_version": SCHEMA_VERSION, "cells": [cell_dict(c) for c in cells], "meta": meta}
    if extra:
        out.update(extra)
    return out


def report_json(report):
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def report_text(report):
    rows = [("basis", "null", "nonnull")]
    for c in report["cells"]:
        rows.append((
            "{" + ", ".join(c["basis"]) + "}",
            "{" + ", ".join(c["null"]) + "}",
            "{" + ", ".join(c["nonnull"]) + "}",
        ))
    widths = [max(len(r[k]) for r in rows) for k in range(3)]
    lines = ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
