"""Polynomial syntax and problem-spec documents.

Polynomials: integer or ``p/q`` coefficients, named variables, ``^`` for
powers, ``*`` for products, ``+``/``-``, and parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import yaml

from .errors import ChowBetaError
from .exact_algebra import HomogeneousIdeal, Polynomial


class SpecError(ChowBetaError, ValueError):
    """Problem-spec parse or validation failure; carries a location."""

    def __init__(self, message, key=None, line=None, column=None):
        self.key = key
        self.line = line
        self.column = column
        loc = []
        if key is not None:
            loc.append(f"key {key!r}")
        if line is not None:
            loc.append(f"line {line}")
        if column is not None:
            loc.append(f"column {column}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*\*|[*+\-()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise SpecError(f"unexpected character {text[col - 1]!r}", column=col)
        num, name, op = m.groups()
        start = m.start(m.lastindex) + 1
        if num is not None:
            out.append(("num", num, start))
        elif name is not None:
            out.append(("name", name, start))
        else:
            out.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    out.append(("end", None, len(text) + 1))
    return out


class _Parser:
    def __init__(self, text: str, names: list):
        self.toks = _tokenize(text)
        self.i = 0
        self.names = {n: k for k, n in enumerate(names)}
        self.n = len(names)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, val, col = self.peek()
        if kind != "end":
            raise SpecError(f"unexpected token {val!r}", column=col)
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        kind, val, col = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            f = self.factor()
            return -f if val == "-" else f
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, col = self.take()
            if kind != "num" or "/" in val:
                raise SpecError("exponent must be a non-negative integer", column=col)
            base = base ** int(val)
        return base

    def atom(self) -> Polynomial:
        kind, val, col = self.take()
        if kind == "num":
            return Polynomial.constant(self.n, Fraction(val))
        if kind == "name":
            if val not in self.names:
                raise SpecError(f"unknown variable {val!r}", column=col)
            return Polynomial.variable(self.n, self.names[val])
        if kind == "op" and val == "(":
            p = self.expr()
            kind, val2, col2 = self.take()
            if val2 != ")":
                raise SpecError("expected ')'", column=col2)
            return p
        raise SpecError(f"unexpected token {val!r}" if val else "unexpected end of input", column=col)


def parse_polynomial(text: str, names: list) -> Polynomial:
    return _Parser(str(text), list(names)).parse()


def parse_ideal(gens: list, names: list, key: str) -> HomogeneousIdeal:
    polys = []
    for i, g in enumerate(gens or []):
        try:
            p = parse_polynomial(g, names)
        except SpecError as e:
            raise SpecError(f"cannot parse generator {g!r}: {e.args[0]}", key=f"{key}[{i}]",
                            column=e.column) from None
        if p.is_zero():
            continue
        if not p.is_homogeneous():
            raise SpecError(f"generator {g!r} is not homogeneous", key=f"{key}[{i}]")
        polys.append(p)
    return HomogeneousIdeal(len(names), tuple(polys))


DEFAULT_PARAMS = {"m_range": (1, 8), "M": 6, "N": 32, "tol": 0.02}


@dataclass
class ProblemSpec:
    ring: list
    variety: list
    subscheme: list
    flag: Any = None
    params: dict = field(default_factory=dict)
    name: str = ""

    def param(self, key, default=None):
        return self.params.get(key, DEFAULT_PARAMS.get(key, default))

    # -- builders --------------------------------------------------------
    def variety_spec(self):
        from .filtration import VarietySpec

        return VarietySpec(parse_ideal(self.variety, self.ring, "variety"), self.params.get("dim"))

    def subscheme_spec(self):
        from .filtration import SubschemeSpec

        if not self.subscheme:
            raise SpecError("this command needs a subscheme", key="subscheme")
        return SubschemeSpec(parse_ideal(self.subscheme, self.ring, "subscheme"))

    def flag_spec(self):
        from .filtration import SubschemeSpec
        from .okounkov import AdmissibleFlag, standard_flag

        X = self.variety_spec()
        if self.flag in (None, "standard"):
            d = X.dimension()
            if d == 1:
                return standard_flag(X, self.subscheme_spec())
            return standard_flag(X)
        stages = tuple(SubschemeSpec(parse_ideal(st, self.ring, f"flag[{i}]"))
                       for i, st in enumerate(self.flag))
        return AdmissibleFlag(X, stages)


def _mark_of(node_map, key):
    node = node_map.get(key)
    if node is None:
        return None, None
    return node.start_mark.line + 1, node.start_mark.column + 1


def parse_m_range(value) -> tuple:
    if isinstance(value, str):
        m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", value)
        if not m:
            raise SpecError(f"m_range must look like a..b, got {value!r}", key="m_range")
        lo, hi = int(m.group(1)), int(m.group(2))
    else:
        try:
            lo, hi = (int(x) for x in value)
        except (TypeError, ValueError):
            raise SpecError(f"m_range must be two integers, got {value!r}", key="m_range") from None
    if lo < 1 or hi < lo:
        raise SpecError(f"m_range must satisfy 1 <= a <= b, got {lo}..{hi}", key="m_range")
    return lo, hi


def parse_spec(text: str, name: str = "") -> ProblemSpec:
    """Parse and validate a YAML problem document."""
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise SpecError(f"malformed document: {getattr(e, 'problem', e)}",
                        line=mark.line + 1 if mark else None,
                        column=mark.column + 1 if mark else None) from None
    if not isinstance(data, dict):
        raise SpecError("document must be a mapping with keys ring, variety, subscheme, flag, params")
    nodes = {k.value: v for k, v in root.value} if root is not None else {}
    allowed = {"ring", "variety", "subscheme", "flag", "params", "name"}
    for k in data:
        if k not in allowed:
            line, col = _mark_of(nodes, k)
            raise SpecError(f"unknown key {k!r}", key=k, line=line, column=col)
    ring = data.get("ring")
    if not isinstance(ring, list) or not ring or not all(isinstance(v, str) for v in ring):
        line, col = _mark_of(nodes, "ring")
        raise SpecError("ring must be a non-empty list of variable names", key="ring", line=line, column=col)
    if len(set(ring)) != len(ring):
        raise SpecError("duplicate variable names", key="ring")
    for key in ("variety", "subscheme"):
        v = data.get(key) or []
        if not isinstance(v, list):
            line, col = _mark_of(nodes, key)
            raise SpecError(f"{key} must be a list of polynomial strings", key=key, line=line, column=col)
        try:
            parse_ideal(v, ring, key)
        except SpecError as e:
            line, _ = _mark_of(nodes, key)
            raise SpecError(e.args[0], key=e.key, line=line, column=e.column) from None
    params = dict(data.get("params") or {})
    if "m_range" in params:
        params["m_range"] = parse_m_range(params["m_range"])
    for key in ("M", "N"):
        if key in params and (not isinstance(params[key], int) or params[key] < 1):
            raise SpecError(f"{key} must be a positive integer", key=f"params.{key}")
    if "tol" in params:
        try:
            params["tol"] = float(params["tol"])
        except (TypeError, ValueError):
            raise SpecError("tol must be a number", key="params.tol") from None
        if params["tol"] <= 0:
            raise SpecError("tol must be positive", key="params.tol")
    flag = data.get("flag")
    if flag is not None and flag != "standard":
        if not isinstance(flag, list) or not all(isinstance(s, list) for s in flag):
            raise SpecError("flag must be 'standard' or a list of generator lists", key="flag")
        for i, st in enumerate(flag):
            parse_ideal(st, ring, f"flag[{i}]")
    return ProblemSpec(ring=list(ring), variety=list(data.get("variety") or []),
                       subscheme=list(data.get("subscheme") or []), flag=flag, params=params,
                       name=str(data.get("name") or name))
