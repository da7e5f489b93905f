"""Polynomials in the ray variables with rational coefficients.

A :class:`ChowClass` is the monomial presentation of an element of the
Stanley-Reisner ring tensored with Q.  The class itself does not know about a
fan; reduction modulo the fan's ideals lives in :mod:`artin_toric.chow`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from .linalg import format_rational

Exponent = tuple[int, ...]


class ClassParseError(ValueError):
    pass


class ChowClass:
    """Finitely supported map from exponent vectors to nonzero rationals."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | Iterable = ()):
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Exponent, Fraction] = {}
        for exp, coeff in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {nvars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = clean.get(exp, Fraction(0)) + Fraction(coeff)
            if c:
                clean[exp] = c
            else:
                clean.pop(exp, None)
        self._terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def one(cls, nvars):
        return cls(nvars, {(0,) * nvars: 1})

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i, coeff=1):
        if not 0 <= i < nvars:
            raise IndexError(f"variable x{i} out of range for {nvars} rays")
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): coeff})

    @classmethod
    def monomial(cls, exponent, coeff=1):
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: coeff})

    # mapping-like access

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def coefficient(self, exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    # arithmetic

    def _check(self, other):
        if not isinstance(other, ChowClass):
            other = ChowClass.constant(self.nvars, other)
        if other.nvars != self.nvars:
            raise ValueError(f"classes live in different rings ({self.nvars} vs {other.nvars} variables)")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return ChowClass(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ChowClass(self.nvars, {e: c * other for e, c in self._terms.items()})
        other = self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return ChowClass(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = ChowClass.one(self.nvars)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, ChowClass):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == ChowClass.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # grading

    def degrees(self) -> set[int]:
        return {sum(e) for e in self._terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = self.degrees()
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return degree is None or degs == {degree}

    def graded_part(self, degree: int) -> "ChowClass":
        return ChowClass(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == degree})

    def is_squarefree(self) -> bool:
        return all(max(e, default=0) <= 1 for e in self._terms)

    # text

    def __str__(self):
        return format_class(self)

    def __repr__(self):
        return f"ChowClass({self.nvars}, {format_class(self)!r})"


def _monomial_text(exp) -> str:
    parts = []
    for i, e in enumerate(exp):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def format_class(cls: ChowClass) -> str:
    """Render in the CLI class grammar, terms in descending graded-lex order."""
    if not cls:
        return "0"
    order = sorted(cls.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))
    out = []
    for k, (exp, c) in enumerate(order):
        mono = _monomial_text(exp)
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x(?P<idx>\d+))|(?P<op>[-+*^()]))")


class _Parser:
    def __init__(self, text, nvars):
        self.text = text
        self.nvars = nvars
        self.tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m or m.end() == pos:
                raise ClassParseError(f"unexpected character at position {pos} in {text!r}")
            if m.group("num"):
                self.tokens.append(("num", Fraction(m.group("num"))))
            elif m.group("var"):
                self.tokens.append(("var", int(m.group("idx"))))
            else:
                self.tokens.append(("op", m.group("op")))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ClassParseError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        if not self.tokens:
            raise ClassParseError("empty class expression")
        result = self.sum()
        if self.i != len(self.tokens):
            raise ClassParseError(f"trailing input in {self.text!r}")
        return result

    def sum(self):
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        total = self.product() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                term = self.product()
                total = total + term if val == "+" else total - term
            else:
                return total

    def product(self):
        result = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.power()
            else:
                return result

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, exp = self.take()
            if kind != "num" or exp.denominator != 1:
                raise ClassParseError(f"exponent must be a nonnegative integer in {self.text!r}")
            return base ** int(exp)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return ChowClass.constant(self.nvars, val)
        if kind == "var":
            if val >= self.nvars:
                raise ClassParseError(f"x{val} does not name a ray (fan has {self.nvars} rays)")
            return ChowClass.variable(self.nvars, val)
        if kind == "op" and val == "(":
            inner = self.sum()
            self.expect_op(")")
            return inner
        if kind == "op" and val == "-":
            return -self.power()
        raise ClassParseError(f"unexpected token in {self.text!r}")


def parse_class(text: str, nvars: int) -> ChowClass:
    """Parse e.g. ``"-4/7*x0*x3 - 3/7*x0*x4"`` over ``nvars`` ray variables.

    Parentheses are accepted as a convenience on top of the plain sum-of-terms
    grammar.
    """
    return _Parser(text, nvars).parse()
