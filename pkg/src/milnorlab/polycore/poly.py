"""Exact sparse multivariate polynomials over Q.

A :class:`Polynomial` is an ordered variable list plus a map from exponent
tuples to nonzero :class:`~fractions.Fraction` coefficients.  Terms are kept
in descending graded-lexicographic order so that iteration, printing and
hashing are deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from ..errors import (
    InputError,
    ParseError,
    UnknownVariableError,
    VariableMismatchError,
)

Exponent = tuple[int, ...]

MAX_EXPONENT = 2**31
MAX_VARIABLES = 8


def _grlex_key(e: Exponent):
    return (sum(e), e)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"polynomial coefficients must be rational, got {type(c).__name__}")


class Polynomial:
    """Immutable polynomial with rational coefficients.

    >>> p = parse_polynomial("x^3 + y^2", ["x", "y"])
    >>> dict(p.terms)
    {(3, 0): Fraction(3, 1)...}  # doctest: +SKIP
    """

    __slots__ = ("_variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        variables = tuple(variables)
        if not variables:
            raise InputError("a polynomial needs at least one variable")
        if len(set(variables)) != len(variables):
            raise InputError(f"duplicate variable names in {variables}")
        n = len(variables)
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != n:
                raise InputError(f"exponent {e} does not match {n} variables")
            if any(v < 0 for v in e):
                raise InputError(f"negative exponent in {e}")
            c = _as_fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        ordered = sorted((e for e, c in clean.items() if c), key=_grlex_key, reverse=True)
        self._variables = variables
        self._terms = {e: clean[e] for e in ordered}
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables, {})

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariableError(f"unknown variable {name!r}; expected one of {variables}")
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): 1})

    @classmethod
    def monomial(cls, variables: Sequence[str], exponent: Exponent, coeff=1) -> "Polynomial":
        return cls(variables, {tuple(exponent): coeff})

    # -- accessors ----------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return self._variables

    @property
    def nvars(self) -> int:
        return len(self._variables)

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    def support(self) -> list[Exponent]:
        return list(self._terms)

    def coefficient(self, e: Exponent) -> Fraction:
        return self._terms.get(tuple(e), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = self._index(var)
        return max((e[i] for e in self._terms), default=-1)

    def monomial_content(self) -> Exponent:
        """Largest monomial dividing every term (componentwise min exponent)."""
        if not self._terms:
            return (0,) * self.nvars
        return tuple(min(e[i] for e in self._terms) for i in range(self.nvars))

    def divide_monomial(self, m: Exponent) -> "Polynomial":
        out = {}
        for e, c in self._terms.items():
            q = tuple(a - b for a, b in zip(e, m))
            if any(v < 0 for v in q):
                raise ValueError(f"monomial {m} does not divide term {e}")
            out[q] = c
        return Polynomial(self._variables, out)

    def _index(self, var: str) -> int:
        try:
            return self._variables.index(var)
        except ValueError:
            raise UnknownVariableError(
                f"unknown variable {var!r}; expected one of {self._variables}"
            ) from None

    def _check_ring(self, other: "Polynomial") -> None:
        if self._variables != other._variables:
            raise VariableMismatchError(
                f"variable lists differ: {self._variables} vs {other._variables}"
            )

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self._variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self._variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self._variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self._variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self._variables, {e: c * other for e, c in self._terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self._variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self._variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self._variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._variables == other._variables and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._variables, tuple(self._terms.items())))
        return self._hash

    def diff(self, var: str) -> "Polynomial":
        i = self._index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return Polynomial(self._variables, out)

    def restrict(self, keep: Iterable[Exponent]) -> "Polynomial":
        """Sub-polynomial made of the terms whose exponents are in ``keep``."""
        keep = set(keep)
        return Polynomial(self._variables, {e: c for e, c in self._terms.items() if e in keep})

    def __call__(self, *point):
        return evaluate_complex(self, point)

    # -- printing ------------------------------------------------------

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r}, {list(self._variables)!r})"


def _format_monomial(variables: Sequence[str], e: Exponent) -> str:
    parts = []
    for v, k in zip(variables, e):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    """Canonical text form, re-parseable by :func:`parse_polynomial`."""
    if p.is_zero():
        return "0"
    chunks = []
    for idx, (e, c) in enumerate(p.terms.items()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = _format_monomial(p.variables, e)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if idx == 0:
            chunks.append(body if sign == "+" else f"-{body}")
        else:
            chunks.append(f" {sign} {body}")
    return "".join(chunks)


# ---------------------------------------------------------------------------
# parsing


_PUNCT = set("+-*/^()")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", text[i:j], i))
            i = j
        elif ch.isascii() and ch.isalpha():
            j = i
            while j < n and text[j].isascii() and text[j].isalnum():
                j += 1
            tokens.append(("id", text[i:j], i))
            i = j
        elif ch in _PUNCT:
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", text, i)
    tokens.append(("end", "", n))
    return tokens


def _split_identifier(name: str, variables: Sequence[str]) -> list[str] | None:
    """Split a juxtaposed identifier such as ``xy`` into known variables."""
    if name == "":
        return []
    for v in sorted(variables, key=len, reverse=True):
        if name.startswith(v):
            rest = _split_identifier(name[len(v):], variables)
            if rest is not None:
                return [v] + rest
    return None


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {kind!r}, found {found!r}", self.text, tok[2])
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", self.text, 0)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return p

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        p = self.term() * sign
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            p = p + t if op == "+" else p - t
        return p

    def _starts_factor(self) -> bool:
        return self.peek()[0] in ("num", "id", "(")

    def term(self) -> Polynomial:
        p = self.factor()
        while True:
            if self.peek()[0] == "*":
                self.take()
                p = p * self.factor()
            elif self._starts_factor():
                p = p * self.factor()
            else:
                return p

    def factor(self) -> Polynomial:
        b = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                raise ParseError("exponent must be an unsigned integer", self.text, tok[2])
            self.take()
            k = int(tok[1])
            if k > MAX_EXPONENT:
                raise ParseError(f"exponent {k} exceeds 2^31", self.text, tok[2])
            b = b**k
        return b

    def base(self) -> Polynomial:
        tok = self.peek()
        kind = tok[0]
        if kind == "num":
            self.take()
            value = Fraction(int(tok[1]))
            if self.peek()[0] == "/":
                self.take()
                den = self.peek()
                if den[0] != "num":
                    raise ParseError("expected an unsigned integer denominator", self.text, den[2])
                self.take()
                if int(den[1]) == 0:
                    raise ParseError("zero denominator", self.text, den[2])
                value = value / int(den[1])
            return Polynomial.constant(self.variables, value)
        if kind == "id":
            self.take()
            name = tok[1]
            names = [name] if name in self.variables else _split_identifier(name, self.variables)
            if not names:
                raise UnknownVariableError(
                    f"unknown variable {name!r} at position {tok[2]}; "
                    f"expected one of {list(self.variables)}"
                )
            out = Polynomial.constant(self.variables, 1)
            for v in names:
                out = out * Polynomial.variable(self.variables, v)
            return out
        if kind == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        found = tok[1] or "end of input"
        raise ParseError(f"unexpected {found!r}", self.text, tok[2])


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` into an expanded polynomial in ``variables``.

    Accepts ``+ - * ^``, parentheses, rationals ``p/q`` and implicit
    multiplication (``2xy`` means ``2*x*y``).
    """
    variables = tuple(variables)
    if not variables:
        raise InputError("variable list is empty")
    if len(variables) > MAX_VARIABLES:
        raise InputError(f"at most {MAX_VARIABLES} variables are supported")
    for v in variables:
        if not (v and v[0].isascii() and v[0].isalpha() and v.isascii() and v.isalnum()):
            raise InputError(f"invalid variable name {v!r}")
    return _Parser(text, variables).parse()


def differentiate(p: Polynomial, var: str) -> Polynomial:
    return p.diff(var)


def arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def evaluate_complex(p: Polynomial, point: Sequence[complex]) -> complex:
    """Evaluate ``p`` at a complex point, Horner-style in the last variable.

    Terms are grouped by their leading exponents and the innermost variable is
    folded with Horner's rule; that keeps the operation count linear in the
    number of terms.
    """
    point = [complex(z) for z in point]
    if len(point) != p.nvars:
        raise InputError(f"point has {len(point)} coordinates, polynomial has {p.nvars} variables")
    groups: dict[Exponent, dict[int, complex]] = {}
    for e, c in p.terms.items():
        groups.setdefault(e[:-1], {})[e[-1]] = complex(c)
    z_last = point[-1]
    total = 0j
    for head, row in groups.items():
        acc = 0j
        for k in range(max(row), -1, -1):
            acc = acc * z_last + row.get(k, 0j)
        for z, k in zip(point[:-1], head):
            if k:
                acc *= z**k
        total += acc
    return total
