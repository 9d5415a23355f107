"""Exact sparse polynomial arithmetic over the rationals.

A polynomial is a finite map from monomials to nonzero rational
coefficients.  Indeterminates come in three kinds: the distinguished
``lambda`` used for characteristic polynomials, the companion variables
``x1, x2, ...``, and free named parameters such as ``a`` or ``a44``.
Monomials never store zero exponents and polynomials never store zero
coefficients, so two polynomials are equal exactly when their term maps
are equal (canonical form is unique, equality is structural).

All values are immutable and safe to share between threads.

The module also hosts the recursive-descent parser for the entry
expression language used in matrix files; see :func:`parse_expr` for the
grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import ExprError, VariableIndexError

# Arbitrary-precision rational scalar type used throughout the package.
Rational = Fraction

#: Marker returned by :meth:`Polynomial.lambda_degree` for the zero polynomial.
MINUS_INF = float("-inf")

_KIND_RANK = {"lambda": 0, "x": 1, "param": 2}
_PARAM_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_RESERVED_RE = re.compile(r"(?:x[0-9]+|lambda)\Z")


@dataclass(frozen=True)
class Indet:
    """A single indeterminate: ``lambda``, ``x<k>``, or a named parameter."""

    kind: str
    index: int = 0
    name: str = ""

    def sort_key(self):
        return (_KIND_RANK[self.kind], self.index, self.name)

    def __lt__(self, other: "Indet"):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if self.kind == "lambda":
            return "lambda"
        if self.kind == "x":
            return f"x{self.index}"
        return self.name


LAM_INDET = Indet("lambda")


def x_indet(k: int) -> Indet:
    if k < 1:
        raise ValueError(f"companion variable index must be >= 1, got {k}")
    return Indet("x", index=int(k))


def param_indet(name: str) -> Indet:
    if not _PARAM_NAME_RE.match(name):
        raise ValueError(f"invalid parameter name {name!r}")
    if _RESERVED_RE.match(name):
        raise ValueError(f"parameter name {name!r} is reserved")
    return Indet("param", name=name)


# A monomial is a tuple of (Indet, exponent) pairs, sorted by the indet
# sort key, with all exponents positive.  The empty tuple is the constant
# monomial.
Monomial = tuple

_EMPTY_MONO: Monomial = ()


def mono_make(pairs: Iterable[tuple[Indet, int]]) -> Monomial:
    acc: dict[Indet, int] = {}
    for ind, exp in pairs:
        if exp:
            acc[ind] = acc.get(ind, 0) + int(exp)
    items = [(ind, e) for ind, e in acc.items() if e != 0]
    for _, e in items:
        if e < 0:
            raise ValueError("negative exponent in monomial")
    items.sort(key=lambda it: it[0].sort_key())
    return tuple(items)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return mono_make(list(a) + list(b))


def _mono_lambda_exp(mono: Monomial) -> int:
    for ind, exp in mono:
        if ind.kind == "lambda":
            return exp
    return 0


def _mono_pretty_key(mono: Monomial):
    """Rendering order: lambda-degree first, then x-indices, then names."""
    lam = 0
    xs = []
    ps = []
    for ind, exp in mono:
        if ind.kind == "lambda":
            lam = exp
        elif ind.kind == "x":
            xs.append((ind.index, exp))
        else:
            ps.append((ind.name, exp))
    return (lam, tuple(xs), tuple(ps))


class Polynomial:
    """An immutable multivariate polynomial with Fraction coefficients.

    Supports ``+ - *`` (also against ints and Fractions), integer powers,
    structural equality and hashing.  Construction canonicalizes: zero
    coefficients are dropped and monomials are normalized, so equal values
    always have identical term maps.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                c = Fraction(coeff)
                if c == 0:
                    continue
                m = mono_make(mono)
                c = clean.get(m, Fraction(0)) + c
                if c == 0:
                    clean.pop(m, None)
                else:
                    clean[m] = c
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        obj = object.__new__(cls)
        obj._terms = terms
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._raw({})

    @classmethod
    def one(cls) -> "Polynomial":
        return cls.const(1)

    @classmethod
    def const(cls, value) -> "Polynomial":
        c = Fraction(value)
        if c == 0:
            return cls._raw({})
        return cls._raw({_EMPTY_MONO: c})

    @classmethod
    def from_indet(cls, ind: Indet) -> "Polynomial":
        return cls._raw({((ind, 1),): Fraction(1)})

    # -- basic queries -----------------------------------------------------

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def term_count(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _EMPTY_MONO in self._terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return self._terms[_EMPTY_MONO]

    def indets(self) -> set[Indet]:
        out: set[Indet] = set()
        for mono in self._terms:
            for ind, _ in mono:
                out.add(ind)
        return out

    def has_x(self) -> bool:
        return any(ind.kind == "x" for ind in self.indets())

    def has_lambda(self) -> bool:
        return any(ind.kind == "lambda" for ind in self.indets())

    def param_names(self) -> set[str]:
        return {ind.name for ind in self.indets() if ind.kind == "param"}

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(value) -> "Polynomial | None":
        if isinstance(value, Polynomial):
            return value
        if isinstance(value, (int, Fraction)):
            return Polynomial.const(value)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            c = out.get(mono, Fraction(0)) + coeff
            if c == 0:
                out.pop(mono, None)
            else:
                out[mono] = c
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self._terms or not other._terms:
            return Polynomial._raw({})
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                c = out.get(m, Fraction(0)) + c1 * c2
                if c == 0:
                    out.pop(m, None)
                else:
                    out[m] = c
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative polynomial powers are not defined")
        result = Polynomial.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- lambda-directed views ---------------------------------------------

    def lambda_coeff(self, degree: int) -> "Polynomial":
        """Coefficient of ``lambda**degree``, a polynomial free of lambda."""
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            if _mono_lambda_exp(mono) != degree:
                continue
            rest = tuple(p for p in mono if p[0].kind != "lambda")
            out[rest] = coeff
        return Polynomial._raw(out)

    def lambda_degree(self):
        """Highest lambda exponent, or :data:`MINUS_INF` for the zero polynomial."""
        if not self._terms:
            return MINUS_INF
        return max(_mono_lambda_exp(m) for m in self._terms)

    def substitute(self, bindings: Mapping[Indet, "Polynomial | Fraction | int"]) -> "Polynomial":
        """Simultaneous substitution; bindings may be partial."""
        coerced = {ind: Polynomial._coerce(val) for ind, val in bindings.items()}
        if any(v is None for v in coerced.values()):
            raise TypeError("bindings must map to Polynomial, Fraction or int")
        result = Polynomial.zero()
        for mono, coeff in self._terms.items():
            term = Polynomial.const(coeff)
            for ind, exp in mono:
                repl = coerced.get(ind)
                if repl is None:
                    term = term * Polynomial._raw({((ind, exp),): Fraction(1)})
                else:
                    term = term * repl ** exp
            result = result + term
        return result

    def split_by_parameters(self) -> dict[Monomial, "Polynomial"]:
        """Group terms by their lambda/x part.

        Returns a map from each lambda/x monomial to the parameter-only
        polynomial multiplying it.  Used to turn a symbolic residual into
        the list of parameter conditions that must vanish.
        """
        groups: dict[Monomial, dict[Monomial, Fraction]] = {}
        for mono, coeff in self._terms.items():
            main = tuple(p for p in mono if p[0].kind != "param")
            rest = tuple(p for p in mono if p[0].kind == "param")
            groups.setdefault(main, {})[rest] = coeff
        return {main: Polynomial._raw(terms) for main, terms in groups.items()}

    # -- normal forms --------------------------------------------------------

    def leading_term(self) -> tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self._terms, key=_mono_pretty_key)
        return mono, self._terms[mono]

    def monic_normal(self) -> "Polynomial":
        """Scale so the leading coefficient (in rendering order) is one."""
        if not self._terms:
            return self
        _, lead = self.leading_term()
        if lead == 1:
            return self
        return Polynomial._raw({m: c / lead for m, c in self._terms.items()})

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        """Exact polynomial division; raises ValueError if not divisible.

        Uses leading-term elimination under the lexicographic order on
        exponent vectors (lambda, then x variables, then parameters), which
        is compatible with multiplication, so the leading exponent strictly
        decreases and the loop terminates.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if divisor.is_constant():
            inv = 1 / divisor.constant_value()
            return Polynomial._raw({m: c * inv for m, c in self._terms.items()})
        indets = sorted(self.indets() | divisor.indets(), key=Indet.sort_key)
        pos = {ind: i for i, ind in enumerate(indets)}

        def vec(mono: Monomial) -> tuple[int, ...]:
            v = [0] * len(indets)
            for ind, exp in mono:
                v[pos[ind]] = exp
            return tuple(v)

        lead_d = max(divisor._terms, key=vec)
        lead_d_vec = vec(lead_d)
        lead_d_coeff = divisor._terms[lead_d]
        rem = dict(self._terms)
        quo: dict[Monomial, Fraction] = {}
        while rem:
            lead_r = max(rem, key=vec)
            diff = [a - b for a, b in zip(vec(lead_r), lead_d_vec)]
            if any(d < 0 for d in diff):
                raise ValueError("polynomials are not exactly divisible")
            qmono = mono_make((ind, d) for ind, d in zip(indets, diff))
            qcoeff = rem[lead_r] / lead_d_coeff
            quo[qmono] = quo.get(qmono, Fraction(0)) + qcoeff
            for m, c in divisor._terms.items():
                mm = _mono_mul(qmono, m)
                cc = rem.get(mm, Fraction(0)) - qcoeff * c
                if cc == 0:
                    rem.pop(mm, None)
                else:
                    rem[mm] = cc
        return Polynomial({m: c for m, c in quo.items()})

    # -- rendering -----------------------------------------------------------

    def render(self, compact: bool = False) -> str:
        """Canonical, reparseable rendering.

        Terms are listed in ascending lambda degree (then x indices, then
        parameter names), matching the orientation used in reports.
        """
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for mono, coeff in sorted(self._terms.items(), key=lambda it: _mono_pretty_key(it[0])):
            mag = abs(coeff)
            factors = []
            for ind, exp in mono:
                factors.append(str(ind) if exp == 1 else f"{ind}^{exp}")
            mono_s = "*".join(factors)
            if mono_s and mag == 1:
                body = mono_s
            elif mono_s:
                body = f"{mag}*{mono_s}"
            else:
                body = str(mag)
            if not pieces:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                sign = "-" if coeff < 0 else "+"
                pieces.append(f"{sign}{body}" if compact else f" {sign} {body}")
        return "".join(pieces)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Polynomial({self.render()})"


LAM = Polynomial.from_indet(LAM_INDET)


def xvar(k: int) -> Polynomial:
    return Polynomial.from_indet(x_indet(k))


def par(name: str) -> Polynomial:
    return Polynomial.from_indet(param_indet(name))


def lam_power(degree: int) -> Polynomial:
    if degree == 0:
        return Polynomial.one()
    return Polynomial._raw({((LAM_INDET, degree),): Fraction(1)})


# ---------------------------------------------------------------------------
# Entry expression parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<num>[0-9]+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()])"
)

_X_IDENT_RE = re.compile(r"x([0-9]+)\Z")


class _Token:
    __slots__ = ("kind", "value", "pos")

    def __init__(self, kind, value, pos):
        self.kind = kind
        self.value = value
        self.pos = pos


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup == "num":
            tokens.append(_Token("num", int(m.group("num")), pos))
        elif m.lastgroup == "ident":
            tokens.append(_Token("ident", m.group("ident"), pos))
        elif m.lastgroup == "op":
            tokens.append(_Token(m.group("op"), m.group("op"), pos))
        pos = m.end()
    tokens.append(_Token("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser for entry expressions.

    Grammar::

        expr     := term (("+" | "-") term)*
        term     := factor ("*"? factor)*
        factor   := "-" factor | atom ("^" uint)?
        atom     := rational | ident | "(" expr ")"
        rational := uint ("/" uint)?

    Implicit multiplication (omitting ``*``) is only allowed between a
    leading rational literal and an identifier, as in ``2a`` or ``5/2x3``.
    The identifier ``lambda`` is the distinguished indeterminate, ``x<k>``
    is the k-th companion variable (bounds-checked against the order), and
    any other identifier is a free parameter.
    """

    def __init__(self, text: str, n: int):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExprError(f"expected {kind!r}, found {tok.kind!r}", tok.pos)
        return self.advance()

    def parse(self) -> Polynomial:
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExprError(f"unexpected token {tok.kind!r}", tok.pos)
        return value

    def expr(self) -> Polynomial:
        value = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Polynomial:
        value, leading_rational = self.factor()
        nfactors = 1
        while True:
            tok = self.peek()
            if tok.kind == "*":
                self.advance()
                rhs, _ = self.factor()
                value = value * rhs
                nfactors += 1
            elif tok.kind in ("num", "ident", "("):
                if not (nfactors == 1 and leading_rational and tok.kind == "ident"):
                    raise ExprError(
                        "implicit multiplication is only allowed between a "
                        "leading rational and an identifier",
                        tok.pos,
                    )
                rhs, _ = self.factor()
                value = value * rhs
                nfactors += 1
            else:
                break
        return value

    def factor(self) -> tuple[Polynomial, bool]:
        tok = self.peek()
        if tok.kind == "-":
            self.advance()
            value, was_rational = self.factor()
            return -value, was_rational
        value, was_rational = self.atom()
        if self.peek().kind == "^":
            self.advance()
            exp = self.expect("num").value
            value = value ** exp
        return value, was_rational

    def atom(self) -> tuple[Polynomial, bool]:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            numerator = tok.value
            if self.peek().kind == "/":
                self.advance()
                den_tok = self.expect("num")
                if den_tok.value == 0:
                    raise ExprError("zero denominator", den_tok.pos)
                return Polynomial.const(Fraction(numerator, den_tok.value)), True
            return Polynomial.const(numerator), True
        if tok.kind == "ident":
            self.advance()
            return self._ident_poly(tok), False
        if tok.kind == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value, False
        raise ExprError(f"unexpected token {tok.kind!r}", tok.pos)

    def _ident_poly(self, tok: _Token) -> Polynomial:
        name = tok.value
        if name == "lambda":
            return LAM
        m = _X_IDENT_RE.match(name)
        if m:
            k = int(m.group(1))
            if k == 0 or k > self.n:
                raise VariableIndexError(
                    f"variable index out of range: x{k} with order {self.n}", tok.pos
                )
            return xvar(k)
        return par(name)


def parse_expr(text: str, n: int) -> Polynomial:
    """Parse an entry expression against an order-``n`` variable alphabet."""
    return _Parser(text, n).parse()
