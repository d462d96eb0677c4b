"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Poly` is an immutable map from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients.  Variables are numbered from 1 in
the text syntax (``x1, x2, ...``) and from 0 internally.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import PolyParseError

Monomial = tuple  # tuple[int, ...] of exponents


def degree(mono: Monomial) -> int:
    return sum(mono)


def grlex_key(mono: Monomial):
    """Ascending graded-lex key; within a degree ``x1^d`` comes first."""
    return (sum(mono), tuple(-e for e in mono))


def monomials_of_degree(nvars: int, deg: int) -> list[Monomial]:
    """All exponent tuples of total degree ``deg``, in graded-lex order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), deg):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return out


def monomials_below(nvars: int, order: int) -> list[Monomial]:
    """All exponent tuples of total degree < ``order``, in graded-lex order."""
    out = []
    for deg in range(order):
        out.extend(monomials_of_degree(nvars, deg))
    return out


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Immutable sparse polynomial over the rationals in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping | Iterable = ()):
        if nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for mono, coeff in items:
            mono = tuple(mono)
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for {nvars} variables")
            c = clean.get(mono, 0) + Fraction(coeff)
            if c:
                clean[mono] = c
            else:
                clean.pop(mono, None)
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        # terms already canonical: no zero coefficients, Fraction values
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars, c=1):
        c = Fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, nvars):
        return cls.constant(nvars, 1)

    @classmethod
    def var(cls, nvars, index):
        """The coordinate function ``x_index`` (1-based)."""
        if not 1 <= index <= nvars:
            raise IndexError(f"variable index {index} out of range 1..{nvars}")
        e = [0] * nvars
        e[index - 1] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, mono, coeff=1):
        mono = tuple(mono)
        coeff = Fraction(coeff)
        return cls._raw(len(mono), {mono: coeff} if coeff else {})

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def order(self) -> int | None:
        """Lowest total degree of a term, or ``None`` for zero."""
        return min((sum(m) for m in self._terms), default=None)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def coeff(self, mono) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def sorted_terms(self, descending=False):
        key = grlex_key
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=descending)

    def _check(self, other):
        if not isinstance(other, Poly):
            return Poly.constant(self.nvars, other)
        if other.nvars != self.nvars:
            raise ValueError(
                f"variable-count mismatch: {self.nvars} vs {other.nvars}"
            )
        return other

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __add__(self, other):
        other = self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                del out[m]
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.mul(other)

    __rmul__ = __mul__

    def mul(self, other: Poly, order: int | None = None) -> Poly:
        """Product, discarding terms of total degree >= ``order`` when given."""
        other = self._check(other)
        out: dict = {}
        for m1, c1 in self._terms.items():
            d1 = sum(m1)
            for m2, c2 in other._terms.items():
                if order is not None and d1 + sum(m2) >= order:
                    continue
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(self.nvars, out)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> Poly:
        c = Fraction(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly._raw(self.nvars, {m: v * c for m, v in self._terms.items()})

    def mul_monomial(self, mono: Monomial, order: int | None = None) -> Poly:
        dm = sum(mono)
        out = {}
        for m, c in self._terms.items():
            if order is not None and sum(m) + dm >= order:
                continue
            out[_mono_mul(m, mono)] = c
        return Poly._raw(self.nvars, out)

    def partial(self, i: int) -> Poly:
        """Formal partial derivative with respect to ``x_i`` (1-based)."""
        if not 1 <= i <= self.nvars:
            raise IndexError(f"variable index {i} out of range 1..{self.nvars}")
        k = i - 1
        out = {}
        for m, c in self._terms.items():
            e = m[k]
            if e:
                nm = m[:k] + (e - 1,) + m[k + 1:]
                out[nm] = c * e
        return Poly._raw(self.nvars, out)

    def truncated(self, order: int) -> Poly:
        """Drop every term of total degree >= ``order``."""
        return Poly._raw(
            self.nvars, {m: c for m, c in self._terms.items() if sum(m) < order}
        )

    def compose(self, subs: Sequence[Poly], order: int | None = None) -> Poly:
        """Substitute ``subs[i]`` for variable ``i+1``."""
        if len(subs) != self.nvars:
            raise ValueError(
                f"arity mismatch: {self.nvars} variables, {len(subs)} substitutions"
            )
        if not subs:
            raise ValueError("nothing to substitute")
        n = subs[0].nvars
        if any(s.nvars != n for s in subs):
            raise ValueError("substitutions live in different rings")
        powers: list[dict[int, Poly]] = [{0: Poly.one(n)} for _ in subs]

        def power(v, e):
            cache = powers[v]
            if e not in cache:
                cache[e] = power(v, e - 1).mul(subs[v], order)
            return cache[e]

        result = Poly.zero(n)
        for mono, c in self._terms.items():
            term = Poly.constant(n, c)
            for v, e in enumerate(mono):
                if e:
                    term = term.mul(power(v, e), order)
            result = result + term
        return result

    def render(self, prefix: str = "x") -> str:
        return render(self, prefix)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Poly({self.nvars}, {render(self)!r})"


def _render_monomial(mono, prefix):
    parts = []
    for v, e in enumerate(mono, start=1):
        if e == 1:
            parts.append(f"{prefix}{v}")
        elif e > 1:
            parts.append(f"{prefix}{v}^{e}")
    return " ".join(parts)


def render(a: Poly, prefix: str = "x") -> str:
    """Canonical text: terms by descending graded-lex, unit coefficients implicit."""
    if a.is_zero():
        return "0"
    out = []
    for idx, (mono, c) in enumerate(a.sorted_terms(descending=True)):
        mon = _render_monomial(mono, prefix)
        mag = abs(c)
        if not mon:
            body = str(mag)
        elif mag == 1:
            body = mon
        else:
            body = f"{mag} {mon}"
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


# -- parsing ----------------------------------------------------------------

def _tokenize(text: str, prefix: str):
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), i))
            i = j
        elif text.startswith(prefix, i) and prefix:
            j = i + len(prefix)
            k = j
            while k < n and text[k].isspace():
                k += 1
            m = k
            while m < n and text[m].isdigit():
                m += 1
            if m == k:
                raise PolyParseError(f"expected variable index after {prefix!r}", text, j)
            toks.append(("var", int(text[k:m]), i))
            i = m
        elif ch in "+-*/^":
            toks.append((ch, None, i))
            i += 1
        else:
            raise PolyParseError(f"unexpected character {ch!r}", text, i)
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text, nvars, prefix):
        self.text = text
        self.nvars = nvars
        self.toks = _tokenize(text, prefix)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return PolyParseError(msg, self.text, tok[2])

    def parse(self) -> Poly:
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        result = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            result = result + t if op == "+" else result - t
        if self.peek()[0] != "end":
            raise self.error("unexpected token")
        return result

    def term(self) -> Poly:
        start = self.peek()
        coeff = Fraction(1)
        seen = False
        if self.peek()[0] == "int":
            num = self.take()[1]
            coeff = Fraction(num)
            if self.peek()[0] == "/":
                self.take()
                den_tok = self.peek()
                if den_tok[0] != "int":
                    raise self.error("expected denominator")
                self.take()
                if den_tok[1] == 0:
                    raise self.error("zero denominator", den_tok)
                coeff = Fraction(num, den_tok[1])
            seen = True
        if self.peek()[0] == "*":
            self.take()
        exps = [0] * self.nvars
        while self.peek()[0] == "var":
            tok = self.take()
            idx = tok[1]
            if not 1 <= idx <= self.nvars:
                raise self.error(
                    f"variable index {idx} out of range 1..{self.nvars}", tok
                )
            e = 1
            if self.peek()[0] == "^":
                self.take()
                if self.peek()[0] != "int":
                    raise self.error("expected exponent")
                e = self.take()[1]
            exps[idx - 1] += e
            seen = True
        if not seen:
            raise self.error("expected a term", start)
        return Poly.monomial(tuple(exps), coeff)


def parse_poly(text: str, var_count: int, var_prefix: str = "x") -> Poly:
    """Parse ``text`` under the polynomial grammar into a Poly in ``var_count`` variables.

    >>> render(parse_poly("3/2 x1 x2 - x2^3", 2))
    '3/2 x1 x2 - x2^3'
    """
    if var_count < 1:
        raise ValueError("var_count must be positive")
    return _Parser(text, var_count, var_prefix).parse()


def arith(a: Poly, b: Poly, op: str) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a.mul(b)
    raise ValueError(f"unknown operation {op!r}")


def scale(a: Poly, c) -> Poly:
    return a.scale(c)


def compose(psi: Poly, components: Sequence[Poly], order: int | None = None) -> Poly:
    """``psi`` evaluated at ``components`` (the pullback ``psi o f_k``)."""
    return psi.compose(components, order)


def partial(a: Poly, i: int) -> Poly:
    return a.partial(i)


class Jet:
    """A polynomial taken modulo ``m^order``; high-degree terms vanish on construction."""

    __slots__ = ("poly", "order")

    def __init__(self, poly: Poly, order: int):
        if order < 1:
            raise ValueError("jet order must be positive")
        self.poly = poly.truncated(order)
        self.order = order

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return self.order == other.order and self.poly == other.poly

    def __hash__(self):
        return hash((self.poly, self.order))

    def __mul__(self, other):
        if not isinstance(other, Jet) or other.order != self.order:
            raise ValueError("jets of different orders")
        return Jet(self.poly.mul(other.poly, self.order), self.order)

    def __add__(self, other):
        if not isinstance(other, Jet) or other.order != self.order:
            raise ValueError("jets of different orders")
        return Jet(self.poly + other.poly, self.order)

    def __repr__(self):
        return f"Jet({render(self.poly)!r}, order={self.order})"


def truncate(a: Poly, order: int) -> Jet:
    return Jet(a, order)
