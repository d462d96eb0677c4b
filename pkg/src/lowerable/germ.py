"""Multigerms and the vector-field modules attached to them.

Each branch is written in its own source chart centred at its point of S, so
a multigerm is just a list of polynomial maps ``(F^n, 0) -> (F^p, 0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import GermValidationError, PolyParseError
from .poly import Poly, parse_poly, render


@dataclass(frozen=True)
class Branch:
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValueError("a branch needs at least one component")
        n = self.components[0].nvars
        if any(c.nvars != n for c in self.components):
            raise ValueError("branch components live in different rings")
        for i, c in enumerate(self.components, start=1):
            if c.constant_term():
                raise ValueError(f"component {i} has a nonzero constant term")

    @property
    def n(self):
        return self.components[0].nvars

    @property
    def p(self):
        return len(self.components)

    def jacobian_column(self, i):
        """``(d f_1/d x_i, ..., d f_p/d x_i)``."""
        return tuple(c.partial(i) for c in self.components)


@dataclass(frozen=True)
class MultiGerm:
    n: int
    p: int
    branches: tuple

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        if self.n < 1 or self.p < 1 or not self.branches:
            raise ValueError("need n >= 1, p >= 1 and at least one branch")
        for k, b in enumerate(self.branches, start=1):
            if b.n != self.n or b.p != self.p:
                raise ValueError(f"branch {k} does not map F^{self.n} to F^{self.p}")

    @property
    def r(self):
        return len(self.branches)

    @classmethod
    def from_strings(cls, n, p, branches):
        return validate({"n": n, "p": p, "branches": branches})

    def to_strings(self):
        return [[render(c) for c in b.components] for b in self.branches]


class _SlotField:
    """Per-branch tuples of polynomials; base of the three field types."""

    __slots__ = ("slots",)
    width_attr = "p"

    def __init__(self, slots):
        self.slots = tuple(tuple(s) for s in slots)

    @classmethod
    def zero(cls, r, width, nvars):
        return cls(tuple(tuple(Poly.zero(nvars) for _ in range(width)) for _ in range(r)))

    @property
    def r(self):
        return len(self.slots)

    def __eq__(self, other):
        return type(other) is type(self) and self.slots == other.slots

    def __hash__(self):
        return hash((type(self).__name__, self.slots))

    def _zip(self, other, op):
        if type(other) is not type(self) or len(other.slots) != len(self.slots):
            raise ValueError("field shape mismatch")
        return type(self)(
            tuple(op(a, b) for a, b in zip(sa, sb))
            for sa, sb in zip(self.slots, other.slots)
        )

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def scale(self, c):
        c = Fraction(c)
        return type(self)(tuple(a.scale(c) for a in s) for s in self.slots)

    def mul_slotwise(self, factors: Sequence[Poly], order=None):
        """Multiply slot k by ``factors[k]`` (the action of a function on S)."""
        return type(self)(
            tuple(a.mul(g, order) for a in s) for s, g in zip(self.slots, factors)
        )

    def truncated(self, order):
        return type(self)(tuple(a.truncated(order) for a in s) for s in self.slots)

    def is_zero(self):
        return all(a.is_zero() for s in self.slots for a in s)

    def degree(self):
        return max((a.degree() for s in self.slots for a in s), default=-1)

    def to_strings(self):
        return [[render(a) for a in s] for s in self.slots]

    def __repr__(self):
        return f"{type(self).__name__}({self.to_strings()})"


class FieldAlongGerm(_SlotField):
    """Element of theta(f): slot k holds p source polynomials of branch k."""


class SourceField(_SlotField):
    """Element of theta_S(n): slot k holds n source polynomials of branch k."""

    def render_slot(self, k):
        parts = []
        for i, a in enumerate(self.slots[k], start=1):
            if a.is_zero():
                continue
            coeff = render(a)
            if coeff == "1":
                parts.append(f"d/dx{i}")
            elif len(a) == 1 and not coeff.startswith("-"):
                parts.append(f"{coeff} d/dx{i}")
            else:
                parts.append(f"({coeff}) d/dx{i}")
        return " + ".join(parts) if parts else "0"

    def render(self):
        return [self.render_slot(k) for k in range(self.r)]


class TargetField:
    """Element of theta_0(p): p polynomials in the target variables."""

    __slots__ = ("components",)

    def __init__(self, components):
        self.components = tuple(components)
        if not self.components:
            raise ValueError("empty target field")

    @classmethod
    def basis(cls, p, alpha, i):
        """The field ``X^alpha e_i`` (``i`` 1-based)."""
        return cls(
            Poly.monomial(alpha) if c == i else Poly.zero(p) for c in range(1, p + 1)
        )

    def __eq__(self, other):
        return isinstance(other, TargetField) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"TargetField({[render(c, 'X') for c in self.components]})"


def validate(raw) -> MultiGerm:
    """Build a MultiGerm from ``{"n", "p", "branches"}``, collecting every violation.

    Branch components may be strings (parsed with prefix ``x``) or Polys.
    """
    violations = []
    try:
        n = int(raw["n"])
        p = int(raw["p"])
        branches = raw["branches"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GermValidationError([f"malformed germ description: {exc}"]) from None
    if n < 1:
        violations.append("n must be a positive integer")
    if p < 1:
        violations.append("p must be a positive integer")
    if not isinstance(branches, (list, tuple)) or not branches:
        violations.append("at least one branch is required")
    if violations:
        raise GermValidationError(violations)

    built = []
    for k, comps in enumerate(branches, start=1):
        if not isinstance(comps, (list, tuple)):
            violations.append(f"branch {k}: expected a list of {p} components")
            continue
        if len(comps) != p:
            violations.append(f"branch {k} has {len(comps)} components, expected {p}")
            continue
        polys = []
        for i, c in enumerate(comps, start=1):
            where = f"branch {k} component {i}"
            if isinstance(c, Poly):
                poly = c
                if poly.nvars != n:
                    violations.append(f"{where}: polynomial in {poly.nvars} variables, expected {n}")
                    continue
            elif isinstance(c, str):
                try:
                    poly = parse_poly(c, n, "x")
                except PolyParseError as exc:
                    violations.append(f"{where}: {exc}")
                    continue
            else:
                violations.append(f"{where}: expected a polynomial string")
                continue
            if poly.constant_term():
                violations.append(f"nonzero constant term in {where}")
                continue
            polys.append(poly)
        if len(polys) == p:
            built.append(Branch(tuple(polys)))
    if violations:
        raise GermValidationError(violations)
    return MultiGerm(n, p, tuple(built))


def tf_apply(f: MultiGerm, xi: SourceField) -> FieldAlongGerm:
    """``df o xi``: slot k is the Jacobian of ``f_k`` applied to slot k of ``xi``."""
    if xi.r != f.r or any(len(s) != f.n for s in xi.slots):
        raise ValueError("source field does not match the germ")
    slots = []
    for b, s in zip(f.branches, xi.slots):
        comps = [Poly.zero(f.n) for _ in range(f.p)]
        for j, g in enumerate(s, start=1):
            if g.is_zero():
                continue
            for i, d in enumerate(b.jacobian_column(j)):
                comps[i] = comps[i] + d.mul(g)
        slots.append(tuple(comps))
    return FieldAlongGerm(slots)


def wf_apply(f: MultiGerm, eta: TargetField, order=None) -> FieldAlongGerm:
    """``eta o f``: the same target field composed into every branch."""
    if len(eta.components) != f.p or any(c.nvars != f.p for c in eta.components):
        raise ValueError("target field does not match the germ")
    return FieldAlongGerm(
        tuple(c.compose(b.components, order) for c in eta.components)
        for b in f.branches
    )
