"""Exact linear algebra over Q on jet spaces of fields along a multigerm.

Vectors are sparse ``{index: Fraction}`` maps over a :class:`JetBasis`.  A
:class:`Subspace` keeps its basis in reduced row echelon form, pivoting on the
lowest column index, so equal subspaces compare equal row by row.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .germ import FieldAlongGerm
from .poly import Poly, monomials_below


class JetBasis:
    """Coordinates on ``theta(f) / m^order theta(f)``.

    Index order is branch-major, then component, then graded-lex monomial.
    """

    def __init__(self, n, p, r, order):
        if min(n, p, r, order) < 1:
            raise ValueError("n, p, r and order must be positive")
        self.n, self.p, self.r, self.order = n, p, r, order
        self.monomials = monomials_below(n, order)
        self._mono_index = {m: i for i, m in enumerate(self.monomials)}
        self.block = len(self.monomials)
        self.dim = r * p * self.block

    @classmethod
    def scalar(cls, n, order):
        return cls(n, 1, 1, order)

    @classmethod
    def for_germ(cls, f, order):
        return cls(f.n, f.p, f.r, order)

    def _key(self):
        return (self.n, self.p, self.r, self.order)

    def __eq__(self, other):
        return isinstance(other, JetBasis) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "JetBasis(n={}, p={}, r={}, order={})".format(*self._key())

    def index(self, k, i, mono):
        """Coordinate of ``x^mono e_i`` in slot ``k`` (all 0-based)."""
        return (k * self.p + i) * self.block + self._mono_index[tuple(mono)]

    def entry(self, idx):
        """Inverse of :meth:`index`: ``(k, i, mono)``."""
        ki, m = divmod(idx, self.block)
        k, i = divmod(ki, self.p)
        return k, i, self.monomials[m]

    def degree_of(self, idx):
        return sum(self.monomials[idx % self.block])


class JetVector:
    __slots__ = ("basis", "coords")

    def __init__(self, basis: JetBasis, coords=None):
        self.basis = basis
        clean = {}
        for idx, c in (coords or {}).items():
            if not 0 <= idx < basis.dim:
                raise IndexError(f"coordinate {idx} outside jet space of dim {basis.dim}")
            c = Fraction(c)
            if c:
                clean[idx] = c
        self.coords = clean

    @classmethod
    def _raw(cls, basis, coords):
        v = cls.__new__(cls)
        v.basis = basis
        v.coords = coords
        return v

    @classmethod
    def unit(cls, basis, idx):
        return cls(basis, {idx: 1})

    def is_zero(self):
        return not self.coords

    def __eq__(self, other):
        return (
            isinstance(other, JetVector)
            and self.basis == other.basis
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.basis, frozenset(self.coords.items())))

    def dense(self):
        out = [Fraction(0)] * self.basis.dim
        for i, c in self.coords.items():
            out[i] = c
        return out

    def to_field(self) -> FieldAlongGerm:
        b = self.basis
        slots = [[{} for _ in range(b.p)] for _ in range(b.r)]
        for idx, c in self.coords.items():
            k, i, mono = b.entry(idx)
            slots[k][i][mono] = c
        return FieldAlongGerm(tuple(Poly(b.n, t) for t in s) for s in slots)

    def __repr__(self):
        return f"JetVector({self.to_field().to_strings()}, order={self.basis.order})"


def project(v: FieldAlongGerm, basis: JetBasis) -> JetVector:
    """Coefficients of ``v`` below degree ``basis.order``."""
    if v.r != basis.r or any(len(s) != basis.p for s in v.slots):
        raise ValueError("field does not match the jet basis")
    coords = {}
    for k, slot in enumerate(v.slots):
        for i, a in enumerate(slot):
            if a.nvars != basis.n:
                raise ValueError("field does not match the jet basis")
            for mono, c in a.terms.items():
                if sum(mono) < basis.order:
                    coords[basis.index(k, i, mono)] = c
    return JetVector._raw(basis, coords)


def vector_from_slot(basis: JetBasis, k: int, i: int, a: Poly) -> JetVector:
    """Project the field with ``a`` in slot k component i and zero elsewhere."""
    coords = {}
    for mono, c in a.terms.items():
        if sum(mono) < basis.order:
            coords[basis.index(k, i, mono)] = c
    return JetVector._raw(basis, coords)


# -- echelon engine ---------------------------------------------------------

def _axpy(target: dict, factor, row: dict, heap=None):
    """``target -= factor * row`` in place; new columns are pushed on ``heap``."""
    for col, val in row.items():
        s = target.get(col)
        if s is None:
            target[col] = -factor * val
            if heap is not None:
                heapq.heappush(heap, col)
        else:
            s -= factor * val
            if s:
                target[col] = s
            else:
                del target[col]


class Echelon:
    """Incremental row echelon form with optional combination tracking.

    Each stored row has its pivot (lowest column) equal to 1.  When tracking is
    on, every row also records the combination of inserted vectors it equals.
    """

    def __init__(self, track=False):
        self.rows: dict[int, dict] = {}
        self.track = track
        self.combos: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, coords: dict, combo: dict | None = None):
        v = dict(coords)
        heap = list(v)
        heapq.heapify(heap)
        rows = self.rows
        while heap:
            col = heapq.heappop(heap)
            c = v.get(col)
            if c is None or col not in rows:
                continue
            _axpy(v, c, rows[col], heap)
            if combo is not None:
                _axpy(combo, c, self.combos[col])
        return v

    def insert(self, coords: dict, tag=None):
        """Add a vector; returns ``None`` if independent, else its dependency.

        With tracking, the dependency is the combination (over tags) that is
        zero; without tracking it is just ``True``.
        """
        combo = {tag: Fraction(1)} if self.track else None
        v = self.reduce(coords, combo)
        if not v:
            return combo if self.track else True
        pivot = min(v)
        inv = 1 / v[pivot]
        row = {c: x * inv for c, x in v.items()}
        self.rows[pivot] = row
        if self.track:
            self.combos[pivot] = {t: x * inv for t, x in combo.items()}
        return None

    def contains(self, coords: dict) -> bool:
        return not self.reduce(coords)

    def reduced_rows(self):
        """Rows in reduced echelon form, sorted by pivot."""
        done: dict[int, dict] = {}
        for pivot in sorted(self.rows, reverse=True):
            row = dict(self.rows[pivot])
            for col in [c for c in row if c != pivot and c in done]:
                x = row.get(col)
                if x:
                    _axpy(row, x, done[col])
            done[pivot] = row
        return [done[p] for p in sorted(done)]


class Subspace:
    """Finite-dimensional subspace of a jet space in canonical RREF."""

    def __init__(self, basis: JetBasis, rows: Sequence[dict]):
        self.basis = basis
        self.rows = tuple(JetVector._raw(basis, r) for r in rows)
        self.pivots = tuple(min(r) for r in rows)
        self._ech = None

    @classmethod
    def zero(cls, basis):
        return cls(basis, [])

    @classmethod
    def full(cls, basis):
        return cls(basis, [{i: Fraction(1)} for i in range(basis.dim)])

    @property
    def rank(self):
        return len(self.rows)

    dim = rank

    def echelon(self) -> Echelon:
        if self._ech is None:
            e = Echelon()
            for p, r in zip(self.pivots, self.rows):
                e.rows[p] = r.coords
            self._ech = e
        return self._ech

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.basis == other.basis
            and [r.coords for r in self.rows] == [r.coords for r in other.rows]
        )

    def __repr__(self):
        return f"Subspace(rank={self.rank}, {self.basis!r})"


def _check_basis(basis, vectors):
    for v in vectors:
        if v.basis != basis:
            raise ValueError("basis mismatch")


def span(vs: Iterable[JetVector], basis: JetBasis | None = None) -> Subspace:
    vs = list(vs)
    if basis is None:
        if not vs:
            raise ValueError("span of an empty list needs an explicit basis")
        basis = vs[0].basis
    _check_basis(basis, vs)
    e = Echelon()
    for v in vs:
        e.insert(v.coords)
    return Subspace(basis, e.reduced_rows())


def span_coords(basis: JetBasis, coord_maps: Iterable[dict]) -> Subspace:
    e = Echelon()
    for c in coord_maps:
        if c:
            e.insert(c)
    return Subspace(basis, e.reduced_rows())


def member(v: JetVector, U: Subspace) -> bool:
    _check_basis(U.basis, [v])
    return U.echelon().contains(v.coords)


def contains(A: Subspace, B: Subspace) -> bool:
    """True iff B is a subspace of A."""
    if A.basis != B.basis:
        raise ValueError("basis mismatch")
    ech = A.echelon()
    return all(ech.contains(r.coords) for r in B.rows)


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    if A.basis != B.basis:
        raise ValueError("basis mismatch")
    return span(list(A.rows) + list(B.rows), A.basis)


def solve_membership_combination(gens: Sequence[JetVector], target: Subspace):
    """Basis of ``{c : sum_j c_j gens_j in target}``.

    Each basis vector is a list of ``len(gens)`` Fractions with a 1 at one free
    index and zeros at every other free index.
    """
    _check_basis(target.basis, gens)
    tgt = target.echelon()
    e = Echelon(track=True)
    kernel = []
    for j, g in enumerate(gens):
        dep = e.insert(tgt.reduce(g.coords), tag=j)
        if dep is not None:
            vec = [Fraction(0)] * len(gens)
            for t, x in dep.items():
                vec[t] = x
            kernel.append(vec)
    return kernel


def intersect(A: Subspace, B: Subspace) -> Subspace:
    """A ∩ B via combinations of A's rows that land in B."""
    if A.basis != B.basis:
        raise ValueError("basis mismatch")
    e = Echelon()
    for c in solve_membership_combination(A.rows, B):
        acc: dict = {}
        for x, row in zip(c, A.rows):
            if x:
                _axpy(acc, -x, row.coords)
        e.insert(acc)
    return Subspace(A.basis, e.reduced_rows())


def jet_dimension(n, p, r, order):
    return r * p * comb(order - 1 + n, n)
