"""Finite generating sets for TR_e(f) ∩ TL_e(f) and for the lowerable vector fields.

The construction: fields ``xi_{k,i,j} = phi_{k,j} df_k/dx_i`` generate TR_e(f_k)
over the pulled-back target ring; multiplying by ``f_k^alpha`` for
``|alpha| < ell`` gives the finite set L, and ``|alpha| = ell`` gives H, which
already lies in TL_e.  The part of span(L) inside TL_e is a finite-dimensional
space V, and a basis of V together with H generates the intersection.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import comb
from typing import Optional

from .determinacy import (
    DEFAULT_ELL_MAX,
    DeterminacyCertificate,
    find_ell,
    pullback_powers,
    tl_jet_image,
)
from .germ import FieldAlongGerm, MultiGerm, SourceField
from .linalg import Echelon, JetBasis, project, solve_membership_combination, span_coords
from .localalgebra import DEFAULT_DELTA_MAX, local_algebra
from .poly import Poly, monomials_below, monomials_of_degree


@dataclass(frozen=True)
class TaggedField:
    field: FieldAlongGerm
    tag: tuple  # (k, i, j, alpha) with k, i, j 1-based
    preimage: SourceField

    @property
    def label(self):
        k, i, j, alpha = self.tag
        return f"xi[k={k},i={i},j={j},alpha={list(alpha)}]"


@dataclass(frozen=True)
class VElement:
    field: FieldAlongGerm
    preimage: SourceField
    combination: tuple  # ((index into L, coefficient), ...)


@dataclass(frozen=True)
class Generator:
    field: FieldAlongGerm
    preimage: SourceField
    origin: str


@dataclass
class GeneratorSet:
    L: list
    H: list
    V_basis: list
    H_distinct: list  # first TaggedField of each distinct H value
    H_redundant: list  # parallel to H_distinct: already in the module of V
    generators: list  # Generator values: V basis, then surviving H
    ell: int
    algebras: list = field(default_factory=list)
    certificate: Optional[DeterminacyCertificate] = None
    pruned_at: Optional[int] = None

    @property
    def m(self):
        return len(self.V_basis)

    @property
    def lowerable_generators(self):
        return [g.preimage for g in self.generators]

    @property
    def counts(self):
        return {"L": len(self.L), "H": len(self.H), "m": self.m}


def expected_counts(f: MultiGerm, algebras, ell):
    """Closed-form ``(|L|, |H|)`` before deduplication."""
    total = sum(f.n * a.delta for a in algebras)
    return total * comb(ell - 1 + f.p, f.p), total * comb(ell - 1 + f.p, f.p - 1)


def _slot_field(cls, f, k, comps, width):
    slots = []
    for kk in range(f.r):
        if kk == k:
            slots.append(tuple(comps))
        else:
            slots.append(tuple(Poly.zero(f.n) for _ in range(width)))
    return cls(slots)


def xi_fields(f: MultiGerm, algebras) -> list:
    """``xi_{k,i,j}`` in slot k, with preimage ``phi_{k,j} d/dx_i``."""
    zero_alpha = (0,) * f.p
    out = []
    for k, (b, alg) in enumerate(zip(f.branches, algebras)):
        for i in range(1, f.n + 1):
            col = b.jacobian_column(i)
            for j, phi in enumerate(alg.phi_polys(), start=1):
                fld = _slot_field(FieldAlongGerm, f, k, [c.mul(phi) for c in col], f.p)
                pre = [phi if ii == i else Poly.zero(f.n) for ii in range(1, f.n + 1)]
                out.append(
                    TaggedField(fld, (k + 1, i, j, zero_alpha), _slot_field(SourceField, f, k, pre, f.n))
                )
    return out


def _times_power(f, t: TaggedField, alpha, cache):
    k = t.tag[0] - 1
    key = (k, alpha)
    if key not in cache:
        cache[key] = Poly.one(f.n)
        for q, e in enumerate(alpha):
            if e:
                cache[key] = cache[key] * (f.branches[k].components[q] ** e)
    g = cache[key]
    factors = [g if kk == k else Poly.one(f.n) for kk in range(f.r)]
    return TaggedField(
        t.field.mul_slotwise(factors),
        t.tag[:3] + (alpha,),
        t.preimage.mul_slotwise(factors),
    )


def build_L_H(f: MultiGerm, xi: list, ell: int):
    """Multiply every xi by ``f_k^alpha``: ``|alpha| < ell`` gives L, ``|alpha| = ell`` gives H."""
    cache = {}
    L = [_times_power(f, t, a, cache) for a in monomials_below(f.p, ell) for t in xi]
    H = [_times_power(f, t, a, cache) for a in monomials_of_degree(f.p, ell) for t in xi]
    return L, H


def _exact_basis(f, fields):
    deg = max((x.degree() for x in fields), default=0)
    return JetBasis.for_germ(f, max(deg, 0) + 1)


def compute_V(f: MultiGerm, L: list, cert: DeterminacyCertificate, tl_low=None) -> list:
    """Basis of V = span(L) ∩ TL_e(f).

    span(L) already lies in TR_e(f), and because ``m^ell theta ⊆ TL_e`` a field
    is in TL_e exactly when its ell-jet is in the ell-jet of TL_e.  So V is
    read off from a kernel computation at jet order ell.
    """
    ell = cert.ell
    if tl_low is None:
        tl_low = tl_jet_image(f, ell)
    low = tl_low.basis
    kernel = solve_membership_combination([project(t.field, low) for t in L], tl_low)

    exact = _exact_basis(f, [t.field for t in L])
    ech = Echelon()
    out = []
    for c in kernel:
        terms = [(j, x) for j, x in enumerate(c) if x]
        fld = FieldAlongGerm.zero(f.r, f.p, f.n)
        pre = SourceField.zero(f.r, f.n, f.n)
        for j, x in terms:
            fld = fld + L[j].field.scale(x)
            pre = pre + L[j].preimage.scale(x)
        if fld.is_zero():
            continue
        if ech.insert(project(fld, exact).coords) is None:
            out.append(VElement(fld, pre, tuple(terms)))
    return out


def _h_redundant(f, h: TaggedField, L_index, in_tl):
    # h = (X_q o f) * xi_{k,i,j,alpha-e_q}; redundant when that L element is in V
    k, i, j, alpha = h.tag
    for q, e in enumerate(alpha):
        if e:
            lower = alpha[:q] + (e - 1,) + alpha[q + 1:]
            idx = L_index.get((k, i, j, lower))
            if idx is not None and in_tl[idx]:
                return True
    return False


def assemble(f: MultiGerm, algebras, cert: DeterminacyCertificate) -> GeneratorSet:
    ell = cert.ell
    xi = xi_fields(f, algebras)
    L, H = build_L_H(f, xi, ell)
    tl_low = tl_jet_image(f, ell)
    V = compute_V(f, L, cert, tl_low)

    ech = tl_low.echelon()
    in_tl = [ech.contains(project(t.field, tl_low.basis).coords) for t in L]
    L_index = {t.tag: idx for idx, t in enumerate(L)}

    seen = set()
    H_distinct, H_redundant = [], []
    for h in H:
        if h.field in seen or h.field.is_zero():
            continue
        seen.add(h.field)
        H_distinct.append(h)
        H_redundant.append(_h_redundant(f, h, L_index, in_tl))

    gens = [Generator(v.field, v.preimage, f"V{idx}") for idx, v in enumerate(V, start=1)]
    have = {g.field for g in gens}
    for h, red in zip(H_distinct, H_redundant):
        if not red and h.field not in have:
            gens.append(Generator(h.field, h.preimage, "H" + h.label[2:]))
            have.add(h.field)
    return GeneratorSet(L, H, V, H_distinct, H_redundant, gens, ell, list(algebras), cert)


def analyze(f: MultiGerm, delta_max=DEFAULT_DELTA_MAX, ell_max=DEFAULT_ELL_MAX):
    """Local algebras of every branch followed by the determinacy certificate."""
    algebras = [local_algebra(b, delta_max, k) for k, b in enumerate(f.branches, start=1)]
    d = max(a.d for a in algebras)
    cert = find_ell(f, d, ell_max)
    return algebras, cert


def generating_set(f: MultiGerm, delta_max=DEFAULT_DELTA_MAX, ell_max=DEFAULT_ELL_MAX) -> GeneratorSet:
    """Generators of TR_e(f) ∩ TL_e(f) over the target ring, with their tf-preimages.

    tf is injective for germs with finite delta, so the preimages generate the
    module of lowerable vector fields.
    """
    algebras, cert = analyze(f, delta_max, ell_max)
    return assemble(f, algebras, cert)


def generated_module_image(f: MultiGerm, fields, N, powers=None):
    """Order-N jet image of the module generated by ``fields`` over ``f* C_p``."""
    basis = JetBasis.for_germ(f, N)
    if powers is None:
        powers = pullback_powers(f, N)
    truncated = [g.truncated(N) for g in fields]

    def gen():
        for g in truncated:
            if g.is_zero():
                continue
            for per_branch in powers.values():
                yield project(g.mul_slotwise(per_branch, N), basis).coords

    return span_coords(basis, gen())


def default_prune_order(G: GeneratorSet):
    deg = max((g.field.degree() for g in G.generators), default=0)
    return G.ell + deg + 1


def prune(G: GeneratorSet, f: MultiGerm, N: int | None = None) -> GeneratorSet:
    """Greedily drop generators that do not change the generated module's N-jet.

    Heuristic: the result is only known to generate the same module up to
    order N, and minimality is not certified.
    """
    if N is None:
        N = default_prune_order(G)
    if N < G.ell:
        raise ValueError(f"prune order {N} is below ell={G.ell}")
    powers = pullback_powers(f, N)
    keep = list(G.generators)
    target = generated_module_image(f, [g.field for g in keep], N, powers).rank
    idx = 0
    while idx < len(keep):
        trial = keep[:idx] + keep[idx + 1:]
        if generated_module_image(f, [g.field for g in trial], N, powers).rank == target:
            keep = trial
        else:
            idx += 1
    return replace(G, generators=keep, pruned_at=N)
