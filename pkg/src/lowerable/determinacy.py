"""Jet images of TR_e(f) and TL_e(f), and the certified 𝓛-determinacy order."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import NotFinitelyDetermined
from .germ import MultiGerm
from .linalg import JetBasis, Subspace, span_coords
from .poly import Poly, monomials_below, render

DEFAULT_ELL_MAX = 24


def pullback_powers(f: MultiGerm, N: int) -> dict:
    """``alpha -> (jet_N(f_1^alpha), ..., jet_N(f_r^alpha))`` for every |alpha| < N.

    Multi-indices come out in graded-lex order.  Since each ``f_k`` vanishes at
    the origin, ``|alpha| >= N`` would contribute nothing below order N.
    """
    comps = [[c.truncated(N) for c in b.components] for b in f.branches]
    powers = {}
    for alpha in monomials_below(f.p, N):
        if not any(alpha):
            powers[alpha] = tuple(Poly.one(f.n) for _ in f.branches)
            continue
        q = next(i for i, e in enumerate(alpha) if e)
        parent = alpha[:q] + (alpha[q] - 1,) + alpha[q + 1:]
        powers[alpha] = tuple(
            base.mul(comps[k][q], N) if base else base
            for k, base in enumerate(powers[parent])
        )
    return powers


def _tl_coords(f, basis, powers):
    for alpha, per_branch in powers.items():
        for i in range(f.p):
            coords = {}
            for k, a in enumerate(per_branch):
                for mono, c in a.terms.items():
                    coords[basis.index(k, i, mono)] = c
            if coords:
                yield coords


def tl_jet_image(f: MultiGerm, N: int, powers=None) -> Subspace:
    """span{ jet_N(X^alpha e_i o f) }: the order-N image of TL_e(f)."""
    basis = JetBasis.for_germ(f, N)
    if powers is None:
        powers = pullback_powers(f, N)
    return span_coords(basis, _tl_coords(f, basis, powers))


def tr_jet_image(f: MultiGerm, N: int) -> Subspace:
    """span{ jet_N(x^beta df_k/dx_i in slot k) }: the order-N image of TR_e(f)."""
    basis = JetBasis.for_germ(f, N)

    def gen():
        for k, b in enumerate(f.branches):
            for i in range(1, f.n + 1):
                col = [c.truncated(N) for c in b.jacobian_column(i)]
                low = min((c.order() for c in col if c), default=None)
                if low is None:
                    continue
                for beta in monomials_below(f.n, N - low):
                    coords = {}
                    for comp, a in enumerate(col):
                        for mono, c in a.mul_monomial(beta, N).terms.items():
                            coords[basis.index(k, comp, mono)] = c
                    if coords:
                        yield coords

    return span_coords(basis, gen())


@dataclass(frozen=True)
class DeterminacyCertificate:
    ell: int
    d: int
    jet_order_used: int
    tl_image: Subspace
    witness_failure: Optional[tuple] = None  # (k, i, mono), 0-based k and i


def describe_basis_field(k, i, mono):
    return f"{render(Poly.monomial(mono))} in branch {k + 1} component {i + 1}"


def first_unattained(f: MultiGerm, ell: int, d: int):
    """Check ``m^ell theta ⊆ TL_e + m^(ell+d) theta`` at order ell+d.

    Returns ``(witness, tl_image)`` where witness is ``None`` on success or
    the first basis field ``x^gamma e_{k,i}`` outside the TL image.
    """
    N = ell + d
    tl = tl_jet_image(f, N)
    basis = tl.basis
    ech = tl.echelon()
    for k in range(f.r):
        for i in range(f.p):
            for mono in basis.monomials:
                if sum(mono) < ell:
                    continue
                if not ech.contains({basis.index(k, i, mono): 1}):
                    return (k, i, mono), tl
    return None, tl


def find_ell(f: MultiGerm, d: int, ell_max: int = DEFAULT_ELL_MAX) -> DeterminacyCertificate:
    """Least ell with ``m^ell theta(f) ⊆ TL_e(f)``, certified at jet order ell + d.

    ``d`` must satisfy ``m^d ⊆ f* m_p C_n`` on every branch.  The test
    ``m^ell theta ⊆ TL_e + m^(ell+d) theta`` then implies the exact containment,
    because ``m^(ell+d) theta ⊆ (f* m_p) m^ell theta`` and Nakayama applies;
    conversely the exact containment passes the test, so ell is minimal.
    """
    if ell_max < 1:
        raise ValueError("ell_max must be positive")
    if d < 1:
        raise ValueError("saturation exponent must be positive")
    previous = None
    for ell in range(1, ell_max + 1):
        witness, tl = first_unattained(f, ell, d)
        if witness is None:
            return DeterminacyCertificate(ell, d, ell + d, tl, previous)
        previous = witness
    k, i, mono = previous
    raise NotFinitelyDetermined(
        ell_max, previous, describe_basis_field(k, i, mono)
    )
