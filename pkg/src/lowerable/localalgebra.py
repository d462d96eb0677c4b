"""Local algebra Q(f_k) of a branch: delta, a monomial basis, and the saturation exponent."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DeltaNotCertified
from .germ import Branch
from .linalg import Echelon, JetBasis, Subspace, span_coords
from .poly import Poly, monomials_below, monomials_of_degree

DEFAULT_DELTA_MAX = 64


@dataclass(frozen=True)
class LocalAlgebraData:
    branch: int  # 1-based
    delta: int
    phi_basis: tuple  # exponent tuples
    d: int
    ideal_jet: Subspace  # image of the pulled-back maximal ideal at order d + 1

    def phi_polys(self):
        return [Poly.monomial(m) for m in self.phi_basis]


def _ideal_coords(branch: Branch, basis: JetBasis):
    N = basis.order
    trunc = [c.truncated(N) for c in branch.components]
    for comp in trunc:
        low = comp.order()
        if low is None:
            continue
        for beta in monomials_below(branch.n, N - low):
            prod = comp.mul_monomial(beta, N)
            if prod:
                yield {basis.index(0, 0, m): c for m, c in prod.terms.items()}


def ideal_jet_image(f_k: Branch, N: int) -> Subspace:
    """Jet image at order N of the ideal generated by the branch components."""
    basis = JetBasis.scalar(f_k.n, N)
    return span_coords(basis, _ideal_coords(f_k, basis))


def saturation_holds(f_k: Branch, d: int) -> tuple[bool, Subspace]:
    """Test ``m^d ⊆ I + m^(d+1)`` at jet order d+1."""
    ideal = ideal_jet_image(f_k, d + 1)
    ech = ideal.echelon()
    basis = ideal.basis
    ok = all(
        ech.contains({basis.index(0, 0, m): 1}) for m in monomials_of_degree(f_k.n, d)
    )
    return ok, ideal


def local_algebra(f_k: Branch, delta_max: int = DEFAULT_DELTA_MAX, k: int = 1) -> LocalAlgebraData:
    """Certified delta, standard-monomial basis and saturation exponent of one branch.

    Raises :class:`DeltaNotCertified` when no ``d <= delta_max`` satisfies the
    Nakayama test (``d <= delta`` always, so this bounds delta too).
    """
    if delta_max < 1:
        raise ValueError("delta_max must be positive")
    for d in range(1, delta_max + 1):
        ok, ideal_next = saturation_holds(f_k, d)
        if ok:
            break
    else:
        raise DeltaNotCertified(k, delta_max)

    basis = JetBasis.scalar(f_k.n, d)
    ech = Echelon()
    for coords in _ideal_coords(f_k, basis):
        ech.insert(coords)
    rank = len(ech)
    phi = []
    for mono in basis.monomials:
        if ech.insert({basis.index(0, 0, mono): 1}) is None:
            phi.append(mono)
    assert len(phi) == basis.dim - rank
    return LocalAlgebraData(k, len(phi), tuple(phi), d, ideal_next)
