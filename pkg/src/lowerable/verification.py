"""Brute-force jet oracle for TR_e(f) ∩ TL_e(f) and checks of emitted generators.

The oracle intersects the two jet images directly and never looks at a
generator set.  For ``N >= ell`` the N-jet of the intersection equals the
intersection of the N-jets, so comparing at those orders is meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .determinacy import pullback_powers, tl_jet_image, tr_jet_image
from .germ import MultiGerm, tf_apply
from .linalg import Subspace, intersect, project
from .generators import GeneratorSet, generated_module_image


def brute_intersection_jet(f: MultiGerm, N: int) -> Subspace:
    return intersect(tr_jet_image(f, N), tl_jet_image(f, N))


@dataclass
class CheckResult:
    name: str
    order: int
    passed: bool
    witness: Optional[list] = None  # rendered field, per branch
    detail: str = ""

    def to_json(self):
        out = {"name": self.name, "order": self.order, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class VerificationReport:
    germ: dict
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_json(self):
        return {
            "germ": self.germ,
            "orders": sorted({c.order for c in self.checks}),
            "verdict": "pass" if self.passed else "fail",
            "checks": [c.to_json() for c in self.checks],
        }


def _first_outside(vectors, U: Subspace):
    ech = U.echelon()
    for v in vectors:
        if not ech.contains(v.coords):
            return v
    return None


def _membership_check(name, N, items, U):
    # items: (label, JetVector)
    ech = U.echelon()
    for label, v in items:
        if not ech.contains(v.coords):
            return CheckResult(name, N, False, v.to_field().to_strings(), label)
    return CheckResult(name, N, True)


def verify_generators(f: MultiGerm, G: GeneratorSet, orders) -> VerificationReport:
    """Check G against the oracle at each jet order N (all N must be >= ell)."""
    report = VerificationReport(
        {"n": f.n, "p": f.p, "r": f.r, "branches": f.to_strings(), "ell": G.ell}
    )
    gens = G.generators
    for N in orders:
        if N < G.ell:
            raise ValueError(f"verification order {N} is below ell={G.ell}")
        tr = tr_jet_image(f, N)
        tl = tl_jet_image(f, N)
        brute = intersect(tr, tl)
        basis = tr.basis
        jets = [(g.origin, project(g.field, basis)) for g in gens]
        report.checks.append(_membership_check("generators_in_TR", N, jets, tr))
        report.checks.append(_membership_check("generators_in_TL", N, jets, tl))

        module = generated_module_image(f, [g.field for g in gens], N, pullback_powers(f, N))
        w = _first_outside(module.rows, brute)
        report.checks.append(
            CheckResult("span_soundness", N, w is None, w and w.to_field().to_strings())
        )
        w = _first_outside(brute.rows, module)
        report.checks.append(
            CheckResult("span_completeness", N, w is None, w and w.to_field().to_strings())
        )

        bad = None
        lifted = []
        for g in gens:
            image = tf_apply(f, g.preimage)
            if image != g.field and bad is None:
                bad = g
            lifted.append((g.origin, project(image, basis)))
        report.checks.append(
            CheckResult(
                "lowerable_exact",
                N,
                bad is None,
                None if bad is None else bad.field.to_strings(),
                "" if bad is None else f"tf(preimage) differs from {bad.origin}",
            )
        )
        report.checks.append(_membership_check("lowerable_in_TR", N, lifted, tr))
        report.checks.append(_membership_check("lowerable_in_TL", N, lifted, tl))
    return report


def default_orders(ell):
    return [ell, ell + 1, ell + 2]
