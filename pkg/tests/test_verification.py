from dataclasses import replace

import pytest

from lowerable.determinacy import tl_jet_image, tr_jet_image
from lowerable.generators import generating_set
from lowerable.germ import FieldAlongGerm
from lowerable.linalg import Subspace, intersect, member, project, span
from lowerable.poly import parse_poly
from lowerable.verification import brute_intersection_jet, verify_generators

from conftest import germ


def fld(*slots):
    return FieldAlongGerm([tuple(parse_poly(c, 1) for c in s) for s in slots])


class TestBrute:
    def test_cusp(self, cusp):
        # TR_e ∩ TL_e = {(2tg, 3t^2 g) : g in m}; below degree 4 only g = t, t^2 survive
        U = brute_intersection_jet(cusp, 4)
        b = U.basis
        assert U.rank == 2
        assert U == span([project(fld(["2 x1^2", "3 x1^3"]), b), project(fld(["2 x1^3", "3 x1^4"]), b)])

    def test_identity(self, identity):
        for N in range(1, 5):
            U = brute_intersection_jet(identity, N)
            assert U == Subspace.full(U.basis)

    def test_fold(self):
        f = germ("fold")
        U = brute_intersection_jet(f, 4)
        assert U == intersect(tr_jet_image(f, 4), tl_jet_image(f, 4))
        # TR: 2x * h; TL: even series -> only x^2 below degree 4
        assert U == span([project(fld(["x1^2"]), U.basis)])

    @pytest.mark.parametrize("name", ["cusp", "e6", "surface", "double_line"])
    def test_monotone_consistency(self, name):
        f = germ(name)
        ell = generating_set(f).ell
        big = brute_intersection_jet(f, ell + 3)
        for Np in range(ell, ell + 3):
            small = brute_intersection_jet(f, Np)
            for row in big.rows:
                assert member(project(row.to_field(), small.basis), small)


class TestVerify:
    def test_cusp(self, cusp):
        rep = verify_generators(cusp, generating_set(cusp), [2, 3, 4, 5, 6])
        assert rep.passed
        assert rep.to_json()["verdict"] == "pass"

    def test_identity(self, identity):
        assert verify_generators(identity, generating_set(identity), range(1, 6)).passed

    @pytest.mark.parametrize("name", ["e6", "e8", "a4", "surface", "double_line", "tacnode_pair"])
    def test_other_germs(self, name):
        f = germ(name)
        G = generating_set(f)
        assert verify_generators(f, G, [G.ell, G.ell + 1, G.ell + 2]).passed

    def test_dropped_v_element_is_caught(self, cusp):
        G = generating_set(cusp)
        broken = replace(G, generators=G.generators[1:])
        rep = verify_generators(cusp, broken, [2, 3, 4])
        assert not rep.passed
        fails = rep.failures()
        # at N=2 both sides are zero; the gap shows from N=3 on
        assert {c.name for c in fails} == {"span_completeness"}
        assert sorted(c.order for c in fails) == [3, 4]
        fail = fails[0]
        assert fail.witness == [["x1^2", "0"]]

    def test_order_below_ell_rejected(self, cusp):
        with pytest.raises(ValueError):
            verify_generators(cusp, generating_set(cusp), [1])

    def test_wrong_preimage(self, cusp):
        G = generating_set(cusp)
        g = G.generators[0]
        bad = replace(g, preimage=g.preimage.scale(2))
        rep = verify_generators(cusp, replace(G, generators=[bad] + G.generators[1:]), [2])
        assert [c.name for c in rep.failures()] == ["lowerable_exact"]
