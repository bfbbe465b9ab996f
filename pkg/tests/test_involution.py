import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import FIG4, FIG5, FIG6, FIG7
from qlaguerre.errors import InhomogeneousEdgeError
from qlaguerre.involution import (
    CASE_BY_CODE,
    CHECKS,
    Case,
    PhiTrace,
    bdiff_update_check,
    compositions,
    crosses_from_left,
    is_convertible,
    phi,
    verify_all,
    verify_lemmas,
    verify_lemmas_reference,
)
from qlaguerre.marked import (
    Composition,
    MarkedPM,
    enumerate_marked,
    homogeneous_mask,
    is_homogeneous,
    marked_arrays,
    marked_bdiffs,
    signed_term,
)


class TestFigureTraces:
    def test_case_one(self):
        image, trace = phi(FIG5)
        assert trace.case_tag is Case.CASE1 and trace.toggled_edge == 3
        assert (3, FIG5(3)) == (3, 2)
        assert image.marked == FIG5.marked | {3}

    def test_case_two_a(self):
        image, trace = phi(FIG6)
        assert trace.case_tag is Case.CASE2A and trace.toggled_edge == 6
        assert FIG6(6) == 4
        assert image.marked == FIG6.marked - {6}

    def test_case_two_b(self):
        image, trace = phi(FIG7)
        assert trace.case_tag is Case.CASE2B
        assert (trace.toggled_edge, trace.chosen_i, trace.chosen_i_prime) == (5, 6, 5)
        assert FIG7(5) == 5
        assert image.marked == FIG7.marked | {5}

    @pytest.mark.parametrize("m", [FIG4, FIG5, FIG6, FIG7])
    def test_involutive_on_figures(self, m):
        image, trace = phi(m)
        back, trace2 = phi(image)
        assert back == m
        assert trace2.case_tag is trace.case_tag
        assert signed_term(image) == -signed_term(m)


class TestConvertibility:
    def test_figure_edges(self):
        assert is_convertible(FIG6, 6)
        assert not is_convertible(FIG7, 6)

    def test_uncrossed_edge(self):
        m = MarkedPM.build((3,), (1, 2, 3), set())
        assert all(is_convertible(m, i) for i in (1, 2, 3))

    def test_inhomogeneous_rejected(self):
        with pytest.raises(InhomogeneousEdgeError):
            is_convertible(FIG4, 4)
        with pytest.raises(InhomogeneousEdgeError):
            bdiff_update_check(FIG4, 7)

    def test_crosses_from_left(self):
        assert crosses_from_left(FIG4, 1, 2)
        assert not crosses_from_left(FIG4, 2, 1)
        assert not crosses_from_left(FIG4, 3, 3)
        ident = MarkedPM.build((2,), (1, 2), set())
        assert not crosses_from_left(ident, 1, 2)

    @pytest.mark.parametrize("c", [(2, 2), (1, 3), (3, 2)])
    def test_kernel_matches_reference(self, kernels, c):
        comp = Composition(c)
        perms, marks = marked_arrays(comp)
        conv = kernels.convertible_all(perms, marks, kernels.marked_bdiff(perms, marks))
        for k, m in enumerate(enumerate_marked(comp)):
            for i in m.homogeneous_edges:
                assert bool(conv[k, i - 1]) == is_convertible(m, i)


class TestBdiffUpdate:
    def test_figure_four(self):
        assert all(bdiff_update_check(FIG4, i) for i in FIG4.homogeneous_edges)

    def test_lone_uncrossed_edge(self):
        m = MarkedPM.build((1, 1, 1), (1, 3, 2), {2, 3})
        before = marked_bdiffs(m)
        assert bdiff_update_check(m, 1)
        assert marked_bdiffs(m.toggle(1))[1:] == before[1:]

    @pytest.mark.parametrize("n", range(1, 6))
    def test_exhaustive(self, n):
        for parts in compositions(n):
            for m in enumerate_marked(Composition(parts)):
                assert all(bdiff_update_check(m, i) for i in m.homogeneous_edges)


class TestSmallCases:
    def test_pairing_on_11(self):
        ms = list(enumerate_marked(Composition((1, 1))))
        fixed = [m for m in ms if phi(m)[1].case_tag is Case.CASE0]
        assert [m.pm.perm for m in fixed] == [(2, 1)]
        for m in ms:
            image, _ = phi(m)
            assert phi(image)[0] == m
            if image != m:
                assert signed_term(image) == -signed_term(m)

    def test_trace_validation(self):
        with pytest.raises(ValueError):
            PhiTrace(Case.CASE0, 1)
        with pytest.raises(ValueError):
            PhiTrace(Case.CASE1)
        with pytest.raises(ValueError):
            PhiTrace(Case.CASE2B, 3, 2, 3)
        assert PhiTrace(Case.CASE2B, 1, 2, 1).to_json_obj()["case"] == "Case2b"


@pytest.mark.parametrize("parts", [(1, 2), (2, 2), (2, 1, 2), (3, 3), (2, 3, 2)])
def test_phi_batch_matches_reference(kernels, parts):
    c = Composition(parts)
    perms, marks = marked_arrays(c)
    homog = homogeneous_mask(c, perms)
    bd = kernels.marked_bdiff(perms, marks)
    case, toggled, chosen, chosen_p = (np.asarray(a) for a in kernels.phi_batch(perms, marks, homog, bd))
    step = max(1, len(perms) // 3000)
    ms = list(enumerate_marked(c))
    for k in range(0, len(ms), step):
        _, trace = phi(ms[k])
        assert CASE_BY_CODE[int(case[k])] is trace.case_tag
        got = None if toggled[k] < 0 else int(toggled[k]) + 1
        assert got == trace.toggled_edge
        if trace.case_tag is Case.CASE2B:
            assert (chosen[k] + 1, chosen_p[k] + 1) == (trace.chosen_i, trace.chosen_i_prime)


@st.composite
def marked_structures(draw):
    parts = tuple(draw(st.lists(st.integers(1, 3), min_size=1, max_size=4).filter(lambda p: sum(p) <= 7)))
    c = Composition(parts)
    perm = draw(st.permutations(range(1, c.N + 1)))
    marks = {
        i for i in range(1, c.N + 1)
        if not is_homogeneous(c, i, perm[i - 1]) or draw(st.booleans())
    }
    return MarkedPM.build(parts, perm, marks)


@settings(max_examples=300, deadline=None)
@given(marked_structures())
def test_phi_properties(m):
    image, trace = phi(m)
    assert image.pm == m.pm and image.comp == m.comp
    assert phi(image)[0] == m
    if trace.case_tag is Case.CASE0:
        assert image == m and not m.homogeneous_edges
    else:
        assert len(image.marked ^ m.marked) == 1
        assert signed_term(image) == -signed_term(m)


class TestVerification:
    @pytest.mark.parametrize("n", range(1, 5))
    def test_kernel_sweep_matches_reference(self, kernels, n):
        for parts in compositions(n):
            c = Composition(parts)
            fast = verify_lemmas(c, kernels.name)
            slow = verify_lemmas_reference(c)
            assert fast.passed and slow.passed
            assert fast.to_json_obj() == slow.to_json_obj()

    def test_report_shape(self):
        reports = verify_all(3)
        assert [r.composition for r in reports] == [
            (1,), (1, 1), (2,), (1, 1, 1), (1, 2), (2, 1), (3,)
        ]
        obj = reports[1].to_json_obj()
        assert set(obj) == {"composition", "structures_checked", "orbits", "fixed_points", "failures"}
        assert (obj["structures_checked"], obj["orbits"], obj["fixed_points"]) == (5, 2, 1)

    def test_fixed_points_are_derangements(self):
        for parts in [(1, 1, 1), (2, 2), (1, 2, 1)]:
            r = verify_lemmas(Composition(parts))
            assert r.structures_checked == 2 * r.orbits + r.fixed_points

    def test_check_names(self):
        assert len(set(CHECKS)) == len(CHECKS) == 13
