"""Brute-force enhanced-state homology against published tables."""

import pytest

from khext import families
from khext.oracle import almost_extreme_agreement, gradings, khovanov_homology

import conftest


def table(pd, **kw):
    kh = khovanov_homology(pd, **kw)
    return {(i, j): g for j, hr in kh.items() for i, g in hr.groups.items()}


def test_unknot_and_kinks():
    want = {(0, -1): (1, ()), (0, 1): (1, ())}
    assert table(families.unknot_pd()) == want
    # Reidemeister-1 invariance
    assert table(families.kink_pd(1)) == want
    assert table(families.kink_pd(-1)) == want


def test_hopf_links():
    assert table(families.hopf_pd(1)) == {
        (0, 0): (1, ()),
        (0, 2): (1, ()),
        (2, 4): (1, ()),
        (2, 6): (1, ()),
    }
    assert table(families.hopf_pd(-1)) == {
        (-2, -6): (1, ()),
        (-2, -4): (1, ()),
        (0, -2): (1, ()),
        (0, 0): (1, ()),
    }


def test_trefoils_with_torsion():
    assert table(families.trefoil_pd(True)) == {
        (0, 1): (1, ()),
        (0, 3): (1, ()),
        (2, 5): (1, ()),
        (3, 7): (0, (2,)),
        (3, 9): (1, ()),
    }
    assert table(families.trefoil_pd(False)) == {
        (-3, -9): (1, ()),
        (-2, -7): (0, (2,)),
        (-2, -5): (1, ()),
        (0, -3): (1, ()),
        (0, -1): (1, ()),
    }


def test_figure_eight_is_thin():
    t = table(families.figure_eight_pd())
    assert t == {
        (-2, -5): (1, ()),
        (-1, -3): (0, (2,)),
        (-1, -1): (1, ()),
        (0, -1): (1, ()),
        (0, 1): (1, ()),
        (1, 1): (1, ()),
        (2, 3): (0, (2,)),
        (2, 5): (1, ()),
    }
    # all free parts live on the two diagonals j - 2i = +/-1
    for (i, j), (betti, _) in t.items():
        if betti:
            assert j - 2 * i in (-1, 1)


def test_mirror_symmetry_of_free_parts():
    left = table(families.trefoil_pd(False))
    right = table(families.trefoil_pd(True))
    assert {(-i, -j): b for (i, j), (b, _) in right.items() if b} == {
        (i, j): b for (i, j), (b, _) in left.items() if b
    }


def test_single_grading_filter():
    t9 = table(families.trefoil_pd(True), j=9)
    assert t9 == {(3, 9): (1, ())}
    assert table(families.trefoil_pd(True), j=11) == {}


def test_crossing_guard():
    with pytest.raises(ValueError):
        khovanov_homology(families.t2_pd(7), max_crossings=5)


def test_gradings_formulas():
    pd = families.trefoil_pd(True)
    from khext.oracle import EnhancedState

    # all-ones state, all circles labelled +: h = n+ = 3 after the shift,
    # q = j_max = 9
    full = EnhancedState(mask=7, labels=(1, 1, 1))
    assert gradings(pd, full) == (3, 9)


@pytest.mark.parametrize("name", conftest.SMALL_PD)
def test_functor_routes_match_oracle(name):
    rep = almost_extreme_agreement(conftest.pd(name))
    assert rep["agree"], (name, rep)
