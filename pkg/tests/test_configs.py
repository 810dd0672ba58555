"""Configuration detection and the surgery-free Phi classifier."""

import pytest

from khext import families
from khext.configs import (
    classify_phi_by_configs,
    d_set,
    detect_configs,
    equivalent_bichord_pairs,
    has_alternating_pair,
    is_1_adequate,
    monochord_arcs,
)
from khext.ingest import to_chord_diagram
from khext.model import ChordDiagram
from khext.statecube import CubeIndex, surger

import conftest


def exhaustive_agreement(d):
    cube = CubeIndex(d)
    top = cube.resolve((1 << cube.n) - 1).diagram
    rep = detect_configs(top)
    for mask in range(1 << cube.n):
        got = classify_phi_by_configs(top, mask, rep)
        want = min(cube.phi(mask), 2)
        if got != want:
            return mask, got, want
    return None


@pytest.mark.parametrize("name", conftest.SMALL_PD)
def test_classifier_matches_surgery_pd(name):
    assert exhaustive_agreement(conftest.pd(name)) is None


@pytest.mark.parametrize("name", conftest.SMALL_CD + ["diskdisk_3"])
def test_classifier_matches_surgery_cd(name):
    assert exhaustive_agreement(conftest.cd(name)) is None


def test_classifier_mixed_pair_regression():
    # 4-strand braid whose all-ones resolution contains a mixed alternating
    # pair that is only visible on the induced subdiagram after clearing
    # monochords; a naive whole-diagram reading classifies state 0b0010110
    # wrongly
    d = families.braid_pd([-1, -3, 3, -1, 2, 3, 2], 4)
    assert exhaustive_agreement(d) is None


def test_describe_is_json_ready():
    import json

    rep = detect_configs(to_chord_diagram(families.t3_pd(4)))
    doc = rep.describe()
    json.dumps(doc)  # must not raise
    for key in (
        "n",
        "monochords",
        "bichords",
        "parallel_classes",
        "alternating_pairs",
        "one_adequate",
        "two_free",
    ):
        assert key in doc


def test_alternating_pair_detection():
    d = families.alternating_pair_cd()
    rep = detect_configs(d)
    assert rep.alternating_pairs == ((0, 1),)
    assert has_alternating_pair(d)
    # torus links T(2,n) resolve to necklaces: bichords only, no alternation
    necklace = to_chord_diagram(families.t2_pd(5))
    assert not has_alternating_pair(necklace)
    assert is_1_adequate(necklace)


def test_one_adequacy_means_no_monochords():
    assert not is_1_adequate(families.one_monochord_cd(2))
    assert is_1_adequate(to_chord_diagram(families.hopf_pd(1)))


def test_equivalent_bichords_in_parallel_braid():
    d = families.braid_pd([-1] * 4, 2)
    rep = detect_configs(to_chord_diagram(d))
    pairs = equivalent_bichord_pairs(rep)
    assert pairs == tuple((i, j) for i in range(4) for j in range(i + 1, 4))


def test_monochord_arcs_and_d_set():
    om = families.one_monochord_cd(3)
    left, right = monochord_arcs(om, 0)
    assert set(left) | set(right) == {2, 4, 6, 8, 10, 12}
    assert set(left).isdisjoint(right)
    assert d_set(om, 0) == frozenset({1, 2, 3})


def test_parallel_classes_partition_bichords():
    rep = detect_configs(to_chord_diagram(families.t2_pd(4)))
    flat = sorted(c for cls in rep.parallel_classes for c in cls)
    assert flat == sorted(rep.bichords)


def test_monochord_side_bits_must_agree():
    d = families.alternating_pair_cd()
    sides = tuple(b ^ (1 if i == 0 else 0) for i, b in enumerate(d.sides))
    broken = ChordDiagram(d.circles, d.chords, sides, d.n_plus, d.n_minus)
    with pytest.raises(ValueError):
        surger(broken, 0)


def test_flipping_both_side_bits_is_a_gauge_move():
    d = families.alternating_pair_cd()
    sides = tuple(b ^ (1 if i in (0, 1) else 0) for i, b in enumerate(d.sides))
    flipped = ChordDiagram(d.circles, d.chords, sides, d.n_plus, d.n_minus)
    a, b = CubeIndex(d), CubeIndex(flipped)
    assert {m: a.phi(m) for m in range(4)} == {m: b.phi(m) for m in range(4)}
