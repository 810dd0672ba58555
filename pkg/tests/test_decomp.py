"""Subposet decomposition, skein sequences, smoothing, simplification."""

import pytest

from khext import families
from khext.algebra import homology, shift_degrees
from khext.decomp import (
    build_subposet,
    simplify,
    smooth,
    subposet_complex,
    verify_cofibre_partition,
    verify_skein,
)
from khext.functors import build_M_complex, build_extreme_complex
from khext.ingest import to_chord_diagram, structurally_isomorphic
from khext.model import Chord, ChordDiagram
from khext.statecube import CubeIndex

import conftest


# ---------------------------------------------------------------- subposets


def test_x_subposet_complex_equals_merge_free_builder():
    for name in ("trefoil_right", "figure_eight", "t2_4"):
        cube = CubeIndex(to_chord_diagram(conftest.pd(name)))
        sx = subposet_complex(build_subposet(cube, "X"))
        bx = build_extreme_complex(cube)
        assert sx.basis == bx.basis
        for k in set(sx.diff) | set(bx.diff):
            a, b = sx.d(k), bx.d(k)
            if a is None or b is None:
                assert (a is None or a.is_zero()) and (b is None or b.is_zero())
            else:
                assert a == b


def test_trefoil_z_subposets_tile_the_one_merge_states():
    cube = CubeIndex(to_chord_diagram(conftest.pd("trefoil_right")))
    assert build_subposet(cube, "Y").members == ()
    zs = [build_subposet(cube, "Z^b", chord=b) for b in range(3)]
    phi1 = sorted(
        m
        for masks in cube.live_by_weight().values()
        for m in masks
        if cube.phi(m) == 1
    )
    assert sorted(m for z in zs for m in z.members) == phi1


def test_subposet_argument_errors():
    cube = CubeIndex(to_chord_diagram(conftest.pd("trefoil_right")))
    with pytest.raises(ValueError, match="unknown bichord class"):
        build_subposet(cube, "Z^b", chord=99)
    with pytest.raises(ValueError, match="takes no chord"):
        build_subposet(cube, "X", chord=0)
    with pytest.raises(ValueError):
        # chord 0 of the trefoil resolution is a bichord, X^e needs a monochord
        build_subposet(cube, "X^e", chord=0)


def test_two_free_monochord_kills_the_small_subposets():
    # a 2-free monochord (one in no alternating pair) makes X, Y and every
    # X^e acyclic; the disk-disk diagrams have four of them
    cube = CubeIndex(conftest.cd("diskdisk_2"))
    top = cube.resolve((1 << cube.n) - 1).diagram
    pos = {m: ci for ci, circ in enumerate(top.circles) for m in circ}
    monos = [
        c.index for c in top.chords if pos[c.endpoints[0]] == pos[c.endpoints[1]]
    ]
    assert monos
    for which in ("X", "Y"):
        h = homology(subposet_complex(build_subposet(cube, which)))
        assert h.groups == {}, which
    for e in monos:
        h = homology(subposet_complex(build_subposet(cube, "X^e", chord=e)))
        assert h.groups == {}, e

    # negative control: the one-monochord family's monochord alternates
    # with every bichord, so the hypothesis fails and X^e carries homology
    cube = CubeIndex(conftest.cd("onemono_3"))
    h = homology(subposet_complex(build_subposet(cube, "X^e", chord=0)))
    assert h.groups != {}


def test_solo_z_splitting_for_disk_disk():
    # with >= 2 two-free monochords the whole graph complex is carried by
    # the Z^b blocks
    cube = CubeIndex(conftest.cd("diskdisk_2"))
    total = homology(build_M_complex(cube))
    rep = verify_cofibre_partition(cube)
    assert rep["ok"]
    per_degree: dict[int, int] = {}
    for label, groups in rep["subposet_homology"].items():
        if label.startswith("Z"):
            for k, g in groups.items():
                assert not g["torsion"], (label, k)
                if g["free"]:
                    per_degree[int(k)] = per_degree.get(int(k), 0) + g["free"]
    assert {k: (v, ()) for k, v in per_degree.items()} == dict(total.groups)


@pytest.mark.parametrize(
    "kind,name",
    [
        ("pd", "unknot"),
        ("pd", "kink_pos"),
        ("pd", "hopf_pos"),
        ("pd", "trefoil_right"),
        ("pd", "figure_eight"),
        ("pd", "t2_4"),
        ("cd", "altpair"),
        ("cd", "onemono_2"),
        ("cd", "diskdisk_2"),
    ],
)
def test_cofibre_partition_reports_ok(kind, name):
    d = conftest.pd(name) if kind == "pd" else conftest.cd(name)
    rep = verify_cofibre_partition(CubeIndex(d))
    assert rep["partition_ok"], rep.get("witness")
    assert rep["blocks_ok"] and rep["phi1_closed"]
    assert rep["quotient_blocks_ok"]
    assert rep["degree_shift"] == 0
    assert rep["les_ok"], rep["les_degrees"]
    assert rep["ok"]


# -------------------------------------------------------------------- skein


@pytest.mark.parametrize("name", ["trefoil_right", "figure_eight", "t2_3"])
def test_skein_sequences_pd(name):
    d = conftest.pd(name)
    cube = CubeIndex(to_chord_diagram(d))
    for ch in range(cube.n):
        rep = verify_skein(cube, ch)
        assert rep["ok"], (name, ch, rep)
        for seq in rep["sequences"].values():
            assert seq["embeds_as_zero_part"]
            assert seq["les_ok"]


def test_skein_monochord_runs_both_sequences():
    cube = CubeIndex(conftest.cd("onemono_2"))
    top = cube.resolve((1 << cube.n) - 1).diagram
    pos = {m: ci for ci, circ in enumerate(top.circles) for m in circ}
    mono = next(
        c.index for c in top.chords if pos[c.endpoints[0]] == pos[c.endpoints[1]]
    )
    rep = verify_skein(cube, mono)
    assert set(rep["sequences"]) == {"M", "X"}
    assert rep["ok"]


def test_skein_bichord_rejects_merge_free_sequence():
    cube = CubeIndex(to_chord_diagram(conftest.pd("trefoil_right")))
    with pytest.raises(ValueError, match="chord-kind mismatch"):
        verify_skein(cube, 0, sequence="X")


# ---------------------------------------------------------------- smoothing


@pytest.mark.parametrize("name", ["trefoil_right", "figure_eight", "t2_4"])
@pytest.mark.parametrize("value", [0, 1])
def test_smooth_commutes_with_resolution(name, value):
    # smoothing the PD code and then resolving gives the same chord diagram
    # as smoothing the resolved chord diagram directly
    pd = conftest.pd(name)
    cd = to_chord_diagram(pd)
    for ch in range(len(cd.chords)):
        via_pd = to_chord_diagram(smooth(pd, ch, value))
        via_cd = smooth(cd, ch, value)
        assert structurally_isomorphic(via_pd, via_cd), (name, ch, value)


def test_smooth_drops_the_chord_and_renumbers():
    cd = to_chord_diagram(conftest.pd("trefoil_right"))
    out = smooth(cd, 1, 1)
    assert len(out.chords) == len(cd.chords) - 1
    assert [c.index for c in out.chords] == list(range(len(out.chords)))


def test_smooth_rejects_bad_arguments():
    cd = to_chord_diagram(conftest.pd("trefoil_right"))
    with pytest.raises(ValueError):
        smooth(cd, 0, 2)
    with pytest.raises(ValueError):
        smooth(cd, 17, 0)
    with pytest.raises(TypeError):
        smooth("not a diagram", 0, 0)


def test_smooth_value0_merges_or_splits_like_surgery():
    cd = conftest.cd("diskdisk_2")
    pos = {m: ci for ci, circ in enumerate(cd.circles) for m in circ}
    for ch in cd.chords:
        mono = pos[ch.endpoints[0]] == pos[ch.endpoints[1]]
        out = smooth(cd, ch.index, 0)
        assert len(out.circles) == len(cd.circles) + (1 if mono else -1)


# ----------------------------------------------------------- simplification


def test_parallel_braid_collapses_to_one_chord():
    for n in (3, 4, 5):
        d = to_chord_diagram(families.braid_pd([-1] * n, 2))
        red, susp, log = simplify(d)
        assert len(red.chords) == 1
        assert susp == n - 1
        assert all(entry["move"] == "equivalent-bichords" for entry in log)


def test_necklaces_and_super_simple_diagrams_are_fixed_points():
    for name in ("t2_3", "t2_5"):
        red, susp, log = simplify(to_chord_diagram(conftest.pd(name)))
        assert susp == 0 and log == ()
    for name in ("diskdisk_2", "diskdisk_3"):
        red, susp, log = simplify(conftest.cd(name))
        assert susp == 0 and log == ()


def test_nested_monochord_move():
    # one circle, chord 0 spans chords 1 and 2 sitting in opposite arcs
    d = ChordDiagram(
        circles=((0, 2, 3, 1, 4, 5),),
        chords=(
            Chord(index=0, endpoints=(0, 1), label=1, distinguished=0),
            Chord(index=1, endpoints=(2, 3), label=1, distinguished=2),
            Chord(index=2, endpoints=(4, 5), label=1, distinguished=4),
        ),
        sides=(0,) * 6,
    )
    red, susp, log = simplify(d)
    assert susp == 1
    assert log[0]["move"] == "nested-monochords"
    assert log[0]["removed"] == 0
    assert sorted(log[0]["witnesses"]) == [1, 2]


def test_simplification_preserves_homology_up_to_suspension():
    for make in (
        lambda: to_chord_diagram(families.braid_pd([-1] * 4, 2)),
        lambda: ChordDiagram(
            circles=((0, 2, 3, 1, 4, 5),),
            chords=(
                Chord(index=0, endpoints=(0, 1), label=1, distinguished=0),
                Chord(index=1, endpoints=(2, 3), label=1, distinguished=2),
                Chord(index=2, endpoints=(4, 5), label=1, distinguished=4),
            ),
            sides=(0,) * 6,
        ),
    ):
        d = make()
        red, susp, _ = simplify(d)
        before = homology(build_M_complex(CubeIndex(d)))
        after = homology(shift_degrees(build_M_complex(CubeIndex(red)), susp))
        assert before == after
