"""Resolution-cube mechanics: surgery, Phi, liveness, edge signs."""

from hypothesis import given, settings
from hypothesis import strategies as st

from khext import families
from khext.ingest import to_chord_diagram
from khext.model import State
from khext.statecube import (
    CubeIndex,
    edge_sign,
    gauge_equal,
    phi_chain_independence_check,
    resolve,
    surger,
)

import conftest


def all_cubes():
    for name in conftest.SMALL_PD:
        yield name, CubeIndex(conftest.pd(name))
    for name in conftest.SMALL_CD:
        yield name, CubeIndex(conftest.cd(name))


def test_phi_is_chain_independent_everywhere():
    for name in conftest.SMALL_PD:
        assert phi_chain_independence_check(conftest.pd(name)), name
    for name in conftest.SMALL_CD:
        assert phi_chain_independence_check(conftest.cd(name)), name


def test_circle_count_identity():
    # |Z(u)| = |Z(1)| + (n - |u|) - 2 Phi(u) on every state of every cube
    for name, cube in all_cubes():
        top = cube.resolve((1 << cube.n) - 1).diagram
        z1 = len(top.circles)
        for mask in range(1 << cube.n):
            res = cube.resolve(mask)
            if res is None:
                continue
            weight = bin(mask).count("1")
            assert (
                len(res.diagram.circles)
                == z1 + (cube.n - weight) - 2 * res.phi
            ), (name, mask)


def test_live_by_weight_partitions_low_phi_states():
    for name, cube in all_cubes():
        seen = set()
        for w, masks in cube.live_by_weight().items():
            for m in masks:
                assert bin(m).count("1") == w
                assert cube.phi(m) <= 1
                seen.add(m)
        alive = {m for m in range(1 << cube.n) if cube.phi(m) <= 1}
        assert seen == alive, name


def test_surger_splits_on_monochords_and_merges_on_bichords():
    for name in conftest.SMALL_CD + ["diskdisk_3"]:
        d = conftest.cd(name)
        pos = {m: ci for ci, circ in enumerate(d.circles) for m in circ}
        for ch in d.chords:
            if ch.label != 1:
                continue
            mono = pos[ch.endpoints[0]] == pos[ch.endpoints[1]]
            out = surger(d, ch.index)
            assert out.chords[ch.index].label == 0
            assert len(out.circles) == len(d.circles) + (1 if mono else -1), (
                name,
                ch.index,
            )


def test_surger_rejects_dark_chords():
    import pytest

    d = surger(conftest.cd("onemono_2"), 0)
    with pytest.raises(ValueError):
        surger(d, 0)


def test_resolve_matches_iterated_surgery():
    d = to_chord_diagram(conftest.pd("figure_eight"))
    cube = CubeIndex(d)
    n = cube.n
    for mask in range(1 << n):
        step = d
        ok = True
        for i in range(n - 1, -1, -1):
            if mask & (1 << i):
                continue
            step = surger(step, i)
            if step is None:
                ok = False
                break
        res = cube.resolve(mask)
        if not ok or res is None:
            continue
        assert gauge_equal(step, res.diagram), mask


@given(st.integers(min_value=0, max_value=255), st.integers(min_value=0, max_value=7))
def test_edge_sign_definition(mask, i):
    v = State(8, mask)
    expected = (-1) ** bin(mask & ((1 << i) - 1)).count("1")
    assert edge_sign(v, i) == expected


@given(
    st.integers(min_value=0, max_value=2**10 - 1),
    st.integers(min_value=0, max_value=9),
    st.integers(min_value=0, max_value=9),
)
@settings(max_examples=300)
def test_edge_signs_make_squares_anticommute(mask, i, j):
    # the standard cube-sign cocycle condition
    if i == j or not (mask & (1 << i)) or not (mask & (1 << j)):
        return
    v = State(10, mask)
    vi = State(10, mask & ~(1 << i))
    vj = State(10, mask & ~(1 << j))
    lhs = edge_sign(v, i) * edge_sign(vi, j)
    rhs = edge_sign(v, j) * edge_sign(vj, i)
    assert lhs == -rhs


def test_dead_states_resolve_to_none():
    cube = CubeIndex(conftest.pd("trefoil_right"))
    for mask in range(1 << cube.n):
        res = resolve(cube.diagram if hasattr(cube, "diagram") else conftest.pd("trefoil_right"), mask)
        if cube.phi(mask) >= 2:
            assert res is None
        else:
            assert res is not None
