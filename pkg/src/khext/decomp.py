"""Subposet complexes, the block structure of the graph complex, skein
short exact sequences, and suspension-producing simplification moves.

The live subcube of a diagram is tiled by four families of subposets which
mirror the generator kinds of the graph complex (:mod:`khext.functors`):

* ``X``   -- all merge-free states; the component generators run through
  one copy of it per circle of the all-ones resolution;
* ``X^e`` -- for a monochord ``e``, the merge-free states with ``e``
  surgered; the 0-chord generators of ``e`` run through it;
* ``Y``   -- one-merge states whose surgered chords contain an alternating
  pair of monochords;
* ``Z^b`` -- one-merge states whose surgered chords contain a bichord
  parallel to ``b``.

:func:`verify_cofibre_partition` checks this tiling on the chain level:
the one-merge generators span a subcomplex that splits into the ``Y`` and
``Z^b`` blocks, and the quotient decomposes, block for block, into the
``X``-family subposet complexes (with no extra degree shift -- a geometric
realization would add one, which is recorded in the report instead of
being baked into the matrices).

:func:`verify_skein` checks the short exact sequences obtained by
smoothing a single chord ``a``: the complex of ``D[a=0]`` embeds as the
``u_a = 0`` part, and the quotient is the complex of ``D[a=1]`` shifted up
by one (after a sign conjugation accounting for the lost cube coordinate).
The induced long exact homology sequence is verified degree by degree.

:func:`simplify` repeatedly deletes chords whose presence only suspends
the homology of the graph complex -- one of two equivalent bichords, or a
2-free monochord nested between two others -- and returns the reduced
diagram together with the number of suspensions taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import (
    IntMat,
    homology,
    image_lattice,
    ses_and_les_report,
    shift_degrees,
    solve_matrix,
)
from .configs import detect_configs, equivalent_bichord_pairs, monochord_arcs
from .functors import (
    CircleGen,
    ComponentGen,
    EdgeGen,
    PlusGen,
    _circle_keys,
    build_F_complex,
    build_M_complex,
    build_extreme_complex,
    build_gamma,
)
from .ingest import _orient_and_sign, to_chord_diagram
from .model import (
    Chord,
    ChordDiagram,
    GradedChainComplex,
    PDCode,
    State,
    validate,
)
from .statecube import CubeIndex, edge_sign, surger

__all__ = [
    "Subposet",
    "build_subposet",
    "subposet_complex",
    "verify_cofibre_partition",
    "smooth",
    "verify_skein",
    "simplify",
]


def _as_cube(diagram) -> CubeIndex:
    return diagram if isinstance(diagram, CubeIndex) else CubeIndex(diagram)


def _live_masks(cube: CubeIndex) -> list[int]:
    return sorted(m for masks in cube.live_by_weight().values() for m in masks)


# ---------------------------------------------------------------------------
# subposets and their complexes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subposet:
    """A distinguished family of live states inside one cube.

    ``kind`` is one of ``"X"``, ``"X^e"``, ``"Y"``, ``"Z^b"``; the chord
    parameter names the monochord (``X^e``) or the bichord whose parallel
    class is meant (``Z^b``).  ``members`` lists the state masks satisfying
    the defining predicate, sorted increasingly.
    """

    kind: str
    chord: Optional[int]
    members: tuple[int, ...]
    cube: CubeIndex

    @property
    def label(self) -> str:
        if self.chord is None:
            return self.kind
        return f"{self.kind}[{self.chord}]"

    def __str__(self) -> str:
        return f"Subposet({self.label}, {len(self.members)} states)"


_KIND_ALIASES = {
    "X": "X",
    "X^e": "X^e",
    "Xe": "X^e",
    "Y": "Y",
    "Z^b": "Z^b",
    "Zb": "Z^b",
}


def build_subposet(cube, which: str, chord: Optional[int] = None) -> Subposet:
    """Enumerate one of the distinguished subposets of the live cube.

    ``which`` selects the family (``"X"``, ``"X^e"``, ``"Y"``, ``"Z^b"``);
    ``X^e`` needs a monochord index and ``Z^b`` a bichord index (any member
    of the intended parallel class).
    """
    cube = _as_cube(cube)
    kind = _KIND_ALIASES.get(which)
    if kind is None:
        raise ValueError(
            f"unknown subposet kind {which!r}; expected 'X', 'X^e', 'Y' or 'Z^b'"
        )
    d = cube.diagram
    if kind in ("X", "Y") and chord is not None:
        raise ValueError(f"subposet {kind} takes no chord parameter")

    if kind == "X":
        members = [m for m in _live_masks(cube) if cube.phi(m) == 0]
        return Subposet(kind, None, tuple(members), cube)

    if kind == "X^e":
        if chord is None or not 0 <= chord < d.n:
            raise ValueError(f"X^e needs a chord index, got {chord!r}")
        if not d.is_monochord(chord):
            raise ValueError(
                f"chord {chord} joins two circles; X^e subposets are "
                f"indexed by monochords"
            )
        members = [
            m
            for m in _live_masks(cube)
            if cube.phi(m) == 0 and not (m >> chord) & 1
        ]
        return Subposet(kind, chord, tuple(members), cube)

    rep = detect_configs(d)
    if kind == "Y":
        pair_masks = [(1 << e) | (1 << f) for e, f in rep.alternating_pairs]
        members = [
            m
            for m in _live_masks(cube)
            if cube.phi(m) == 1 and any(m & pm == 0 for pm in pair_masks)
        ]
        return Subposet(kind, None, tuple(members), cube)

    # Z^b
    if chord is None or not 0 <= chord < d.n or chord not in rep.bichords:
        raise ValueError(
            f"unknown bichord class: chord {chord!r} is not a bichord of "
            f"the all-ones resolution"
        )
    cls = next(c for c in rep.parallel_classes if chord in c)
    cls_mask = 0
    for e in cls:
        cls_mask |= 1 << e
    members = [
        m
        for m in _live_masks(cube)
        if cube.phi(m) == 1 and (~m) & cls_mask
    ]
    return Subposet(kind, chord, tuple(members), cube)


def subposet_complex(s: Subposet) -> GradedChainComplex:
    """One generator per member state, graded by weight; cube edges with
    both ends in the subposet contribute their sign."""
    cube = s.cube
    by_w: dict[int, list[int]] = {}
    for m in s.members:
        by_w.setdefault(bin(m).count("1"), []).append(m)
    basis = {
        w: tuple(PlusGen(m) for m in sorted(masks)) for w, masks in by_w.items()
    }
    index = {
        w: {m: pos for pos, m in enumerate(sorted(masks))}
        for w, masks in by_w.items()
    }
    diff: dict[int, IntMat] = {}
    for w in sorted(basis):
        mat = IntMat.zeros(len(basis.get(w - 1, ())), len(basis[w]))
        for mask, c in index[w].items():
            st = State(cube.n, mask)
            m = mask
            while m:
                low = m & -m
                m ^= low
                child = mask ^ low
                if w - 1 in index and child in index[w - 1]:
                    mat[index[w - 1][child], c] = edge_sign(st, low.bit_length() - 1)
        diff[w] = mat
    c = GradedChainComplex(basis, diff)
    c.check_shapes()
    for w in sorted(basis):
        d1, d2 = c.d(w), c.d(w + 1)
        assert d1 is None or d2 is None or (d1 @ d2).is_zero(), (
            f"subposet {s.label} is not order-convex: the boundary fails "
            f"to square to zero at weight {w}"
        )
    return c


# ---------------------------------------------------------------------------
# the block decomposition of the graph complex
# ---------------------------------------------------------------------------


def _homology_json(c: GradedChainComplex) -> dict:
    h = homology(c)
    return {
        str(k): {"free": b, "torsion": list(t)} for k, (b, t) in sorted(h.groups.items())
    }


def verify_cofibre_partition(cube) -> dict:
    """Check that the graph complex tiles into the subposet families.

    The report records (a) whether every generator falls into exactly one
    bucket whose states match the corresponding subposet, (b) whether the
    differential respects the buckets (one-merge blocks closed, merge-free
    copies mapping only to themselves or into the one-merge part), (c)
    whether the quotient by the one-merge subcomplex equals the direct sum
    of the ``X``-family subposet complexes block for block, and the long
    exact homology sequence of the resulting short exact sequence.
    """
    cube = _as_cube(cube)
    d = cube.diagram
    rep = detect_configs(d)
    cm = build_M_complex(cube)

    x = build_subposet(cube, "X")
    xe = {e: build_subposet(cube, "X^e", chord=e) for e in rep.monochords}
    y = build_subposet(cube, "Y")
    zb = {cls[0]: build_subposet(cube, "Z^b", chord=cls[0]) for cls in rep.parallel_classes}

    report: dict = {
        "partition_ok": True,
        "witness": None,
        "blocks_ok": True,
        "block_witness": None,
        "phi1_closed": True,
        "quotient_blocks_ok": True,
        "degree_shift": 0,
        "subposet_homology": {},
        "les_ok": None,
        "ok": False,
    }

    def fail_partition(mask: int) -> None:
        report["partition_ok"] = False
        if report["witness"] is None:
            report["witness"] = State(cube.n, mask).bitstring()

    # (a) the generator partition
    y_members = set(y.members)
    z_members = {b: set(sp.members) for b, sp in zb.items()}
    comp_states: dict[int, set[int]] = {}
    edge_states: dict[int, set[int]] = {}
    bucket: dict[int, tuple] = {}
    for labels in cm.basis.values():
        for lab in labels:
            if isinstance(lab, ComponentGen):
                comp_states.setdefault(lab.ancestor, set()).add(lab.state)
            elif isinstance(lab, EdgeGen):
                edge_states.setdefault(lab.chord, set()).add(lab.state)
            else:
                hits = [("Y",)] if lab.state in y_members else []
                hits += [("Z", b) for b, mem in z_members.items() if lab.state in mem]
                if len(hits) != 1:
                    fail_partition(lab.state)
                else:
                    bucket[lab.state] = hits[0]

    x_set = set(x.members)
    want_copies = set(range(cube.top_circles)) if x_set else set()
    if set(comp_states) != want_copies:
        fail_partition(next(iter(x_set), 0))
    for states in comp_states.values():
        for m in states ^ x_set:
            fail_partition(m)
    if set(edge_states) != {e for e, sp in xe.items() if sp.members}:
        report["partition_ok"] = False
    for e, states in edge_states.items():
        for m in states ^ (set(xe[e].members) if e in xe else set()):
            fail_partition(m)

    # (b) the differential respects the buckets
    def rule_ok(src, dst) -> bool:
        if isinstance(src, ComponentGen):
            return (
                isinstance(dst, ComponentGen) and dst.ancestor == src.ancestor
            ) or isinstance(dst, PlusGen)
        if isinstance(src, EdgeGen):
            return (
                isinstance(dst, EdgeGen) and dst.chord == src.chord
            ) or isinstance(dst, PlusGen)
        return isinstance(dst, PlusGen) and bucket.get(src.state) == bucket.get(dst.state)

    for w, mat in cm.diff.items():
        src_labels = cm.basis.get(w, ())
        dst_labels = cm.basis.get(w - 1, ())
        for (r, c), _v in mat.items():
            src, dst = src_labels[c], dst_labels[r]
            if not rule_ok(src, dst):
                report["blocks_ok"] = False
                if isinstance(src, PlusGen):
                    report["phi1_closed"] = False
                if report["block_witness"] is None:
                    report["block_witness"] = [str(src), str(dst)]

    # (c) quotient blocks against the X-family subposet complexes
    def extracted_block(select) -> GradedChainComplex:
        pos = {
            w: [i for i, lab in enumerate(labels) if select(lab)]
            for w, labels in cm.basis.items()
        }
        basis = {
            w: tuple(cm.basis[w][i] for i in idx) for w, idx in pos.items() if idx
        }
        diff = {
            w: mat.take_rows(pos.get(w - 1, [])).take_cols(pos.get(w, []))
            for w, mat in cm.diff.items()
        }
        return GradedChainComplex(basis, diff)

    def blocks_equal(a: GradedChainComplex, b: GradedChainComplex) -> bool:
        degs = set(a.basis) | set(b.basis)
        if any(a.dim(k) != b.dim(k) for k in degs):
            return False
        for k in degs | set(a.diff) | set(b.diff):
            da, db = a.d(k), b.d(k)
            if (da is None or da.is_zero()) and (db is None or db.is_zero()):
                continue
            if da is None or db is None or da != db:
                return False
        return True

    x_complex = subposet_complex(x)
    for anc in sorted(comp_states):
        block = extracted_block(
            lambda lab, anc=anc: isinstance(lab, ComponentGen) and lab.ancestor == anc
        )
        if not blocks_equal(block, x_complex):
            report["quotient_blocks_ok"] = False
    for e in sorted(edge_states):
        block = extracted_block(
            lambda lab, e=e: isinstance(lab, EdgeGen) and lab.chord == e
        )
        if e not in xe or not blocks_equal(block, subposet_complex(xe[e])):
            report["quotient_blocks_ok"] = False

    # the short exact sequence (one-merge part) >-> (whole) ->> (quotient)
    sub_pos = {
        w: [i for i, lab in enumerate(labels) if isinstance(lab, PlusGen)]
        for w, labels in cm.basis.items()
    }
    quot_pos = {
        w: [i for i, lab in enumerate(labels) if not isinstance(lab, PlusGen)]
        for w, labels in cm.basis.items()
    }
    sub_c = GradedChainComplex(
        {w: tuple(cm.basis[w][i] for i in idx) for w, idx in sub_pos.items() if idx},
        {
            w: mat.take_rows(sub_pos.get(w - 1, [])).take_cols(sub_pos.get(w, []))
            for w, mat in cm.diff.items()
        },
    )
    quot_c = GradedChainComplex(
        {w: tuple(cm.basis[w][i] for i in idx) for w, idx in quot_pos.items() if idx},
        {
            w: mat.take_rows(quot_pos.get(w - 1, [])).take_cols(quot_pos.get(w, []))
            for w, mat in cm.diff.items()
        },
    )
    inj: dict[int, IntMat] = {}
    proj: dict[int, IntMat] = {}
    for w in cm.basis:
        m = IntMat.zeros(cm.dim(w), len(sub_pos[w]))
        for j, r in enumerate(sub_pos[w]):
            m[r, j] = 1
        inj[w] = m
        p = IntMat.zeros(len(quot_pos[w]), cm.dim(w))
        for i, c in enumerate(quot_pos[w]):
            p[i, c] = 1
        proj[w] = p
    les = ses_and_les_report(sub_c, cm, quot_c, inj, proj)
    report["les_ok"] = les["ok"]
    report["les_degrees"] = les["degrees"]

    report["subposet_homology"]["X"] = _homology_json(x_complex)
    for e, sp in xe.items():
        report["subposet_homology"][f"X^e[{e}]"] = _homology_json(subposet_complex(sp))
    report["subposet_homology"]["Y"] = _homology_json(subposet_complex(y))
    for b, sp in zb.items():
        report["subposet_homology"][f"Z^b[{b}]"] = _homology_json(subposet_complex(sp))

    report["ok"] = (
        report["partition_ok"]
        and report["blocks_ok"]
        and report["phi1_closed"]
        and report["quotient_blocks_ok"]
        and report["les_ok"]
    )
    return report


# ---------------------------------------------------------------------------
# smoothing one chord / crossing
# ---------------------------------------------------------------------------


def _delete_chord(d: ChordDiagram, a: int) -> ChordDiagram:
    """Remove chord ``a`` and its two marks, renumbering densely.

    Chord ``j`` keeps its endpoint convention (marks ``2j``/``2j + 1``)
    after the shift ``j -> j - 1`` for ``j > a``; crossing-sign totals do
    not survive the deletion and are dropped.
    """
    lo, hi = 2 * a, 2 * a + 1

    def tr(m: int) -> int:
        return m - 2 if m > hi else m

    circles = tuple(
        tuple(tr(m) for m in circ if m not in (lo, hi)) for circ in d.circles
    )
    chords = tuple(
        Chord(
            c.index - (1 if c.index > a else 0),
            (tr(c.endpoints[0]), tr(c.endpoints[1])),
            c.label,
            tr(c.distinguished),
        )
        for c in d.chords
        if c.index != a
    )
    sides = tuple(s for m, s in enumerate(d.sides) if m not in (lo, hi))
    out = ChordDiagram(circles, chords, sides, None, None)
    problems = validate(out)
    assert not problems, "; ".join(problems)
    return out


def _smooth_cd(d: ChordDiagram, a: int, value: int) -> ChordDiagram:
    if value == 1:
        if d.chords[a].label != 1:
            raise ValueError(f"chord {a} is already a 0-chord")
        return _delete_chord(d, a)
    return _delete_chord(surger(d, a), a)


_HEAD, _TAIL = 1, 0


def _repair_under_orientation(
    crossings: tuple[tuple[int, int, int, int], ...]
) -> tuple[tuple[int, int, int, int], ...]:
    """Rotate crossing tuples so position 0 is again the incoming
    under-strand.

    Smoothing can reverse the orientation of part of a diagram, turning
    the stored entry point of an under-strand into its exit.  The repair
    2-colors the slots (head/tail) using only the relaxed constraints --
    the two slots of an arc disagree, and so do the two slots of each
    strand at a crossing -- and then rotates every crossing whose slot 0
    came out as a tail by half a turn, which preserves the cyclic order.
    """
    occurrences: dict[int, list[tuple[int, int]]] = {}
    for ci, t in enumerate(crossings):
        for pos, arc in enumerate(t):
            occurrences.setdefault(arc, []).append((ci, pos))

    role: dict[tuple[int, int], int] = {}

    def assign(slot: tuple[int, int], value: int) -> None:
        stack = [(slot, value)]
        while stack:
            s, v = stack.pop()
            if s in role:
                assert role[s] == v, "smoothing produced an unorientable trace"
                continue
            role[s] = v
            ci, pos = s
            arc = crossings[ci][pos]
            a, b = occurrences[arc]
            stack.append((b if s == a else a, 1 - v))
            partner = {0: 2, 2: 0, 1: 3, 3: 1}[pos]
            stack.append(((ci, partner), 1 - v))

    for ci in range(len(crossings)):
        for pos in (0, 1):
            if (ci, pos) not in role:
                assign((ci, pos), _HEAD if pos == 0 else _TAIL)

    return tuple(
        (t[2], t[3], t[0], t[1]) if role[(ci, 0)] == _TAIL else t
        for ci, t in enumerate(crossings)
    )


def _smooth_pd(pd: PDCode, c: int, value: int) -> PDCode:
    a, b, cc, dd = pd.crossings[c]
    joins = ((a, b), (cc, dd)) if value == 1 else ((a, dd), (b, cc))

    parent = {arc: arc for arc in (a, b, cc, dd)}

    def find(x: int) -> int:
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    for p, q in joins:
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[max(rp, rq)] = min(rp, rq)

    remaining = [t for i, t in enumerate(pd.crossings) if i != c]
    renamed = [tuple(find(x) for x in t) for t in remaining]

    seen = {arc for t in renamed for arc in t}
    loops = pd.loops + len({find(x) for x in (a, b, cc, dd)} - seen)

    crossings = _repair_under_orientation(tuple(renamed))
    signs = _orient_and_sign(crossings)
    out = PDCode(crossings, signs, loops)
    problems = validate(out)
    if problems:
        raise ValueError("; ".join(problems))
    return out


def smooth(d, chord: int, value: int):
    """Smooth one crossing/chord of a diagram, staying in the same format.

    ``value == 1`` deletes the chord and keeps the circles: the all-ones
    resolution of the result is the old one minus the chord.  ``value == 0``
    surgers along the chord first and then deletes it.  For planar diagram
    codes the two reconnections are the usual 1- and 0-smoothings of the
    crossing; signs of the remaining crossings are re-derived from the
    smoothed trace (a 0-smoothing need not respect orientations) and
    crossing-free circles move to the ``loops`` count.  Chord diagrams
    carry only sign *totals*, which cannot be updated chord by chord, so
    the smoothed chord diagram is returned without them.
    """
    if value not in (0, 1):
        raise ValueError(f"smoothing value must be 0 or 1, got {value!r}")
    if isinstance(d, PDCode):
        if not 0 <= chord < d.n:
            raise ValueError(f"no crossing {chord} in a {d.n}-crossing code")
        return _smooth_pd(d, chord, value)
    if isinstance(d, ChordDiagram):
        if not 0 <= chord < d.n:
            raise ValueError(f"no chord {chord} in a diagram with {d.n} chords")
        return _smooth_cd(d, chord, value)
    raise TypeError(f"expected PDCode or ChordDiagram, got {type(d).__name__}")


# ---------------------------------------------------------------------------
# skein short exact sequences
# ---------------------------------------------------------------------------


def _insert_bit(mask: int, a: int, bit: int) -> int:
    return ((mask >> a) << (a + 1)) | (bit << a) | (mask & ((1 << a) - 1))


def _drop_bit(mask: int, a: int) -> int:
    return ((mask >> (a + 1)) << a) | (mask & ((1 << a) - 1))


def _eps(mask: int, a: int) -> int:
    """Sign conjugation for the ``u_a = 1`` face: edges along chords above
    ``a`` lose one set bit below them when the coordinate is dropped."""
    return -1 if bin(mask >> (a + 1)).count("1") % 2 else 1


def _plus_embedding(
    sub: GradedChainComplex, total: GradedChainComplex, a: int
) -> dict[int, IntMat]:
    """Columns send each single-generator state to its ``u_a = 0`` twin."""
    out: dict[int, IntMat] = {}
    for w, labels in sub.basis.items():
        pos = {lab: i for i, lab in enumerate(total.basis.get(w, ()))}
        m = IntMat.zeros(total.dim(w), len(labels))
        for j, lab in enumerate(labels):
            m[pos[PlusGen(_insert_bit(lab.state, a, 0))], j] = 1
        out[w] = m
    return out


def _cross_match(big: ChordDiagram, small: ChordDiagram, a: int) -> dict[int, int]:
    """Circle positions of a smoothed-diagram state inside the matching
    ``u_a = 0`` state of the ambient cube.

    Marked circles pair up through the mark renumbering; circles whose
    only marks were the two deleted ones (and circles markless on both
    sides) pair up in storage order, which both cubes build identically.
    """
    drop = {2 * a, 2 * a + 1}

    def lift(m: int) -> int:
        return m + 2 if m >= 2 * a else m

    by_marks: dict[frozenset, int] = {}
    big_left: list[int] = []
    for pos, circ in enumerate(big.circles):
        stripped = frozenset(circ) - drop
        if stripped:
            by_marks[stripped] = pos
        else:
            big_left.append(pos)

    mapping: dict[int, int] = {}
    small_left: list[int] = []
    for pos, circ in enumerate(small.circles):
        if circ:
            mapping[pos] = by_marks[frozenset(lift(m) for m in circ)]
        else:
            small_left.append(pos)
    assert len(small_left) == len(big_left), "circle matching lost a loop"
    mapping.update(zip(small_left, big_left))
    return mapping


def _graph_embedding(
    cube: CubeIndex,
    cube0: CubeIndex,
    a: int,
    sub: GradedChainComplex,
    total: GradedChainComplex,
) -> dict[int, IntMat]:
    """Embed the graph complex of ``D[a=0]`` as the ``u_a = 0`` part.

    The circle complexes include label for label, so the embedding is the
    circle-complex inclusion conjugated by the comparison isomorphisms of
    the two diagrams; the result is integral because the comparison
    matrices are unimodular.
    """
    g_big = build_gamma(cube)
    g_small = build_gamma(cube0)
    f_big = build_F_complex(cube)
    f_small = build_F_complex(cube0)
    # per small state: small circle key -> matching big circle key
    key_maps: dict[int, dict[int, int]] = {}

    def circle_key(small_mask: int, small_key: int) -> int:
        if small_mask not in key_maps:
            rb = cube.resolve(_insert_bit(small_mask, a, 0))
            rs = cube0.resolve(small_mask)
            assert rb is not None and rs is not None
            positions = _cross_match(rb.diagram, rs.diagram, a)
            big_keys = _circle_keys(rb.diagram)
            key_maps[small_mask] = {
                key: big_keys[positions[pos]]
                for pos, key in enumerate(_circle_keys(rs.diagram))
            }
        return key_maps[small_mask][small_key]

    out: dict[int, IntMat] = {}
    for w in sub.basis:
        fpos = {lab: i for i, lab in enumerate(f_big.basis.get(w, ()))}
        inc = IntMat.zeros(f_big.dim(w), f_small.dim(w))
        for j, lab in enumerate(f_small.basis[w]):
            if isinstance(lab, PlusGen):
                big = PlusGen(_insert_bit(lab.state, a, 0))
            else:
                big = CircleGen(
                    _insert_bit(lab.state, a, 0),
                    circle_key(lab.state, lab.circle),
                )
            inc[fpos[big], j] = 1
        x = solve_matrix(g_big[w], inc @ g_small[w])
        assert x is not None, "comparison map failed to invert over the integers"
        out[w] = x
    return out


def _quotient_projection(
    left: GradedChainComplex, total: GradedChainComplex, a: int
) -> dict[int, IntMat]:
    """Project onto the ``u_a = 1`` face, relabelled into the smoothed
    diagram's cube one degree down, with the sign conjugation."""
    out: dict[int, IntMat] = {}
    for w, labels in total.basis.items():
        rows = {lab: i for i, lab in enumerate(left.basis.get(w - 1, ()))}
        m = IntMat.zeros(len(rows), len(labels))
        for c, lab in enumerate(labels):
            if not (lab.state >> a) & 1:
                continue
            small_mask = _drop_bit(lab.state, a)
            if isinstance(lab, PlusGen):
                small = PlusGen(small_mask)
            elif isinstance(lab, ComponentGen):
                small = ComponentGen(small_mask, lab.ancestor)
            else:
                small = EdgeGen(small_mask, lab.chord - (1 if lab.chord > a else 0))
            m[rows[small], c] = _eps(lab.state, a)
        out[w] = m
    return out


def _image_is_zero_side(
    inj: dict[int, IntMat], total: GradedChainComplex, a: int
) -> bool:
    """Does the embedding hit exactly the span of the ``u_a = 0``
    generators?"""
    for w, labels in total.basis.items():
        want = [i for i, lab in enumerate(labels) if not (lab.state >> a) & 1]
        m = inj.get(w)
        if m is None:
            if want:
                return False
            continue
        unit = IntMat.zeros(total.dim(w), len(want))
        for j, r in enumerate(want):
            unit[r, j] = 1
        if image_lattice(m) != image_lattice(unit):
            return False
    return True


def verify_skein(cube, chord: int, sequence: Optional[str] = None) -> dict:
    """Verify the short exact sequences attached to smoothing one chord.

    For a monochord both the graph-complex sequence (middle term the graph
    complex of ``D[a=0]``) and the merge-free sequence (the three ``X``
    complexes) are checked; for a bichord the single graph-complex
    sequence, whose middle term is the merge-free complex of ``D[a=0]``.
    The middle complex must embed exactly as the ``u_a = 0`` span, the
    quotient is the ``u_a = 1`` face matched to the complex of ``D[a=1]``
    shifted up by one, and the long exact homology sequence must be exact.
    Pass ``sequence`` (``"M"`` or ``"X"``) to check a single sequence.
    """
    cube = _as_cube(cube)
    d = cube.diagram
    if not 0 <= chord < d.n:
        raise ValueError(f"no chord {chord} in a diagram with {d.n} chords")
    mono = d.is_monochord(chord)
    if sequence is None:
        wanted = ("M", "X") if mono else ("M",)
    elif sequence == "M":
        wanted = ("M",)
    elif sequence == "X":
        if not mono:
            raise ValueError(
                f"chord-kind mismatch: the merge-free sequence needs a "
                f"monochord and chord {chord} joins two circles"
            )
        wanted = ("X",)
    else:
        raise ValueError(f"unknown sequence kind {sequence!r} (want 'M' or 'X')")

    d0 = smooth(d, chord, 0)
    d1 = smooth(d, chord, 1)
    cube0, cube1 = CubeIndex(d0), CubeIndex(d1)

    out: dict = {
        "chord": chord,
        "kind": "monochord" if mono else "bichord",
        "sequences": {},
        "ok": True,
    }
    for seq in wanted:
        if seq == "X":
            total = build_extreme_complex(cube)
            sub = build_extreme_complex(cube0)
            left = build_extreme_complex(cube1)
            inj = _plus_embedding(sub, total, chord)
            names = ("X(D[a=1])", "X(D[a=0])", "X(D)")
        else:
            total = build_M_complex(cube)
            left = build_M_complex(cube1)
            if mono:
                sub = build_M_complex(cube0)
                inj = _graph_embedding(cube, cube0, chord, sub, total)
                names = ("M(D[a=1])", "M(D[a=0])", "M(D)")
            else:
                sub = build_extreme_complex(cube0)
                inj = _plus_embedding(sub, total, chord)
                names = ("M(D[a=1])", "X(D[a=0])", "M(D)")
        proj = _quotient_projection(left, total, chord)
        quot = shift_degrees(left, 1)
        embeds = _image_is_zero_side(inj, total, chord)
        les = ses_and_les_report(sub, total, quot, inj, proj)
        out["sequences"][seq] = {
            "left": names[0],
            "middle": names[1],
            "right": names[2],
            "embeds_as_zero_part": embeds,
            "les_ok": les["ok"],
            "les_degrees": les["degrees"],
        }
        out["ok"] = out["ok"] and embeds and les["ok"]
    return out


# ---------------------------------------------------------------------------
# simplification moves
# ---------------------------------------------------------------------------


def _nested_monochords(d: ChordDiagram, rep) -> Optional[tuple[int, int, int]]:
    """A 2-free monochord with a 2-free monochord strictly inside each of
    its two arcs, or ``None``.  Returns ``(chord, witness, witness)``."""
    paired: set[int] = set()
    for e, f in rep.alternating_pairs:
        paired.update((e, f))
    twofree = [m for m in rep.monochords if m not in paired]
    tf = set(twofree)
    for a in twofree:
        arc1, arc2 = monochord_arcs(d, a)
        w1 = sorted(mk // 2 for mk in arc1 if mk % 2 == 0 and mk // 2 in tf)
        w2 = sorted(mk // 2 for mk in arc2 if mk % 2 == 0 and mk // 2 in tf)
        if w1 and w2:
            return a, w1[0], w2[0]
    return None


def simplify(d) -> tuple[ChordDiagram, int, tuple[dict, ...]]:
    """Delete suspension-only chords until none is left.

    Two moves are applied, each deleting one chord and raising the
    suspension count by one: removing one of two *equivalent* bichords
    (parallel, with no monochord alternating between them), and removing a
    2-free monochord *nested* between 2-free monochords on both of its
    sides.  Homology of the graph complex of the input equals that of the
    reduced diagram shifted up by the suspension count.  Chord indices in
    each log entry refer to the diagram as it stood before that move.
    """
    cur = to_chord_diagram(d)
    log: list[dict] = []
    while True:
        rep = detect_configs(cur)
        pairs = equivalent_bichord_pairs(rep)
        if pairs:
            gone, kept = pairs[0]
            log.append(
                {"move": "equivalent-bichords", "removed": gone, "parallel_to": kept}
            )
            cur = smooth(cur, gone, 1)
            continue
        nested = _nested_monochords(cur, rep)
        if nested is not None:
            gone, w1, w2 = nested
            log.append(
                {"move": "nested-monochords", "removed": gone, "witnesses": [w1, w2]}
            )
            cur = smooth(cur, gone, 1)
            continue
        break
    return cur, len(log), tuple(log)
