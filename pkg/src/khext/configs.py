"""Chord-configuration analysis: which local patterns control merges.

Resolving a state ``u`` surgers all chords that ``u`` sets to 0.  Whether
any merges occur -- and whether more than one occurs -- depends only on
the *restriction* of the all-ones diagram to those chords.  This module
detects the finitely many patterns responsible:

* a **bichord** (endpoints on two circles) always merges;
* an **alternating pair** -- two monochords whose endpoints interleave on
  one circle -- forces one merge (the first split turns the other chord
  into a bichord);
* two **non-parallel** bichords (different circle pairs), or a bichord
  together with an alternating pair, force two merges;
* an **alternating triple** -- parallel bichords ``a, b`` and a monochord
  ``c`` meeting one of their shared circles in the cyclic pattern
  ``a, c, b, c`` -- forces two merges;
* two **disjoint alternating pairs** -- four monochords inducing a
  perfect matching in the alternation relation -- force two merges;
* a **mixed alternating pair** -- four monochords inducing a *path* in
  the alternation relation -- forces two merges.

Four monochords inducing a 4-cycle do *not* force two merges (resolving
one pair of opposite chords can leave the other pair non-interleaved),
which is why the two quadruple patterns above are stated through induced
subgraphs rather than through mere existence of disjoint pairs.

All patterns are stable under restriction, so each one yields a *witness
mask* of participating chords: the pattern is present in the restriction
of a state ``u`` exactly when ``witness_mask & u.mask == 0``.  This gives
a constant-time-per-state classifier, validated elsewhere against the
surgery engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .ingest import to_chord_diagram
from .model import ChordDiagram, State

__all__ = [
    "ConfigReport",
    "detect_configs",
    "classify_phi_by_configs",
    "is_1_adequate",
    "has_alternating_pair",
    "monochord_arcs",
    "d_set",
    "equivalent_bichord_pairs",
]


@dataclass(frozen=True)
class ConfigReport:
    """Everything :func:`detect_configs` finds in one diagram.

    ``parallel_classes`` groups the bichords by the (unordered) pair of
    circles they join.  Witness tuples list chord indices in increasing
    order; witness masks are bitmasks over chord indices.
    """

    n: int
    monochords: tuple[int, ...]
    bichords: tuple[int, ...]
    parallel_classes: tuple[tuple[int, ...], ...]
    alternating_pairs: tuple[tuple[int, int], ...]
    alternating_triples: tuple[tuple[int, int, int], ...]
    disjoint_alternating_pairs: tuple[tuple[int, int, int, int], ...]
    mixed_alternating_pairs: tuple[tuple[int, int, int, int], ...]
    phi1_witnesses: tuple[int, ...]
    phi2_witnesses: tuple[int, ...]

    @property
    def one_adequate(self) -> bool:
        """No monochords: every resolution step away from all-ones merges."""
        return not self.monochords

    @property
    def two_free(self) -> bool:
        return not self.alternating_pairs

    @property
    def three_free(self) -> bool:
        return not self.alternating_triples

    @property
    def free(self) -> bool:
        return self.two_free and self.three_free

    def describe(self) -> dict:
        return {
            "n": self.n,
            "monochords": list(self.monochords),
            "bichords": list(self.bichords),
            "parallel_classes": [list(c) for c in self.parallel_classes],
            "alternating_pairs": [list(p) for p in self.alternating_pairs],
            "alternating_triples": [list(t) for t in self.alternating_triples],
            "disjoint_alternating_pairs": [
                list(q) for q in self.disjoint_alternating_pairs
            ],
            "mixed_alternating_pairs": [
                list(q) for q in self.mixed_alternating_pairs
            ],
            "one_adequate": self.one_adequate,
            "two_free": self.two_free,
            "three_free": self.three_free,
            "free": self.free,
        }


def _interleaved(circle: tuple[int, ...], x: tuple[int, int],
                 y: tuple[int, int]) -> bool:
    """Do the mark pairs ``x`` and ``y`` alternate around ``circle``?"""
    pos = {m: k for k, m in enumerate(circle)}
    i1, i2 = sorted((pos[x[0]], pos[x[1]]))
    j1, j2 = sorted((pos[y[0]], pos[y[1]]))
    return (i1 < j1 < i2 < j2) or (j1 < i1 < j2 < i2)


def _separates(circle: tuple[int, ...], cut: tuple[int, int], a: int,
               b: int) -> bool:
    """Do the endpoints of ``cut`` separate marks ``a`` and ``b`` on the
    circle?"""
    pos = {m: k for k, m in enumerate(circle)}
    c1, c2 = sorted((pos[cut[0]], pos[cut[1]]))
    ina = c1 < pos[a] < c2
    inb = c1 < pos[b] < c2
    return ina != inb


def detect_configs(diagram) -> ConfigReport:
    """Scan the all-ones resolution of ``diagram`` for every configuration
    the classifier needs (see module docstring)."""
    d = to_chord_diagram(diagram)
    n = d.n
    monochords = tuple(i for i in range(n) if d.is_monochord(i))
    bichords = tuple(i for i in range(n) if not d.is_monochord(i))

    by_pair: dict[frozenset, list[int]] = {}
    for i in bichords:
        p, q = d.chords[i].endpoints
        by_pair.setdefault(frozenset((d.circle_of(p), d.circle_of(q))), []).append(i)
    parallel_classes = tuple(
        tuple(sorted(v)) for v in sorted(by_pair.values(), key=min)
    )
    class_of = {}
    for k, cls in enumerate(parallel_classes):
        for i in cls:
            class_of[i] = k

    alt_pairs: list[tuple[int, int]] = []
    for x, y in combinations(monochords, 2):
        cx = d.circle_of(d.chords[x].endpoints[0])
        if cx != d.circle_of(d.chords[y].endpoints[0]):
            continue
        if _interleaved(d.circles[cx], d.chords[x].endpoints,
                        d.chords[y].endpoints):
            alt_pairs.append((x, y))

    triples: list[tuple[int, int, int]] = []
    for cls in parallel_classes:
        for a, b in combinations(cls, 2):
            pa, qa = d.chords[a].endpoints
            shared = {d.circle_of(pa), d.circle_of(qa)}
            for c in monochords:
                cc = d.circle_of(d.chords[c].endpoints[0])
                if cc not in shared:
                    continue
                mark_a = pa if d.circle_of(pa) == cc else qa
                pb, qb = d.chords[b].endpoints
                mark_b = pb if d.circle_of(pb) == cc else qb
                if _separates(d.circles[cc], d.chords[c].endpoints,
                              mark_a, mark_b):
                    triples.append((a, b, c))

    edge_set = set(alt_pairs)
    mixed: list[tuple[int, int, int, int]] = []
    disjoint: list[tuple[int, int, int, int]] = []
    for quad in combinations(monochords, 4):
        edges = [e for e in combinations(quad, 2) if e in edge_set]
        if len(edges) == 2 and not set(edges[0]) & set(edges[1]):
            disjoint.append(quad)
            continue
        if len(edges) != 3:
            continue
        deg: dict[int, int] = {v: 0 for v in quad}
        for e in edges:
            deg[e[0]] += 1
            deg[e[1]] += 1
        if sorted(deg.values()) == [1, 1, 2, 2]:
            mixed.append(quad)

    def mask(chords) -> int:
        m = 0
        for i in chords:
            m |= 1 << i
        return m

    phi1 = {mask((i,)) for i in bichords} | {mask(p) for p in alt_pairs}

    phi2: set[int] = set()
    for a, b in combinations(bichords, 2):
        if class_of[a] != class_of[b]:
            phi2.add(mask((a, b)))
    for p in alt_pairs:
        for i in bichords:
            phi2.add(mask(p + (i,)))
    for t in triples:
        phi2.add(mask(t))
    for quad in disjoint:
        phi2.add(mask(quad))
    for quad in mixed:
        phi2.add(mask(quad))

    return ConfigReport(
        n,
        monochords,
        bichords,
        parallel_classes,
        tuple(alt_pairs),
        tuple(triples),
        tuple(disjoint),
        tuple(mixed),
        tuple(sorted(phi1)),
        tuple(sorted(phi2)),
    )


def classify_phi_by_configs(diagram, state,
                            report: Optional[ConfigReport] = None) -> int:
    """Predict ``phi`` of a state from configurations alone: returns 0, 1,
    or 2, where 2 stands for "at least two merges".  Pass a precomputed
    ``report`` when classifying many states of one diagram."""
    if report is None:
        report = detect_configs(diagram)
    u = state.mask if isinstance(state, State) else int(state)
    if any(w & u == 0 for w in report.phi2_witnesses):
        return 2
    if any(w & u == 0 for w in report.phi1_witnesses):
        return 1
    return 0


def is_1_adequate(diagram) -> bool:
    """True when the all-ones resolution has no monochords."""
    d = to_chord_diagram(diagram)
    return all(not d.is_monochord(i) for i in range(d.n))


def has_alternating_pair(diagram) -> bool:
    return bool(detect_configs(diagram).alternating_pairs)


# ---------------------------------------------------------------------------
# helpers used by the decomposition and simplification layers
# ---------------------------------------------------------------------------


def monochord_arcs(d: ChordDiagram, m: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The two open arcs into which monochord ``m`` cuts its circle
    (tuples of the marks strictly inside each arc)."""
    if not d.is_monochord(m):
        raise ValueError(f"chord {m} is not a monochord")
    p, q = d.chords[m].endpoints
    circ = d.circles[d.circle_of(p)]
    k = circ.index(p)
    circ = circ[k:] + circ[:k]
    j = circ.index(q)
    return circ[1:j], circ[j + 1 :]


def d_set(d: ChordDiagram, m: int) -> frozenset:
    """Bichords with an endpoint inside one arc of monochord ``m``; the arc
    with fewer such endpoints is chosen (ties by fewer total marks, then by
    the arc following the even mark).  Either choice decides alternating
    triples: ``(a, b, m)`` is a triple exactly when one of ``a, b`` lies
    inside and the other outside."""
    arc1, arc2 = monochord_arcs(d, m)

    def bichords_in(arc) -> frozenset:
        return frozenset(
            mk // 2 for mk in arc if not d.is_monochord(mk // 2)
        )

    s1, s2 = bichords_in(arc1), bichords_in(arc2)
    if len(s1) != len(s2):
        return min((s1, s2), key=len)
    if len(arc1) != len(arc2):
        return s1 if len(arc1) < len(arc2) else s2
    return s1


def equivalent_bichord_pairs(report: ConfigReport) -> tuple[tuple[int, int], ...]:
    """Parallel bichord pairs that no monochord separates (no alternating
    triple involves them); surgering along either member then gives the
    same result, so one of them is redundant."""
    blocked = {(a, b) for a, b, _ in report.alternating_triples}
    out = []
    for cls in report.parallel_classes:
        for a, b in combinations(cls, 2):
            if (a, b) not in blocked:
                out.append((a, b))
    return tuple(out)
