"""Data model: planar diagram codes, chord diagrams, states and complexes.

The geometric objects handled by this library are *chord diagrams*: disjoint
unions of circles with chords attached at marked points.  A chord diagram
arises from a planar diagram code (:class:`PDCode`) by replacing every
crossing with its 1-smoothing; further 0-smoothings ("surgeries") are
performed by :mod:`khext.statecube`.

Identifier conventions
----------------------
* Chords are indexed ``0 .. n-1`` in input order.
* Chord ``i`` owns the two endpoint marks ``2*i`` and ``2*i + 1``.  The
  *distinguished* endpoint of a chord is the smaller mark ``2*i``.  Marks
  persist through smoothing operations, so a chord keeps its identity in
  every partial resolution of the same diagram.
* Each circle is stored as a cyclic sequence of marks.  Two stored
  sequences describe the same geometric circle when they differ by a
  rotation, or by reversal combined with flipping every side bit carried
  by the circle.
* ``sides[mark]`` records on which side of the circle the chord leaves the
  marked point, relative to the *stored* traversal direction: ``0`` means
  left, ``1`` means right.  Side bits encode exactly enough of the local
  planar geometry for smoothing to be well defined without an embedding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, NamedTuple, Optional, Sequence

__all__ = [
    "LEFT",
    "RIGHT",
    "PDCode",
    "Chord",
    "ChordDiagram",
    "State",
    "ResolvedState",
    "GradedChainComplex",
    "SimplicialComplex",
    "HomologyResult",
    "validate",
]

#: Side-bit values (relative to the stored traversal direction of a circle).
LEFT, RIGHT = 0, 1


# ---------------------------------------------------------------------------
# planar diagram codes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PDCode:
    """A planar diagram code.

    ``crossings[i]`` is the 4-tuple ``(a, b, c, d)`` of arc labels of
    crossing ``i``, listed counterclockwise starting at the incoming
    under-strand; the under-strand runs ``a -> c``.

    ``signs[i]`` is ``+1`` or ``-1``; it is derived from arc orientations
    at parse time (see :func:`khext.ingest.parse_pd`).

    ``loops`` counts crossing-free circles.  The empty code ``PD[]``
    denotes the 0-crossing unknot diagram and has ``loops == 1``.
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    signs: tuple[int, ...]
    loops: int = 0

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    def arcs(self) -> list[int]:
        """All arc labels, with multiplicity."""
        return [a for t in self.crossings for a in t]

    def __str__(self) -> str:
        body = ", ".join("X[%d,%d,%d,%d]" % t for t in self.crossings)
        return "PD[%s]" % body


# ---------------------------------------------------------------------------
# chord diagrams
# ---------------------------------------------------------------------------


class Chord(NamedTuple):
    """One chord of a chord diagram.

    ``label`` is 1 while the chord still crosses the diagram (a *1-chord*)
    and 0 once it has been surgered (a *0-chord*).  ``distinguished`` is the
    smaller endpoint mark; several constructions orient a 0-chord toward the
    part of the diagram holding this mark.
    """

    index: int
    endpoints: tuple[int, int]
    label: int
    distinguished: int


@dataclass(frozen=True)
class ChordDiagram:
    """Circles with labeled chords; see the module docstring for conventions.

    ``n_plus`` / ``n_minus`` carry the crossing signs of an originating
    planar diagram when known, and are ``None`` for abstract chord-diagram
    input (such diagrams still have well defined internal gradings, but no
    preferred Khovanov normalization).
    """

    circles: tuple[tuple[int, ...], ...]
    chords: tuple[Chord, ...]
    sides: tuple[int, ...]
    n_plus: Optional[int] = None
    n_minus: Optional[int] = None

    @property
    def n(self) -> int:
        return len(self.chords)

    # -- look-ups ---------------------------------------------------------

    def endpoint_map(self) -> dict[int, int]:
        """mark -> index (into ``circles``) of the circle carrying it."""
        where: dict[int, int] = {}
        for pos, circ in enumerate(self.circles):
            for m in circ:
                where[m] = pos
        return where

    def circle_of(self, mark: int) -> int:
        for pos, circ in enumerate(self.circles):
            if mark in circ:
                return pos
        raise KeyError(f"mark {mark} lies on no circle")

    def is_monochord(self, i: int) -> bool:
        """True when both endpoints of chord ``i`` lie on one circle."""
        p, q = self.chords[i].endpoints
        return self.circle_of(p) == self.circle_of(q)

    def zero_chords(self) -> tuple[int, ...]:
        return tuple(c.index for c in self.chords if c.label == 0)

    def one_chords(self) -> tuple[int, ...]:
        return tuple(c.index for c in self.chords if c.label == 1)

    def side(self, mark: int) -> int:
        return self.sides[mark]

    def __str__(self) -> str:
        rings = " ".join(
            "(" + " ".join(str(m) for m in circ) + ")" for circ in self.circles
        )
        tags = " ".join(
            "%d:{%d,%d}/%d" % (c.index, c.endpoints[0], c.endpoints[1], c.label)
            for c in self.chords
        )
        return f"ChordDiagram[{rings} | {tags}]"


# ---------------------------------------------------------------------------
# states of the cube of resolutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class State:
    """A vertex of the cube ``{0,1}^n``, stored as a bitmask.

    Bit ``i`` of ``mask`` is the label of chord ``i``.  The all-ones state
    is the starting resolution; lowering a bit surgers the matching chord.
    """

    n: int
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask < (1 << self.n):
            raise ValueError(f"mask {self.mask:#x} out of range for n={self.n}")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "State":
        mask = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError(f"state bit {b!r} not in {{0,1}}")
            mask |= b << i
        return cls(len(bits), mask)

    @classmethod
    def all_ones(cls, n: int) -> "State":
        return cls(n, (1 << n) - 1)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.mask >> i) & 1 for i in range(self.n))

    @property
    def weight(self) -> int:
        return bin(self.mask).count("1")

    def bit(self, i: int) -> int:
        return (self.mask >> i) & 1

    def lower(self, i: int) -> "State":
        """The state with bit ``i`` cleared (must currently be set)."""
        if not self.bit(i):
            raise ValueError(f"bit {i} already 0 in {self}")
        return State(self.n, self.mask & ~(1 << i))

    def bitstring(self) -> str:
        """Bits in chord order; leftmost character is chord 0."""
        return "".join(str(b) for b in self.bits)

    def __str__(self) -> str:
        return "u=" + self.bitstring()


@dataclass(frozen=True)
class ResolvedState:
    """A fully computed vertex of the cube.

    ``components`` partitions the circle positions of ``diagram`` into the
    connected components of the state graph (circles joined by 0-chords).
    It is ``None`` when ``phi > 1``: such states carry no generators and
    their component structure is never consulted.

    ``ancestors[pos]`` gives, for every circle of a ``phi == 0`` state, the
    index of the circle of the all-ones resolution it descends from (the
    history of such a state consists of splits only, so descent is well
    defined); it is ``None`` otherwise.
    """

    state: State
    diagram: ChordDiagram
    phi: int
    components: Optional[tuple[tuple[int, ...], ...]]
    zero_chords: tuple[int, ...]
    one_chords: tuple[int, ...]
    ancestors: Optional[tuple[int, ...]] = None

    @property
    def circle_count(self) -> int:
        return len(self.diagram.circles)


# ---------------------------------------------------------------------------
# chain complexes and homology
# ---------------------------------------------------------------------------


@dataclass
class GradedChainComplex:
    """A bounded complex of finitely generated free abelian groups.

    ``basis[k]`` is the ordered tuple of generator labels in degree ``k``
    (labels are opaque; they only need to be hashable and have a stable
    string form).  ``diff[k]`` is the matrix of the differential
    ``C_k -> C_{k-1}`` with shape ``(dim(k-1), dim(k))``; absent degrees and
    differentials are zero.
    """

    basis: dict[int, tuple[Any, ...]]
    diff: dict[int, Any]

    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def dim(self, k: int) -> int:
        return len(self.basis.get(k, ()))

    def d(self, k: int):
        """Differential leaving degree ``k`` (``None`` when zero/absent)."""
        return self.diff.get(k)

    def total_dim(self) -> int:
        return sum(len(v) for v in self.basis.values())

    def check_shapes(self) -> None:
        for k, m in self.diff.items():
            want = (self.dim(k - 1), self.dim(k))
            have = (m.nrows, m.ncols)
            if want != have:
                raise ValueError(
                    f"differential at degree {k} has shape {have}, expected {want}"
                )


@dataclass(frozen=True)
class SimplicialComplex:
    """An abstract simplicial complex, stored as its full set of faces.

    Faces are sorted vertex tuples.  The empty face ``()`` is always a
    member; a complex whose only face is ``()`` is the empty complex (the
    reduced homology of which is a single Z in degree -1).
    """

    vertices: tuple[Any, ...]
    faces: frozenset[tuple[Any, ...]]

    @classmethod
    def from_faces(cls, maximal: Iterable[Sequence[Any]]) -> "SimplicialComplex":
        """Close the given faces downward."""
        faces: set[tuple[Any, ...]] = {()}
        verts: set[Any] = set()
        for f in maximal:
            fs = tuple(sorted(set(f)))
            verts.update(fs)
            k = len(fs)
            for submask in range(1 << k):
                faces.add(tuple(fs[i] for i in range(k) if (submask >> i) & 1))
        return cls(tuple(sorted(verts)), frozenset(faces))

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.faces) - 1

    def faces_of_dim(self, k: int) -> list[tuple[Any, ...]]:
        return sorted(f for f in self.faces if len(f) == k + 1)

    def f_vector(self) -> tuple[int, ...]:
        out = [0] * (self.dim + 2)
        for f in self.faces:
            out[len(f)] += 1
        return tuple(out)


@dataclass(frozen=True)
class HomologyResult:
    """Integral homology, one finitely generated group per degree.

    ``groups[k] == (betti, torsion)`` where ``torsion`` is the tuple of
    invariant factors larger than 1 in divisibility order, so that
    ``H_k = Z^betti + Z/t_1 + ... + Z/t_r``.  Degrees that are zero groups
    are omitted.
    """

    groups: Mapping[int, tuple[int, tuple[int, ...]]] = field(default_factory=dict)

    def betti(self, k: int) -> int:
        return self.groups.get(k, (0, ()))[0]

    def torsion(self, k: int) -> tuple[int, ...]:
        return self.groups.get(k, (0, ()))[1]

    def degrees(self) -> list[int]:
        return sorted(self.groups)

    def is_trivial(self) -> bool:
        return not self.groups

    def is_torsion_free(self) -> bool:
        return all(not t for _, t in self.groups.values())

    @staticmethod
    def group_name(betti: int, torsion: tuple[int, ...]) -> str:
        parts = []
        if betti == 1:
            parts.append("Z")
        elif betti > 1:
            parts.append(f"Z^{betti}")
        parts.extend(f"Z/{t}" for t in torsion)
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        if not self.groups:
            return "0"
        return ", ".join(
            f"H_{k}={self.group_name(*self.groups[k])}" for k in self.degrees()
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomologyResult):
            return NotImplemented
        a = {k: v for k, v in self.groups.items() if v != (0, ())}
        b = {k: v for k, v in other.groups.items() if v != (0, ())}
        return a == b

    def __hash__(self) -> int:
        return hash(frozenset((k, v) for k, v in self.groups.items() if v != (0, ())))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def _validate_pd(pd: PDCode) -> list[str]:
    out = []
    seen: dict[int, int] = {}
    for t in pd.crossings:
        if len(t) != 4:
            out.append(f"crossing {t!r} does not have four arc labels")
            continue
        for a in t:
            seen[a] = seen.get(a, 0) + 1
    for a, k in sorted(seen.items()):
        if k != 2:
            out.append(f"arc multiplicity: arc {a} appears {k} times (expected 2)")
    if pd.loops < 0:
        out.append(f"loop count {pd.loops} is negative")
    if len(pd.signs) != len(pd.crossings):
        out.append("sign list length does not match crossing count")
    return out


def _validate_cd(d: ChordDiagram) -> list[str]:
    out = []
    n = d.n
    where: dict[int, list[int]] = {}
    for pos, circ in enumerate(d.circles):
        for m in circ:
            where.setdefault(m, []).append(pos)
    for m, positions in sorted(where.items()):
        if len(positions) > 1:
            out.append(
                f"endpoint multiplicity: mark {m} appears on circles "
                f"{positions} (expected exactly one)"
            )
        if not 0 <= m < 2 * n:
            out.append(f"unknown mark {m} on circle {positions[0]}")
    for c in d.chords:
        if c.endpoints != (2 * c.index, 2 * c.index + 1):
            out.append(
                f"chord {c.index} endpoints {c.endpoints} violate the "
                f"(2i, 2i+1) mark convention"
            )
        if c.label not in (0, 1):
            out.append(f"chord {c.index} label {c.label!r} not in {{0,1}}")
        if c.distinguished != min(c.endpoints):
            out.append(
                f"chord {c.index} distinguished endpoint {c.distinguished} "
                f"is not the smaller mark"
            )
        for m in c.endpoints:
            if m not in where:
                out.append(
                    f"dangling endpoint: chord {c.index} endpoint {m} "
                    f"lies on no circle"
                )
    if sorted(c.index for c in d.chords) != list(range(n)):
        out.append("chord indices are not 0..n-1")
    if len(d.sides) != 2 * n:
        out.append(f"side-bit table has length {len(d.sides)}, expected {2 * n}")
    else:
        for m, s in enumerate(d.sides):
            if s not in (LEFT, RIGHT):
                out.append(f"side bit of mark {m} is {s!r}, not 0/1")
    if (d.n_plus is None) != (d.n_minus is None):
        out.append("only one of n_plus/n_minus is set")
    elif d.n_plus is not None and d.n_plus + d.n_minus != n:
        out.append(
            f"crossing signs n_plus={d.n_plus}, n_minus={d.n_minus} "
            f"do not sum to the chord count {n}"
        )
    return out


def validate(diagram) -> list[str]:
    """Return a list of human-readable invariant violations (empty = valid).

    Accepts either a :class:`PDCode` or a :class:`ChordDiagram`.
    """
    if isinstance(diagram, PDCode):
        return _validate_pd(diagram)
    if isinstance(diagram, ChordDiagram):
        return _validate_cd(diagram)
    raise TypeError(f"cannot validate {type(diagram).__name__}")
