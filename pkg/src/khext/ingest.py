"""Input formats: planar diagram codes and chord-diagram text.

Two input languages are accepted (see FORMATS.md for the grammar and the
worked examples):

* **PD codes** -- ``PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]``. Each ``X``
  lists the four arc labels around a crossing counterclockwise starting at
  the incoming under-strand.  Crossing signs are recovered by propagating
  arc orientations from the under-strand data.

* **Chord-diagram text** -- explicit circles and chords:

  .. code-block:: text

      circle A: a1 b1 a2 b2
      chord 0: a1 a2
      chord 1: b1 b2

  An optional ``writhe: <n_plus> <n_minus>`` line attaches crossing signs;
  without it the diagram is abstract and only internal gradings are
  reported downstream.

The all-ones resolution of a PD code (:func:`resolve_all_ones`) traces the
1-smoothing of every crossing.  Chord ``i`` receives the endpoint marks
``2i`` (on the joint between the first two arc positions) and ``2i + 1``
(the opposite joint).  The trace also stores one *side bit* per mark: on
which side of the traversal direction the chord leaves the circle.  These
bits carry exactly the local planar data that later surgeries need.

For chord-diagram text there is no embedding, so side bits default to the
standard planar picture: monochords attach inside their circle (left/left)
and bichords attach between circles (right/right).
"""

from __future__ import annotations

import os
import re
from typing import Iterable, Optional

from .model import Chord, ChordDiagram, LEFT, PDCode, RIGHT, validate

__all__ = [
    "ParseError",
    "parse_pd",
    "parse_chord_diagram",
    "parse_diagram_text",
    "load_diagram",
    "resolve_all_ones",
    "to_chord_diagram",
    "pd_to_text",
    "cd_to_text",
    "structurally_isomorphic",
    "j_max",
    "j_almax",
]


class ParseError(ValueError):
    """Syntax error carrying 1-based line/column information."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"syntax error at line {line}, column {column}: {message}")
        self.line = line
        self.column = column


# ---------------------------------------------------------------------------
# PD codes
# ---------------------------------------------------------------------------


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def linecol(self, pos: Optional[int] = None) -> tuple[int, int]:
        p = self.pos if pos is None else pos
        line = self.text.count("\n", 0, p) + 1
        col = p - (self.text.rfind("\n", 0, p) + 1) + 1
        return line, col

    def error(self, message: str) -> ParseError:
        line, col = self.linecol()
        return ParseError(message, line, col)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, token: str) -> None:
        self.skip_ws()
        if not self.text.startswith(token, self.pos):
            raise self.error(f"expected {token!r}")
        self.pos += len(token)

    def peek(self, token: str) -> bool:
        self.skip_ws()
        return self.text.startswith(token, self.pos)

    def integer(self) -> int:
        self.skip_ws()
        m = re.match(r"[+-]?\d+", self.text[self.pos :])
        if not m:
            raise self.error("expected an integer")
        self.pos += m.end()
        return int(m.group())

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def _orient_and_sign(
    crossings: tuple[tuple[int, int, int, int], ...]
) -> tuple[int, ...]:
    """Crossing signs via orientation propagation.

    Each slot ``(crossing, position)`` is classified as *head* (the arc
    ends here) or *tail* (the arc starts here).  Under-strand slots are
    fixed: position 0 is a head, position 2 a tail.  The two slots of one
    arc take opposite roles, and so do the two over-strand slots of one
    crossing.  Contradictions mean the code is not a consistent diagram
    trace.  Components never passing under anything (so entirely
    unconstrained) get an arbitrary fixed orientation; this cannot happen
    for connected diagram codes.
    """
    occurrences: dict[int, list[tuple[int, int]]] = {}
    for ci, t in enumerate(crossings):
        for pos, arc in enumerate(t):
            occurrences.setdefault(arc, []).append((ci, pos))

    HEAD, TAIL = 1, 0
    role: dict[tuple[int, int], int] = {}

    def other_slot(arc: int, slot: tuple[int, int]) -> tuple[int, int]:
        a, b = occurrences[arc]
        return b if slot == a else a

    def assign(slot: tuple[int, int], value: int) -> None:
        stack = [(slot, value)]
        while stack:
            s, v = stack.pop()
            if s in role:
                if role[s] != v:
                    raise ValueError(
                        f"inconsistent trace: orientation conflict at "
                        f"crossing {s[0]}, position {s[1]}"
                    )
                continue
            role[s] = v
            ci, pos = s
            arc = crossings[ci][pos]
            stack.append((other_slot(arc, s), 1 - v))
            if pos in (1, 3):  # over-strand pair swaps roles too
                stack.append(((ci, 3 if pos == 1 else 1), 1 - v))

    for ci in range(len(crossings)):
        assign((ci, 0), HEAD)
        assign((ci, 2), TAIL)
    # orient anything left (components that only ever pass over)
    for ci in range(len(crossings)):
        for pos in (1, 3):
            if (ci, pos) not in role:
                assign((ci, pos), TAIL if pos == 1 else HEAD)

    # positive crossing: the over-strand enters at position 1
    return tuple(1 if role[(ci, 1)] == HEAD else -1 for ci in range(len(crossings)))


def parse_pd(text: str) -> PDCode:
    """Parse a PD code such as ``PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]``.

    ``PD[]`` denotes the 0-crossing unknot diagram (one free circle).
    Raises :class:`ParseError` on malformed input and :class:`ValueError`
    on structurally invalid codes (arc multiplicity, orientation clashes).
    """
    sc = _Scanner(text)
    sc.expect("PD[")
    crossings: list[tuple[int, int, int, int]] = []
    if not sc.peek("]"):
        while True:
            sc.expect("X[")
            vals = [sc.integer()]
            for _ in range(3):
                sc.expect(",")
                vals.append(sc.integer())
            sc.expect("]")
            crossings.append(tuple(vals))  # type: ignore[arg-type]
            if sc.peek(","):
                sc.expect(",")
                continue
            break
    sc.expect("]")
    if not sc.at_end():
        raise sc.error("trailing input after PD code")

    counts: dict[int, int] = {}
    for t in crossings:
        for a in t:
            counts[a] = counts.get(a, 0) + 1
    bad = sorted(a for a, k in counts.items() if k != 2)
    if bad:
        raise ValueError(
            "arc multiplicity: arcs %s do not appear exactly twice"
            % ", ".join(str(a) for a in bad)
        )

    signs = _orient_and_sign(tuple(crossings))
    loops = 1 if not crossings else 0
    pd = PDCode(tuple(crossings), signs, loops)
    problems = validate(pd)
    if problems:
        raise ValueError("; ".join(problems))
    return pd


def resolve_all_ones(pd: PDCode) -> ChordDiagram:
    """Chord diagram of the all-ones resolution (1-smoothing everywhere).

    The 1-smoothing of crossing ``(a, b, c, d)`` joins the arcs ``a--b``
    and ``c--d``.  The joint on the ``(a, b)`` side carries mark ``2i``,
    the other mark ``2i + 1``.  Side bits record the traversal direction
    through each joint (``a -> b`` means the chord leaves to the left).
    """
    crossings = pd.crossings
    occurrences: dict[int, list[tuple[int, int]]] = {}
    for ci, t in enumerate(crossings):
        for pos, arc in enumerate(t):
            occurrences.setdefault(arc, []).append((ci, pos))

    def other_slot(arc: int, slot: tuple[int, int]) -> tuple[int, int]:
        a, b = occurrences[arc]
        return b if slot == a else a

    # joints: (ci, 0) = slots {0,1} / mark 2ci ; (ci, 1) = slots {2,3} / mark 2ci+1
    def joint_of(slot: tuple[int, int]) -> tuple[int, int]:
        return (slot[0], 0 if slot[1] < 2 else 1)

    visited: set[tuple[int, int]] = set()
    circles: list[tuple[int, ...]] = []
    sides = [LEFT] * (2 * len(crossings))

    for ci in range(len(crossings)):
        for jpos in (0, 1):
            if (ci, jpos) in visited:
                continue
            marks: list[int] = []
            slot = (ci, 0 if jpos == 0 else 2)  # enter via the first slot
            while True:
                j = joint_of(slot)
                if j in visited:
                    break
                visited.add(j)
                jc, jp = j
                mark = 2 * jc + jp
                marks.append(mark)
                first = 0 if jp == 0 else 2
                sides[mark] = LEFT if slot[1] == first else RIGHT
                exit_slot = (jc, first + 1 if slot[1] == first else first)
                arc = crossings[jc][exit_slot[1]]
                slot = other_slot(arc, exit_slot)
            circles.append(tuple(marks))

    circles.extend(() for _ in range(pd.loops))
    chords = tuple(
        Chord(i, (2 * i, 2 * i + 1), 1, 2 * i) for i in range(len(crossings))
    )
    d = ChordDiagram(
        tuple(circles), chords, tuple(sides), pd.n_plus, pd.n_minus
    )
    problems = validate(d)
    if problems:  # a valid PD code always resolves cleanly
        raise ValueError("inconsistent trace: " + "; ".join(problems))
    return d


def to_chord_diagram(diagram) -> ChordDiagram:
    """Coerce PD codes to their all-ones resolution; pass diagrams through."""
    if isinstance(diagram, PDCode):
        return resolve_all_ones(diagram)
    if isinstance(diagram, ChordDiagram):
        return diagram
    raise TypeError(f"expected PDCode or ChordDiagram, got {type(diagram).__name__}")


# ---------------------------------------------------------------------------
# chord-diagram text
# ---------------------------------------------------------------------------


def parse_chord_diagram(text: str) -> ChordDiagram:
    """Parse chord-diagram text (see module docstring for the format).

    Chord indices in the file may start at 0 or 1 (any set of distinct
    integers is accepted); they are renumbered densely in increasing order.
    The first endpoint token of chord ``i`` becomes mark ``2i``.
    """
    circle_tokens: list[tuple[str, list[str]]] = []
    chord_lines: list[tuple[int, str, str]] = []
    writhe: Optional[tuple[int, int]] = None
    token_line: dict[str, tuple[int, int]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = re.match(r"\s*(circle|chord|writhe)\b\s*", line)
        if not m:
            first = len(line) - len(line.lstrip()) + 1
            raise ParseError(
                "expected 'circle', 'chord' or 'writhe'", lineno, first
            )
        kind = m.group(1)
        rest = line[m.end() :]
        if kind == "writhe":
            mm = re.match(r":?\s*([+-]?\d+)\s+([+-]?\d+)\s*$", rest)
            if not mm:
                raise ParseError(
                    "writhe line needs two integers (n_plus n_minus)",
                    lineno,
                    m.end() + 1,
                )
            if writhe is not None:
                raise ParseError("duplicate writhe line", lineno, 1)
            writhe = (int(mm.group(1)), int(mm.group(2)))
            continue
        mm = re.match(r"([^\s:]*)\s*:\s*(.*)$", rest)
        if not mm:
            raise ParseError(f"malformed {kind} line", lineno, m.end() + 1)
        name, body = mm.group(1), mm.group(2)
        tokens = body.split()
        if kind == "circle":
            for tok in tokens:
                if tok in token_line:
                    raise ParseError(
                        f"endpoint multiplicity: token {tok!r} already "
                        f"appeared at line {token_line[tok][0]}",
                        lineno,
                        line.index(tok) + 1,
                    )
                token_line[tok] = (lineno, line.index(tok) + 1)
            circle_tokens.append((name, tokens))
        else:
            if not re.fullmatch(r"[+-]?\d+", name):
                raise ParseError("chord index must be an integer", lineno, m.end() + 1)
            if len(tokens) != 2 or tokens[0] == tokens[1]:
                raise ParseError(
                    "chord line needs two distinct endpoint tokens",
                    lineno,
                    m.end() + 1,
                )
            chord_lines.append((int(name), tokens[0], tokens[1]))

    indices = [idx for idx, _, _ in chord_lines]
    if len(set(indices)) != len(indices):
        dup = sorted({i for i in indices if indices.count(i) > 1})
        raise ValueError(f"duplicate chord indices: {dup}")
    order = {idx: k for k, idx in enumerate(sorted(indices))}

    mark_of: dict[str, int] = {}
    for idx, t0, t1 in chord_lines:
        i = order[idx]
        for tok, mark in ((t0, 2 * i), (t1, 2 * i + 1)):
            if tok not in token_line:
                raise ValueError(
                    f"dangling endpoint: chord {idx} endpoint {tok!r} "
                    f"lies on no circle"
                )
            if tok in mark_of:
                raise ValueError(
                    f"endpoint multiplicity: token {tok!r} referenced by "
                    f"more than one chord endpoint"
                )
            mark_of[tok] = mark

    unused = [t for t in token_line if t not in mark_of]
    if unused:
        raise ValueError(
            "dangling endpoint: circle tokens %s belong to no chord"
            % ", ".join(repr(t) for t in sorted(unused))
        )

    circles = tuple(
        tuple(mark_of[tok] for tok in toks) for _, toks in circle_tokens
    )
    n = len(chord_lines)
    chords = tuple(Chord(i, (2 * i, 2 * i + 1), 1, 2 * i) for i in range(n))

    where: dict[int, int] = {}
    for pos, circ in enumerate(circles):
        for mk in circ:
            where[mk] = pos
    sides = [LEFT] * (2 * n)
    for i in range(n):
        p, q = 2 * i, 2 * i + 1
        if where.get(p) != where.get(q):  # bichord: outside/outside
            sides[p] = sides[q] = RIGHT

    n_plus, n_minus = (writhe if writhe is not None else (None, None))
    d = ChordDiagram(circles, chords, tuple(sides), n_plus, n_minus)
    problems = validate(d)
    if problems:
        raise ValueError("; ".join(problems))
    return d


def parse_diagram_text(text: str):
    """Dispatch on content: PD code or chord-diagram text."""
    if text.lstrip().startswith("PD["):
        return parse_pd(text)
    return parse_chord_diagram(text)


def load_diagram(path: str):
    """Load a diagram file; ``.pd``/``.cd`` extensions force the format."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    ext = os.path.splitext(path)[1].lower()
    if ext == ".pd":
        return parse_pd(text)
    if ext == ".cd":
        return parse_chord_diagram(text)
    return parse_diagram_text(text)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def pd_to_text(pd: PDCode) -> str:
    return str(pd)


def cd_to_text(d: ChordDiagram, names: Optional[dict[int, str]] = None) -> str:
    """Chord-diagram text that parses back to ``d`` (up to side-bit defaults)."""
    if names is None:
        names = {m: f"p{m}" for circ in d.circles for m in circ}
    lines = []
    for pos, circ in enumerate(d.circles):
        lines.append(
            "circle %s: %s" % (chr(ord("A") + pos % 26) + (str(pos // 26) if pos >= 26 else ""),
                               " ".join(names[m] for m in circ))
        )
    for c in d.chords:
        lines.append(
            "chord %d: %s %s" % (c.index, names[c.endpoints[0]], names[c.endpoints[1]])
        )
    if d.n_plus is not None:
        lines.append(f"writhe: {d.n_plus} {d.n_minus}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# structural isomorphism
# ---------------------------------------------------------------------------


def _cyclic_variants(seq: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
    k = len(seq)
    if k == 0:
        yield ()
        return
    for rev in (False, True):
        s = tuple(reversed(seq)) if rev else seq
        for r in range(k):
            yield s[r:] + s[:r]


def structurally_isomorphic(d1: ChordDiagram, d2: ChordDiagram) -> bool:
    """Chord-diagram isomorphism: a relabeling of chords and circles
    (circles taken up to rotation and reflection) matching cyclic mark
    orders and chord labels.  Side bits are geometric metadata and are not
    compared.
    """
    if d1.n != d2.n or len(d1.circles) != len(d2.circles):
        return False
    if sorted(map(len, d1.circles)) != sorted(map(len, d2.circles)):
        return False
    if sorted(c.label for c in d1.chords) != sorted(c.label for c in d2.chords):
        return False

    order = sorted(range(len(d1.circles)), key=lambda p: -len(d1.circles[p]))
    label1 = {c.index: c.label for c in d1.chords}
    label2 = {c.index: c.label for c in d2.chords}

    def extend(k: int, used: set[int], markmap: dict[int, int],
               chordmap: dict[int, int]) -> bool:
        if k == len(order):
            return True
        circ = d1.circles[order[k]]
        for pos2, cand in enumerate(d2.circles):
            if pos2 in used or len(cand) != len(circ):
                continue
            for variant in _cyclic_variants(cand):
                mm = dict(markmap)
                cm = dict(chordmap)
                ok = True
                for m_src, m_dst in zip(circ, variant):
                    i_src, i_dst = m_src // 2, m_dst // 2
                    if label1[i_src] != label2[i_dst]:
                        ok = False
                        break
                    if i_src in cm:
                        if cm[i_src] != i_dst:
                            ok = False
                            break
                    elif i_dst in cm.values():
                        ok = False
                        break
                    else:
                        cm[i_src] = i_dst
                    if m_src in mm:
                        if mm[m_src] != m_dst:
                            ok = False
                            break
                    elif m_dst in mm.values():
                        ok = False
                        break
                    else:
                        mm[m_src] = m_dst
                        partner_src = m_src ^ 1
                        partner_dst = m_dst ^ 1
                        if partner_src in mm and mm[partner_src] != partner_dst:
                            ok = False
                            break
                        mm.setdefault(partner_src, partner_dst)
                if ok and extend(k + 1, used | {pos2}, mm, cm):
                    return True
        return False

    return extend(0, set(), {}, {})


# ---------------------------------------------------------------------------
# gradings
# ---------------------------------------------------------------------------


def j_max(diagram) -> int:
    """Largest quantum grading with generators:
    ``n_plus - 2 n_minus + n + |circles of the all-ones resolution|``.
    """
    d = to_chord_diagram(diagram)
    if d.n_plus is None:
        raise ValueError("j_max needs crossing signs (PD input or writhe line)")
    return d.n_plus - 2 * d.n_minus + d.n + len(d.circles)


def j_almax(diagram) -> int:
    """The almost-extreme quantum grading ``j_max - 2``."""
    return j_max(diagram) - 2
