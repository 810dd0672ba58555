"""Generators for the diagram families used by the test corpus.

Everything returns :class:`~khext.model.PDCode` or
:class:`~khext.model.ChordDiagram` values built from first principles:
torus links come from explicit crossing formulas or positive braid
closures, and the two chord-diagram families are assembled mark by mark.
"""

from __future__ import annotations

import dataclasses
from typing import Sequence

from .ingest import parse_pd, resolve_all_ones
from .model import Chord, ChordDiagram, LEFT, PDCode, RIGHT

__all__ = [
    "unknot_pd",
    "kink_pd",
    "hopf_pd",
    "trefoil_pd",
    "figure_eight_pd",
    "t2_pd",
    "braid_pd",
    "t3_pd",
    "one_monochord_cd",
    "disk_disk_cd",
    "alternating_pair_cd",
]


def unknot_pd() -> PDCode:
    """The 0-crossing unknot diagram."""
    return parse_pd("PD[]")


def kink_pd(sign: int = 1) -> PDCode:
    """Unknot with a single Reidemeister-I kink of the given sign."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return parse_pd("PD[X[1,2,2,1]]" if sign == 1 else "PD[X[2,2,1,1]]")


def hopf_pd(sign: int = 1) -> PDCode:
    """Hopf link, positive (two + crossings) or negative."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return parse_pd(
        "PD[X[4,1,3,2],X[2,3,1,4]]" if sign == 1 else "PD[X[1,3,2,4],X[3,1,4,2]]"
    )


def trefoil_pd(right: bool = True) -> PDCode:
    """Trefoil knot; ``right=True`` is the all-positive diagram."""
    return parse_pd(
        "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"
        if right
        else "PD[X[4,2,5,1],X[6,4,1,3],X[2,6,3,5]]"
    )


def figure_eight_pd() -> PDCode:
    """Figure-eight knot: closure of ``(s1 s2^-1)^2``, so 2 positive and
    2 negative crossings."""
    pd = braid_pd([1, -2, 1, -2], 3)
    assert (pd.n_plus, pd.n_minus) == (2, 2)
    return pd


def t2_pd(n: int) -> PDCode:
    """The (2, n) torus link: closure of ``s1^n`` on two strands.

    All ``n`` crossings are positive, and the all-ones resolution is the
    necklace of ``n`` circles joined by ``n`` interstitial chords.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    pd = braid_pd([1] * n, 2)
    assert pd.n_plus == n, "torus braid closure must be all-positive"
    return pd


def braid_pd(word: Sequence[int], strands: int) -> PDCode:
    """Closure of a braid word on ``strands`` strands.

    ``word`` entries are nonzero integers; ``+j`` crosses positions
    ``j, j+1`` with the left strand passing over (a positive crossing),
    ``-j`` the mirror.  Strand positions untouched by the word close into
    free loops.
    """
    for j in word:
        if j == 0 or abs(j) >= strands:
            raise ValueError(f"generator {j} out of range for {strands} strands")
    current = {p: p for p in range(1, strands + 1)}
    fresh = strands
    crossings: list[tuple[int, int, int, int]] = []
    touched: set[int] = set()
    for j in word:
        pos = abs(j)
        touched.update((pos, pos + 1))
        x, y = current[pos], current[pos + 1]
        p_out, q_out = fresh + 1, fresh + 2
        fresh += 2
        if j > 0:
            # right strand passes under: X[a,b,c,d] with a = incoming under
            crossings.append((y, x, p_out, q_out))
        else:
            crossings.append((x, p_out, q_out, y))
        current[pos], current[pos + 1] = p_out, q_out

    rename = {current[p]: p for p in range(1, strands + 1) if current[p] != p}
    body = ",".join(
        "X[%s]" % ",".join(str(rename.get(a, a)) for a in t) for t in crossings
    )
    pd = parse_pd(f"PD[{body}]" if crossings else "PD[]")
    loops = strands - len(touched)
    if crossings and loops:
        pd = dataclasses.replace(pd, loops=loops)
    elif not crossings:
        pd = dataclasses.replace(pd, loops=strands)
    return pd


def t3_pd(q: int) -> PDCode:
    """The (3, q) torus link as the closure of ``(s1 s2)^q`` on 3 strands."""
    if q < 1:
        raise ValueError("need q >= 1")
    pd = braid_pd([1, 2] * q, 3)
    assert pd.n_plus == 2 * q, "torus braid closure must be all-positive"
    return pd


# ---------------------------------------------------------------------------
# chord-diagram families
# ---------------------------------------------------------------------------


def one_monochord_cd(k: int) -> ChordDiagram:
    """One monochord alongside ``k`` satellite circles, each joined to the
    main circle by two bichords straddling the monochord.

    Circle ``z`` carries the monochord ``e`` and one endpoint of each
    bichord, in the order ``e, a_1, ..., a_k, e, b_k, ..., b_1`` (the
    ``a_i``/``b_i`` spans nest, realizing disjoint chords in the plane);
    circle ``w_i`` carries the other endpoints of ``a_i`` and ``b_i``.
    Every ``(a_i, b_i, e)`` is an alternating triple.  Total ``2k + 1``
    chords on ``k + 1`` circles.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    n = 2 * k + 1
    # chord 0 = e, chords 1..k = a_i, chords k+1..2k = b_i
    z = [0] + [2 * i for i in range(1, k + 1)] + [1] + [
        2 * (k + i) for i in range(k, 0, -1)
    ]
    ws = [(2 * i + 1, 2 * (k + i) + 1) for i in range(1, k + 1)]
    circles = (tuple(z),) + tuple(tuple(w) for w in ws)
    chords = tuple(Chord(i, (2 * i, 2 * i + 1), 1, 2 * i) for i in range(n))
    sides = [RIGHT] * (2 * n)
    sides[0] = sides[1] = LEFT
    return ChordDiagram(circles, chords, tuple(sides), None, None)


def disk_disk_cd(n: int) -> ChordDiagram:
    """Two circles joined by ``2n`` bichords in a cyclic zigzag, each
    circle carrying ``n`` monochords cutting off the bichord feet in
    pairs: monochord ``e_i`` encloses the feet of ``a_i`` and ``b_{i-1}``
    on circle 1, monochord ``f_i`` the feet of ``a_i`` and ``b_i`` on
    circle 2 (indices mod ``n``); ``4n`` chords in total.

    The stored cyclic orders realize the planar picture of two circles
    joined by pairwise disjoint chords: walked in parallel, circle 2 runs
    opposite to circle 1, which is what the default side bits (monochords
    inside, bichords between the circles) encode.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    total = 4 * n
    # chords: e_i -> i-1, f_i -> n+i-1, a_i -> 2n+i-1, b_i -> 3n+i-1 (i = 1..n)
    def e(i: int) -> int:
        return (i - 1) % n

    def f(i: int) -> int:
        return n + (i - 1) % n

    def a(i: int) -> int:
        return 2 * n + (i - 1) % n

    def b(i: int) -> int:
        return 3 * n + (i - 1) % n

    z1: list[int] = []
    for i in range(1, n + 1):
        z1 += [2 * e(i), 2 * b(i - 1), 2 * a(i), 2 * e(i) + 1]
    z2: list[int] = []
    for i in range(1, n + 1):
        z2 += [2 * f(i), 2 * a(i) + 1, 2 * b(i) + 1, 2 * f(i) + 1]
    z2.reverse()
    circles = (tuple(z1), tuple(z2))
    chords = tuple(Chord(i, (2 * i, 2 * i + 1), 1, 2 * i) for i in range(total))
    sides = [RIGHT] * (2 * total)
    for i in range(2 * n):  # the monochords e_1..e_n, f_1..f_n
        sides[2 * i] = sides[2 * i + 1] = LEFT
    return ChordDiagram(circles, chords, tuple(sides), None, None)


def alternating_pair_cd() -> ChordDiagram:
    """Two interleaved monochords on one circle (the smallest 2-circle
    splitting obstruction)."""
    circles = ((0, 2, 1, 3),)
    chords = (Chord(0, (0, 1), 1, 0), Chord(1, (2, 3), 1, 2))
    return ChordDiagram(circles, chords, (LEFT,) * 4, None, None)


# names used for the shipped corpus files
CORPUS_PD = {
    "unknot": unknot_pd,
    "kink_pos": lambda: kink_pd(1),
    "kink_neg": lambda: kink_pd(-1),
    "hopf_pos": lambda: hopf_pd(1),
    "hopf_neg": lambda: hopf_pd(-1),
    "trefoil_right": lambda: trefoil_pd(True),
    "trefoil_left": lambda: trefoil_pd(False),
    "figure_eight": figure_eight_pd,
    "t2_2": lambda: t2_pd(2),
    "t2_3": lambda: t2_pd(3),
    "t2_4": lambda: t2_pd(4),
    "t2_5": lambda: t2_pd(5),
    "t2_6": lambda: t2_pd(6),
    "t2_7": lambda: t2_pd(7),
    "t3_3": lambda: t3_pd(3),
    "t3_4": lambda: t3_pd(4),
    "t3_5": lambda: t3_pd(5),
}

CORPUS_CD = {
    "onemono_2": lambda: one_monochord_cd(2),
    "onemono_3": lambda: one_monochord_cd(3),
    "onemono_4": lambda: one_monochord_cd(4),
    "diskdisk_2": lambda: disk_disk_cd(2),
    "diskdisk_3": lambda: disk_disk_cd(3),
    "diskdisk_4": lambda: disk_disk_cd(4),
    "altpair": alternating_pair_cd,
}


def _selftest() -> None:  # pragma: no cover - manual smoke hook
    for name, fn in CORPUS_PD.items():
        d = resolve_all_ones(fn())
        print(name, d.n, len(d.circles))


if __name__ == "__main__":  # pragma: no cover
    _selftest()
