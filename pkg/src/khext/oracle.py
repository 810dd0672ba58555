"""Brute-force integral Khovanov homology, used as a cross-check oracle.

This module is deliberately independent of the cube machinery in
:mod:`khext.statecube`: states are resolved by joining planar-diagram arcs
with a union-find, enhanced states are enumerated directly, and the
differential applies the Frobenius rules of ``Z[X]/(X^2)`` edge by edge.
Nothing here knows about chord diagrams, merge counts, or configurations,
which is what makes agreement with the functor pipeline meaningful.

Conventions (matching :mod:`khext.ingest`): for a crossing ``X[a,b,c,d]``
the 1-smoothing joins ``(a,b)`` and ``(c,d)``, the 0-smoothing joins
``(a,d)`` and ``(b,c)``.  A state sets one bit per crossing; the
cohomological degree of a state of weight ``w`` is ``i = w - n_minus`` and
an enhancement with ``p`` plus and ``m`` minus circles sits in quantum
degree ``j = n_plus - 2*n_minus + w + p - m``.
"""

from __future__ import annotations

import itertools
from math import comb
from typing import Iterable, NamedTuple, Union

from .algebra import IntMat, homology
from .model import GradedChainComplex, HomologyResult, PDCode

__all__ = [
    "EnhancedState",
    "gradings",
    "khovanov_homology",
    "almost_extreme_agreement",
]


class EnhancedState(NamedTuple):
    """A state of the cube together with a ``+1``/``-1`` label per circle.

    ``labels[k]`` belongs to the ``k``-th circle of the resolved state in
    the canonical order (circles sorted by their smallest member; loops
    without crossings come last).
    """

    mask: int
    labels: tuple[int, ...]

    def __str__(self) -> str:
        signs = "".join("+" if s > 0 else "-" for s in self.labels)
        return f"({self.mask:b}|{signs})"


def _smoothing_joints(crossing, bit: int):
    a, b, c, d = crossing
    if bit:
        return (a, b), (c, d)
    return (a, d), (b, c)


class _Resolver:
    """Memoized resolution of states of one planar diagram code."""

    def __init__(self, pd: PDCode):
        self.pd = pd
        self.loops = tuple(("loop", k) for k in range(pd.loops))
        self._cache: dict[int, tuple[tuple, dict]] = {}

    def resolve(self, mask: int) -> tuple[tuple, dict]:
        """Canonically ordered circle representatives and the map from
        each arc to its circle's representative."""
        hit = self._cache.get(mask)
        if hit is not None:
            return hit
        parent: dict = {}

        def find(x):
            root = x
            while parent.setdefault(root, root) != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        for idx, crossing in enumerate(self.pd.crossings):
            for u, v in _smoothing_joints(crossing, (mask >> idx) & 1):
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[max(ru, rv)] = min(ru, rv)
        rep_of = {arc: find(arc) for arc in parent}
        reps = tuple(sorted(set(rep_of.values()))) + self.loops
        out = (reps, rep_of)
        self._cache[mask] = out
        return out


def gradings(pd: PDCode, enh: EnhancedState) -> tuple[int, int]:
    """The (cohomological, quantum) bidegree ``(i, j)`` of an enhanced
    state."""
    w = bin(enh.mask).count("1")
    i = w - pd.n_minus
    j = pd.n_plus - 2 * pd.n_minus + w + sum(enh.labels)
    return i, j


def _differential_images(
    pd: PDCode, res: _Resolver, gen: EnhancedState
) -> Iterable[tuple[EnhancedState, int]]:
    """All terms of ``d(gen)``: pairs (target generator, coefficient)."""
    mask = gen.mask
    reps, _ = res.resolve(mask)
    pos = {r: k for k, r in enumerate(reps)}
    for idx in range(pd.n):
        if (mask >> idx) & 1:
            continue
        sign = -1 if bin(mask & ((1 << idx) - 1)).count("1") % 2 else 1
        tmask = mask | (1 << idx)
        treps, trep_of = res.resolve(tmask)
        a, b, c, d = pd.crossings[idx]
        _, rep_of = res.resolve(mask)
        src_circles = {rep_of[x] for x in (a, b, c, d)}

        if len(src_circles) == 2:  # merge
            r1, r2 = sorted(src_circles)
            t = trep_of[a]
            l1, l2 = gen.labels[pos[r1]], gen.labels[pos[r2]]
            if l1 < 0 and l2 < 0:
                continue
            merged = min(l1, l2)
            labels = [0] * len(treps)
            tpos = {r: k for k, r in enumerate(treps)}
            for r in reps:
                if r in (r1, r2):
                    continue
                labels[tpos[_target_rep(trep_of, r)]] = gen.labels[pos[r]]
            labels[tpos[t]] = merged
            yield EnhancedState(tmask, tuple(labels)), sign
        else:  # split
            (r0,) = src_circles
            t1, t2 = trep_of[a], trep_of[c]
            assert t1 != t2, "a smoothing change must alter the circle count"
            tpos = {r: k for k, r in enumerate(treps)}
            base = [0] * len(treps)
            for r in reps:
                if r == r0:
                    continue
                base[tpos[_target_rep(trep_of, r)]] = gen.labels[pos[r]]
            if gen.labels[pos[r0]] < 0:
                labels = list(base)
                labels[tpos[t1]] = labels[tpos[t2]] = -1
                yield EnhancedState(tmask, tuple(labels)), sign
            else:
                for plus, minus in ((t1, t2), (t2, t1)):
                    labels = list(base)
                    labels[tpos[plus]] = 1
                    labels[tpos[minus]] = -1
                    yield EnhancedState(tmask, tuple(labels)), sign


def _target_rep(trep_of: dict, r):
    if isinstance(r, tuple):  # crossing-free loop, never resurfaced
        return r
    return trep_of[r]


def _quantum_range(pd: PDCode, res: _Resolver) -> tuple[int, int]:
    lo, hi = None, None
    for mask in range(1 << pd.n):
        reps, _ = res.resolve(mask)
        w = bin(mask).count("1")
        top = pd.n_plus - 2 * pd.n_minus + w + len(reps)
        bot = top - 2 * len(reps)
        lo = bot if lo is None else min(lo, bot)
        hi = top if hi is None else max(hi, top)
    assert lo is not None and hi is not None
    return lo, hi


def khovanov_homology(
    pd: PDCode,
    j: Union[int, str, None] = None,
    max_crossings: int = 14,
) -> dict[int, HomologyResult]:
    """Integral Khovanov homology of a planar diagram code.

    Returns ``{j: groups}`` where ``groups`` maps the cohomological degree
    ``i`` to ``(betti, torsion)``.  ``j`` selects a single quantum grading;
    ``None`` or ``"all"`` computes every grading.  The state enumeration
    is exponential, so diagrams beyond ``max_crossings`` are refused.
    """
    if not isinstance(pd, PDCode):
        raise TypeError("the oracle works on planar diagram codes")
    if pd.n > max_crossings:
        raise ValueError(
            f"refusing brute-force enumeration of 2^{pd.n} states "
            f"(max_crossings={max_crossings})"
        )
    res = _Resolver(pd)
    if j is None or j == "all":
        lo, hi = _quantum_range(pd, res)
        targets = [q for q in range(lo, hi + 1) if (q - lo) % 2 == 0]
    else:
        targets = [int(j)]

    out: dict[int, HomologyResult] = {}
    for q in targets:
        basis: dict[int, list[EnhancedState]] = {}
        for mask in range(1 << pd.n):
            reps, _ = res.resolve(mask)
            w = bin(mask).count("1")
            # number of minus labels forced by the quantum grading
            top = pd.n_plus - 2 * pd.n_minus + w + len(reps)
            if (top - q) % 2:
                continue
            minus = (top - q) // 2
            if not 0 <= minus <= len(reps):
                continue
            for positions in itertools.combinations(range(len(reps)), minus):
                labels = [1] * len(reps)
                for k in positions:
                    labels[k] = -1
                basis.setdefault(w, []).append(EnhancedState(mask, tuple(labels)))

        cx_basis = {-w: tuple(g) for w, g in basis.items()}
        index = {
            -w: {g: k for k, g in enumerate(gens)} for w, gens in basis.items()
        }
        diff: dict[int, IntMat] = {}
        for w, gens in basis.items():
            rows = len(basis.get(w + 1, ()))
            mat = IntMat.zeros(rows, len(gens))
            if rows:
                tix = index[-w - 1]
                for col, gen in enumerate(gens):
                    for tgen, coeff in _differential_images(pd, res, gen):
                        r = tix.get(tgen)
                        if r is not None:
                            mat[r, col] = mat[r, col] + coeff
            diff[-w] = mat
        cx = GradedChainComplex(cx_basis, diff)
        cx.check_shapes()
        h = homology(cx)
        groups = {-k - pd.n_minus: g for k, g in h.groups.items()}
        out[q] = HomologyResult(groups)
    return out


# ---------------------------------------------------------------------------
# agreement with the functor pipeline
# ---------------------------------------------------------------------------


def almost_extreme_agreement(pd: PDCode, functor: str = "both") -> dict:
    """Compare the oracle with the functor pipeline in the second-highest
    quantum grading.

    Also checks the generator census: in that grading a state contributes
    one generator per circle when merge-free, exactly one after a single
    merge, and none otherwise, so the per-degree chain ranks of the oracle
    must match the live-subcube counts.
    """
    from .ingest import j_almax
    from .functors import almost_extreme_khovanov
    from .statecube import CubeIndex

    q = j_almax(pd)
    oracle = khovanov_homology(pd, j=q)[q]

    cube = CubeIndex(pd)
    expected: dict[int, int] = {}
    for rs in cube.live_states():
        w = rs.state.weight
        expected[w] = expected.get(w, 0) + (
            len(rs.diagram.circles) if rs.phi == 0 else 1
        )
    census: dict[int, int] = {}
    res = _Resolver(pd)
    for mask in range(1 << pd.n):
        reps, _ = res.resolve(mask)
        w = bin(mask).count("1")
        top = pd.n_plus - 2 * pd.n_minus + w + len(reps)
        if (top - q) % 2 == 0 and 0 <= (top - q) // 2 <= len(reps):
            census[w] = census.get(w, 0) + comb(len(reps), (top - q) // 2)
    census_ok = {w: c for w, c in census.items() if c} == {
        w: c for w, c in expected.items() if c
    }

    report: dict = {
        "j": q,
        "oracle": {i: oracle.groups[i] for i in oracle.degrees()},
        "census_ok": census_ok,
        "agree": census_ok,
    }
    for tag in ("F", "M") if functor == "both" else (functor,):
        h = almost_extreme_khovanov(cube, tag)
        report[tag] = {i: h.groups[i] for i in h.degrees()}
        report["agree"] = report["agree"] and (h == oracle)
    return report
