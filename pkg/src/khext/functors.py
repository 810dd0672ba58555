"""Chain complexes over the live subcube and the comparison map between them.

Two complexes are built from the live (``phi <= 1``) part of the cube of a
diagram, both concentrated in the second-highest quantum grading:

* the **circle complex** (:func:`build_F_complex`): a merge-free state
  contributes one generator per circle (the enhancement with that single
  circle carrying the minus label), a one-merge state contributes its
  all-plus enhancement;
* the **graph complex** (:func:`build_M_complex`): a merge-free state
  contributes one generator per connected component of its state graph
  plus one per 0-chord, a one-merge state again a single generator.

:func:`build_gamma` produces the degreewise comparison map sending a
component to the sum of its circles, a 0-chord to the sum of the circles
on its distinguished side, and a one-merge generator to itself; it is a
chain isomorphism, which the test-suite verifies degree by degree.

Both differentials descend the cube (weight drops by one).  Reversing the
arrows (:func:`khext.algebra.dualize`) recovers the usual cohomological
complex; :func:`almost_extreme_khovanov` packages that reindexing.

When every edge map sends each generator to at most one generator with
coefficient one, the whole functor factors through pointed sets and the
complex is the (reduced, reindexed) chain complex of a semi-simplicial
pointed set; :func:`factor_through_pointed` decides this and exports the
simplicial structure (:func:`lambda_chain_complex` rebuilds the complex
from the export).
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import IntMat, dualize, homology
from .model import ChordDiagram, GradedChainComplex, HomologyResult, ResolvedState
from .statecube import CubeIndex, edge_sign

__all__ = [
    "GeneratorLabel",
    "CircleGen",
    "PlusGen",
    "ComponentGen",
    "EdgeGen",
    "orient_edges",
    "build_F_complex",
    "build_M_complex",
    "build_gamma",
    "build_extreme_complex",
    "almost_extreme_khovanov",
    "factor_through_pointed",
    "lambda_chain_complex",
]


# ---------------------------------------------------------------------------
# generator labels
# ---------------------------------------------------------------------------


class GeneratorLabel:
    """Base class for chain-complex basis labels."""

    __slots__ = ()


@dataclass(frozen=True)
class CircleGen(GeneratorLabel):
    """Circle-complex generator: the enhancement of a merge-free state in
    which exactly the named circle carries the minus label.  Circles are
    named by their smallest mark; markless circles (free loops) get the
    negative keys ``-1, -2, ...`` in storage order."""

    state: int
    circle: int

    def __str__(self) -> str:
        return f"circle({self.state:b},{self.circle})"


@dataclass(frozen=True)
class PlusGen(GeneratorLabel):
    """The all-plus enhancement of a one-merge state."""

    state: int

    def __str__(self) -> str:
        return f"plus({self.state:b})"


@dataclass(frozen=True)
class ComponentGen(GeneratorLabel):
    """Graph-complex generator: a connected component of the state graph
    of a merge-free state, named by the circle of the all-ones resolution
    it descends from."""

    state: int
    ancestor: int

    def __str__(self) -> str:
        return f"component({self.state:b},{self.ancestor})"


@dataclass(frozen=True)
class EdgeGen(GeneratorLabel):
    """Graph-complex generator: a 0-chord of a merge-free state."""

    state: int
    chord: int

    def __str__(self) -> str:
        return f"edge({self.state:b},{self.chord})"


def _circle_keys(d: ChordDiagram) -> list[int]:
    keys = []
    empties = 0
    for circ in d.circles:
        if circ:
            keys.append(min(circ))
        else:
            empties += 1
            keys.append(-empties)
    return keys


def orient_edges(res: ResolvedState) -> dict[int, frozenset]:
    """For each 0-chord of a merge-free state, the set of circle positions
    on its *distinguished side*: the connected component of the state
    graph minus that edge which contains the circle carrying the chord's
    even mark."""
    if res.phi != 0:
        raise ValueError("edge orientation needs a merge-free state")
    d = res.diagram
    adj: dict[int, list[tuple[int, int]]] = {}
    for j in res.zero_chords:
        a, b = d.circle_of(2 * j), d.circle_of(2 * j + 1)
        adj.setdefault(a, []).append((b, j))
        adj.setdefault(b, []).append((a, j))
    out: dict[int, frozenset] = {}
    for j in res.zero_chords:
        start = d.circle_of(2 * j)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y, jj in adj.get(x, ()):
                if jj != j and y not in seen:
                    seen.add(y)
                    stack.append(y)
        out[j] = frozenset(seen)
    return out


def _ladybug_size(cube: CubeIndex, res: ResolvedState) -> int:
    """``2`` when the single merge closed a cycle inside one component
    (the component count stayed at its top value), else ``1``."""
    assert res.phi == 1 and res.components is not None
    return 2 if len(res.components) == cube.top_circles else 1


# ---------------------------------------------------------------------------
# state bases
# ---------------------------------------------------------------------------


def _f_basis(cube: CubeIndex, res: ResolvedState) -> list[GeneratorLabel]:
    if res.phi == 0:
        keys = _circle_keys(res.diagram)
        return [CircleGen(res.state.mask, k) for k in sorted(keys)]
    return [PlusGen(res.state.mask)]


def _m_basis(cube: CubeIndex, res: ResolvedState) -> list[GeneratorLabel]:
    if res.phi == 0:
        assert res.ancestors is not None
        ancs = sorted(set(res.ancestors))
        out: list[GeneratorLabel] = [
            ComponentGen(res.state.mask, a) for a in ancs
        ]
        out.extend(EdgeGen(res.state.mask, j) for j in res.zero_chords)
        return out
    return [PlusGen(res.state.mask)]


def _circle_lookup(d: ChordDiagram) -> dict:
    """Mark-set -> position for marked circles; markless ones are handled
    positionally by the callers (they are never touched by surgeries)."""
    return {frozenset(c): pos for pos, c in enumerate(d.circles) if c}


def _match_positions(dv: ChordDiagram, du: ChordDiagram) -> dict[int, int]:
    """Correspondence of unaffected circles between two adjacent states:
    marked circles match by mark set, markless ones in storage order."""
    lookup = _circle_lookup(du)
    empties_u = [pos for pos, c in enumerate(du.circles) if not c]
    mapping: dict[int, int] = {}
    k = 0
    for pos, c in enumerate(dv.circles):
        if c:
            t = lookup.get(frozenset(c))
            if t is not None:
                mapping[pos] = t
        else:
            mapping[pos] = empties_u[k]
            k += 1
    return mapping


# ---------------------------------------------------------------------------
# edge maps
# ---------------------------------------------------------------------------


def _f_edge(cube: CubeIndex, rv: ResolvedState, ru: ResolvedState,
            i: int) -> list[tuple[GeneratorLabel, GeneratorLabel, int]]:
    """Unsigned circle-complex entries for the edge lowering chord ``i``
    of state ``rv`` onto ``ru``: list of (source, target, coefficient)."""
    dv, du = rv.diagram, ru.diagram
    p, q = dv.chords[i].endpoints
    cp, cq = dv.circle_of(p), dv.circle_of(q)
    keys_v, keys_u = _circle_keys(dv), _circle_keys(du)
    vmask, umask = rv.state.mask, ru.state.mask
    out: list[tuple[GeneratorLabel, GeneratorLabel, int]] = []

    if rv.phi == 1:
        # both ends one-merge states; the edge splits a circle
        assert ru.phi == 1 and cp == cq
        return [(PlusGen(vmask), PlusGen(umask), 1)]

    if cp == cq:  # split between merge-free states
        assert ru.phi == 0
        mapping = _match_positions(dv, du)
        d1, d2 = du.circle_of(p), du.circle_of(q)
        for pos in range(len(dv.circles)):
            src = CircleGen(vmask, keys_v[pos])
            if pos == cp:
                out.append((src, CircleGen(umask, keys_u[d1]), 1))
                out.append((src, CircleGen(umask, keys_u[d2]), 1))
            else:
                out.append((src, CircleGen(umask, keys_u[mapping[pos]]), 1))
        return out

    # merge of two circles of a merge-free state
    assert ru.phi == 1
    for pos in (cp, cq):
        out.append((CircleGen(vmask, keys_v[pos]), PlusGen(umask), 1))
    return out


def _m_edge(cube: CubeIndex, rv: ResolvedState, ru: ResolvedState,
            i: int, oriented: dict[int, frozenset],
            ) -> list[tuple[GeneratorLabel, GeneratorLabel, int]]:
    """Unsigned graph-complex entries for the edge lowering chord ``i``."""
    dv = rv.diagram
    p, q = dv.chords[i].endpoints
    cp, cq = dv.circle_of(p), dv.circle_of(q)
    vmask, umask = rv.state.mask, ru.state.mask
    out: list[tuple[GeneratorLabel, GeneratorLabel, int]] = []

    if rv.phi == 1:
        assert ru.phi == 1 and cp == cq
        return [(PlusGen(vmask), PlusGen(umask), 1)]

    assert rv.ancestors is not None
    if cp == cq:  # split: components persist, 0-chords persist
        assert ru.phi == 0
        for a in sorted(set(rv.ancestors)):
            out.append((ComponentGen(vmask, a), ComponentGen(umask, a), 1))
        for j in rv.zero_chords:
            out.append((EdgeGen(vmask, j), EdgeGen(umask, j), 1))
        return out

    # merge: everything lands on the single generator of the target
    assert ru.phi == 1
    lady = _ladybug_size(cube, ru)
    touched = {rv.ancestors[cp], rv.ancestors[cq]}
    for a in sorted(set(rv.ancestors)):
        if a in touched:
            out.append((ComponentGen(vmask, a), PlusGen(umask), lady))
    for j in rv.zero_chords:
        c = len(oriented[j] & {cp, cq})
        if c == 2:
            assert lady == 2, (
                "a 0-chord seeing both merged circles forces the "
                "one-cycle component count"
            )
        if c:
            out.append((EdgeGen(vmask, j), PlusGen(umask), c))
    return out


# ---------------------------------------------------------------------------
# complex assembly
# ---------------------------------------------------------------------------


def _assemble(cube: CubeIndex, basis_of, edge_entries) -> GradedChainComplex:
    live = cube.live_by_weight()
    basis: dict[int, tuple] = {}
    index: dict[int, dict] = {}
    for w, masks in live.items():
        labels: list[GeneratorLabel] = []
        for mask in masks:
            res = cube.resolve(mask)
            assert res is not None
            labels.extend(basis_of(cube, res))
        if labels:
            basis[w] = tuple(labels)
            index[w] = {lab: pos for pos, lab in enumerate(labels)}

    diff: dict[int, IntMat] = {}
    for w in sorted(basis):
        if w - 1 not in basis and w - 1 not in live:
            continue
        rows = len(basis.get(w - 1, ()))
        mat = IntMat.zeros(rows, len(basis[w]))
        for mask in live.get(w, ()):
            rv = cube.resolve(mask)
            assert rv is not None
            m = mask
            while m:
                low = m & -m
                m ^= low
                i = low.bit_length() - 1
                ru = cube.resolve(mask ^ low)
                if ru is None:
                    continue
                s = edge_sign(rv.state, i)
                for src, dst, coeff in edge_entries(cube, rv, ru, i):
                    r = index[w - 1][dst]
                    c = index[w][src]
                    mat[r, c] = mat[r, c] + s * coeff
        diff[w] = mat
    c = GradedChainComplex(basis, diff)
    c.check_shapes()
    return c


def build_F_complex(diagram) -> GradedChainComplex:
    """The circle complex of the live subcube (see module docstring),
    graded by state weight with a weight-lowering differential."""
    cube = diagram if isinstance(diagram, CubeIndex) else CubeIndex(diagram)
    return _assemble(cube, _f_basis, _f_edge)


def build_M_complex(diagram) -> GradedChainComplex:
    """The graph complex of the live subcube, graded like the circle
    complex; isomorphic to it through :func:`build_gamma`."""
    cube = diagram if isinstance(diagram, CubeIndex) else CubeIndex(diagram)
    oriented: dict[int, dict[int, frozenset]] = {}

    def edges(cb, rv, ru, i):
        if rv.phi == 0 and rv.state.mask not in oriented:
            oriented[rv.state.mask] = orient_edges(rv)
        return _m_edge(cb, rv, ru, i, oriented.get(rv.state.mask, {}))

    return _assemble(cube, _m_basis, edges)


def build_gamma(diagram) -> dict[int, IntMat]:
    """Degreewise matrices of the comparison map from the graph complex to
    the circle complex: components map to the sum of their circles,
    0-chords to the sum of the circles on their distinguished side, and
    one-merge generators to themselves."""
    cube = diagram if isinstance(diagram, CubeIndex) else CubeIndex(diagram)
    live = cube.live_by_weight()
    out: dict[int, IntMat] = {}
    for w, masks in live.items():
        f_labels: list[GeneratorLabel] = []
        m_labels: list[GeneratorLabel] = []
        cols: list[list[tuple[GeneratorLabel, int]]] = []
        for mask in masks:
            res = cube.resolve(mask)
            assert res is not None
            f_labels.extend(_f_basis(cube, res))
            mb = _m_basis(cube, res)
            m_labels.extend(mb)
            if res.phi == 1:
                cols.append([(PlusGen(mask), 1)])
                continue
            d = res.diagram
            keys = _circle_keys(d)
            assert res.ancestors is not None
            oriented = orient_edges(res)
            for lab in mb:
                if isinstance(lab, ComponentGen):
                    cols.append(
                        [(CircleGen(mask, keys[pos]), 1)
                         for pos in range(len(d.circles))
                         if res.ancestors[pos] == lab.ancestor]
                    )
                else:
                    assert isinstance(lab, EdgeGen)
                    cols.append(
                        [(CircleGen(mask, keys[pos]), 1)
                         for pos in sorted(oriented[lab.chord])]
                    )
        if not m_labels:
            continue
        if len(f_labels) != len(m_labels):
            raise ValueError(
                f"dimension mismatch at weight {w}: "
                f"{len(m_labels)} graph generators vs {len(f_labels)} circles"
            )
        fi = {lab: pos for pos, lab in enumerate(f_labels)}
        mat = IntMat.zeros(len(f_labels), len(m_labels))
        for c, entries in enumerate(cols):
            for lab, coeff in entries:
                mat[fi[lab], c] = coeff
        out[w] = mat
    return out


def build_extreme_complex(diagram) -> GradedChainComplex:
    """One generator per merge-free state (the all-plus enhancement in the
    top quantum grading); edges within the merge-free subcube contribute
    their cube sign."""
    cube = diagram if isinstance(diagram, CubeIndex) else CubeIndex(diagram)
    live = cube.live_by_weight()
    basis: dict[int, tuple] = {}
    index: dict[int, dict[int, int]] = {}
    for w, masks in live.items():
        zero = [m for m in masks if cube.phi(m) == 0]
        if zero:
            basis[w] = tuple(PlusGen(m) for m in zero)
            index[w] = {m: pos for pos, m in enumerate(zero)}
    diff: dict[int, IntMat] = {}
    for w in sorted(basis):
        mat = IntMat.zeros(len(basis.get(w - 1, ())), len(basis[w]))
        for mask, c in index[w].items():
            rv = cube.resolve(mask)
            assert rv is not None
            m = mask
            while m:
                low = m & -m
                m ^= low
                child = mask ^ low
                if w - 1 in index and child in index[w - 1]:
                    i = low.bit_length() - 1
                    mat[index[w - 1][child], c] = edge_sign(rv.state, i)
        diff[w] = mat
    c = GradedChainComplex(basis, diff)
    c.check_shapes()
    return c


def almost_extreme_khovanov(diagram, functor: str = "F") -> HomologyResult:
    """Cohomology of the diagram in the second-highest quantum grading.

    Degrees are the usual cohomological ones when crossing signs are
    available (``i = weight - n_minus``); for abstract chord diagrams the
    raw cube weights are used instead.
    """
    cube = diagram if isinstance(diagram, CubeIndex) else CubeIndex(diagram)
    if functor == "F":
        c = build_F_complex(cube)
    elif functor == "M":
        c = build_M_complex(cube)
    else:
        raise ValueError(f"unknown functor {functor!r} (want 'F' or 'M')")
    h = homology(dualize(c))
    shift = cube.diagram.n_minus or 0
    return HomologyResult(
        {-k - shift: (b, t) for k, (b, t) in h.groups.items()}
    )


# ---------------------------------------------------------------------------
# factorization through pointed sets
# ---------------------------------------------------------------------------


def factor_through_pointed(diagram, functor: str = "F") -> dict:
    """Decide whether every edge map of the chosen functor sends each
    generator to at most one generator, with coefficient one.

    Returns ``{"factors": bool, "obstructions": [...], "levels": ...,
    "faces": ...}``; the simplicial export (``levels``/``faces``) is only
    present when the functor factors.  Level ``k`` collects the
    generators of weight ``k + 1`` states; face ``i`` of a simplex lowers
    the ``i``-th set coordinate of its state, landing either on a
    generator of the lower level or on the basepoint (encoded ``-1``).
    """
    cube = diagram if isinstance(diagram, CubeIndex) else CubeIndex(diagram)
    if functor == "F":
        basis_of, edge_fn = _f_basis, _f_edge
    elif functor == "M":
        oriented: dict[int, dict[int, frozenset]] = {}

        def edge_fn(cb, rv, ru, i):
            if rv.phi == 0 and rv.state.mask not in oriented:
                oriented[rv.state.mask] = orient_edges(rv)
            return _m_edge(cb, rv, ru, i, oriented.get(rv.state.mask, {}))

        basis_of = _m_basis
    else:
        raise ValueError(f"unknown functor {functor!r} (want 'F' or 'M')")

    live = cube.live_by_weight()
    levels: dict[int, list[GeneratorLabel]] = {}
    index: dict[int, dict] = {}
    for w, masks in live.items():
        labels: list[GeneratorLabel] = []
        for mask in masks:
            res = cube.resolve(mask)
            assert res is not None
            labels.extend(basis_of(cube, res))
        if labels:
            levels[w - 1] = labels
            index[w - 1] = {lab: pos for pos, lab in enumerate(labels)}

    obstructions: list[dict] = []
    faces: dict[int, list[list[int]]] = {
        k: [[-1] * (k + 1) for _ in levels[k]] for k in levels
    }
    for w, masks in live.items():
        k = w - 1
        for mask in masks:
            rv = cube.resolve(mask)
            assert rv is not None
            images: dict[GeneratorLabel, list[tuple[int, GeneratorLabel, int]]] = {}
            face_idx = 0
            m = mask
            while m:
                low = m & -m
                m ^= low
                i = low.bit_length() - 1
                ru = cube.resolve(mask ^ low)
                if ru is not None:
                    for src, dst, coeff in edge_fn(cube, rv, ru, i):
                        images.setdefault(src, []).append((face_idx, dst, coeff))
                face_idx += 1
            for src, hits in images.items():
                by_face: dict[int, list[tuple[GeneratorLabel, int]]] = {}
                for fi, dst, coeff in hits:
                    by_face.setdefault(fi, []).append((dst, coeff))
                for fi, dsts in by_face.items():
                    if len(dsts) > 1 or dsts[0][1] != 1:
                        obstructions.append(
                            {
                                "state": rv.state.bitstring(),
                                "chord": _nth_set_bit(mask, fi),
                                "generator": str(src),
                                "images": sorted(
                                    f"{coeff}*{dst}" for dst, coeff in dsts
                                ),
                            }
                        )
                    elif not obstructions:
                        faces[k][index[k][src]][fi] = index[k - 1][dsts[0][0]]

    if obstructions:
        return {"factors": False, "obstructions": obstructions}

    _check_semisimplicial(levels, faces)
    return {
        "factors": True,
        "obstructions": [],
        "levels": {k: [str(lab) for lab in levels[k]] for k in sorted(levels)},
        "faces": {k: faces[k] for k in sorted(faces)},
    }


def _nth_set_bit(mask: int, n: int) -> int:
    for i in range(mask.bit_length()):
        if mask >> i & 1:
            if n == 0:
                return i
            n -= 1
    raise ValueError("not enough set bits")


def _check_semisimplicial(levels, faces) -> None:
    """Face maps must satisfy the simplicial identities
    ``d_i d_j = d_{j-1} d_i`` for ``i < j`` (basepoint absorbs)."""

    def face(k: int, s: int, i: int) -> int:
        if s < 0:
            return -1
        return faces[k][s][i]

    for k in faces:
        if k - 1 not in faces:
            continue
        for s in range(len(levels[k])):
            for j in range(1, k + 1):
                for i in range(j):
                    lhs = face(k - 1, face(k, s, j), i)
                    rhs = face(k - 1, face(k, s, i), j - 1)
                    assert lhs == rhs, (
                        f"simplicial identity fails at level {k}, "
                        f"simplex {s}, faces ({i},{j})"
                    )


def lambda_chain_complex(export: dict) -> GradedChainComplex:
    """Reduced chain complex of a simplicial export, reindexed so that
    level ``k`` sits in degree ``k + 1``; for factorizable functors this
    reproduces the originating complex matrix-for-matrix."""
    if not export.get("factors", False):
        raise ValueError("no simplicial structure: the functor did not factor")
    levels, faces = export["levels"], export["faces"]
    basis = {k + 1: tuple(levels[k]) for k in levels}
    diff: dict[int, IntMat] = {}
    for k in sorted(levels):
        rows = len(levels.get(k - 1, ()))
        mat = IntMat.zeros(rows, len(levels[k]))
        for s, ff in enumerate(faces[k]):
            for i, t in enumerate(ff):
                if t >= 0:
                    mat[t, s] = mat[t, s] + (-1) ** i
        diff[k + 1] = mat
    c = GradedChainComplex(basis, diff)
    c.check_shapes()
    return c
