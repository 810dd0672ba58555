"""Extreme quantum grading: Lando graphs, independence complexes, duality.

The generators in the top quantum grading are the all-plus enhancements of
merge-free states, and merge-freeness of a state is equivalent to the set
of surgered monochords being independent in the **Lando graph** of the
all-ones resolution (vertices: monochords; edges: alternating pairs).
The homology in that grading is therefore the reduced homology of the
independence complex of the Lando graph, suitably reindexed; this module
provides the graph, the complex, closed-form reference answers for paths
and cycles (and disjoint unions of them, via joins), and the degreewise
comparison between the two computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import dualize, homology, reduced_homology
from .configs import detect_configs
from .functors import build_extreme_complex
from .ingest import to_chord_diagram
from .model import HomologyResult, SimplicialComplex

__all__ = [
    "Graph",
    "lando_graph",
    "independence_complex",
    "graph_shape",
    "reference_homotopy",
    "dual_subposet_check",
]


@dataclass(frozen=True)
class Graph:
    """A finite simple graph with hashable vertices."""

    vertices: tuple
    edges: frozenset  # of 2-element frozensets

    @classmethod
    def from_edges(cls, vertices, edges) -> "Graph":
        vs = tuple(sorted(set(vertices)))
        es = set()
        vset = set(vs)
        for a, b in edges:
            if a == b or a not in vset or b not in vset:
                raise ValueError(f"bad edge ({a!r}, {b!r})")
            es.add(frozenset((a, b)))
        return cls(vs, frozenset(es))

    def neighbors(self, v) -> set:
        return {next(iter(e - {v})) for e in self.edges if v in e}

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)

    def components(self) -> list["Graph"]:
        remaining = set(self.vertices)
        out = []
        while remaining:
            seed = min(remaining, key=self.vertices.index)
            comp = {seed}
            stack = [seed]
            while stack:
                for w in self.neighbors(stack.pop()):
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            remaining -= comp
            out.append(
                Graph(
                    tuple(v for v in self.vertices if v in comp),
                    frozenset(e for e in self.edges if e <= comp),
                )
            )
        return out

    def __str__(self) -> str:
        es = sorted(tuple(sorted(e)) for e in self.edges)
        return f"Graph({list(self.vertices)}, {es})"


def lando_graph(diagram) -> Graph:
    """Vertices: monochords of the all-ones resolution; edges: alternating
    pairs.  Surgering a set of monochords is merge-free exactly when the
    set is independent here."""
    d = to_chord_diagram(diagram)
    rep = detect_configs(d)
    return Graph.from_edges(rep.monochords, rep.alternating_pairs)


def independence_complex(g: Graph, max_vertices: int = 24) -> SimplicialComplex:
    """All independent vertex sets of ``g``, as a simplicial complex.

    Enumeration is exponential in the worst case; graphs beyond
    ``max_vertices`` vertices are refused.
    """
    if len(g.vertices) > max_vertices:
        raise ValueError(
            f"refusing independence-complex enumeration on "
            f"{len(g.vertices)} vertices (max_vertices={max_vertices})"
        )
    order = {v: k for k, v in enumerate(g.vertices)}
    nbrs = {v: g.neighbors(v) for v in g.vertices}
    faces: set[tuple] = {()}

    def grow(face: tuple, banned: set) -> None:
        last = order[face[-1]] if face else -1
        for v in g.vertices:
            if order[v] > last and v not in banned:
                f = face + (v,)
                faces.add(f)
                grow(f, banned | nbrs[v])

    grow((), set())
    return SimplicialComplex(tuple(g.vertices), frozenset(faces))


def graph_shape(g: Graph) -> Optional[tuple[str, int]]:
    """Classify a connected graph as ``("path", edge_count)`` or
    ``("cycle", length)``; ``None`` for anything else."""
    nv, ne = len(g.vertices), len(g.edges)
    if nv == 0:
        return None
    degs = sorted(g.degree(v) for v in g.vertices)
    if len(g.components()) != 1:
        return None
    if ne == nv and all(d == 2 for d in degs):
        return ("cycle", nv)
    if ne == nv - 1 and all(d <= 2 for d in degs):
        return ("path", ne)
    return None


def reference_homotopy(family, n: Optional[int] = None) -> HomologyResult:
    """Closed-form reduced homology of the independence complex of a path
    or cycle graph, or of a disjoint union of such graphs.

    ``reference_homotopy("cycle", n)`` uses the cycle with ``n`` vertices
    (``n >= 3``); its independence complex is a ``(k-1)``-sphere for
    ``n = 3k + 1`` or ``n = 3k - 1`` and a wedge of two for ``n = 3k``.
    ``reference_homotopy("path", n)`` uses the path with ``n`` *edges*
    (``n >= 0``); the complex is contractible for ``n = 3k`` and a
    ``k``-sphere for ``n = 3k + 1`` and ``n = 3k + 2``.  Passing a
    :class:`Graph` classifies each connected component and combines them
    with the join rule (a wedge of ``a`` ``d``-spheres joined with ``b``
    ``e``-spheres is ``a*b`` ``(d+e+1)``-spheres; anything joined with a
    contractible factor is contractible).
    """
    if isinstance(family, Graph):
        # empty complex (of the empty graph) is the unit of the join
        spheres: Optional[dict[int, int]] = {-1: 1}
        for comp in family.components():
            shape = graph_shape(comp)
            if shape is None:
                raise ValueError(
                    f"no reference answer: component {comp} is neither a "
                    f"path nor a cycle"
                )
            part = reference_homotopy(*shape)
            if spheres is None or not part.groups:
                spheres = None  # a contractible factor kills the join
                continue
            nxt: dict[int, int] = {}
            for d1, m1 in spheres.items():
                for d2, (m2, _) in part.groups.items():
                    nxt[d1 + d2 + 1] = nxt.get(d1 + d2 + 1, 0) + m1 * m2
            spheres = nxt
        if spheres is None:
            return HomologyResult({})
        return HomologyResult({d: (m, ()) for d, m in spheres.items()})

    if n is None:
        raise ValueError("reference_homotopy needs a size for named families")
    if family == "cycle":
        if n < 3:
            raise ValueError(f"cycle length {n} out of range (need >= 3)")
        k, r = divmod(n, 3)
        if r == 0:
            return HomologyResult({k - 1: (2, ())})
        k = (n - 1) // 3 if r == 1 else (n + 1) // 3
        return HomologyResult({k - 1: (1, ())})
    if family == "path":
        if n < 0:
            raise ValueError(f"path edge count {n} is negative")
        k, r = divmod(n, 3)
        if r == 0:
            return HomologyResult({})
        return HomologyResult({k: (1, ())})
    raise ValueError(f"unknown reference family {family!r}")


def dual_subposet_check(diagram, max_vertices: int = 24) -> dict:
    """Verify, degree by degree, that the cohomology of the merge-free
    subposet complex agrees with the reduced homology of the independence
    complex of the Lando graph under ``k <-> n - k - 1``.

    The relation is stated in raw cube degrees, so it needs no crossing
    signs.  Returns the two sides and the verdict.
    """
    d = to_chord_diagram(diagram)
    x = build_extreme_complex(d)
    hx = homology(dualize(x))
    extreme_side = {-k: g for k, g in hx.groups.items()}

    ind = independence_complex(lando_graph(d), max_vertices=max_vertices)
    hi = reduced_homology(ind)

    translated = {d.n - deg - 1: g for deg, g in hi.groups.items()}
    return {
        "n": d.n,
        "extreme": extreme_side,
        "independence": {deg: g for deg, g in hi.groups.items()},
        "translated": translated,
        "agree": translated == extreme_side,
    }
