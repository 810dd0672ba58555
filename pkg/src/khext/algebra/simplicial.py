"""Chain complexes of abstract simplicial complexes."""

from __future__ import annotations

from ..model import GradedChainComplex, HomologyResult, SimplicialComplex
from .intmat import IntMat
from . import groups

__all__ = ["simplicial_chain_complex", "reduced_homology"]


def simplicial_chain_complex(
    k: SimplicialComplex, reduced: bool = True
) -> GradedChainComplex:
    """The (ordered-vertex) chain complex of a simplicial complex.

    Faces are oriented by their sorted vertex order.  With ``reduced`` the
    empty face generates degree -1 and the augmentation appears as the
    differential out of degree 0; the empty complex ``{()}`` then has a
    single generator in degree -1 (so its reduced homology is Z there).
    """
    top = k.dim
    basis: dict[int, tuple] = {}
    lowest = -1 if reduced else 0
    for d in range(lowest, top + 1):
        faces = k.faces_of_dim(d)
        if faces:
            basis[d] = tuple(faces)
    diff: dict[int, IntMat] = {}
    for d in range(lowest + 1, top + 1):
        here = basis.get(d, ())
        below = basis.get(d - 1, ())
        if not here or not below:
            continue
        pos = {f: i for i, f in enumerate(below)}
        m = IntMat(len(below), len(here))
        for j, face in enumerate(here):
            for drop in range(len(face)):
                sub = face[:drop] + face[drop + 1 :]
                m.data[pos[sub], j] = 1 if drop % 2 == 0 else -1
        diff[d] = m
    out = GradedChainComplex(basis, diff)
    out.check_shapes()
    return out


def reduced_homology(k: SimplicialComplex) -> HomologyResult:
    """Reduced integral homology (degree -1 possible for the empty complex)."""
    return groups.homology(simplicial_chain_complex(k, reduced=True))
