"""Exact integer algebra: Smith/Hermite forms, lattices, homology.

Public entry points
-------------------
* :func:`smith_normal_form` -- invariant factors, optionally with
  unimodular transforms.
* :func:`homology` -- integral homology (with torsion) of a
  :class:`~khext.model.GradedChainComplex`.
* :func:`simplicial_chain_complex` / :func:`reduced_homology`.

A compiled kernel (:mod:`khext.algebra._snf_c`, built from Cython when a
compiler is available) accelerates transform-free Smith form on matrices
whose entries stay within machine words; results are bit-identical to the
pure path, which remains the reference implementation and the fallback.
Set ``KHEXT_PURE=1`` to force pure Python.
"""

from __future__ import annotations

import os

from . import _snf_py
from ._snf_py import rank
from .intmat import IntMat
from .groups import (
    IntLattice,
    boundary_lattice,
    cycle_matrix,
    dualize,
    homology,
    image_lattice,
    is_chain_map,
    kernel,
    mat_from_cols,
    preimage_lattice,
    row_hnf,
    ses_and_les_report,
    shift_degrees,
    solve,
    solve_matrix,
    xgcd,
)
from .simplicial import reduced_homology, simplicial_chain_complex

try:  # optional compiled kernel
    from . import _snf_c as _compiled
except ImportError:  # pragma: no cover - depends on build environment
    _compiled = None

if os.environ.get("KHEXT_PURE"):
    _compiled = None

#: True when the compiled Smith-form kernel is in use.
USING_COMPILED = _compiled is not None

__all__ = [
    "smith_normal_form",
    "rank",
    "homology",
    "simplicial_chain_complex",
    "reduced_homology",
    "dualize",
    "shift_degrees",
    "IntMat",
    "IntLattice",
    "kernel",
    "solve",
    "solve_matrix",
    "row_hnf",
    "xgcd",
    "image_lattice",
    "preimage_lattice",
    "boundary_lattice",
    "cycle_matrix",
    "mat_from_cols",
    "is_chain_map",
    "ses_and_les_report",
    "USING_COMPILED",
]


def smith_normal_form(m, transforms: bool = False):
    """Invariant factors of an integer matrix (see module docs).

    >>> smith_normal_form([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    (1, 1, 2)
    """
    if transforms:
        return _snf_py.smith_normal_form(m, transforms=True)
    if _compiled is not None:
        rows = m.to_rows() if isinstance(m, IntMat) else [list(r) for r in m]
        try:
            return _compiled.snf_i64(rows)
        except OverflowError:
            pass
    return _snf_py.smith_normal_form(m)
