"""Pure-Python Smith normal form and integer rank.

Two elimination strategies, chosen by need:

* :func:`smith_normal_form` without transforms runs a sparse sweep that
  pivots on +-1 entries first (cube differentials are overwhelmingly unit
  entries, so this keeps fill-in and coefficient growth negligible) and
  finishes the usually tiny residual with a dense minimal-pivot reduction.

* With ``transforms=True`` a classical dense reduction tracks unimodular
  ``U`` and ``V`` with ``U @ m @ V`` diagonal.  Intended for small inputs
  (tests, certificates), not for bulk homology runs.

All arithmetic is exact (Python ints).
"""

from __future__ import annotations

from typing import Sequence

from .intmat import IntMat

__all__ = ["smith_normal_form", "rank", "invariant_factors"]


def _as_intmat(m) -> IntMat:
    if isinstance(m, IntMat):
        return m
    return IntMat.from_rows(m)


# ---------------------------------------------------------------------------
# dense reduction (with optional transforms)
# ---------------------------------------------------------------------------


def _dense_snf(rows: list[list[int]], want_transforms: bool):
    R = len(rows)
    C = len(rows[0]) if rows else 0
    a = [list(r) for r in rows]
    U = IntMat.identity(R) if want_transforms else None
    V = IntMat.identity(C) if want_transforms else None

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            if U is not None:
                for c in range(R):
                    U.data[i, c], U.data[j, c] = (
                        U.data.pop((j, c), 0),
                        U.data.pop((i, c), 0),
                    )
                for c in range(R):
                    for r in (i, j):
                        if U.data.get((r, c), 0) == 0:
                            U.data.pop((r, c), None)

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            if V is not None:
                for r in range(C):
                    V.data[r, i], V.data[r, j] = (
                        V.data.pop((r, j), 0),
                        V.data.pop((r, i), 0),
                    )
                for r in range(C):
                    for c in (i, j):
                        if V.data.get((r, c), 0) == 0:
                            V.data.pop((r, c), None)

    def row_addmul(dst, src, k):
        # row dst += k * row src
        if k:
            ad, asrc = a[dst], a[src]
            for c in range(C):
                ad[c] += k * asrc[c]
            if U is not None:
                for c in range(R):
                    v = U[dst, c] + k * U[src, c]
                    U[dst, c] = v

    def col_addmul(dst, src, k):
        if k:
            for row in a:
                row[dst] += k * row[src]
            if V is not None:
                for r in range(C):
                    V[r, dst] = V[r, dst] + k * V[r, src]

    t = 0
    limit = min(R, C)
    while t < limit:
        # locate a pivot of minimal absolute value in the submatrix
        piv = None
        best = None
        for i in range(t, R):
            for j in range(t, C):
                v = a[i][j]
                if v:
                    av = -v if v < 0 else v
                    if best is None or av < best:
                        best, piv = av, (i, j)
                        if av == 1:
                            break
            if best == 1:
                break
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])

        while True:
            # euclidean clean-up of column t
            dirty = False
            for i in range(R):
                if i != t and a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_addmul(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(C):
                if j != t and a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_addmul(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # divisibility: the pivot must divide every remaining entry
            offender = None
            p = a[t][t]
            for i in range(t + 1, R):
                for j in range(t + 1, C):
                    if a[i][j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_addmul(t, offender, 1)

        if a[t][t] < 0:
            row_addmul(t, t, -2)  # negate row t
        t += 1

    factors = tuple(a[k][k] for k in range(limit) if a[k][k])
    return factors, U, V


# ---------------------------------------------------------------------------
# sparse unit-pivot sweep
# ---------------------------------------------------------------------------


def _sparse_sweep(m: IntMat):
    """Pivot on +-1 entries with symmetric row/column elimination.

    Returns ``(unit_count, residual_rows)`` where each unit pivot
    contributes an invariant factor 1 and ``residual_rows`` is the dense
    remainder (possibly empty) still to be reduced.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (r, c), v in m.data.items():
        rows.setdefault(r, {})[c] = v
        cols.setdefault(c, set()).add(r)

    unit_count = 0
    while True:
        # choose the +-1 pivot with the cheapest fill estimate
        pivot = None
        best_cost = None
        for r, row in rows.items():
            lr = len(row) - 1
            for c, v in row.items():
                if v == 1 or v == -1:
                    cost = lr * (len(cols[c]) - 1)
                    if best_cost is None or cost < best_cost:
                        best_cost, pivot = cost, (r, c, v)
                        if cost == 0:
                            break
            if best_cost == 0:
                break
        if pivot is None:
            break
        r0, c0, v0 = pivot
        prow = rows.pop(r0)
        for c in prow:
            cols[c].discard(r0)
        # clear column c0 with row operations (multiplier is exact: v0 = +-1)
        for r in list(cols.get(c0, ())):
            row = rows[r]
            k = row[c0] * v0  # row[c0] / v0
            for c, v in prow.items():
                if c == c0:
                    continue
                w = row.get(c, 0) - k * v
                if w:
                    if c not in row:
                        cols[c].add(r)
                    row[c] = w
                else:
                    if c in row:
                        del row[c]
                        cols[c].discard(r)
            del row[c0]
            cols[c0].discard(r)
            if not row:
                del rows[r]
        cols.pop(c0, None)
        # the leftover entries of the pivot row are removed by column
        # operations; with column c0 already clear these touch nothing else
        unit_count += 1

    if not rows:
        return unit_count, []
    live_cols = sorted({c for row in rows.values() for c in row})
    colpos = {c: j for j, c in enumerate(live_cols)}
    residual = []
    for r in sorted(rows):
        line = [0] * len(live_cols)
        for c, v in rows[r].items():
            line[colpos[c]] = v
        residual.append(line)
    return unit_count, residual


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def smith_normal_form(m, transforms: bool = False):
    """Invariant factors of an integer matrix.

    Parameters
    ----------
    m:
        An :class:`IntMat` or a sequence of rows.
    transforms:
        When true, also return unimodular ``(U, V)`` with ``U @ m @ V``
        equal to the diagonal matrix of invariant factors (padded with
        zeros).  Uses the dense algorithm; intended for small matrices.

    Returns
    -------
    ``factors`` or ``(factors, U, V)`` -- ``factors`` is the tuple of
    nonzero invariant factors in divisibility order (ones included).

    >>> smith_normal_form([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    (1, 1, 2)
    """
    mat = _as_intmat(m)
    if transforms:
        factors, U, V = _dense_snf(mat.to_rows(), True)
        return factors, U, V
    unit_count, residual = _sparse_sweep(mat)
    tail, _, _ = _dense_snf(residual, False) if residual else ((), None, None)
    return (1,) * unit_count + tail


def invariant_factors(m) -> tuple[int, ...]:
    """Alias of :func:`smith_normal_form` without transforms."""
    return smith_normal_form(m)


def rank(m) -> int:
    """Rank over Q of an integer matrix (via the sparse sweep)."""
    mat = _as_intmat(m)
    unit_count, residual = _sparse_sweep(mat)
    if not residual:
        return unit_count
    tail, _, _ = _dense_snf(residual, False)
    return unit_count + len(tail)
