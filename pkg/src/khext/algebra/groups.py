"""Integer linear algebra on chain complexes.

Provides row-style Hermite reduction (kernel bases, integer solves,
canonical lattices), homology of a :class:`~khext.model.GradedChainComplex`
with torsion, dualization (for cohomology), chain-map checking, and a
verifier for short exact sequences of complexes together with the exactness
of the induced long exact homology sequence.

Subgroup computations follow one pattern: a question about homology classes
is restated about explicit subgroups of the cycle group and decided by
comparing canonical Hermite forms, so every check is exact over Z.
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..model import GradedChainComplex, HomologyResult
from .intmat import IntMat
from ._snf_py import smith_normal_form

__all__ = [
    "xgcd",
    "row_hnf",
    "kernel",
    "solve",
    "solve_matrix",
    "IntLattice",
    "image_lattice",
    "preimage_lattice",
    "mat_from_cols",
    "cycle_matrix",
    "boundary_lattice",
    "homology",
    "dualize",
    "shift_degrees",
    "is_chain_map",
    "ses_and_les_report",
]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, x, y) with a*x + b*y == g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# Hermite reduction
# ---------------------------------------------------------------------------


def row_hnf(rows: Sequence[Sequence[int]], ncols: int):
    """Row Hermite normal form with transform.

    Returns ``(hnf, transform, pivots)`` where ``transform`` is unimodular,
    ``transform . rows == hnf`` (as stacked matrices), the nonzero rows of
    ``hnf`` are in canonical echelon form (positive pivots, entries above a
    pivot reduced into ``[0, pivot)``), and ``pivots`` lists the pivot
    column of each nonzero row.
    """
    work = [list(r) for r in rows]
    nr = len(work)
    for r in work:
        if len(r) != ncols:
            raise ValueError("row length mismatch")
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]

    def addmul(dst, src, k):
        if k:
            wd, ws = work[dst], work[src]
            for c in range(ncols):
                wd[c] += k * ws[c]
            ud, us = u[dst], u[src]
            for c in range(nr):
                ud[c] += k * us[c]

    def swap(i, j):
        if i != j:
            work[i], work[j] = work[j], work[i]
            u[i], u[j] = u[j], u[i]

    top = 0
    pivots: list[int] = []
    for col in range(ncols):
        # gcd the column below `top` into one row
        while True:
            live = [i for i in range(top, nr) if work[i][col]]
            if not live:
                break
            imin = min(live, key=lambda i: abs(work[i][col]))
            swap(top, imin)
            done = True
            for i in range(top + 1, nr):
                if work[i][col]:
                    q = work[i][col] // work[top][col]
                    addmul(i, top, -q)
                    if work[i][col]:
                        done = False
            if done:
                break
        if top < nr and work[top][col]:
            if work[top][col] < 0:
                addmul(top, top, -2)
            p = work[top][col]
            for i in range(top):
                q = work[i][col] // p
                addmul(i, top, -q)
            pivots.append(col)
            top += 1
            if top == nr:
                break
    hnf = [tuple(r) for r in work]
    transform = [tuple(r) for r in u]
    return hnf, transform, pivots


def kernel(m: IntMat) -> list[tuple[int, ...]]:
    """Basis of the integer kernel ``{x : m @ x == 0}`` (saturated)."""
    rows = m.t().to_rows()  # rows indexed by columns of m
    hnf, transform, pivots = row_hnf(rows, m.nrows)
    nz = len(pivots)
    return [tuple(transform[i]) for i in range(nz, len(rows))]


def solve(m: IntMat, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """One integer solution of ``m @ x == b``, or ``None``."""
    if len(b) != m.nrows:
        raise ValueError("rhs length mismatch")
    rows = m.t().to_rows()
    hnf, transform, pivots = row_hnf(rows, m.nrows)
    v = list(b)
    coeff = [0] * len(rows)
    for r, col in enumerate(pivots):
        p = hnf[r][col]
        q, rem = divmod(v[col], p)
        if rem:
            return None
        if q:
            coeff[r] = q
            for c in range(m.nrows):
                v[c] -= q * hnf[r][c]
    if any(v):
        return None
    x = [0] * m.ncols
    for r, k in enumerate(coeff):
        if k:
            trow = transform[r]
            for c in range(m.ncols):
                x[c] += k * trow[c]
    return tuple(x)


def solve_matrix(m: IntMat, rhs: IntMat) -> Optional[IntMat]:
    """Integer ``X`` with ``m @ X == rhs`` (columnwise), or ``None``."""
    if rhs.nrows != m.nrows:
        raise ValueError("shape mismatch in solve_matrix")
    out = IntMat(m.ncols, rhs.ncols)
    for j in range(rhs.ncols):
        x = solve(m, rhs.col(j))
        if x is None:
            return None
        for i, v in enumerate(x):
            if v:
                out.data[i, j] = v
    return out


# ---------------------------------------------------------------------------
# lattices (subgroups of Z^n), canonical form
# ---------------------------------------------------------------------------


class IntLattice:
    """A subgroup of Z^ncols, held in canonical Hermite form.

    Canonicity makes equality testing a tuple comparison, which is what the
    exactness checks rely on.
    """

    __slots__ = ("ncols", "rows", "pivots")

    def __init__(self, ncols: int, rows: Sequence[Sequence[int]] = ()):
        hnf, _, pivots = row_hnf(list(rows), ncols)
        self.ncols = ncols
        self.rows = tuple(tuple(r) for r in hnf[: len(pivots)])
        self.pivots = tuple(pivots)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        v = list(v)
        for r, col in enumerate(self.pivots):
            p = self.rows[r][col]
            q, rem = divmod(v[col], p)
            if rem:
                return False
            if q:
                row = self.rows[r]
                for c in range(self.ncols):
                    v[c] -= q * row[c]
        return not any(v)

    def sum(self, other: "IntLattice") -> "IntLattice":
        if self.ncols != other.ncols:
            raise ValueError("ambient dimension mismatch")
        return IntLattice(self.ncols, list(self.rows) + list(other.rows))

    def is_full(self) -> bool:
        return self.rows == tuple(
            tuple(1 if i == j else 0 for j in range(self.ncols))
            for i in range(self.ncols)
        )

    def basis_matrix(self) -> IntMat:
        """Rows of the canonical basis as a matrix (rank x ncols)."""
        return IntMat.from_rows(self.rows, self.ncols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntLattice):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __repr__(self):
        return f"IntLattice(Z^{self.ncols}, rank={self.rank})"


def image_lattice(m: IntMat) -> IntLattice:
    """Column span of ``m`` as a lattice in Z^nrows."""
    return IntLattice(m.nrows, m.t().to_rows())


def preimage_lattice(f: IntMat, target: IntLattice) -> IntLattice:
    """``{x : f @ x in target}`` as a lattice in Z^(f.ncols).

    Computed from the kernel of the block matrix ``[f | -B^T]`` where the
    rows of ``B`` are the basis of ``target``.
    """
    if target.ncols != f.nrows:
        raise ValueError("target lattice lives in the wrong space")
    block = f.hstack(target.basis_matrix().t().scale(-1))
    vecs = kernel(block)
    return IntLattice(f.ncols, [v[: f.ncols] for v in vecs])


def mat_from_cols(cols: Sequence[Sequence[int]], nrows: int) -> IntMat:
    m = IntMat(nrows, len(cols))
    for j, v in enumerate(cols):
        if len(v) != nrows:
            raise ValueError("column length mismatch")
        for i, x in enumerate(v):
            if x:
                m.data[i, j] = x
    return m


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


def _check_complex(c: GradedChainComplex) -> None:
    c.check_shapes()
    for k in sorted(c.diff):
        a, b = c.d(k + 1), c.d(k)
        if a is not None and b is not None and not (b @ a).is_zero():
            raise ValueError(
                f"differential does not square to zero between degrees "
                f"{k + 1} and {k - 1}"
            )


def homology(c: GradedChainComplex) -> HomologyResult:
    """Integral homology of a complex whose differential lowers degree."""
    _check_complex(c)
    facs: dict[int, tuple[int, ...]] = {}

    def factors(k: int) -> tuple[int, ...]:
        if k not in facs:
            d = c.d(k)
            facs[k] = smith_normal_form(d) if d is not None else ()
        return facs[k]

    groups: dict[int, tuple[int, tuple[int, ...]]] = {}
    for k in c.degrees():
        out_rank = len(factors(k))
        inc = factors(k + 1)
        betti = c.dim(k) - out_rank - len(inc)
        torsion = tuple(f for f in inc if f != 1)
        if betti or torsion:
            groups[k] = (betti, torsion)
    return HomologyResult(groups)


def dualize(c: GradedChainComplex) -> GradedChainComplex:
    """Hom(-, Z) with degrees negated, so the result is again a chain
    complex (differential lowers degree).  ``H_{-k}`` of the result is the
    cohomology ``H^k`` of the input.
    """
    basis = {-k: v for k, v in c.basis.items()}
    diff: dict[int, IntMat] = {}
    for k in c.basis:
        d = c.d(k + 1)
        if d is not None:
            diff[-k] = d.t()
    out = GradedChainComplex(basis, diff)
    out.check_shapes()
    return out


def shift_degrees(c: GradedChainComplex, s: int) -> GradedChainComplex:
    return GradedChainComplex(
        {k + s: v for k, v in c.basis.items()},
        {k + s: m for k, m in c.diff.items()},
    )


# ---------------------------------------------------------------------------
# chain maps and long exact sequences
# ---------------------------------------------------------------------------


def _map_at(f: dict[int, IntMat], k: int, src: GradedChainComplex,
            dst: GradedChainComplex) -> IntMat:
    m = f.get(k)
    if m is None:
        return IntMat.zeros(dst.dim(k), src.dim(k))
    return m


def is_chain_map(f: dict[int, IntMat], src: GradedChainComplex,
                 dst: GradedChainComplex) -> bool:
    """Does ``f`` commute with the differentials (degreewise matrices)?"""
    degs = set(src.basis) | set(f)
    for k in degs:
        fk = _map_at(f, k, src, dst)
        fk1 = _map_at(f, k - 1, src, dst)
        ds = src.d(k)
        dd = dst.d(k)
        lhs = (dd @ fk) if dd is not None else IntMat.zeros(dst.dim(k - 1), src.dim(k))
        rhs = (fk1 @ ds) if ds is not None else IntMat.zeros(dst.dim(k - 1), src.dim(k))
        if lhs != rhs:
            return False
    return True


def cycle_matrix(c: GradedChainComplex, k: int) -> IntMat:
    """Columns form a basis of the cycle group ``Z_k``."""
    d = c.d(k)
    if d is None:
        return IntMat.identity(c.dim(k))
    return mat_from_cols(kernel(d), c.dim(k))


def boundary_lattice(c: GradedChainComplex, k: int) -> IntLattice:
    """The boundary subgroup ``B_k`` inside ``C_k``."""
    d = c.d(k + 1)
    if d is None:
        return IntLattice(c.dim(k))
    return image_lattice(d)


def ses_and_les_report(
    sub: GradedChainComplex,
    total: GradedChainComplex,
    quot: GradedChainComplex,
    inj: dict[int, IntMat],
    proj: dict[int, IntMat],
) -> dict:
    """Verify ``0 -> sub -> total -> quot -> 0`` and its homology LES.

    ``inj`` / ``proj`` are degreewise matrices.  The report records, per
    degree: injectivity, surjectivity, ``ker(proj) == im(inj)``, and the
    three exactness statements of the long exact homology sequence (at the
    sub, total and quotient spots), all decided by canonical-lattice
    comparison over Z.  ``report["ok"]`` is the conjunction.
    """
    report: dict = {"chain_maps": True, "degrees": {}, "ok": True}
    if not is_chain_map(inj, sub, total) or not is_chain_map(proj, total, quot):
        report["chain_maps"] = False
        report["ok"] = False

    degs = sorted(set(sub.basis) | set(total.basis) | set(quot.basis))
    if not degs:
        return report

    # short-exactness, degreewise
    for k in degs:
        f = _map_at(inj, k, sub, total)
        g = _map_at(proj, k, total, quot)
        inj_ok = not kernel(f)
        surj_ok = image_lattice(g).is_full() if quot.dim(k) else True
        mid_ok = image_lattice(f) == IntLattice(total.dim(k), kernel(g))
        entry = {"injective": inj_ok, "surjective": surj_ok,
                 "ker_eq_im": mid_ok}
        report["degrees"][k] = entry
        if not (inj_ok and surj_ok and mid_ok):
            report["ok"] = False
    if not report["ok"]:
        return report

    # sections and connecting lifts
    lo, hi = degs[0], degs[-1]
    sect: dict[int, IntMat] = {}
    for k in range(lo, hi + 1):
        g = _map_at(proj, k, total, quot)
        s = solve_matrix(g, IntMat.identity(quot.dim(k)))
        if s is None:  # cannot happen once surjectivity holds
            report["ok"] = False
            report["degrees"].setdefault(k, {})["section"] = False
            return report
        sect[k] = s

    zc: dict[int, IntMat] = {}
    conn: dict[int, Optional[IntMat]] = {}
    for k in range(lo, hi + 1):
        zc[k] = cycle_matrix(quot, k)
        dtot = total.d(k)
        if dtot is None:
            w = IntMat.zeros(total.dim(k - 1), zc[k].ncols)
        else:
            w = dtot @ sect[k] @ zc[k]
        f1 = _map_at(inj, k - 1, sub, total)
        y = solve_matrix(f1, w)
        conn[k] = y  # columns: connecting-map values on quotient cycles
        if y is None:
            report["degrees"].setdefault(k, {})["connecting_lift"] = False
            report["ok"] = False
    if not report["ok"]:
        return report

    def lattice_of_cols(m: IntMat) -> list[tuple[int, ...]]:
        return [m.col(j) for j in range(m.ncols)]

    for k in range(lo, hi + 1):
        entry = report["degrees"].setdefault(k, {})
        f = _map_at(inj, k, sub, total)
        g = _map_at(proj, k, total, quot)

        # at H_k(sub): ker(f_*) == im(connecting from H_{k+1}(quot))
        za = cycle_matrix(sub, k)
        lhs = preimage_lattice(f @ za, boundary_lattice(total, k))
        delta_cols = conn.get(k + 1)
        gens = lattice_of_cols(delta_cols) if delta_cols is not None else []
        target = IntLattice(sub.dim(k), gens).sum(boundary_lattice(sub, k))
        rhs = preimage_lattice(za, target)
        entry["exact_at_sub"] = lhs == rhs

        # at H_k(total): ker(g_*) == im(f_*)
        zb = cycle_matrix(total, k)
        lhs = preimage_lattice(g @ zb, boundary_lattice(quot, k))
        target = IntLattice(
            total.dim(k), lattice_of_cols(f @ za)
        ).sum(boundary_lattice(total, k))
        rhs = preimage_lattice(zb, target)
        entry["exact_at_total"] = lhs == rhs

        # at H_k(quot): ker(connecting) == im(g_*)
        y = conn[k]
        lhs = preimage_lattice(y, boundary_lattice(sub, k - 1))
        target = IntLattice(
            quot.dim(k), lattice_of_cols(g @ zb)
        ).sum(boundary_lattice(quot, k))
        rhs = preimage_lattice(zc[k], target)
        entry["exact_at_quot"] = lhs == rhs

        if not (entry["exact_at_sub"] and entry["exact_at_total"]
                and entry["exact_at_quot"]):
            report["ok"] = False
    return report
