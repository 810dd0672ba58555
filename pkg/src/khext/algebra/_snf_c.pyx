# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Machine-word Smith normal form kernel.

Same reduction as the pure-Python dense path, restricted to int64 with an
explicit magnitude guard: any intermediate that could leave the safe range
raises :class:`OverflowError`, and the caller falls back to exact
arbitrary-precision arithmetic.  Factors are returned as a plain tuple.
"""

from cpython cimport array
import array

cdef long long LIMIT = (<long long> 1) << 60


cdef inline long long _llabs(long long x) noexcept:
    return -x if x < 0 else x


cdef inline long long _checked_submul(long long x, long long q, long long y) except? -1:
    # x - q*y with overflow guard
    cdef long long p
    if q != 0 and y != 0:
        if _llabs(y) > LIMIT // _llabs(q):
            raise OverflowError("snf_i64: entry growth beyond int64 range")
        p = q * y
    else:
        p = 0
    if (p > 0 and x < -LIMIT + p) or (p < 0 and x > LIMIT + p):
        raise OverflowError("snf_i64: entry growth beyond int64 range")
    return x - p


def snf_i64(rows):
    """Invariant factors of a dense integer matrix given as row lists."""
    cdef Py_ssize_t R = len(rows)
    cdef Py_ssize_t C = len(rows[0]) if R else 0
    cdef Py_ssize_t i, j, t, bi, bj, ii, jj
    cdef long long v, best, q, piv
    cdef bint dirty

    if R == 0 or C == 0:
        return ()

    cdef array.array buf = array.array('q', [0]) * 0
    array.resize(buf, R * C)
    cdef long long[::1] a = buf
    for i in range(R):
        row = rows[i]
        if len(row) != C:
            raise ValueError("ragged rows")
        for j in range(C):
            v = row[j]  # raises OverflowError if it does not fit int64
            if _llabs(v) > LIMIT:
                raise OverflowError("snf_i64: input entry too large")
            a[i * C + j] = v

    cdef Py_ssize_t limit = R if R < C else C
    t = 0
    while t < limit:
        # minimal-magnitude pivot search
        bi = -1
        bj = -1
        best = 0
        for i in range(t, R):
            for j in range(t, C):
                v = a[i * C + j]
                if v != 0:
                    if bi < 0 or _llabs(v) < best:
                        best = _llabs(v)
                        bi = i
                        bj = j
                        if best == 1:
                            break
            if best == 1 and bi >= 0:
                break
        if bi < 0:
            break
        if bi != t:
            for j in range(C):
                a[t * C + j], a[bi * C + j] = a[bi * C + j], a[t * C + j]
        if bj != t:
            for i in range(R):
                a[i * C + t], a[i * C + bj] = a[i * C + bj], a[i * C + t]

        while True:
            dirty = False
            for i in range(R):
                if i != t and a[i * C + t] != 0:
                    q = a[i * C + t] // a[t * C + t]
                    for j in range(C):
                        a[i * C + j] = _checked_submul(
                            a[i * C + j], q, a[t * C + j])
                    if a[i * C + t] != 0:
                        for j in range(C):
                            a[t * C + j], a[i * C + j] = (
                                a[i * C + j], a[t * C + j])
                        dirty = True
            for j in range(C):
                if j != t and a[t * C + j] != 0:
                    q = a[t * C + j] // a[t * C + t]
                    for i in range(R):
                        a[i * C + j] = _checked_submul(
                            a[i * C + j], q, a[i * C + t])
                    if a[t * C + j] != 0:
                        for i in range(R):
                            a[i * C + t], a[i * C + j] = (
                                a[i * C + j], a[i * C + t])
                        dirty = True
            if dirty:
                continue
            piv = a[t * C + t]
            bi = -1
            for i in range(t + 1, R):
                for j in range(t + 1, C):
                    if a[i * C + j] % piv != 0:
                        bi = i
                        break
                if bi >= 0:
                    break
            if bi < 0:
                break
            for j in range(C):
                a[t * C + j] = _checked_submul(a[t * C + j], -1, a[bi * C + j])

        if a[t * C + t] < 0:
            for j in range(C):
                a[t * C + j] = -a[t * C + j]
        t += 1

    out = []
    for i in range(limit):
        v = a[i * C + i]
        if v != 0:
            out.append(int(v))
    return tuple(out)
