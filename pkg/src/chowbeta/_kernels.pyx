# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse exact elimination; same interface as ``_kernels_py``."""


cpdef object leading_column(dict row, object rank=None):
    cdef object best = None
    cdef Py_ssize_t r, best_r = -1
    if rank is None:
        return min(row)
    for c in row:
        r = rank[c]
        if best_r < 0 or r < best_r:
            best_r = r
            best = c
    return best


cdef inline void _axpy(dict dst, object f, dict src):
    # dst -= f * src, dropping zeros
    cdef object c, x, y
    for c, x in src.items():
        y = dst.get(c, 0) - f * x
        if y:
            dst[c] = y
        else:
            dst.pop(c, None)


cdef class Echelon:
    """Incrementally maintained reduced row-echelon basis of a row space."""

    cdef public object rank
    cdef public dict rows

    def __init__(self, rank=None):
        self.rank = rank
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    cpdef dict reduce(self, dict vec):
        cdef dict v = {c: x for c, x in vec.items() if x}
        cdef dict rows = self.rows
        cdef list hits = [c for c in v if c in rows]
        for p in hits:
            _axpy(v, v[p], <dict>rows[p])
        return v

    cpdef object add(self, dict vec):
        """Insert ``vec``; return its pivot column, or None if dependent."""
        cdef dict v = self.reduce(vec)
        cdef dict row
        cdef object p, inv, f
        if not v:
            return None
        p = leading_column(v, self.rank)
        inv = 1 / v[p]
        if inv != 1:
            v = {c: x * inv for c, x in v.items()}
        for row in self.rows.values():
            f = row.get(p)
            if f:
                _axpy(row, f, v)
        self.rows[p] = v
        return p

    def pivots(self):
        if self.rank is None:
            return sorted(self.rows)
        return sorted(self.rows, key=self.rank.__getitem__)


def echelonize(rows, rank=None):
    cdef Echelon ech = Echelon(rank)
    for r in rows:
        ech.add(r)
    piv = ech.pivots()
    return [ech.rows[p] for p in piv], piv


def greedy_basis(base_rows, candidates, target, rank=None):
    """Scan ``candidates`` in order, keep those whose unit vectors are
    independent modulo ``base_rows``; stop after ``target`` kept."""
    cdef Echelon ech = Echelon(rank)
    cdef list kept = []
    for r in base_rows:
        ech.add(r)
    for j in candidates:
        if len(kept) == target:
            break
        if ech.add({j: 1}) is not None:
            kept.append(j)
    return kept
