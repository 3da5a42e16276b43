"""Pure-Python sparse exact elimination.

Rows are dicts mapping column index -> nonzero exact scalar.  Column priority
is given by ``rank``: a list with ``rank[col]`` the position of ``col`` in the
pivot search order (lower means earlier).  ``rank=None`` means natural order.
"""


def leading_column(row, rank=None):
    if rank is None:
        return min(row)
    return min(row, key=rank.__getitem__)


class Echelon:
    """Incrementally maintained reduced row-echelon basis of a row space."""

    def __init__(self, rank=None):
        self.rank = rank
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec):
        v = {c: x for c, x in vec.items() if x}
        rows = self.rows
        for p in [c for c in v if c in rows]:
            f = v[p]
            for c, x in rows[p].items():
                y = v.get(c, 0) - f * x
                if y:
                    v[c] = y
                else:
                    v.pop(c, None)
        return v

    def add(self, vec):
        """Insert ``vec``; return its pivot column, or None if dependent."""
        v = self.reduce(vec)
        if not v:
            return None
        p = leading_column(v, self.rank)
        inv = 1 / v[p]
        if inv != 1:
            v = {c: x * inv for c, x in v.items()}
        for row in self.rows.values():
            f = row.get(p)
            if f:
                for c, x in v.items():
                    y = row.get(c, 0) - f * x
                    if y:
                        row[c] = y
                    else:
                        del row[c]
        self.rows[p] = v
        return p

    def pivots(self):
        if self.rank is None:
            return sorted(self.rows)
        return sorted(self.rows, key=self.rank.__getitem__)


def echelonize(rows, rank=None):
    ech = Echelon(rank)
    for r in rows:
        ech.add(r)
    piv = ech.pivots()
    return [ech.rows[p] for p in piv], piv


def greedy_basis(base_rows, candidates, target, rank=None):
    """Scan ``candidates`` (column indices) in order, keep those whose unit
    vectors are independent modulo ``base_rows``; stop after ``target`` kept."""
    ech = Echelon(rank)
    for r in base_rows:
        ech.add(r)
    kept = []
    for j in candidates:
        if len(kept) == target:
            break
        if ech.add({j: 1}) is not None:
            kept.append(j)
    return kept
