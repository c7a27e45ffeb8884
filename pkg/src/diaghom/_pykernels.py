"""Pure-Python elimination kernels.

These mirror the compiled kernels in ``_ckernels.pyx`` entry for entry and
are used whenever the extension is unavailable, overflows, or the backend is
forced with ``DIAGHOM_BACKEND=python``.
"""

from heapq import heapify, heappop, heappush


def _build(nrows, ncols, entries, modulus):
    rows = [dict() for _ in range(nrows)]
    cols = [set() for _ in range(ncols)]
    for r, c, v in entries:
        if modulus:
            v %= modulus
        if not v:
            continue
        rows[r][c] = rows[r].get(c, 0) + v
        if modulus:
            rows[r][c] %= modulus
        if rows[r][c]:
            cols[c].add(r)
        else:
            del rows[r][c]
            cols[c].discard(r)
    return rows, cols


def eliminate(nrows, ncols, entries, modulus=0):
    """Markowitz-ordered sparse elimination.

    With ``modulus`` a prime p every nonzero entry is a pivot and the whole
    matrix is reduced mod p.  With ``modulus == 0`` the matrix is over the
    integers and only entries equal to +-1 are used as pivots, so each pivot
    step splits off an invariant factor 1 without changing the rest of the
    Smith form.

    Returns ``(npivots, leftover)`` where ``leftover`` lists the remaining
    nonzero ``(row, col, value)`` triples of the Schur complement.
    """
    rows, cols = _build(nrows, ncols, entries, modulus)
    heap = [(len(cols[c]), c) for c in range(ncols) if cols[c]]
    heapify(heap)
    npivots = 0
    while heap:
        count, c = heappop(heap)
        col = cols[c]
        if not col or count != len(col):
            continue
        pivot_row = -1
        best = 0
        for r in col:
            v = rows[r][c]
            if modulus or v == 1 or v == -1:
                length = len(rows[r])
                if pivot_row < 0 or length < best:
                    pivot_row, best = r, length
        if pivot_row < 0:
            continue
        prow = rows[pivot_row]
        pv = prow[c]
        inv = pow(pv, -1, modulus) if modulus else pv
        touched = set()
        for i in list(col):
            if i == pivot_row:
                continue
            ri = rows[i]
            f = ri.pop(c) * inv
            for j, w in prow.items():
                if j == c:
                    continue
                nv = ri.get(j, 0) - f * w
                if modulus:
                    nv %= modulus
                if nv:
                    if j not in ri:
                        cols[j].add(i)
                    ri[j] = nv
                elif j in ri:
                    del ri[j]
                    cols[j].discard(i)
                touched.add(j)
        for j in prow:
            if j != c:
                cols[j].discard(pivot_row)
                touched.add(j)
        rows[pivot_row] = {}
        col.clear()
        npivots += 1
        for j in touched:
            if cols[j]:
                heappush(heap, (len(cols[j]), j))
    leftover = [(r, c, v) for r, row in enumerate(rows) for c, v in row.items()]
    return npivots, leftover
