# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled elimination kernel; same contract as ``_pykernels.eliminate``."""

from libc.stdint cimport int64_t
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map
from libcpp.unordered_set cimport unordered_set
from libcpp.queue cimport priority_queue
from libcpp.pair cimport pair
from cython.operator cimport dereference as deref, preincrement as inc

import numpy as np

ctypedef int64_t i64
ctypedef unordered_map[i64, i64] Row
ctypedef unordered_set[i64] Col

cdef i64 LIMIT = (<i64>1) << 31


cdef inline i64 _mod(i64 a, i64 m) nogil:
    a %= m
    if a < 0:
        a += m
    return a


cdef i64 _inverse(i64 a, i64 m) nogil:
    cdef i64 t = 0, nt = 1, r = m, nr = a, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += m
    return t


def eliminate(i64 nrows, i64 ncols, rows_in, cols_in, vals_in, i64 modulus=0):
    """Markowitz-ordered sparse elimination on int64 entries.

    Raises OverflowError when an integer entry reaches 2**31 in magnitude;
    the caller then reruns the pure-Python kernel.
    """
    cdef const i64[::1] ri = np.ascontiguousarray(rows_in, dtype=np.int64)
    cdef const i64[::1] ci = np.ascontiguousarray(cols_in, dtype=np.int64)
    cdef const i64[::1] vi = np.ascontiguousarray(vals_in, dtype=np.int64)
    if modulus and modulus >= LIMIT:
        raise OverflowError("modulus too large for the compiled kernel")
    cdef vector[Row] rows = vector[Row](nrows)
    cdef vector[Col] cols = vector[Col](ncols)
    cdef Py_ssize_t t, nnz = ri.shape[0]
    cdef i64 r, c, v, nv, f, w, j, i, pv, inv, best, length, npivots = 0
    cdef bint overflow = False
    for t in range(nnz):
        r = ri[t]
        c = ci[t]
        v = vi[t]
        if modulus:
            v = _mod(v, modulus)
        elif v >= LIMIT or v <= -LIMIT:
            raise OverflowError("entry too large for the compiled kernel")
        if v == 0:
            continue
        nv = rows[r][c] + v
        if modulus:
            nv = _mod(nv, modulus)
        elif nv >= LIMIT or nv <= -LIMIT:
            raise OverflowError("entry too large for the compiled kernel")
        if nv:
            rows[r][c] = nv
            cols[c].insert(r)
        else:
            rows[r].erase(c)
            cols[c].erase(r)

    cdef priority_queue[pair[i64, i64]] heap
    for c in range(ncols):
        if cols[c].size():
            heap.push(pair[i64, i64](-<i64>cols[c].size(), c))

    cdef vector[i64] members
    cdef vector[i64] touched
    cdef vector[char] mark = vector[char](ncols, 0)
    cdef pair[i64, i64] top
    cdef i64 prow
    cdef Row.iterator it
    cdef Row.iterator found
    cdef Col.iterator cit

    with nogil:
        while not heap.empty():
            top = heap.top()
            heap.pop()
            c = top.second
            if cols[c].size() == 0 or <i64>cols[c].size() != -top.first:
                continue
            prow = -1
            best = 0
            cit = cols[c].begin()
            while cit != cols[c].end():
                r = deref(cit)
                v = rows[r][c]
                if modulus or v == 1 or v == -1:
                    length = rows[r].size()
                    if prow < 0 or length < best:
                        prow = r
                        best = length
                inc(cit)
            if prow < 0:
                continue
            pv = rows[prow][c]
            inv = _inverse(pv, modulus) if modulus else pv
            members.clear()
            cit = cols[c].begin()
            while cit != cols[c].end():
                if deref(cit) != prow:
                    members.push_back(deref(cit))
                inc(cit)
            touched.clear()
            for t in range(<Py_ssize_t>members.size()):
                i = members[t]
                f = rows[i][c]
                rows[i].erase(c)
                if modulus:
                    f = _mod(f * inv, modulus)
                else:
                    f = f * inv
                it = rows[prow].begin()
                while it != rows[prow].end():
                    j = deref(it).first
                    if j != c:
                        w = deref(it).second
                        found = rows[i].find(j)
                        if found == rows[i].end():
                            nv = -f * w
                        else:
                            nv = deref(found).second - f * w
                        if modulus:
                            nv = _mod(nv, modulus)
                        elif nv >= LIMIT or nv <= -LIMIT:
                            overflow = True
                        if nv:
                            if found == rows[i].end():
                                cols[j].insert(i)
                            rows[i][j] = nv
                        elif found != rows[i].end():
                            rows[i].erase(found)
                            cols[j].erase(i)
                        if not mark[j]:
                            mark[j] = 1
                            touched.push_back(j)
                    inc(it)
                if overflow:
                    break
            if overflow:
                break
            it = rows[prow].begin()
            while it != rows[prow].end():
                j = deref(it).first
                if j != c:
                    cols[j].erase(prow)
                    if not mark[j]:
                        mark[j] = 1
                        touched.push_back(j)
                inc(it)
            rows[prow].clear()
            cols[c].clear()
            npivots += 1
            for t in range(<Py_ssize_t>touched.size()):
                j = touched[t]
                mark[j] = 0
                if cols[j].size():
                    heap.push(pair[i64, i64](-<i64>cols[j].size(), j))

    if overflow:
        raise OverflowError("intermediate entry too large for the compiled kernel")
    leftover = []
    for r in range(nrows):
        it = rows[r].begin()
        while it != rows[r].end():
            leftover.append((r, deref(it).first, deref(it).second))
            inc(it)
    return int(npivots), leftover
