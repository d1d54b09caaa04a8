# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; semantics must match _fallback.py exactly (same BFS and
odometer order, same splitmix64 counter stream), so either backend can serve
any call and reports stay byte-identical."""

from libc.stdlib cimport free, malloc

import numpy as np

BACKEND = "native"

OP_LOAD = 0
OP_MUL = 1
OP_OMEGA = 2
OP_OMEGA_M1 = 3

cdef unsigned long long _PHI = 0x9E3779B97F4A7C15
cdef unsigned long long _MIX1 = 0xBF58476D1CE4E5B9
cdef unsigned long long _MIX2 = 0x94D049BB133111EB


cdef inline unsigned long long _mix(unsigned long long z) nogil:
    z ^= z >> 30
    z *= _MIX1
    z ^= z >> 27
    z *= _MIX2
    return z ^ (z >> 31)


def closure(gens_in, long long cap):
    """Breadth-first closure of transformations under composition.

    Same contract as the fallback: returns
    (elems, parent, via, rmul, gen_index, overflow).
    """
    gens_np = np.ascontiguousarray(gens_in, dtype=np.int32)
    cdef int[:, ::1] gens = gens_np
    cdef int g = gens.shape[0]
    cdef int ns = gens.shape[1]
    cdef long long capacity = 256 if 256 > g else g
    if capacity > cap:
        capacity = cap
    rows_np = np.empty((capacity, ns), dtype=np.int32)
    parent_np = np.empty(capacity, dtype=np.int32)
    via_np = np.empty(capacity, dtype=np.int32)
    rmul_np = np.empty((capacity, g), dtype=np.int32)
    gen_index_np = np.empty(g, dtype=np.int32)
    cdef int[:, ::1] rows = rows_np
    cdef int[::1] parent = parent_np
    cdef int[::1] via = via_np
    cdef int[:, ::1] rmul = rmul_np
    scratch_np = np.empty(ns, dtype=np.int32)
    cdef int[::1] scratch = scratch_np
    index = {}
    cdef long long n = 0
    cdef long long qi = 0
    cdef int a, s
    cdef object j
    for a in range(g):
        key = gens_np[a].tobytes()
        j = index.get(key)
        if j is None:
            if n >= cap:
                return None, None, None, None, None, True
            for s in range(ns):
                rows[n, s] = gens[a, s]
            parent[n] = -1
            via[n] = a
            index[key] = n
            j = n
            n += 1
        gen_index_np[a] = j
    while qi < n:
        for a in range(g):
            for s in range(ns):
                scratch[s] = gens[a, rows[qi, s]]
            key = scratch_np.tobytes()
            j = index.get(key)
            if j is None:
                if n >= cap:
                    return None, None, None, None, None, True
                if n == capacity:
                    capacity = capacity * 2
                    if capacity > cap:
                        capacity = cap
                    rows_np = np.concatenate(
                        [rows_np, np.empty((capacity - n, ns), dtype=np.int32)]
                    )
                    parent_np = np.concatenate(
                        [parent_np, np.empty(capacity - n, dtype=np.int32)]
                    )
                    via_np = np.concatenate([via_np, np.empty(capacity - n, dtype=np.int32)])
                    rmul_np = np.concatenate(
                        [rmul_np, np.empty((capacity - n, g), dtype=np.int32)]
                    )
                    rows = rows_np
                    parent = parent_np
                    via = via_np
                    rmul = rmul_np
                for s in range(ns):
                    rows[n, s] = scratch[s]
                parent[n] = qi
                via[n] = a
                index[key] = n
                j = n
                n += 1
            rmul[qi, a] = j
        qi += 1
    return (
        rows_np[:n].copy(),
        parent_np[:n].copy(),
        via_np[:n].copy(),
        rmul_np[:n].copy(),
        gen_index_np,
        False,
    )


def mul_table(parent_in, via_in, rmul_in):
    parent_np = np.ascontiguousarray(parent_in, dtype=np.int32)
    via_np = np.ascontiguousarray(via_in, dtype=np.int32)
    rmul_np = np.ascontiguousarray(rmul_in, dtype=np.int32)
    cdef int[::1] parent = parent_np
    cdef int[::1] via = via_np
    cdef int[:, ::1] rmul = rmul_np
    cdef long long n = rmul.shape[0]
    table_np = np.empty((n, n), dtype=np.int32)
    cdef int[:, ::1] table = table_np
    cdef long long x, y
    cdef int p, a
    with nogil:
        for y in range(n):
            p = parent[y]
            a = via[y]
            if p < 0:
                for x in range(n):
                    table[x, y] = rmul[x, a]
            else:
                for x in range(n):
                    table[x, y] = rmul[table[x, p], a]
    return table_np


def exhaustive_search(
    prog_in,
    table_in,
    omega_in,
    omega_m1_in,
    dom_flat_in,
    dom_off_in,
    int lhs_reg,
    int rhs_reg,
    long long start,
    long long stop,
):
    prog_np = np.ascontiguousarray(prog_in, dtype=np.int32)
    table_np = np.ascontiguousarray(table_in, dtype=np.int32)
    omega_np = np.ascontiguousarray(omega_in, dtype=np.int32)
    omega_m1_np = np.ascontiguousarray(omega_m1_in, dtype=np.int32)
    dom_flat_np = np.ascontiguousarray(dom_flat_in, dtype=np.int32)
    dom_off_np = np.ascontiguousarray(dom_off_in, dtype=np.int32)
    cdef int[:, ::1] prog = prog_np
    cdef int[:, ::1] table = table_np
    cdef int[::1] omega = omega_np
    cdef int[::1] omega_m1 = omega_m1_np
    cdef int[::1] dom_flat = dom_flat_np
    cdef int[::1] dom_off = dom_off_np
    cdef int nvars = dom_off.shape[0] - 1
    cdef int nprog = prog.shape[0]
    cdef int *digits = <int *> malloc(nvars * sizeof(int))
    cdef int *sizes = <int *> malloc(nvars * sizeof(int))
    cdef int *cur = <int *> malloc(nvars * sizeof(int))
    cdef int *regs = <int *> malloc(nprog * sizeof(int))
    if digits == NULL or sizes == NULL or cur == NULL or regs == NULL:
        free(digits); free(sizes); free(cur); free(regs)
        raise MemoryError()
    cdef long long pos = start
    cdef long long checked = 0
    cdef long long rem = start
    cdef int v, k, op, a, b
    cdef bint found = 0
    for v in range(nvars - 1, -1, -1):
        sizes[v] = dom_off[v + 1] - dom_off[v]
        digits[v] = rem % sizes[v]
        rem //= sizes[v]
    for v in range(nvars):
        cur[v] = dom_flat[dom_off[v] + digits[v]]
    with nogil:
        while pos < stop:
            for k in range(nprog):
                op = prog[k, 0]
                a = prog[k, 1]
                b = prog[k, 2]
                if op == 0:
                    regs[k] = cur[a]
                elif op == 1:
                    regs[k] = table[regs[a], regs[b]]
                elif op == 2:
                    regs[k] = omega[regs[a]]
                else:
                    regs[k] = omega_m1[regs[a]]
            checked += 1
            if regs[lhs_reg] != regs[rhs_reg]:
                found = 1
                break
            pos += 1
            v = nvars - 1
            while v >= 0:
                digits[v] += 1
                if digits[v] < sizes[v]:
                    cur[v] = dom_flat[dom_off[v] + digits[v]]
                    break
                digits[v] = 0
                cur[v] = dom_flat[dom_off[v]]
                v -= 1
    free(digits)
    free(sizes)
    free(cur)
    free(regs)
    if found:
        return True, pos, checked
    return False, -1, checked


def sampled_search(
    prog_in,
    table_in,
    omega_in,
    omega_m1_in,
    dom_flat_in,
    dom_off_in,
    int lhs_reg,
    int rhs_reg,
    unsigned long long seed,
    long long start,
    long long count,
):
    prog_np = np.ascontiguousarray(prog_in, dtype=np.int32)
    table_np = np.ascontiguousarray(table_in, dtype=np.int32)
    omega_np = np.ascontiguousarray(omega_in, dtype=np.int32)
    omega_m1_np = np.ascontiguousarray(omega_m1_in, dtype=np.int32)
    dom_flat_np = np.ascontiguousarray(dom_flat_in, dtype=np.int32)
    dom_off_np = np.ascontiguousarray(dom_off_in, dtype=np.int32)
    cdef int[:, ::1] prog = prog_np
    cdef int[:, ::1] table = table_np
    cdef int[::1] omega = omega_np
    cdef int[::1] omega_m1 = omega_m1_np
    cdef int[::1] dom_flat = dom_flat_np
    cdef int[::1] dom_off = dom_off_np
    cdef int nvars = dom_off.shape[0] - 1
    cdef int nprog = prog.shape[0]
    cdef int *cur = <int *> malloc(nvars * sizeof(int))
    cdef int *regs = <int *> malloc(nprog * sizeof(int))
    if cur == NULL or regs == NULL:
        free(cur); free(regs)
        raise MemoryError()
    cdef long long j = start
    cdef long long end = start + count
    cdef long long checked = 0
    cdef long long found_at = -1
    cdef unsigned long long z, c
    cdef int v, k, op, a, b, size
    cdef bint found = 0
    with nogil:
        while j < end:
            for v in range(nvars):
                c = (<unsigned long long> j) * (<unsigned long long> nvars) + (
                    <unsigned long long> v
                )
                z = _mix(seed + (c + 1) * _PHI)
                size = dom_off[v + 1] - dom_off[v]
                cur[v] = dom_flat[dom_off[v] + <int> (z % (<unsigned long long> size))]
            for k in range(nprog):
                op = prog[k, 0]
                a = prog[k, 1]
                b = prog[k, 2]
                if op == 0:
                    regs[k] = cur[a]
                elif op == 1:
                    regs[k] = table[regs[a], regs[b]]
                elif op == 2:
                    regs[k] = omega[regs[a]]
                else:
                    regs[k] = omega_m1[regs[a]]
            checked += 1
            if regs[lhs_reg] != regs[rhs_reg]:
                found = 1
                found_at = j
                break
            j += 1
    free(cur)
    free(regs)
    if found:
        return True, found_at, checked
    return False, -1, checked
