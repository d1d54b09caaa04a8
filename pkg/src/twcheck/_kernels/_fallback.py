"""Numpy kernels for the hot loops.

The compiled kernel in _native.pyx implements the same four entry points with
identical semantics (same enumeration order, same counter-based RNG), so the
two backends are interchangeable and their reports compare byte for byte.

Identity programs are flat instruction lists over registers; instruction k
writes register k:

    LOAD v        register <- current value of variable v
    MUL a b       register <- table[reg a, reg b]
    OMEGA a       register <- omega[reg a]
    OMEGA_M1 a    register <- omega_m1[reg a]
"""

from __future__ import annotations

import numpy as np

BACKEND = "fallback"

OP_LOAD = 0
OP_MUL = 1
OP_OMEGA = 2
OP_OMEGA_M1 = 3

_MASK = (1 << 64) - 1
_PHI = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# assignments evaluated per vectorized batch
_BLOCK_TARGET = 1 << 16


def closure(gens, cap: int):
    """Close a set of transformations under composition, breadth first.

    `gens` is (g, ns): g transformations of an ns-element state set. Products
    compose left to right: (t . g)(s) = g[t[s]]. Returns
    (elems, parent, via, rmul, gen_index, overflow) where parent/via give the
    BFS spanning tree (parent -1 for generator seeds), rmul[x, a] is the index
    of x . g_a, and gen_index maps each input generator to its element index.
    When the closure would exceed `cap` elements, overflow is True and the
    other slots are None.
    """
    gens = np.ascontiguousarray(gens, dtype=np.int32)
    g, ns = gens.shape
    index: dict[bytes, int] = {}
    rows: list[np.ndarray] = []
    parent: list[int] = []
    via: list[int] = []
    gen_index = np.empty(g, dtype=np.int32)
    for a in range(g):
        key = gens[a].tobytes()
        j = index.get(key)
        if j is None:
            if len(rows) >= cap:
                return None, None, None, None, None, True
            j = len(rows)
            index[key] = j
            rows.append(gens[a])
            parent.append(-1)
            via.append(a)
        gen_index[a] = j
    rmul: list[list[int]] = []
    qi = 0
    while qi < len(rows):
        t = rows[qi]
        rrow = [0] * g
        for a in range(g):
            u = gens[a][t]
            key = u.tobytes()
            j = index.get(key)
            if j is None:
                if len(rows) >= cap:
                    return None, None, None, None, None, True
                j = len(rows)
                index[key] = j
                rows.append(u)
                parent.append(qi)
                via.append(a)
            rrow[a] = j
        rmul.append(rrow)
        qi += 1
    return (
        np.array(rows, dtype=np.int32),
        np.array(parent, dtype=np.int32),
        np.array(via, dtype=np.int32),
        np.array(rmul, dtype=np.int32),
        gen_index,
        False,
    )


def mul_table(parent, via, rmul):
    """Full multiplication table from the closure's spanning tree.

    Column y is filled by one right-multiplication step from column parent[y];
    BFS order guarantees parent[y] < y, so a single left-to-right pass works.
    """
    parent = np.asarray(parent)
    via = np.asarray(via)
    rmul = np.asarray(rmul)
    n = rmul.shape[0]
    table = np.empty((n, n), dtype=np.int32)
    for y in range(n):
        p = parent[y]
        if p < 0:
            table[:, y] = rmul[:, via[y]]
        else:
            table[:, y] = rmul[table[:, p], via[y]]
    return table


def _domains(dom_flat, dom_off):
    nvars = len(dom_off) - 1
    return [np.asarray(dom_flat[dom_off[v] : dom_off[v + 1]]) for v in range(nvars)]


def _eval(prog, table, omega, omega_m1, values):
    """Run one program over scalar or vector variable values."""
    regs: list = [None] * len(prog)
    for k in range(len(prog)):
        op, a, b = int(prog[k][0]), int(prog[k][1]), int(prog[k][2])
        if op == OP_LOAD:
            regs[k] = values[a]
        elif op == OP_MUL:
            regs[k] = table[regs[a], regs[b]]
        elif op == OP_OMEGA:
            regs[k] = omega[regs[a]]
        else:
            regs[k] = omega_m1[regs[a]]
    return regs


def exhaustive_search(
    prog, table, omega, omega_m1, dom_flat, dom_off, lhs_reg, rhs_reg, start, stop
):
    """Scan odometer positions [start, stop); variable 0 is the slowest digit.

    Returns (found, position, checked): `position` is the absolute odometer
    position of the first violating assignment, `checked` the number of
    positions evaluated (including the violating one).
    """
    doms = _domains(dom_flat, dom_off)
    sizes = [len(d) for d in doms]
    nvars = len(sizes)
    block = sizes[-1]
    k = nvars - 1
    while k > 0 and block * sizes[k - 1] <= _BLOCK_TARGET:
        k -= 1
        block *= sizes[k]
    idx = np.arange(block)
    block_vals: dict[int, np.ndarray] = {}
    stride = 1
    for v in range(nvars - 1, k - 1, -1):
        block_vals[v] = doms[v][(idx // stride) % sizes[v]]
        stride *= sizes[v]
    checked = 0
    values: list = [None] * nvars
    for o in range(start // block, (stop + block - 1) // block):
        rem = o
        for v in range(k - 1, -1, -1):
            values[v] = int(doms[v][rem % sizes[v]])
            rem //= sizes[v]
        for v in range(k, nvars):
            values[v] = block_vals[v]
        regs = _eval(prog, table, omega, omega_m1, values)
        diff = np.not_equal(regs[lhs_reg], regs[rhs_reg])
        base = o * block
        lo = max(start, base)
        hi = min(stop, base + block)
        if lo > base or hi < base + block:
            mask = np.zeros(block, dtype=bool)
            mask[lo - base : hi - base] = True
            diff = diff & mask
        elif diff.shape == ():  # both sides scalar; cannot happen with >=1 block var
            diff = np.full(block, bool(diff))
        if diff.any():
            first = int(np.argmax(diff))
            checked += first - (lo - base) + 1
            return True, base + first, checked
        checked += hi - lo
    return False, -1, checked


def decode_position(position: int, dom_flat, dom_off):
    """Variable values at an absolute odometer position."""
    doms = _domains(dom_flat, dom_off)
    digits = []
    rem = position
    for d in reversed(doms):
        digits.append(int(d[rem % len(d)]))
        rem //= len(d)
    return list(reversed(digits))


def _mix_vec(z):
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_MIX1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def sample_digit(seed: int, counter: int, size: int) -> int:
    """Scalar reference for the counter-based RNG (splitmix64 finalizer)."""
    z = (seed + ((counter + 1) * _PHI)) & _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    z = z ^ (z >> 31)
    return z % size


def sample_values(seed: int, j: int, dom_flat, dom_off):
    """Variable values of sample j; matches both kernel backends exactly."""
    doms = _domains(dom_flat, dom_off)
    nvars = len(doms)
    return [
        int(doms[v][sample_digit(seed, j * nvars + v, len(doms[v]))]) for v in range(nvars)
    ]


def sampled_search(
    prog, table, omega, omega_m1, dom_flat, dom_off, lhs_reg, rhs_reg, seed, start, count
):
    """Evaluate samples [start, start+count); sample j draws variable v from
    the RNG stream at counter j*nvars+v, so results are independent of how the
    range is chunked across calls or threads.

    Returns (found, sample_index, checked).
    """
    doms = _domains(dom_flat, dom_off)
    nvars = len(doms)
    seed_u = np.uint64(seed & _MASK)
    phi = np.uint64(_PHI)
    nv = np.uint64(nvars)
    one = np.uint64(1)
    checked = 0
    values: list = [None] * nvars
    pos = start
    end = start + count
    while pos < end:
        batch = min(_BLOCK_TARGET, end - pos)
        counters = np.arange(pos, pos + batch, dtype=np.uint64)
        for v in range(nvars):
            c = counters * nv + np.uint64(v)
            z = _mix_vec(seed_u + (c + one) * phi)
            values[v] = doms[v][(z % np.uint64(len(doms[v]))).astype(np.int64)]
        regs = _eval(prog, table, omega, omega_m1, values)
        diff = np.not_equal(regs[lhs_reg], regs[rhs_reg])
        if diff.shape == ():
            diff = np.full(batch, bool(diff))
        if diff.any():
            first = int(np.argmax(diff))
            checked += first + 1
            return True, pos + first, checked
        checked += batch
        pos += batch
    return False, -1, checked
