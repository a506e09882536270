"""Exact integer linear algebra: Smith normal form and linear solves mod m.

Solving A x = b over Z/m for composite m cannot be done by naive Gaussian
elimination (Z/m is not a field), so everything here is routed through the
Smith normal form over the integers: D = U A V with U, V unimodular and D
diagonal with d_1 | d_2 | ...  The SNF runs on int64 numpy arrays with an
overflow sentinel and transparently falls back to exact object-dtype
arithmetic if entries ever grow past the sentinel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_INT64_CAP = 1 << 59


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and g = x*a + y*b."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = int(a), int(b)
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


def modinv(a: int, m: int) -> int:
    g, x, _ = xgcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} is not invertible mod {m}")
    return x % m


class _Overflow(Exception):
    pass


class _Worker:
    """Row/column reduction state; maintains U A V = D incrementally."""

    def __init__(self, A, need_u, need_v, exact):
        dtype = object if exact else np.int64
        self.exact = exact
        self.D = np.array(A, dtype=dtype)
        m, n = self.D.shape
        self.U = np.eye(m, dtype=dtype) if need_u else None
        self.Ui = np.eye(m, dtype=dtype) if need_u else None
        self.V = np.eye(n, dtype=dtype) if need_v else None
        self.Vi = np.eye(n, dtype=dtype) if need_v else None

    def _guard(self, *arrays):
        if self.exact:
            return
        for a in arrays:
            if a is not None and a.size and np.abs(a).max() >= _INT64_CAP:
                raise _Overflow

    def swap_rows(self, i, j):
        if i == j:
            return
        self.D[[i, j], :] = self.D[[j, i], :]
        if self.U is not None:
            self.U[[i, j], :] = self.U[[j, i], :]
            self.Ui[:, [i, j]] = self.Ui[:, [j, i]]

    def swap_cols(self, i, j):
        if i == j:
            return
        self.D[:, [i, j]] = self.D[:, [j, i]]
        if self.V is not None:
            self.V[:, [i, j]] = self.V[:, [j, i]]
            self.Vi[[i, j], :] = self.Vi[[j, i], :]

    def negate_row(self, i):
        self.D[i, :] = -self.D[i, :]
        if self.U is not None:
            self.U[i, :] = -self.U[i, :]
            self.Ui[:, i] = -self.Ui[:, i]

    def add_row(self, src, dst, q):
        # row_dst += q * row_src
        self.D[dst, :] += q * self.D[src, :]
        if self.U is not None:
            self.U[dst, :] += q * self.U[src, :]
            self.Ui[:, src] -= q * self.Ui[:, dst]
        self._guard(self.D, self.U, self.Ui)

    def add_col(self, src, dst, q):
        self.D[:, dst] += q * self.D[:, src]
        if self.V is not None:
            self.V[:, dst] += q * self.V[:, src]
            self.Vi[src, :] -= q * self.Vi[dst, :]
        self._guard(self.D, self.V, self.Vi)

    def combine_rows(self, i, j, a, b):
        # 2x2 unimodular update of rows i, j making D[i, pivot-col] = gcd.
        g, x, y = xgcd(a, b)
        p, q = a // g, b // g
        ri, rj = self.D[i, :].copy(), self.D[j, :].copy()
        self.D[i, :] = x * ri + y * rj
        self.D[j, :] = -q * ri + p * rj
        if self.U is not None:
            ui, uj = self.U[i, :].copy(), self.U[j, :].copy()
            self.U[i, :] = x * ui + y * uj
            self.U[j, :] = -q * ui + p * uj
            # inverse of [[x, y], [-q, p]] is [[p, -y], [q, x]]
            ci, cj = self.Ui[:, i].copy(), self.Ui[:, j].copy()
            self.Ui[:, i] = p * ci + q * cj
            self.Ui[:, j] = -y * ci + x * cj
        self._guard(self.D, self.U, self.Ui)

    def combine_cols(self, i, j, a, b):
        g, x, y = xgcd(a, b)
        p, q = a // g, b // g
        ci, cj = self.D[:, i].copy(), self.D[:, j].copy()
        self.D[:, i] = x * ci + y * cj
        self.D[:, j] = -q * ci + p * cj
        if self.V is not None:
            vi, vj = self.V[:, i].copy(), self.V[:, j].copy()
            self.V[:, i] = x * vi + y * vj
            self.V[:, j] = -q * vi + p * vj
            ri, rj = self.Vi[i, :].copy(), self.Vi[j, :].copy()
            self.Vi[i, :] = p * ri + q * rj
            self.Vi[j, :] = -y * ri + x * rj
        self._guard(self.D, self.V, self.Vi)

    def run(self):
        D = self.D
        m, n = D.shape
        r = min(m, n)
        k = 0
        while k < r:
            sub = D[k:, k:]
            nz = np.nonzero(sub)
            if len(nz[0]) == 0:
                break
            vals = np.abs(sub[nz])
            best = int(np.argmin(vals))
            self.swap_rows(k, k + int(nz[0][best]))
            self.swap_cols(k, k + int(nz[1][best]))
            while True:
                a = int(D[k, k])
                col = D[k + 1 :, k]
                rows_bad = np.nonzero(col % a)[0]
                if len(rows_bad):
                    i = k + 1 + int(rows_bad[0])
                    self.combine_rows(k, i, a, int(D[i, k]))
                    continue
                nzc = np.nonzero(col)[0]
                for i in nzc:
                    q = -int(col[int(i)]) // a
                    self.add_row(k, k + 1 + int(i), q)
                row = D[k, k + 1 :]
                cols_bad = np.nonzero(row % a)[0]
                if len(cols_bad):
                    j = k + 1 + int(cols_bad[0])
                    self.combine_cols(k, j, a, int(D[k, j]))
                    continue
                nzr = np.nonzero(row)[0]
                for j in nzr:
                    q = -int(row[int(j)]) // a
                    self.add_col(k, k + 1 + int(j), q)
                if not (D[k + 1 :, k].any() or D[k, k + 1 :].any()):
                    break
            if D[k, k] < 0:
                self.negate_row(k)
            k += 1
        rank = k
        # enforce the divisibility chain d_i | d_{i+1}
        changed = True
        while changed:
            changed = False
            for i in range(rank - 1):
                a, b = int(D[i, i]), int(D[i + 1, i + 1])
                if b % a:
                    changed = True
                    # fold d_{i+1} into column i and redo the 2x2 block
                    self.add_col(i + 1, i, 1)
                    self.combine_rows(i, i + 1, int(D[i, i]), int(D[i + 1, i]))
                    a = int(D[i, i])
                    q = -int(D[i + 1, i]) // a
                    if q:
                        self.add_row(i, i + 1, q)
                    q = -int(D[i, i + 1]) // a
                    if q:
                        self.add_col(i, i + 1, q)
                    if D[i, i] < 0:
                        self.negate_row(i)
                    if D[i + 1, i + 1] < 0:
                        self.negate_row(i + 1)
        return rank


@dataclass
class SmithForm:
    """D = U @ A @ V with U, V unimodular; d is the diagonal of D."""

    shape: tuple[int, int]
    d: tuple[int, ...]
    U: np.ndarray | None
    Ui: np.ndarray | None
    V: np.ndarray | None
    Vi: np.ndarray | None
    _mod_cache: dict = field(default_factory=dict, repr=False)

    def u_mod(self, m: int) -> np.ndarray:
        key = ("u", m)
        if key not in self._mod_cache:
            self._mod_cache[key] = np.asarray(self.U % m, dtype=np.int64)
        return self._mod_cache[key]

    def v_mod(self, m: int) -> np.ndarray:
        key = ("v", m)
        if key not in self._mod_cache:
            self._mod_cache[key] = np.asarray(self.V % m, dtype=np.int64)
        return self._mod_cache[key]


def smith_normal_form(A, need_u: bool = True, need_v: bool = True) -> SmithForm:
    """Smith normal form over Z with the requested transform matrices."""
    A = np.asarray(A)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    try:
        w = _Worker(A, need_u, need_v, exact=False)
        rank = w.run()
    except _Overflow:
        w = _Worker(A, need_u, need_v, exact=True)
        rank = w.run()
    d = tuple(int(w.D[i, i]) for i in range(min(A.shape)))
    assert all(x == 0 for x in d[rank:])
    return SmithForm(A.shape, d, w.U, w.Ui, w.V, w.Vi)


class ModSolver:
    """Repeated solves of A x = b (mod m) for a fixed integer matrix A."""

    def __init__(self, A):
        A = np.asarray(A, dtype=np.int64)
        self.rows, self.cols = A.shape
        self.sf = smith_normal_form(A, need_u=True, need_v=True)

    def solve(self, b, m: int):
        """Return one solution x of A x = b (mod m), or None."""
        b = np.asarray(b, dtype=np.int64) % m
        c = (self.sf.u_mod(m) @ b) % m
        d = self.sf.d
        g = np.zeros(self.cols, dtype=np.int64)
        for i in range(self.rows):
            ci = int(c[i])
            di = int(d[i]) if i < len(d) else 0
            if di == 0:
                if ci % m:
                    return None
                continue
            gg = math.gcd(di, m)
            if ci % gg:
                return None
            m2 = m // gg
            if m2 > 1:
                g[i] = (ci // gg) * modinv((di // gg) % m2, m2) % m2
        return (self.sf.v_mod(m) @ g) % m


def kernel_mod(A, m: int) -> tuple[np.ndarray, np.ndarray, SmithForm]:
    """Generators of {x : A x = 0 (mod m)} as a lattice containing m Z^n.

    Returns (G_L, mvec, sf) where the columns of G_L = V @ diag(mvec)
    generate the kernel lattice L (so that L / m Z^n is the kernel of A
    over Z/m), mvec[j] = m / gcd(d_j, m), and sf is the Smith form of A.
    """
    A = np.asarray(A)
    sf = smith_normal_form(A, need_u=False, need_v=True)
    n = A.shape[1]
    d = sf.d
    mvec = np.array(
        [m // math.gcd(int(d[j]) if j < len(d) else 0, m) for j in range(n)],
        dtype=object,
    )
    G_L = np.asarray(sf.V, dtype=object) * mvec[None, :]
    return G_L, mvec, sf
