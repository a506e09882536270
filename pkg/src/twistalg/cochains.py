"""Cochains with roots-of-unity values over a finite base space.

A Cochain of degree k stores exponents e in Z_M indexed by a base point x
and k group elements; the value meant is exp(2*pi*i*e/M).  All cocycle and
coboundary questions are decided exactly, in exponent arithmetic.

Solvability over the full circle T is decided at the finite modulus M*|G|:
if df = u holds over T, then taking the product of df(s, t) = u(s, t) over
all t makes the f(t) and f(st) factors cancel, leaving f(s)^|G| equal to a
product of values in mu_M; hence f itself takes values in mu_{M*|G|}.  This
makes the continuum problem finite with a completeness guarantee.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import errors
from .groups import FiniteGroup, GroupHom, abelianization
from .linalg import ModSolver, kernel_mod, smith_normal_form


class Cochain:
    """Degree-n map X x G^n -> Z_M, normalized in degrees 1 and 2."""

    def __init__(self, group: FiniteGroup, degree: int, base_size: int, modulus: int, values):
        if degree not in (0, 1, 2, 3):
            raise errors.UnsupportedDegree(f"degree {degree} not supported")
        if base_size < 1 or modulus < 1:
            raise errors.InvalidCochain("base_size and modulus must be >= 1")
        n = group.order
        shape = (base_size,) + (n,) * degree
        values = np.asarray(values, dtype=np.int64).reshape(shape) % modulus
        if degree == 1 and values[:, 0].any():
            raise errors.InvalidCochain("degree-1 cochain not normalized: f(e) != 0")
        if degree == 2 and (values[:, 0, :].any() or values[:, :, 0].any()):
            raise errors.InvalidCochain("degree-2 cochain not normalized at the identity")
        self.group = group
        self.degree = degree
        self.base_size = base_size
        self.modulus = modulus
        self.values = values
        self.values.setflags(write=False)

    @classmethod
    def zeros(cls, group, degree, base_size=1, modulus=1):
        n = group.order
        return cls(group, degree, base_size, modulus, np.zeros((base_size,) + (n,) * degree))

    def _same_ambient(self, other: "Cochain"):
        if self.group is not other.group:
            raise errors.InvalidCochain("cochains live on different groups")
        if self.degree != other.degree or self.base_size != other.base_size:
            raise errors.InvalidCochain("cochain shapes do not match")

    def embed(self, m: int) -> "Cochain":
        """Reinterpret mu_M values inside mu_m (requires M | m)."""
        if m % self.modulus:
            raise errors.ModulusMismatch(f"{self.modulus} does not divide {m}")
        scale = m // self.modulus
        return Cochain(self.group, self.degree, self.base_size, m, self.values * scale)

    def mul(self, other: "Cochain") -> "Cochain":
        self._same_ambient(other)
        m = math.lcm(self.modulus, other.modulus)
        vals = self.values * (m // self.modulus) + other.values * (m // other.modulus)
        return Cochain(self.group, self.degree, self.base_size, m, vals)

    def inverse(self) -> "Cochain":
        return Cochain(self.group, self.degree, self.base_size, self.modulus, -self.values)

    def power(self, k: int) -> "Cochain":
        return Cochain(self.group, self.degree, self.base_size, self.modulus, k * self.values)

    def evaluate_at(self, x: int) -> "Cochain":
        return Cochain(self.group, self.degree, 1, self.modulus, self.values[x : x + 1])

    def restrict_base(self, xs) -> "Cochain":
        xs = list(xs)
        return Cochain(self.group, self.degree, len(xs), self.modulus, self.values[xs])

    def is_zero(self) -> bool:
        return not self.values.any()

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and self.group is other.group
            and self.degree == other.degree
            and self.base_size == other.base_size
            and self.modulus == other.modulus
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        return (
            f"Cochain(deg={self.degree}, |X|={self.base_size}, M={self.modulus}, "
            f"G=order {self.group.order})"
        )


def coboundary(c: Cochain) -> Cochain:
    """The group coboundary (trivial action), computed per base point."""
    G, n = c.group, c.group.order
    mul = G.mul
    if c.degree == 0:
        return Cochain(G, 1, c.base_size, c.modulus, np.zeros((c.base_size, n)))
    if c.degree == 1:
        f = c.values
        vals = f[:, :, None] + f[:, None, :] - f[:, mul]
        return Cochain(G, 2, c.base_size, c.modulus, vals)
    if c.degree == 2:
        u = c.values
        vals = u[:, None, :, :] - u[:, mul, :] + u[:, :, mul] - u[:, :, :, None]
        return Cochain(G, 3, c.base_size, c.modulus, vals)
    raise errors.UnsupportedDegree("coboundary is only defined for degrees 0, 1, 2")


def is_cocycle(u: Cochain) -> bool:
    """True iff the degree-2 cochain is normalized and has zero coboundary."""
    if u.degree != 2:
        raise errors.UnsupportedDegree("is_cocycle expects degree 2")
    if u.values[:, 0, :].any() or u.values[:, :, 0].any():
        return False
    return coboundary(u).is_zero()


def _delta1_solver(G: FiniteGroup) -> ModSolver:
    """Cached integer incidence matrix of d^1 on normalized cochains.

    Rows are pairs (s, t) with s, t != e; columns are f(s) for s != e.
    """
    if "delta1_solver" not in G._cache:
        n = G.order
        rows = (n - 1) * (n - 1)
        A = np.zeros((rows, n - 1), dtype=np.int64)
        r = 0
        for s in range(1, n):
            for t in range(1, n):
                A[r, s - 1] += 1
                A[r, t - 1] += 1
                st = G.op(s, t)
                if st != 0:
                    A[r, st - 1] -= 1
                r += 1
        G._cache["delta1_solver"] = ModSolver(A)
    return G._cache["delta1_solver"]


def _solve_coboundary_point(G: FiniteGroup, uvals, m: int):
    """One witness f with df = uvals (mod m) for a single base point, or None."""
    n = G.order
    if n == 1:
        return np.zeros(1, dtype=np.int64) if not uvals.any() else None
    b = uvals[1:, 1:].reshape(-1)
    x = _delta1_solver(G).solve(b, m)
    if x is None:
        return None
    f = np.zeros(n, dtype=np.int64)
    f[1:] = x
    return f


@dataclass
class PointwiseTriviality:
    witnesses: Optional[Cochain]  # degree 1 over the base, modulus M * |G|
    failing: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.failing


def is_coboundary_mod(u: Cochain, m: int) -> Optional[Cochain]:
    """A degree-1 witness f over Z_m with df = u embedded in Z_m, or None.

    The solve runs per base point; None is returned if any base point fails.
    """
    if u.degree != 2:
        raise errors.UnsupportedDegree("is_coboundary_mod expects degree 2")
    if m % u.modulus:
        raise errors.ModulusMismatch(f"{u.modulus} does not divide {m}")
    scale = m // u.modulus
    G, n = u.group, u.group.order
    out = np.zeros((u.base_size, n), dtype=np.int64)
    for x in range(u.base_size):
        f = _solve_coboundary_point(G, u.values[x] * scale, m)
        if f is None:
            return None
        out[x] = f
    w = Cochain(G, 1, u.base_size, m, out)
    assert coboundary(w) == u.embed(m), "solver returned a bad witness"
    return w


def is_coboundary_circle(u: Cochain) -> Optional[Cochain]:
    """Triviality over the circle group, decided at modulus M * |G|."""
    return is_coboundary_mod(u, u.modulus * u.group.order)


def pointwise_trivial(u: Cochain) -> PointwiseTriviality:
    """Per-base-point circle triviality, with the set of failing points."""
    if u.degree != 2:
        raise errors.UnsupportedDegree("pointwise_trivial expects degree 2")
    G, n = u.group, u.group.order
    m = u.modulus * n
    scale = m // u.modulus
    out = np.zeros((u.base_size, n), dtype=np.int64)
    failing = []
    for x in range(u.base_size):
        f = _solve_coboundary_point(G, u.values[x] * scale, m)
        if f is None:
            failing.append(x)
        else:
            out[x] = f
    if failing:
        return PointwiseTriviality(None, tuple(failing))
    w = Cochain(G, 1, u.base_size, m, out)
    assert coboundary(w) == u.embed(m)
    return PointwiseTriviality(w, ())


def inflate(u: Cochain, q: GroupHom) -> Cochain:
    """Pull a cochain on Q back along q: G -> Q (degrees 1 and 2)."""
    if u.group is not q.target:
        raise errors.InvalidCochain("inflate: cochain does not live on the hom target")
    img = q.images
    if u.degree == 1:
        vals = u.values[:, img]
    elif u.degree == 2:
        vals = u.values[:, img[:, None], img[None, :]]
    else:
        raise errors.UnsupportedDegree("inflate supports degrees 1 and 2")
    return Cochain(q.source, u.degree, u.base_size, u.modulus, vals)


# -- H^2 computation ------------------------------------------------------------
#
# Normalized 2-cochains are parametrized by their values u(g, s) on a small
# generating set via the cocycle identity u(gx, t) = u(x, t) + u(g, xt) - u(g, x)
# (induction over BFS words in the generators).  Because the coboundary of a
# 2-cochain is always a 3-cocycle, imposing the cocycle identities with first
# argument a generator forces all of them, so the reduced system is complete.
# This keeps every Smith normal form small.


class H2Modular:
    """H^2(G, Z_M): invariant factors, representative cocycles, coordinates."""

    def __init__(self, G: FiniteGroup, M: int):
        self.group = G
        self.modulus = M
        n = G.order
        if n == 1 or M == 1:
            self.factors: tuple[int, ...] = ()
            self.reps: list[Cochain] = []
            self._trivial = True
            return
        self._trivial = False
        gens = G.generating_set()
        k = len(gens)
        self._gens = gens
        C = k * (n - 1)
        mul = G.mul

        # BFS parents for word reconstruction
        parent = np.full(n, -1, dtype=np.int64)
        pgen = np.full(n, -1, dtype=np.int64)
        order = [0]
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        qi = 0
        while qi < len(order):
            x = order[qi]
            qi += 1
            for gi, g in enumerate(gens):
                y = G.op(g, x)
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    pgen[y] = gi
                    order.append(y)
        assert len(order) == n

        E = np.zeros((k, n, C), dtype=np.int64)
        for gi in range(k):
            for s in range(1, n):
                E[gi, s, gi * (n - 1) + (s - 1)] = 1
        W = np.zeros((n, n, C), dtype=np.int64)
        for x in order[1:]:
            xp, gi = int(parent[x]), int(pgen[x])
            W[x] = W[xp] + E[gi][mul[xp]] - E[gi][xp][None, :]
        self._W = W

        rows = []
        for gi, g in enumerate(gens):
            Rg = W - W[mul[g]] + W[g][mul] - W[g][:, None, :]
            rows.append(Rg.reshape(n * n, C))
        R = np.concatenate(rows, axis=0) % M
        R = np.unique(R, axis=0)
        R = R[np.any(R != 0, axis=1)]

        G_L, mvec, sfk = kernel_mod(R, M)
        self._G_L = G_L
        self._mvec = mvec
        self._Vi = np.asarray(sfk.Vi, dtype=object)

        A = np.zeros((C, n - 1), dtype=np.int64)
        for gi, g in enumerate(gens):
            for s in range(1, n):
                r = gi * (n - 1) + (s - 1)
                A[r, g - 1] += 1
                A[r, s - 1] += 1
                gs = G.op(g, s)
                if gs != 0:
                    A[r, gs - 1] -= 1
        S = np.concatenate([A, M * np.eye(C, dtype=np.int64)], axis=1)
        T = np.asarray(self._Vi @ np.asarray(S, dtype=object))
        assert all(int(T[j, c]) % int(mvec[j]) == 0 for j in range(C) for c in range(T.shape[1]))
        Sprime = np.array(
            [[int(T[j, c]) // int(mvec[j]) for c in range(T.shape[1])] for j in range(C)],
            dtype=object,
        )
        sf2 = smith_normal_form(Sprime, need_u=True, need_v=False)
        d2 = list(sf2.d)
        assert len(d2) == C and all(x > 0 for x in d2), "quotient by a full lattice"
        self._d2 = d2
        self._U2 = np.asarray(sf2.U, dtype=object)
        self._U2i = np.asarray(sf2.Ui, dtype=object)
        self._positions = [j for j in range(C) if d2[j] > 1]
        self.factors = tuple(d2[j] for j in self._positions)
        self.reps = []
        for j in self._positions:
            w = self._U2i[:, j]
            y = np.asarray(self._G_L @ w) % M
            vals = (np.tensordot(W, y.astype(np.int64), axes=([2], [0]))) % M
            rep = Cochain(G, 2, 1, M, vals[None, :, :])
            assert is_cocycle(rep)
            self.reps.append(rep)
        for j, rep in enumerate(self.reps):
            e = tuple(1 if i == j else 0 for i in range(len(self.reps)))
            assert self.decompose(rep) == e

    def decompose(self, u: Cochain) -> tuple[int, ...]:
        """Coordinates of [u] in the invariant-factor basis."""
        if u.group is not self.group or u.base_size != 1 or u.modulus != self.modulus:
            raise errors.InvalidCochain("decompose expects a single-point cochain mod M")
        if not is_cocycle(u):
            raise errors.NotACocycle("decompose expects a 2-cocycle")
        if self._trivial:
            return ()
        n = self.group.order
        y = u.values[0][self._gens][:, 1:].reshape(-1).astype(object)
        t = self._Vi @ y
        w = np.empty(len(t), dtype=object)
        for j in range(len(t)):
            if int(t[j]) % int(self._mvec[j]):
                raise errors.NotACocycle("values are not a cocycle mod M")
            w[j] = int(t[j]) // int(self._mvec[j])
        c = self._U2 @ w
        return tuple(int(c[j]) % int(self._d2[j]) for j in self._positions)

    def rep_for(self, coords) -> Cochain:
        """A representative cocycle with the given coordinates."""
        out = Cochain.zeros(self.group, 2, 1, self.modulus)
        for c, rep in zip(coords, self.reps):
            out = out.mul(rep.power(int(c)))
        return out

    @property
    def cardinality(self) -> int:
        return int(np.prod([1] + list(self.factors)))

    def random_cocycle(self, rng: np.random.Generator) -> Cochain:
        """A uniformly random element of Z^2(G, Z_M)."""
        if self._trivial:
            return Cochain.zeros(self.group, 2, 1, self.modulus)
        C = self._G_L.shape[1]
        w = rng.integers(0, self.modulus, size=C).astype(object)
        y = (np.asarray(self._G_L @ w) % self.modulus).astype(np.int64)
        vals = np.tensordot(self._W, y, axes=([2], [0])) % self.modulus
        return Cochain(self.group, 2, 1, self.modulus, vals[None, :, :])


def h2_mod(G: FiniteGroup, M: int) -> H2Modular:
    key = ("h2_mod", M)
    if key not in G._cache:
        G._cache[key] = H2Modular(G, M)
    return G._cache[key]


class H2Circle:
    """H^2(G, T), realized as H^2(G, Z_|G|) modulo the Bockstein classes
    delta(gamma) of the characters gamma of G_ab."""

    def __init__(self, G: FiniteGroup):
        self.group = G
        n = G.order
        self.modulus = max(n, 1)
        base = h2_mod(G, self.modulus)
        self.base = base
        J0 = len(base.factors)
        Gab, q = abelianization(G)
        self._deltas = []
        coords_cols = []
        if J0:
            exp = max(Gab.abelian.exponent, 1)
            for i in range(len(Gab.abelian.moduli)):
                chi = [0] * len(Gab.abelian.moduli)
                chi[i] = 1
                e = np.array(
                    [Gab.abelian.pairing(chi, Gab.vec(q(s))) for s in range(n)],
                    dtype=np.int64,
                ) * (self.modulus // exp)
                dv = e[:, None] + e[None, :] - e[G.mul]
                assert not (dv % self.modulus).any(), "Bockstein lift must be a 1-hom mod m"
                delta = Cochain(G, 2, 1, self.modulus, dv // self.modulus)
                assert is_cocycle(delta)
                self._deltas.append(delta)
                coords_cols.append(base.decompose(delta))
        if J0 == 0:
            self.factors: tuple[int, ...] = ()
            self.reps: list[Cochain] = []
            self._positions = []
            return
        Q = np.zeros((J0, J0 + len(coords_cols)), dtype=np.int64)
        for j, f in enumerate(base.factors):
            Q[j, j] = f
        for c, col in enumerate(coords_cols):
            Q[:, J0 + c] = col
        sf = smith_normal_form(Q, need_u=True, need_v=False)
        d3 = list(sf.d)
        assert len(d3) == J0 and all(x > 0 for x in d3)
        self._d3 = d3
        self._U3 = np.asarray(sf.U, dtype=object)
        self._U3i = np.asarray(sf.Ui, dtype=object)
        self._positions = [j for j in range(J0) if d3[j] > 1]
        self.factors = tuple(d3[j] for j in self._positions)
        self.reps = []
        for j in self._positions:
            w = self._U3i[:, j]
            rep = Cochain.zeros(G, 2, 1, self.modulus)
            for i, bi in enumerate(base.reps):
                rep = rep.mul(bi.power(int(w[i])))
            self.reps.append(rep)
        for j, rep in enumerate(self.reps):
            e = tuple(1 if i == j else 0 for i in range(len(self.reps)))
            assert self.class_of(rep) == e

    @property
    def cardinality(self) -> int:
        return int(np.prod([1] + list(self.factors)))

    def _project(self, base_coords) -> tuple[int, ...]:
        if not self._positions:
            return ()
        c = np.asarray(base_coords, dtype=object)
        w = self._U3 @ c
        return tuple(int(w[j]) % int(self._d3[j]) for j in self._positions)

    def class_of(self, u: Cochain) -> tuple[int, ...]:
        """Coordinates of [u] in H^2(G, T).

        Cochains with modulus dividing |G| go through the exact pipeline;
        other moduli are classified by a coboundary search over the classes.
        """
        if u.degree != 2 or u.base_size != 1 or u.group is not self.group:
            raise errors.InvalidCochain("class_of expects a one-point degree-2 cochain on G")
        if not self._positions:
            return ()
        if self.modulus % u.modulus == 0:
            return self._project(self.base.decompose(u.embed(self.modulus)))
        for coords in itertools.product(*(range(f) for f in self.factors)):
            if cohomologous_circle(u, self.rep_for(coords)):
                return coords
        raise errors.NoClassFound("cocycle does not match any circle class")

    def rep_for(self, coords) -> Cochain:
        out = Cochain.zeros(self.group, 2, 1, self.modulus)
        for c, rep in zip(coords, self.reps):
            out = out.mul(rep.power(int(c)))
        return out


def h2_circle(G: FiniteGroup) -> H2Circle:
    if "h2_circle" not in G._cache:
        G._cache["h2_circle"] = H2Circle(G)
    return G._cache["h2_circle"]


def cohomologous_circle(u: Cochain, v: Cochain) -> Optional[Cochain]:
    """A witness g with v = dg * u over T (decided at the finite modulus), or None."""
    diff = v.mul(u.inverse())
    return is_coboundary_circle(diff)


class CohClass:
    """A cohomology class: representative plus ambient data.

    Two classes compare equal iff their representatives are cohomologous,
    over Z_M when circle is False and over T when circle is True.
    """

    def __init__(self, rep: Cochain, circle: bool, coords=None):
        self.rep = rep
        self.circle = circle
        self.coords = coords

    def __eq__(self, other):
        if not isinstance(other, CohClass):
            return NotImplemented
        if self.rep.group is not other.rep.group or self.circle != other.circle:
            return False
        if self.rep.base_size != other.rep.base_size:
            return False
        if self.circle:
            return cohomologous_circle(other.rep, self.rep) is not None
        if self.rep.modulus != other.rep.modulus:
            return False
        return is_coboundary_mod(self.rep.mul(other.rep.inverse()), self.rep.modulus) is not None

    def __repr__(self):
        kind = "T" if self.circle else f"Z_{self.rep.modulus}"
        return f"CohClass({kind}, coords={self.coords})"


def random_cochain(rng: np.random.Generator, G: FiniteGroup, degree: int, base_size: int, modulus: int) -> Cochain:
    """A random normalized cochain (uniform over normalized cochains)."""
    n = G.order
    vals = rng.integers(0, modulus, size=(base_size,) + (n,) * degree)
    if degree >= 1:
        vals[:, 0] = 0
    if degree == 2:
        vals[:, :, 0] = 0
    return Cochain(G, degree, base_size, modulus, vals)


def random_cocycle_over_base(rng: np.random.Generator, G: FiniteGroup, base_size: int, modulus: int) -> Cochain:
    """A random element of Z^2(G, C(X, mu_M)) (independent per base point)."""
    h2 = h2_mod(G, modulus)
    vals = np.concatenate([h2.random_cocycle(rng).values for _ in range(base_size)], axis=0)
    return Cochain(G, 2, base_size, modulus, vals)
