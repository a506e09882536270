"""Finite groups as index-based multiplication tables.

Elements are dense indices 0..n-1 and the identity is always index 0
(tables are normalized on load).  Abelian groups additionally carry a
componentwise Z_{d_1} x ... x Z_{d_r} coding of their elements, which is
what duals, pairings and cocycle values are expressed in.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import errors
from .linalg import smith_normal_form

_ORDER_CAP = [512]


def set_order_cap(n: int) -> None:
    _ORDER_CAP[0] = int(n)


def order_cap() -> int:
    return _ORDER_CAP[0]


@dataclass(frozen=True)
class AbelianGroup:
    """A componentwise coding Z_{d_1} x ... x Z_{d_r}; elements are exponent vectors.

    The moduli need not form a divisibility chain; ``invariant_factors``
    gives the canonical chain form of the isomorphism class.
    """

    moduli: tuple[int, ...]

    def __post_init__(self):
        if any(d <= 1 for d in self.moduli):
            raise errors.InvalidInvariant(f"moduli must be >= 2, got {self.moduli}")

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return int(np.prod([1] + list(self.moduli)))

    @property
    def exponent(self) -> int:
        return reduce(math.lcm, self.moduli, 1)

    def invariant_factors(self) -> tuple[int, ...]:
        primes = {}
        for d in self.moduli:
            dd = d
            p = 2
            while p * p <= dd:
                if dd % p == 0:
                    e = 0
                    while dd % p == 0:
                        dd //= p
                        e += 1
                    primes.setdefault(p, []).append(e)
                p += 1
            if dd > 1:
                primes.setdefault(dd, []).append(1)
        depth = max((len(v) for v in primes.values()), default=0)
        factors = []
        for k in range(depth):
            f = 1
            for p, exps in primes.items():
                exps_sorted = sorted(exps, reverse=True)
                if k < len(exps_sorted):
                    f *= p ** exps_sorted[k]
            factors.append(f)
        return tuple(sorted(factors))

    def index(self, vec) -> int:
        i = 0
        for v, d in zip(vec, self.moduli):
            i = i * d + (int(v) % d)
        return i

    def vector(self, i: int) -> tuple[int, ...]:
        out = []
        for d in reversed(self.moduli):
            out.append(i % d)
            i //= d
        return tuple(reversed(out))

    def all_vectors(self) -> np.ndarray:
        """All element vectors in index order, shape (order, rank)."""
        n, r = self.order, self.rank
        out = np.zeros((n, r), dtype=np.int64)
        idx = np.arange(n)
        for j in range(r - 1, -1, -1):
            d = self.moduli[j]
            out[:, j] = idx % d
            idx //= d
        return out

    def pairing(self, chi, a) -> int:
        """<chi, a> as an exponent in Z_{exponent}; bilinear and nondegenerate."""
        e = self.exponent
        total = 0
        for c, x, d in zip(chi, a, self.moduli):
            total += int(c) * int(x) * (e // d)
        return total % e

    def dual(self) -> "AbelianGroup":
        return AbelianGroup(self.moduli)


class FiniteGroup:
    """Finite group given by its multiplication table of element indices."""

    def __init__(self, mul, labels=None, abelian: AbelianGroup | None = None, name=None):
        mul = np.asarray(mul, dtype=np.int64)
        n = mul.shape[0]
        if n > order_cap():
            raise errors.OrderCapExceeded(f"order {n} exceeds cap {order_cap()}")
        if mul.shape != (n, n) or (n and (mul.min() < 0 or mul.max() >= n)):
            raise errors.TwistalgError("malformed multiplication table")
        self.order = int(n)
        self.mul = mul
        self.mul.setflags(write=False)
        self.labels = list(labels) if labels is not None else None
        self.abelian = abelian
        self.name = name
        self._validate()
        self.inv = self._inverse_table()
        self._cache: dict = {}

    # -- construction-time checks ------------------------------------------

    def _validate(self):
        mul, n = self.mul, self.order
        if n == 0:
            raise errors.NoIdentity("empty table")
        if not (np.array_equal(mul[0], np.arange(n)) and np.array_equal(mul[:, 0], np.arange(n))):
            raise errors.NoIdentity("index 0 is not a two-sided identity")
        for a in range(n):
            left = mul[mul[a], :]
            right = mul[a][mul]
            if not np.array_equal(left, right):
                b, c = np.argwhere(left != right)[0]
                raise errors.NotAssociative((a, b, c))

    def _inverse_table(self):
        n = self.order
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.mul == 0)
        inv[rows] = cols
        for a in range(n):
            if inv[a] < 0 or self.mul[inv[a], a] != 0:
                raise errors.NoInverse(a)
        inv.setflags(write=False)
        return inv

    # -- basics --------------------------------------------------------------

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def elements(self) -> range:
        return range(self.order)

    def label(self, a: int) -> str:
        if self.labels is not None:
            return self.labels[a]
        if self.abelian is not None:
            return str(self.abelian.vector(a))
        return str(a)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        tag = self.name or (f"abelian{list(self.abelian.moduli)}" if self.abelian else "table")
        return f"FiniteGroup(order={self.order}, {tag})"

    def vec(self, i: int) -> tuple[int, ...]:
        return self.abelian.vector(i)

    def idx(self, vec) -> int:
        return self.abelian.index(vec)

    # -- cached structure ------------------------------------------------------

    def is_abelian(self) -> bool:
        if "is_abelian" not in self._cache:
            self._cache["is_abelian"] = bool(np.array_equal(self.mul, self.mul.T))
        return self._cache["is_abelian"]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.op(x, a)
            k += 1
        return k

    def exponent(self) -> int:
        if "exponent" not in self._cache:
            self._cache["exponent"] = reduce(
                math.lcm, (self.element_order(a) for a in self.elements()), 1
            )
        return self._cache["exponent"]

    def centralizer(self, s: int) -> np.ndarray:
        return np.nonzero(self.mul[s, :] == self.mul[:, s])[0]

    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        if "classes" not in self._cache:
            seen = np.zeros(self.order, dtype=bool)
            classes = []
            for a in self.elements():
                if seen[a]:
                    continue
                orbit = {self.op(self.op(g, a), self.inverse(g)) for g in self.elements()}
                for x in orbit:
                    seen[x] = True
                classes.append(tuple(sorted(orbit)))
            self._cache["classes"] = classes
        return self._cache["classes"]

    def subgroup_generated(self, gens) -> tuple[int, ...]:
        seen = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.op(g, x)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return tuple(sorted(seen))

    def generating_set(self) -> list[int]:
        gens: list[int] = []
        reach = {0}
        for a in range(1, self.order):
            if a not in reach:
                gens.append(a)
                reach = set(self.subgroup_generated(gens))
        return gens

    def commutator_subgroup(self) -> tuple[int, ...]:
        if "commutators" not in self._cache:
            comms = {
                self.op(self.op(a, b), self.inverse(self.op(b, a)))
                for a in self.elements()
                for b in self.elements()
            }
            self._cache["commutators"] = self.subgroup_generated(sorted(comms))
        return self._cache["commutators"]

    def is_subgroup(self, elems) -> bool:
        s = set(int(x) for x in elems)
        if 0 not in s:
            return False
        return all(self.op(a, b) in s for a in s for b in s)

    def is_normal(self, elems) -> bool:
        s = set(int(x) for x in elems)
        return all(
            self.op(self.op(g, a), self.inverse(g)) in s for g in self.elements() for a in s
        )

    def is_central(self, a: int) -> bool:
        return bool(np.array_equal(self.mul[a, :], self.mul[:, a]))


class GroupHom:
    """A homomorphism as a per-element image table (verified on creation)."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images):
        self.source = source
        self.target = target
        self.images = np.asarray(images, dtype=np.int64)
        if self.images.shape != (source.order,):
            raise errors.InvalidHom("image table has wrong length")
        if self.images[0] != 0:
            raise errors.InvalidHom("identity is not mapped to identity")
        if self.images.size and (self.images.min() < 0 or self.images.max() >= target.order):
            raise errors.InvalidHom("image index out of range")
        lhs = self.images[source.mul]
        rhs = target.mul[np.ix_(self.images, self.images)]
        if not np.array_equal(lhs, rhs):
            a, b = np.argwhere(lhs != rhs)[0]
            raise errors.InvalidHom(f"h(xy) != h(x)h(y) at pair ({a}, {b})")
        self.images.setflags(write=False)

    def __call__(self, a: int) -> int:
        return int(self.images[a])

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other (other.source -> self.target)."""
        if other.target is not self.source:
            raise errors.InvalidHom("composition mismatch")
        return GroupHom(other.source, self.target, self.images[other.images])

    def kernel(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.nonzero(self.images == 0)[0])

    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(int(x) for x in self.images)))

    def is_injective(self) -> bool:
        return len(set(self.images.tolist())) == self.source.order

    def is_surjective(self) -> bool:
        return len(set(self.images.tolist())) == self.target.order


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, np.arange(G.order))


# -- factories ----------------------------------------------------------------


def make_abelian(invariants) -> FiniteGroup:
    """Componentwise-addition group on the given moduli, mixed-radix indexed."""
    invariants = [int(d) for d in invariants]
    if any(d <= 1 for d in invariants):
        raise errors.InvalidInvariant(f"entries must be >= 2, got {invariants}")
    ab = AbelianGroup(tuple(invariants))
    n, r = ab.order, ab.rank
    if n > order_cap():
        raise errors.OrderCapExceeded(f"order {n} exceeds cap {order_cap()}")
    vecs = ab.all_vectors()
    mul = np.zeros((n, n), dtype=np.int64)
    for j in range(r):
        d = invariants[j]
        radix = int(np.prod([1] + invariants[j + 1 :]))
        comp = (vecs[:, j][:, None] + vecs[:, j][None, :]) % d
        mul += comp * radix
    return FiniteGroup(mul, abelian=ab)


def make_table(mul, labels=None, name=None) -> FiniteGroup:
    """Validate an arbitrary table; relabels so the identity gets index 0."""
    mul = np.asarray(mul, dtype=np.int64)
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
        raise errors.TwistalgError("table must be square")
    n = mul.shape[0]
    if n == 0 or mul.min() < 0 or mul.max() >= n:
        raise errors.TwistalgError("table entries out of range")
    ident = [e for e in range(n) if np.array_equal(mul[e], np.arange(n)) and np.array_equal(mul[:, e], np.arange(n))]
    if not ident:
        raise errors.NoIdentity("no two-sided identity element")
    e = ident[0]
    if e != 0:
        perm = np.arange(n)
        perm[[0, e]] = perm[[e, 0]]
        inv_perm = perm  # the swap is an involution
        mul = inv_perm[mul[np.ix_(perm, perm)]]
        if labels is not None:
            labels = [labels[perm[i]] for i in range(n)]
    return FiniteGroup(mul, labels=labels, name=name)


@dataclass
class ProductGroup:
    group: FiniteGroup
    incl_left: GroupHom
    incl_right: GroupHom
    proj_left: GroupHom
    proj_right: GroupHom


def direct_product(G: FiniteGroup, H: FiniteGroup) -> ProductGroup:
    """G x H with element index |H| * i_G + i_H."""
    nG, nH = G.order, H.order
    if nG * nH > order_cap():
        raise errors.OrderCapExceeded(f"order {nG * nH} exceeds cap {order_cap()}")
    ab = None
    if G.abelian is not None and H.abelian is not None:
        ab = AbelianGroup(G.abelian.moduli + H.abelian.moduli)
    gpart = G.mul[:, None, :, None] * nH
    hpart = H.mul[None, :, None, :]
    mul = (gpart + hpart).reshape(nG * nH, nG * nH)
    P = FiniteGroup(mul, abelian=ab)
    idx = np.arange(nG * nH)
    incl_left = GroupHom(G, P, np.arange(nG) * nH)
    incl_right = GroupHom(H, P, np.arange(nH))
    proj_left = GroupHom(P, G, idx // nH)
    proj_right = GroupHom(P, H, idx % nH)
    return ProductGroup(P, incl_left, incl_right, proj_left, proj_right)


def subgroup(G: FiniteGroup, elems) -> tuple[FiniteGroup, GroupHom]:
    """The subgroup on the given elements, relabeled; returns (S, inclusion)."""
    elems = sorted(set(int(x) for x in elems))
    if not G.is_subgroup(elems):
        raise errors.NotSubgroup(f"{len(elems)} elements do not form a subgroup")
    pos = {x: i for i, x in enumerate(elems)}
    k = len(elems)
    mul = np.zeros((k, k), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            mul[i, j] = pos[G.op(a, b)]
    S = FiniteGroup(mul, labels=[G.label(a) for a in elems])
    incl = GroupHom(S, G, np.asarray(elems))
    return S, incl


def quotient(G: FiniteGroup, kernel) -> tuple[FiniteGroup, GroupHom]:
    """G / kernel with least-index coset representatives; returns (Q, hom)."""
    K = sorted(set(int(x) for x in kernel))
    if not G.is_subgroup(K):
        raise errors.NotSubgroup("kernel is not a subgroup")
    if not G.is_normal(K):
        raise errors.NotNormal("kernel is not normal")
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for a in G.elements():
        if coset_of[a] >= 0:
            continue
        members = sorted(G.op(a, k) for k in K)
        rep_index = len(reps)
        reps.append(members[0])
        for m in members:
            coset_of[m] = rep_index
    q = len(reps)
    mul = np.zeros((q, q), dtype=np.int64)
    for i, a in enumerate(reps):
        mul[i, :] = coset_of[G.mul[a, reps]]
    Q = FiniteGroup(mul)
    hom = GroupHom(G, Q, coset_of)
    return Q, hom


def _canonical_abelian_form(Q: FiniteGroup) -> tuple[FiniteGroup, GroupHom]:
    """Explicit isomorphism from an abelian table group to invariant-factor form."""
    assert Q.is_abelian()
    n = Q.order
    if n == 1:
        C = make_abelian([])
        return C, GroupHom(Q, C, np.zeros(1, dtype=np.int64))
    gens = Q.generating_set()
    k = len(gens)
    # BFS expressions of every element in terms of the generators
    expr = np.zeros((n, k), dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        x = frontier.pop(0)
        for gi, g in enumerate(gens):
            y = Q.op(g, x)
            if not seen[y]:
                seen[y] = True
                expr[y] = expr[x]
                expr[y, gi] += 1
                frontier.append(y)
    # relations from the Cayley graph: expr(x) + e_gi - expr(g x) = 0
    rels = []
    for x in range(n):
        for gi, g in enumerate(gens):
            r = expr[x].copy()
            r[gi] += 1
            r -= expr[Q.op(g, x)]
            rels.append(r)
    R = np.unique(np.array(rels, dtype=np.int64), axis=0)
    R = R[np.any(R != 0, axis=1)]
    sf = smith_normal_form(R, need_u=False, need_v=True)
    d = list(sf.d) + [0] * (k - len(sf.d))
    assert all(x > 0 for x in d), "relation lattice of a finite group has full rank"
    keep = [j for j in range(k) if d[j] > 1]
    C = make_abelian([d[j] for j in keep])
    V = np.asarray(sf.V, dtype=np.int64)
    coords = (expr @ V) % np.array(d, dtype=np.int64)
    images = np.array([C.idx(coords[x, keep]) for x in range(n)], dtype=np.int64)
    hom = GroupHom(Q, C, images)
    assert hom.is_injective() and hom.is_surjective()
    return C, hom


def abelianization(G: FiniteGroup) -> tuple[FiniteGroup, GroupHom]:
    """G_ab = G/[G,G] in componentwise form, with the quotient hom."""
    if "abelianization" in G._cache:
        return G._cache["abelianization"]
    if G.abelian is not None:
        result = (G, identity_hom(G))
    else:
        K = G.commutator_subgroup()
        Q, q1 = quotient(G, K)
        C, q2 = _canonical_abelian_form(Q)
        result = (C, q2.compose(q1))
    G._cache["abelianization"] = result
    return result


def dual_group(A: FiniteGroup | AbelianGroup) -> FiniteGroup:
    """The Pontryagin dual of a finite abelian group (same moduli).

    Characters are exponent vectors chi; the pairing with elements a is
    AbelianGroup.pairing(chi, a), an exponent in Z_{exp(A)}.
    """
    ab = A.abelian if isinstance(A, FiniteGroup) else A
    if ab is None:
        raise errors.TwistalgError("dual_group needs an abelian-coded group")
    if isinstance(A, FiniteGroup):
        if "dual" not in A._cache:
            A._cache["dual"] = make_abelian(ab.moduli)
        return A._cache["dual"]
    return make_abelian(ab.moduli)


def dual_hom(psi: GroupHom) -> GroupHom:
    """The dual of a hom between abelian-coded groups.

    Satisfies pairing(dual_hom(psi)(chi), a) = pairing(chi, psi(a)) in Q/Z,
    i.e. after dividing each side by the exponent of its group.
    """
    A, B = psi.source, psi.target
    if A.abelian is None or B.abelian is None:
        raise errors.TwistalgError("dual_hom needs abelian-coded groups")
    amod, bmod = A.abelian.moduli, B.abelian.moduli
    eb = B.abelian.exponent
    dual_B, dual_A = dual_group(B), dual_group(A)
    gens_A = []
    for i in range(len(amod)):
        v = [0] * len(amod)
        v[i] = 1
        gens_A.append(A.idx(v))
    images = np.zeros(dual_B.order, dtype=np.int64)
    for ci in range(dual_B.order):
        chi = dual_B.vec(ci)
        out = []
        for i, d in enumerate(amod):
            p = B.abelian.pairing(chi, B.vec(psi(gens_A[i])))
            num = d * p
            assert num % eb == 0, "character value has wrong order"
            out.append((num // eb) % d)
        images[ci] = dual_A.idx(out)
    return GroupHom(dual_B, dual_A, images)


def hom_from_matrix(A: FiniteGroup, B: FiniteGroup, cols) -> GroupHom:
    """Hom of abelian-coded groups from images of the standard generators."""
    amod = A.abelian.moduli
    bmod = B.abelian.moduli
    cols = np.asarray(cols, dtype=np.int64)  # shape (rank_B, rank_A)
    vecs = A.abelian.all_vectors()
    imgs = (vecs @ cols.T) % np.array(bmod, dtype=np.int64)
    images = np.array([B.idx(v) for v in imgs], dtype=np.int64)
    return GroupHom(A, B, images)


def hom_matrix(psi: GroupHom) -> np.ndarray:
    """Matrix of an abelian-coded hom: column i = psi(e_i) as a vector."""
    amod = psi.source.abelian.moduli
    cols = []
    for i in range(len(amod)):
        v = [0] * len(amod)
        v[i] = 1
        cols.append(psi.target.vec(psi(psi.source.idx(v))))
    return np.array(cols, dtype=np.int64).T


# -- named examples used throughout the test-suite -----------------------------


def cyclic(n: int) -> FiniteGroup:
    return make_abelian([n]) if n > 1 else make_abelian([])


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: (r, f) with f r f = r^{-1}."""
    size = 2 * n
    mul = np.zeros((size, size), dtype=np.int64)
    for a in range(size):
        for b in range(size):
            ra, fa = a % n, a // n
            rb, fb = b % n, b // n
            r = (ra + rb) % n if fa == 0 else (ra - rb) % n
            mul[a, b] = ((fa + fb) % 2) * n + r
    return make_table(mul, name=f"D{n}")


def heisenberg(p: int) -> FiniteGroup:
    """Finite Heisenberg group: upper unitriangular 3x3 matrices over Z_p."""
    size = p**3
    idx = lambda a, b, c: (a * p + b) * p + c
    mul = np.zeros((size, size), dtype=np.int64)
    for a1, b1, c1 in itertools.product(range(p), repeat=3):
        for a2, b2, c2 in itertools.product(range(p), repeat=3):
            mul[idx(a1, b1, c1), idx(a2, b2, c2)] = idx(
                (a1 + a2) % p, (b1 + b2) % p, (c1 + c2 + a1 * b2) % p
            )
    return make_table(mul, name=f"Heis{p}")
