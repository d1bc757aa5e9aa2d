"""Concrete finite p-groups as enumerated permutation groups.

Every group is stored as the full list of its elements (rows of an integer
array, one permutation per row) plus a dictionary from permutation bytes to
element index. Element 0 is always the identity. The ordering of the other
elements is the breadth-first closure order from the generators, so every
downstream result is reproducible.

Products are read left to right: ``mul(i, j)`` is "apply i, then j", i.e.
``(x*y)[k] = y[x[k]]``. This is the convention of GAP.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
import math

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    BadParameter,
    DegreeMismatch,
    NotAPGroup,
    NotElementaryAbelian,
    NotNormal,
    NotSubgroup,
    PrimeMismatch,
    SizeLimit,
)

DEFAULT_CAP = 20000
MAX_EA_RANK = 4


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, k) with n == p**k, or None. 1 is reported as (None, 0)."""
    if n < 1:
        return None
    if n == 1:
        return (None, 0)
    ps = prime_factors(n)
    if len(ps) != 1:
        return None
    p = ps[0]
    return p, round(math.log(n, p))


def ilog(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``range(degree)``, stored by its images."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(i) for i in self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles, degree: int | None = None) -> Permutation:
        """Build from 0-based cycles, e.g. ``[[0, 1, 2], [3, 4]]``."""
        cycles = [list(c) for c in cycles]
        top = max((max(c) for c in cycles if c), default=-1) + 1
        degree = top if degree is None else degree
        if degree < top:
            raise ValueError("degree too small for the given cycles")
        img = list(range(degree))
        seen = set()
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                if a in seen:
                    raise ValueError(f"point {a + 1} appears twice")
                seen.add(a)
                img[a] = b
        return cls(tuple(img))

    def extended(self, degree: int, shift: int = 0) -> Permutation:
        """This permutation acting on points shift..shift+self.degree-1 of a larger set."""
        img = list(range(degree))
        for i, j in enumerate(self.images):
            img[i + shift] = j + shift
        return Permutation(tuple(img))

    def __mul__(self, other: Permutation) -> Permutation:
        if self.degree != other.degree:
            raise DegreeMismatch(f"{self.degree} != {other.degree}")
        return Permutation(tuple(other.images[k] for k in self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            c = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                c.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(c))
        return out

    def __str__(self):
        cs = self.cycles()
        if not cs:
            return "()"
        return "".join("(" + " ".join(str(k + 1) for k in c) + ")" for c in cs)


class _ElementView(Sequence):
    def __init__(self, group):
        self._group = group

    def __len__(self):
        return self._group.order

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[k] for k in range(*i.indices(len(self)))]
        if not -len(self) <= i < len(self):
            raise IndexError(i)
        return Permutation(tuple(self._group.perms[i].tolist()))


class GroupTable:
    """An enumerated finite p-group. Build with :func:`close_generators`."""

    def __init__(self, perms, p, generator_indices, tree_parent, tree_gen):
        self.perms = perms
        self.perms.setflags(write=False)
        self.p = p
        self.order = perms.shape[0]
        self.degree = perms.shape[1]
        self.generator_indices = tuple(generator_indices)
        # element i == element tree_parent[i] * generator tree_gen[i]
        self.tree_parent = tree_parent
        self.tree_gen = tree_gen
        self._index = {row.tobytes(): i for i, row in enumerate(perms)}

    def __repr__(self):
        return f"<GroupTable p={self.p} order={self.order} degree={self.degree}>"

    @property
    def elements(self) -> Sequence[Permutation]:
        return _ElementView(self)

    def index_of(self, perm) -> int:
        images = perm.images if isinstance(perm, Permutation) else perm
        row = np.asarray(images, dtype=self.perms.dtype)
        return self._index[row.tobytes()]

    def lookup_rows(self, rows) -> np.ndarray:
        rows = np.ascontiguousarray(rows, dtype=self.perms.dtype)
        index = self._index
        return np.fromiter((index[r.tobytes()] for r in rows), dtype=np.int64, count=len(rows))

    def mul(self, i: int, j: int) -> int:
        return self._index[self.perms[j][self.perms[i]].tobytes()]

    def mul_many(self, I, J) -> np.ndarray:
        """Elementwise products I[k]*J[k]; either side may be a scalar."""
        I = np.asarray(I)
        J = np.asarray(J)
        I, J = np.broadcast_arrays(I, J)
        if I.size == 0:
            return np.zeros(I.shape, dtype=np.int64)
        if self.order <= 2187 and "cayley" in self.__dict__:
            return self.cayley[I, J]
        rows = np.take_along_axis(self.perms[J.ravel()], self.perms[I.ravel()], axis=1)
        return self.lookup_rows(rows).reshape(I.shape)

    @cached_property
    def inverses(self) -> np.ndarray:
        return self.lookup_rows(np.argsort(self.perms, axis=1))

    def inv(self, i: int) -> int:
        return int(self.inverses[i])

    @cached_property
    def cayley(self) -> np.ndarray:
        """Full multiplication table; only sensible for small groups."""
        n = self.order
        I = np.repeat(np.arange(n), n)
        J = np.tile(np.arange(n), n)
        rows = np.take_along_axis(self.perms[J], self.perms[I], axis=1)
        return self.lookup_rows(rows).reshape(n, n)

    def right_mult_map(self, g: int) -> np.ndarray:
        """x -> x*g for every element x."""
        return self.lookup_rows(self.perms[g][self.perms])

    def conjugation_map(self, g: int) -> np.ndarray:
        """x -> g^-1 * x * g for every element x."""
        gp = self.perms[g]
        ginv = np.argsort(gp)
        return self.lookup_rows(gp[self.perms[:, ginv]])

    @cached_property
    def classes(self) -> ClassData:
        return _compute_classes(self)

    @cached_property
    def pth_power(self) -> np.ndarray:
        """x -> x^p for every element, as an index array."""
        if self.order == 1:
            return np.zeros(1, dtype=np.int64)
        return power_many(self, np.arange(self.order), self.p)

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        if self.order == 1:
            return orders
        step = self.pth_power
        x = np.arange(self.order)
        while True:
            live = x != 0
            if not live.any():
                return orders
            orders[live] *= self.p
            x = step[x]

    @cached_property
    def is_abelian(self) -> bool:
        gens = self.generator_indices
        return all(self.mul(a, b) == self.mul(b, a) for a, b in combinations(gens, 2))

    def image_under(self, target: GroupTable, generator_images) -> np.ndarray:
        """Images of all elements under the homomorphism fixed on the generators.

        The map is assumed to be a homomorphism; it is evaluated along the
        closure tree, so it is correct exactly when that assumption holds.
        """
        img = np.zeros(self.order, dtype=np.int64)
        gi = list(generator_images)
        for i in range(1, self.order):
            img[i] = target.mul(int(img[self.tree_parent[i]]), gi[self.tree_gen[i]])
        return img


def _dtype_for(degree):
    return np.int16 if degree < 2**15 else np.int32


def close_generators(gens, p=None, *, degree=None, cap=DEFAULT_CAP) -> GroupTable:
    """Enumerate the group generated by ``gens``.

    ``p`` may be omitted and is then inferred from the order. Raises
    NotAPGroup, DegreeMismatch or SizeLimit.
    """
    gens = [g if isinstance(g, Permutation) else Permutation(tuple(g)) for g in gens]
    degrees = {g.degree for g in gens}
    if len(degrees) > 1:
        raise DegreeMismatch(f"generators of different degrees {sorted(degrees)}")
    if gens:
        degree = gens[0].degree
    elif degree is None:
        degree = 0
    dt = _dtype_for(degree)
    garr = [np.asarray(g.images, dtype=dt) for g in gens]

    ident = np.arange(degree, dtype=dt)
    rows = [ident]
    index = {ident.tobytes(): 0}
    parent = [-1]
    via = [-1]
    frontier = [0]
    while frontier:
        F = np.stack([rows[i] for i in frontier])
        new = []
        for gi, g in enumerate(garr):
            for src, row in zip(frontier, g[F]):
                key = row.tobytes()
                if key in index:
                    continue
                index[key] = len(rows)
                new.append(len(rows))
                rows.append(row)
                parent.append(src)
                via.append(gi)
                if len(rows) > cap:
                    raise SizeLimit(f"closure exceeds {cap} elements")
        frontier = new

    order = len(rows)
    pp = prime_power(order)
    if pp is None:
        raise NotAPGroup(f"order {order} is not a prime power")
    q = pp[0]
    if q is not None:
        if p is not None and p != q:
            raise NotAPGroup(f"order {order} is not a power of {p}")
        p = q
    gen_idx = [index[g.tobytes()] for g in garr]
    return GroupTable(np.stack(rows), p, gen_idx, np.asarray(parent), np.asarray(via))


def group_from_table(table, p=None, cap=DEFAULT_CAP) -> GroupTable:
    """Realize a multiplication table (row i, column j = i*j) as a permutation group.

    Element i acts by right multiplication on the element set. The table is
    checked for identity at 0, being a latin square and associativity.
    """
    T = np.asarray(table, dtype=np.int64)
    n = T.shape[0]
    if T.shape != (n, n) or n == 0:
        raise ValueError("table must be square and nonempty")
    if n > cap:
        raise SizeLimit(f"table of order {n} exceeds {cap}")
    ar = np.arange(n)
    if not (np.array_equal(T[0], ar) and np.array_equal(T[:, 0], ar)):
        raise ValueError("element 0 is not the identity")
    srt = np.sort(T, axis=0)
    if not (np.all(srt == ar[:, None]) and np.all(np.sort(T, axis=1) == ar[None, :])):
        raise ValueError("table is not a latin square")
    for i in range(n):
        if not np.array_equal(T[T[:, i], :], T[:, T[i, :]]):
            raise ValueError("table is not associative")
    gens = []
    reached = {0}
    for x in range(n):
        if x in reached:
            continue
        gens.append(x)
        todo = list(reached)
        while todo:
            y = todo.pop()
            for g in gens:
                z = int(T[y, g])
                if z not in reached:
                    reached.add(z)
                    todo.append(z)
    perms = [Permutation(tuple(T[:, g].tolist())) for g in gens]
    return close_generators(perms, p, degree=n, cap=cap)


def power(G: GroupTable, i: int, e: int) -> int:
    """i**e by square-and-multiply."""
    if e < 0:
        i, e = G.inv(i), -e
    result = 0
    base = i
    while e:
        if e & 1:
            result = G.mul(result, base)
        e >>= 1
        if e:
            base = G.mul(base, base)
    return result


def power_many(G: GroupTable, I, e: int) -> np.ndarray:
    """Vectorized :func:`power` over an array of element indices."""
    I = np.asarray(I, dtype=np.int64)
    if e < 0:
        I, e = G.inverses[I], -e
    result = np.zeros_like(I)
    base = I
    while e:
        if e & 1:
            result = G.mul_many(result, base)
        e >>= 1
        if e:
            base = G.mul_many(base, base)
    return result


def element_order(G: GroupTable, i: int) -> int:
    o = 1
    x = i
    while x != 0:
        x = power(G, x, G.p)
        o *= G.p
    return o


def exponent(G: GroupTable) -> int:
    return int(G.element_orders.max())


# -- subgroups ---------------------------------------------------------------


def _closure_indices(G: GroupTable, gens) -> set[int]:
    members = {0}
    frontier = [0]
    gens = list(gens)
    while frontier and gens:
        prods = G.mul_many(np.repeat(frontier, len(gens)), np.tile(gens, len(frontier)))
        frontier = []
        for z in prods.tolist():
            if z not in members:
                members.add(z)
                frontier.append(z)
    return members


def _greedy_generators(G: GroupTable, members) -> tuple[list[int], set[int]]:
    gens = []
    reached = {0}
    for x in members:
        if x not in reached:
            gens.append(x)
            reached = _closure_indices(G, gens)
    return gens, reached


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: GroupTable
    member_indices: tuple[int, ...]

    def __init__(self, parent: GroupTable, members, check: bool = True):
        ms = tuple(sorted(int(m) for m in set(members)))
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "member_indices", ms)
        if check:
            if not ms or ms[0] != 0:
                raise NotSubgroup("subgroup must contain the identity")
            _, reached = _greedy_generators(parent, ms)
            if reached != set(ms):
                raise NotSubgroup("member set is not closed under multiplication")

    @classmethod
    def generated_by(cls, G: GroupTable, gens) -> Subgroup:
        return cls(G, _closure_indices(G, gens), check=False)

    @classmethod
    def whole(cls, G: GroupTable) -> Subgroup:
        return cls(G, range(G.order), check=False)

    @classmethod
    def trivial(cls, G: GroupTable) -> Subgroup:
        return cls(G, [0], check=False)

    @property
    def order(self) -> int:
        return len(self.member_indices)

    def __len__(self):
        return len(self.member_indices)

    def __contains__(self, i):
        return i in self._members

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.member_indices)

    @cached_property
    def generators(self) -> list[int]:
        return _greedy_generators(self.parent, self.member_indices)[0]

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.member_indices == other.member_indices
        )

    def __hash__(self):
        return hash((id(self.parent), self.member_indices))

    def __le__(self, other: Subgroup) -> bool:
        return self._members <= other._members

    def __lt__(self, other: Subgroup) -> bool:
        return self._members < other._members

    def is_normal(self) -> bool:
        G = self.parent
        ms = np.asarray(self.member_indices)
        for g in G.generator_indices:
            conj = G.mul_many(G.mul_many(G.inv(g), ms), g)
            if not all(int(c) in self._members for c in conj):
                return False
        return True

    @cached_property
    def table(self) -> tuple[GroupTable, np.ndarray]:
        """This subgroup as a GroupTable, plus the embedding of its indices into the parent."""
        G = self.parent
        H = close_generators([G.elements[g] for g in self.generators], G.p, degree=G.degree)
        return H, G.lookup_rows(H.perms)


def normal_closure(G: GroupTable, xs) -> Subgroup:
    conj = set()
    for x in xs:
        todo = [int(x)]
        while todo:
            y = todo.pop()
            if y in conj:
                continue
            conj.add(y)
            todo.extend(G.mul(G.mul(G.inv(g), y), g) for g in G.generator_indices)
    return Subgroup.generated_by(G, sorted(conj))


def center(G: GroupTable) -> Subgroup:
    everything = np.arange(G.order)
    mask = np.ones(G.order, dtype=bool)
    for g in G.generator_indices:
        mask &= G.mul_many(everything, g) == G.mul_many(g, everything)
    return Subgroup(G, np.flatnonzero(mask), check=False)


def centralizer(G: GroupTable, S: Subgroup) -> Subgroup:
    everything = np.arange(G.order)
    mask = np.ones(G.order, dtype=bool)
    for s in S.generators:
        mask &= G.mul_many(everything, s) == G.mul_many(s, everything)
    return Subgroup(G, np.flatnonzero(mask), check=False)


def omega1_center(G: GroupTable) -> Subgroup:
    Z = center(G)
    return Subgroup(G, [z for z in Z.member_indices if G.element_orders[z] <= G.p], check=False)


# -- quotients and products --------------------------------------------------


@dataclass(frozen=True)
class QuotientResult:
    quotient: GroupTable
    projection: np.ndarray


def quotient(G: GroupTable, N: Subgroup, cap=DEFAULT_CAP) -> QuotientResult:
    """G/N through the action of G on the right cosets N*x by right multiplication."""
    if N.parent is not G:
        raise NotSubgroup("subgroup belongs to another group")
    memo = G.__dict__.setdefault("_quotients", {})
    if N.member_indices in memo:
        return memo[N.member_indices]
    if not N.is_normal():
        raise NotNormal("subgroup is not normal")
    coset = np.full(G.order, -1, dtype=np.int64)
    reps = []
    ms = np.asarray(N.member_indices)
    for x in range(G.order):
        if coset[x] < 0:
            coset[G.mul_many(ms, x)] = len(reps)
            reps.append(x)
    reps = np.asarray(reps)
    gen_perms = [Permutation(tuple(coset[G.mul_many(reps, g)].tolist())) for g in G.generator_indices]
    Q = close_generators(gen_perms, G.p, degree=len(reps), cap=cap)
    projection = G.image_under(Q, Q.generator_indices)
    projection.setflags(write=False)
    memo[N.member_indices] = QuotientResult(Q, projection)
    return memo[N.member_indices]


def direct_product(G: GroupTable, H: GroupTable, cap=DEFAULT_CAP) -> GroupTable:
    """G x H acting on the disjoint union of their point sets; G's generators come first."""
    if G.p is not None and H.p is not None and G.p != H.p:
        raise PrimeMismatch(f"{G.p} != {H.p}")
    p = G.p if G.p is not None else H.p
    deg = G.degree + H.degree
    gens = [G.elements[g].extended(deg) for g in G.generator_indices]
    gens += [H.elements[h].extended(deg, G.degree) for h in H.generator_indices]
    return close_generators(gens, p, degree=deg, cap=cap)


# -- classes -----------------------------------------------------------------


@dataclass(frozen=True)
class ClassData:
    class_of: np.ndarray
    reps: tuple[int, ...]
    sizes: tuple[int, ...]

    def __len__(self):
        return len(self.reps)

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.class_of == c)


def _compute_classes(G: GroupTable) -> ClassData:
    n = G.order
    src, dst = [], []
    for g in G.generator_indices:
        src.append(np.arange(n))
        dst.append(G.conjugation_map(g))
    if src:
        src = np.concatenate(src)
        dst = np.concatenate(dst)
    else:
        src = dst = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    k, labels = connected_components(graph, directed=True, connection="weak")
    mins = np.full(k, n, dtype=np.int64)
    np.minimum.at(mins, labels, np.arange(n))
    order = np.argsort(mins)
    relabel = np.empty(k, dtype=np.int64)
    relabel[order] = np.arange(k)
    class_of = relabel[labels]
    class_of.setflags(write=False)
    sizes = np.bincount(class_of, minlength=k)
    return ClassData(class_of, tuple(int(m) for m in mins[order]), tuple(int(s) for s in sizes))


def conjugacy_classes(G: GroupTable) -> ClassData:
    return G.classes


# -- elementary abelian subgroups --------------------------------------------


def _check_elementary_abelian(E: Subgroup) -> list[int]:
    """Return a basis of E, raising NotElementaryAbelian."""
    G = E.parent
    p = G.p
    if E.order == 1:
        return []
    if any(G.element_orders[x] != p for x in E.member_indices[1:]):
        raise NotElementaryAbelian("E has elements of order other than p")
    gens = E.generators
    for a, b in combinations(gens, 2):
        if G.mul(a, b) != G.mul(b, a):
            raise NotElementaryAbelian("E is not abelian")
    return gens


def elementary_abelian_subgroups(E) -> list[tuple[Subgroup, int]]:
    """All subgroups of an elementary abelian group, each with its rank.

    Subgroups are enumerated as row-reduced echelon bases over the field with
    p elements, ordered by rank and then by echelon form.
    """
    if isinstance(E, GroupTable):
        E = Subgroup.whole(E)
    G = E.parent
    basis = _check_elementary_abelian(E)
    r = len(basis)
    if r > MAX_EA_RANK:
        raise BadParameter(f"rank {r} exceeds the supported maximum {MAX_EA_RANK}")
    p = G.p

    # element for every coordinate vector
    elem = {}
    for v in product(range(p), repeat=r):
        x = 0
        for b, c in zip(basis, v):
            if c:
                x = G.mul(x, power(G, b, c))
        elem[v] = x

    out = []
    for k in range(r + 1):
        for pivots in combinations(range(r), k):
            free = [(row, col) for row, pc in enumerate(pivots) for col in range(pc + 1, r) if col not in pivots]
            for vals in product(range(p), repeat=len(free)):
                rows = [[0] * r for _ in range(k)]
                for row, pc in enumerate(pivots):
                    rows[row][pc] = 1
                for (row, col), v in zip(free, vals):
                    rows[row][col] = v
                members = set()
                for coeffs in product(range(p), repeat=k):
                    vec = tuple(sum(c * rw[j] for c, rw in zip(coeffs, rows)) % p for j in range(r))
                    members.add(elem[vec])
                out.append((Subgroup(G, members, check=False), k))
    return out
