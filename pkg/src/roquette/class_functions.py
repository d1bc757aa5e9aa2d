"""Central functions with exact rational values, and bisets acting on them.

A (Q,P)-biset U sends a central function f on P to the central function on Q

    s  ->  1/|P| * sum of f(x) over pairs (u, x) in U x P with s.u = u.x

Bisets are stored with full action tables. The formula above is used for
every biset, including the elementary ones, so restriction, inflation and
friends are checked rather than assumed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    BadConfiguration,
    BadModulus,
    CyclicCenter,
    GroupMismatch,
    InvariantViolation,
    NotSubgroup,
)
from .groups import (
    GroupTable,
    Subgroup,
    center,
    centralizer,
    elementary_abelian_subgroups,
    exponent,
    normal_closure,
    omega1_center,
    power,
    power_many,
    prime_power,
    quotient,
)


# -- class functions ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ClassFunction:
    group: GroupTable
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != len(self.group.classes):
            raise ValueError(f"{len(vals)} values for {len(self.group.classes)} classes")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, G):
        return cls(G, (0,) * len(G.classes))

    @classmethod
    def indicator(cls, G, c):
        vals = [0] * len(G.classes)
        vals[c] = 1
        return cls(G, vals)

    @classmethod
    def basis(cls, G):
        return [cls.indicator(G, c) for c in range(len(G.classes))]

    def __call__(self, element: int) -> Fraction:
        return self.values[self.group.classes.class_of[element]]

    def __eq__(self, other):
        return isinstance(other, ClassFunction) and self.group is other.group and self.values == other.values

    __hash__ = None

    def _same(self, other):
        if other.group is not self.group:
            raise GroupMismatch("class functions on different groups")

    def __add__(self, other):
        self._same(other)
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        self._same(other)
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def scaled(self, c):
        return ClassFunction(self.group, [c * v for v in self.values])

    def max_abs(self) -> Fraction:
        return max((abs(v) for v in self.values), default=Fraction(0))


# -- exact linear algebra ---------------------------------------------------------


def exact_rank(rows) -> int:
    """Rank of a rational matrix by fraction-exact elimination.

    Rows are reduced one at a time against the pivots found so far and kept
    sparse, so permutation-like matrices stay cheap.
    """
    pivots = {}
    for row in rows:
        vec = {j: Fraction(x) for j, x in enumerate(row) if x}
        while vec:
            c = min(vec)
            if c not in pivots:
                lead = vec[c]
                pivots[c] = {j: x / lead for j, x in vec.items()}
                break
            factor = vec[c]
            for j, x in pivots[c].items():
                y = vec.get(j, 0) - factor * x
                if y:
                    vec[j] = y
                else:
                    vec.pop(j, None)
    return len(pivots)


def matmul(A, B):
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*B)] for row in A]


# -- bisets -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BisetTable:
    """A finite (Q,P)-biset: Q acts on the left, P on the right.

    ``left_action[q, x]`` is q.x and ``right_action[x, u]`` is x.u.
    """

    left_group: GroupTable
    right_group: GroupTable
    left_action: np.ndarray
    right_action: np.ndarray

    def __post_init__(self):
        Q, P = self.left_group, self.right_group
        L, R = np.asarray(self.left_action), np.asarray(self.right_action)
        n = L.shape[1]
        if L.shape != (Q.order, n) or R.shape != (n, P.order):
            raise ValueError("action tables have the wrong shape")
        L.setflags(write=False)
        R.setflags(write=False)
        object.__setattr__(self, "left_action", L)
        object.__setattr__(self, "right_action", R)
        pts = np.arange(n)
        if not (np.array_equal(L[0], pts) and np.array_equal(R[:, 0], pts)):
            raise ValueError("identity does not act trivially")
        for g in Q.generator_indices:
            # (q g).x == q.(g.x)
            if not np.array_equal(L[Q.cayley[:, g]], L[:, L[g]]):
                raise ValueError("left table is not an action")
        for g in P.generator_indices:
            # x.(u g) == (x.u).g
            if not np.array_equal(R[:, P.cayley[:, g]], R[R, g]):
                raise ValueError("right table is not an action")
        for q in Q.generator_indices:
            for u in P.generator_indices:
                if not np.array_equal(L[q][R[:, u]], R[L[q], u]):
                    raise ValueError("left and right actions do not commute")

    @property
    def points(self) -> int:
        return self.left_action.shape[1]

    @cached_property
    def counts(self) -> np.ndarray:
        """Integer matrix: entry (c, d) counts pairs (u, x), x in class d, with rep(c).u = u.x."""
        Q, P = self.left_group, self.right_group
        cp = P.classes
        out = np.zeros((len(Q.classes), len(cp)), dtype=np.int64)
        for i, s in enumerate(Q.classes.reps):
            hits = self.right_action == self.left_action[s][:, None]
            out[i] = np.bincount(cp.class_of, weights=hits.sum(axis=0), minlength=len(cp)).astype(np.int64)
        return out

    @cached_property
    def matrix(self) -> list[list[Fraction]]:
        """Matrix of the induced map on class functions, Q-classes by P-classes."""
        n = self.right_group.order
        return [[Fraction(int(c), n) for c in row] for row in self.counts]

    def value_at(self, s: int, f: ClassFunction) -> Fraction:
        """The double sum evaluated at an arbitrary element s of Q."""
        hits = self.right_action == self.left_action[s][:, None]
        xs = np.nonzero(hits)[1]
        return sum((f(int(x)) for x in xs), Fraction(0)) / self.right_group.order


def cf_apply(U: BisetTable, f: ClassFunction, check_central: bool = False) -> ClassFunction:
    if f.group is not U.right_group:
        raise GroupMismatch("function is not defined on the right group of the biset")
    vals = [sum((a * b for a, b in zip(row, f.values)), Fraction(0)) for row in U.matrix]
    result = ClassFunction(U.left_group, vals)
    if check_central:
        for s in range(U.left_group.order):
            if U.value_at(s, f) != result(s):
                raise InvariantViolation(f"induced function is not central at element {s}")
    return result


def identity_biset(P: GroupTable) -> BisetTable:
    C = P.cayley
    return BisetTable(P, P, C, C)


def restriction_biset(P: GroupTable, H: Subgroup) -> BisetTable:
    """Res^P_H: the set P with H on the left and P on the right."""
    if H.parent is not P:
        raise NotSubgroup("H is not a subgroup of P")
    Ht, emb = H.table
    C = P.cayley
    return BisetTable(Ht, P, C[emb], C)


def induction_biset(P: GroupTable, H: Subgroup) -> BisetTable:
    """Ind^P_H: the set P with P on the left and H on the right."""
    if H.parent is not P:
        raise NotSubgroup("H is not a subgroup of P")
    Ht, emb = H.table
    C = P.cayley
    return BisetTable(P, Ht, C, C[:, emb])


def inflation_biset(P: GroupTable, N: Subgroup) -> BisetTable:
    """Inf^P_(P/N): the set P/N with P on the left through the projection."""
    qr = quotient(P, N)
    Qc = qr.quotient.cayley
    return BisetTable(P, qr.quotient, Qc[qr.projection], Qc)


def deflation_biset(P: GroupTable, N: Subgroup) -> BisetTable:
    """Def^P_(P/N): the set P/N with P on the right through the projection."""
    qr = quotient(P, N)
    Qc = qr.quotient.cayley
    return BisetTable(qr.quotient, P, Qc, Qc[:, qr.projection])


def iso_biset(G: GroupTable, H: GroupTable, phi) -> BisetTable:
    """The (H,G)-biset H, with G acting on the right through the isomorphism phi."""
    phi = np.asarray(phi)
    if G.order != H.order or sorted(phi.tolist()) != list(range(H.order)):
        raise ValueError("phi is not a bijection")
    for g in G.generator_indices:
        if not np.array_equal(phi[G.cayley[:, g]], H.cayley[phi, phi[g]]):
            raise ValueError("phi is not a homomorphism")
    C = H.cayley
    return BisetTable(H, G, C, C[:, phi])


def compose_bisets(V: BisetTable, U: BisetTable) -> BisetTable:
    """V x_Q U: pairs (v, u) modulo (v.q, u) ~ (v, q.u)."""
    if V.right_group is not U.left_group:
        raise GroupMismatch("right group of V differs from left group of U")
    Q = U.left_group
    nv, nu = V.points, U.points
    npairs = nv * nu
    vs = np.repeat(np.arange(nv), nu)
    us = np.tile(np.arange(nu), nv)
    src, dst = [], []
    for q in Q.generator_indices:
        qinv = Q.inv(q)
        src.append(vs * nu + us)
        dst.append(V.right_action[vs, q] * nu + U.left_action[qinv, us])
    if src:
        src, dst = np.concatenate(src), np.concatenate(dst)
    else:
        src = dst = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(npairs, npairs))
    k, labels = connected_components(graph, directed=True, connection="weak")
    mins = np.full(k, npairs, dtype=np.int64)
    np.minimum.at(mins, labels, np.arange(npairs))
    order = np.argsort(mins)
    relabel = np.empty(k, dtype=np.int64)
    relabel[order] = np.arange(k)
    orbit = relabel[labels]
    rep = mins[order]
    rv, ru = rep // nu, rep % nu
    left = orbit[V.left_action[:, rv] * nu + ru[None, :]]
    right = orbit[(rv * nu)[:, None] + U.right_action[ru]]
    return BisetTable(V.left_group, U.right_group, left, right)


def random_elementary_chain(P: GroupTable, rng, length: int) -> list[BisetTable]:
    """A random sequence of elementary bisets U1, U2, ... with U1 starting at P.

    Each step is one of identity, restriction, restriction followed by
    induction, deflation, deflation followed by inflation, or transport by
    an inner automorphism. Consecutive bisets are composable.
    """
    chain = []
    X = P
    while len(chain) < length:
        kind = rng.choice(["id", "res", "resind", "def", "definf", "iso"])
        if kind == "id":
            chain.append(identity_biset(X))
        elif kind in ("res", "resind"):
            H = Subgroup.generated_by(X, [rng.randrange(X.order)])
            chain.append(restriction_biset(X, H))
            if kind == "resind":
                chain.append(induction_biset(X, H))
            else:
                X = chain[-1].left_group
        elif kind in ("def", "definf"):
            z = rng.choice(center(X).member_indices)
            N = normal_closure(X, [rng.choice([z, rng.randrange(X.order)])])
            chain.append(deflation_biset(X, N))
            if kind == "definf":
                chain.append(inflation_biset(X, N))
            else:
                X = chain[-1].left_group
        else:
            g = rng.randrange(X.order)
            C = X.cayley
            phi = C[C[X.inv(g)], g]
            chain.append(iso_biset(X, X, phi))
    return chain[:length]


# -- p-adic units -------------------------------------------------------------------


@dataclass(frozen=True)
class UnitAction:
    zeta: int
    modulus: int

    def __post_init__(self):
        if prime_power(self.modulus) is None:
            raise BadModulus(f"modulus {self.modulus} is not a prime power")
        if gcd(self.zeta, self.modulus) != 1:
            raise BadModulus(f"{self.zeta} is not a unit mod {self.modulus}")

    def __mul__(self, other: UnitAction) -> UnitAction:
        if self.modulus != other.modulus:
            raise BadModulus("units with different moduli")
        return UnitAction(self.zeta * other.zeta % self.modulus, self.modulus)


def zeta_apply(z: UnitAction, f: ClassFunction) -> ClassFunction:
    """f(s^zeta), with zeta reduced modulo a multiple of the exponent."""
    G = f.group
    if z.modulus % exponent(G):
        raise BadModulus(f"{z.modulus} is not a multiple of the exponent {exponent(G)}")
    reps = np.asarray(G.classes.reps)
    images = G.classes.class_of[power_many(G, reps, z.zeta % z.modulus)]
    return ClassFunction(G, [f.values[c] for c in images])


@dataclass(frozen=True)
class FnSpace:
    """Class functions invariant under s -> s^(1+p^n)."""

    group: GroupTable
    n: int
    sigma: tuple[int, ...]
    fixed_count: int
    orbit_count: int


def fn_space(G: GroupTable, n: int) -> FnSpace:
    """sigma maps class c to the class of rep(c)^(1+p^n).

    ``fixed_count`` is l_n. ``orbit_count`` is the dimension of the invariant
    space and is confirmed against the exact rank of (sigma* - 1). The two
    numbers differ in general (already for C_9 and n = 1).
    """
    if n < 1:
        raise ValueError("n must be positive")
    cl = G.classes
    k = len(cl)
    if G.order == 1:
        return FnSpace(G, n, (0,), 1, 1)
    reps = np.asarray(cl.reps)
    sigma = cl.class_of[power_many(G, reps, 1 + G.p**n)]
    fixed = int(np.sum(sigma == np.arange(k)))
    seen = np.zeros(k, dtype=bool)
    orbits = 0
    for c in range(k):
        if seen[c]:
            continue
        orbits += 1
        d = c
        while not seen[d]:
            seen[d] = True
            d = sigma[d]
    # (sigma* f)(c) = f(sigma(c)); kernel of sigma* - 1
    M = [[(1 if j == sigma[i] else 0) - (1 if i == j else 0) for j in range(k)] for i in range(k)]
    kernel_dim = k - exact_rank(M)
    if kernel_dim != orbits:
        raise InvariantViolation(f"orbit count {orbits} != kernel dimension {kernel_dim}")
    return FnSpace(G, n, tuple(int(s) for s in sigma), fixed, orbits)


# -- Möbius function on elementary abelian subgroups ---------------------------------


@dataclass(frozen=True)
class ElementaryAbelianLattice:
    subgroups: list[tuple[Subgroup, int]]
    mu: list[int]


def mobius_lattice(E) -> ElementaryAbelianLattice:
    """All subgroups Z of E with mu(1, Z) = (-1)^r p^(r(r-1)/2), checked by recursion."""
    subs = elementary_abelian_subgroups(E)
    p = subs[0][0].parent.p
    closed = [(-1) ** r * p ** (r * (r - 1) // 2) for _, r in subs]
    recursive = []
    for i, (Z, _) in enumerate(subs):
        below = [recursive[j] for j, (W, _) in enumerate(subs[:i]) if W < Z]
        recursive.append(1 if i == 0 else -sum(below))
    if closed != recursive:
        raise InvariantViolation("closed-form Möbius values disagree with the poset recursion")
    return ElementaryAbelianLattice(subs, closed)


def lemma_sums(lattice: ElementaryAbelianLattice) -> dict[int, Fraction]:
    """For each z in E: the sum of mu(1, Z)/|Z| over subgroups Z containing z."""
    top = lattice.subgroups[-1][0]
    out = {}
    for z in top.member_indices:
        out[z] = sum(
            (Fraction(m, Z.order) for (Z, _), m in zip(lattice.subgroups, lattice.mu) if z in Z),
            Fraction(0),
        )
    return out


# -- criterion checks -----------------------------------------------------------------


def vanishing_sum(G: GroupTable) -> Fraction:
    """Largest |entry| of sum over Z <= E of mu(1,Z) Inf Def f, over the class basis.

    E is the subgroup of central elements of order dividing p. The result is
    exactly zero whenever the center is not cyclic.
    """
    E = omega1_center(G)
    if E.order <= (G.p or 1):
        raise CyclicCenter("the center is cyclic")
    lattice = mobius_lattice(E)
    n = G.order
    # Inf Def for Z has matrix counts_inf @ counts_def / (|G/Z| |G|); scale everything by |G|^2
    scaled = np.zeros((len(G.classes),) * 2, dtype=object)
    for (Z, _), m in zip(lattice.subgroups, lattice.mu):
        inf, dfl = inflation_biset(G, Z), deflation_biset(G, Z)
        scaled += m * Z.order * (inf.counts.astype(object) @ dfl.counts.astype(object))
    # column j is S applied to the indicator of class j
    return Fraction(int(np.abs(scaled).max()), n * n)


@dataclass(frozen=True)
class InjectivityReport:
    rank: int
    class_count: int
    rows: int

    @property
    def injective(self) -> bool:
        return self.rank == self.class_count


def res_def_injectivity(G: GroupTable, E: Subgroup, Z: Subgroup) -> InjectivityReport:
    """Exact rank of Res^G_(C_G(E)) stacked on Def^G_(G/Z), as a map on class functions."""
    p = G.p
    if E.parent is not G or Z.parent is not G:
        raise BadConfiguration("subgroups of another group")
    if E.order != p * p or not E.is_normal():
        raise BadConfiguration("E must be normal of order p^2")
    if any(G.element_orders[x] != p for x in E.member_indices[1:]):
        raise BadConfiguration("E is not elementary abelian")
    a, b = E.generators
    if G.mul(a, b) != G.mul(b, a):
        raise BadConfiguration("E is not abelian")
    if Z.order != p or not Z <= E or not Z <= center(G):
        raise BadConfiguration("Z must be central of order p inside E")
    C = centralizer(G, E)
    rows = restriction_biset(G, C).matrix + deflation_biset(G, Z).matrix
    return InjectivityReport(exact_rank(rows), len(G.classes), len(rows))


def injectivity_configurations(G: GroupTable, limit: int | None = None) -> list[tuple[Subgroup, Subgroup]]:
    """Pairs (E, Z) with E normal elementary abelian of rank 2 and Z <= E central of order p."""
    p = G.p
    if G.order == 1:
        return []
    Zg = center(G)
    order_p = [x for x in range(1, G.order) if G.element_orders[x] == p]
    seen = set()
    out = []
    for i, x in enumerate(order_p):
        for y in order_p[i + 1:]:
            if G.mul(x, y) != G.mul(y, x):
                continue
            E = Subgroup.generated_by(G, [x, y])
            if E.order != p * p or E.member_indices in seen:
                continue
            seen.add(E.member_indices)
            if not E.is_normal():
                continue
            for z in E.member_indices[1:]:
                if z not in Zg:
                    continue
                Z = Subgroup.generated_by(G, [z])
                if min(Z.member_indices[1:]) != z:
                    continue
                out.append((E, Z))
                if limit is not None and len(out) >= limit:
                    return out
    return out
