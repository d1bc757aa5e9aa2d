"""Decomposition of an odd p-group into edges of cyclic groups.

For a class with representative y, the *minimal power index* is the least
p^n (n >= 1) with y^(1+p^n) conjugate to y. It is found by keeping
u = y^(p^n) through repeated p-th powers and testing y*u for membership in
the class of y. Counting classes by minimal index gives

    l_n = 1 + #{non-identity classes with minimal index <= p^n}
    a_n = (l_n - l_(n-1)) / (p^(n-1) (p-1))

where a_n is the multiplicity of the edge of the cyclic group of order p^n.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import json

import numpy as np

from .errors import DivisibilityViolation, NonTermination, NotAPGroup, OddPrimeRequired
from .groups import ClassData, GroupTable, exponent, ilog, power, power_many, prime_factors


@dataclass(frozen=True)
class LSequence:
    p: int | None
    values: tuple[int, ...]

    def __getitem__(self, n):
        """l_n for any n >= 0; values beyond the exponent repeat the class count."""
        if n < len(self.values):
            return self.values[n]
        return self.values[-1]

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class Decomposition:
    """Multiplicities a_m of the edges of C_(p^m); the trivial summand is implicit."""

    p: int | None
    order: int
    multiplicities: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(m): int(a) for m, a in sorted(self.multiplicities.items()) if a}
        object.__setattr__(self, "multiplicities", clean)

    def summands(self) -> list[tuple[int, int]]:
        """[(1, 1), (p^m, a_m), ...] with zero multiplicities omitted."""
        return [(1, 1)] + [(self.p**m, a) for m, a in self.multiplicities.items()]

    def class_count(self) -> int:
        p = self.p
        return 1 + sum(a * p ** (m - 1) * (p - 1) for m, a in self.multiplicities.items())


def _check_input(G: GroupTable):
    if len(prime_factors(G.order)) > 1:
        raise NotAPGroup("the group must be a p-group")
    if G.p == 2:
        raise OddPrimeRequired("the order must be odd")


def minimal_power_index(G: GroupTable, classes: ClassData, c: int) -> int:
    """Least p^n, n >= 1, with rep(c)^(1+p^n) in class c."""
    if c == 0:
        raise ValueError("the identity class has no minimal power index")
    p = G.p
    r = ilog(exponent(G), p)
    y = classes.reps[c]
    pn, n = 1, 0
    u = y
    while True:
        pn *= p
        n += 1
        if n > r:
            raise NonTermination(f"class {c}: no hit up to p^{r}; class data is corrupt")
        u = power(G, u, p)
        if classes.class_of[G.mul(y, u)] == c:
            return pn


def minimal_power_indices(G: GroupTable, classes: ClassData | None = None) -> np.ndarray:
    """n with minimal power index p^n for every class (entry 0, the identity class, is 0).

    Same loop as :func:`minimal_power_index`, run on all classes at once.
    """
    classes = G.classes if classes is None else classes
    k = len(classes)
    out = np.zeros(k, dtype=np.int64)
    if G.order == 1:
        return out
    p = G.p
    r = ilog(exponent(G), p)
    step = G.pth_power
    live = np.arange(1, k)
    y = np.asarray(classes.reps)[live]
    u = y
    n = 0
    while live.size:
        n += 1
        if n > r:
            raise NonTermination(f"{live.size} classes without a hit up to p^{r}")
        u = step[u]
        hit = classes.class_of[G.mul_many(y, u)] == live
        out[live[hit]] = n
        live, y, u = live[~hit], y[~hit], u[~hit]
    return out


def l_sequence(G: GroupTable) -> LSequence:
    """(l_0, ..., l_r) with p^r the exponent of G, by cumulative counting of minimal indices."""
    if G.order == 1:
        return LSequence(G.p, (1,))
    r = ilog(exponent(G), G.p)
    counts = np.bincount(minimal_power_indices(G)[1:], minlength=r + 1)
    return LSequence(G.p, tuple(int(v) for v in 1 + np.cumsum(counts)))


def l_values_direct(G: GroupTable, n_max: int | None = None) -> tuple[int, ...]:
    """l_0..l_n_max straight from the definition: one power-map scan per n."""
    if G.order == 1:
        return (1,) * ((n_max or 0) + 1)
    p = G.p
    if n_max is None:
        n_max = ilog(exponent(G), p)
    cl = G.classes
    reps = np.asarray(cl.reps)
    out = [1]
    for n in range(1, n_max + 1):
        images = power_many(G, reps, 1 + p**n)
        out.append(int(np.sum(cl.class_of[images] == np.arange(len(reps)))))
    return tuple(out)


def decompose(G: GroupTable) -> Decomposition:
    """Multiplicities of the cyclic edges of an odd p-group.

    Computed twice: from differences of the l-sequence and from the raw
    counts of minimal indices. The two must agree.
    """
    if G.order == 1:
        return Decomposition(G.p, 1, {})
    _check_input(G)
    p = G.p
    mins = minimal_power_indices(G)
    r = ilog(exponent(G), p)
    counts = np.bincount(mins[1:], minlength=r + 1)
    ls = tuple(int(v) for v in 1 + np.cumsum(counts))

    by_difference = {}
    by_count = {}
    for m in range(1, r + 1):
        unit = p ** (m - 1) * (p - 1)
        diff = ls[m] - ls[m - 1]
        if diff % unit:
            raise DivisibilityViolation(f"l_{m} - l_{m - 1} = {diff} not divisible by {unit}")
        by_difference[m] = diff // unit
        # counting form: c_n * p / ((p-1) * p^n)
        num, den = int(counts[m]) * p, (p - 1) * p**m
        if num % den:
            raise DivisibilityViolation(f"class count {counts[m]} at p^{m} not divisible")
        by_count[m] = num // den
    if by_difference != by_count:
        raise DivisibilityViolation(f"formulas disagree: {by_difference} vs {by_count}")
    d = Decomposition(p, G.order, by_difference)
    if d.class_count() != len(G.classes):
        raise DivisibilityViolation("class-count identity fails")
    return d


def render_gap(d: Decomposition) -> str:
    return "[ " + ", ".join(f"[ {q}, {a} ]" for q, a in d.summands()) + " ]"


def render_json(d: Decomposition) -> str:
    doc = {
        "p": d.p,
        "order": d.order,
        "summands": [{"q": q, "mult": a} for q, a in d.summands()],
    }
    return json.dumps(doc, separators=(",", ":"))


def naive_l_values(G: GroupTable) -> tuple[int, ...]:
    """Baseline for benchmarking: for each n, test every element separately.

    Powers are taken one element at a time and conjugacy is tested by
    scanning the member list of the class, with no minimal-index loop.
    """
    if G.order == 1:
        return (1,)
    p = G.p
    r = ilog(exponent(G), p)
    cl = G.classes
    members = [cl.members(c).tolist() for c in range(len(cl))]
    out = [1]
    for n in range(1, r + 1):
        good = set()
        for s in range(G.order):
            c = int(cl.class_of[s])
            if power(G, s, 1 + p**n) in members[c]:
                good.add(c)
        out.append(len(good))
    return tuple(out)


def decompose_naive(G: GroupTable) -> Decomposition:
    if G.order == 1:
        return Decomposition(G.p, 1, {})
    _check_input(G)
    p = G.p
    ls = naive_l_values(G)
    mult = {m: (ls[m] - ls[m - 1]) // (p ** (m - 1) * (p - 1)) for m in range(1, len(ls))}
    return Decomposition(p, G.order, mult)
