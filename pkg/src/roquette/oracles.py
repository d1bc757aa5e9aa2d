"""Cross-checks that avoid the minimal-power-index code path.

* the abelian oracle counts elements by order: for abelian P only cyclic
  quotients have a nonzero edge, so a_m is the number of cyclic subgroups
  of order p^m;
* the product check compares l_n of a direct product with the product of
  the factors' l_n, all counted from the definition;
* rank consistency compares dimensions of invariant spaces of
  s -> s^(1+p^n) with the same dimensions predicted from the multiplicities
  and a brute-force orbit table for cyclic groups.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .class_functions import fn_space
from .decomposition import Decomposition, l_values_direct
from .errors import DivisibilityViolation, NotAbelian, PrimeMismatch
from .groups import GroupTable, direct_product, exponent, ilog


def abelian_oracle(G: GroupTable) -> Decomposition:
    if not G.is_abelian:
        raise NotAbelian("abelian oracle needs an abelian group")
    if G.order == 1:
        return Decomposition(G.p, 1, {})
    p = G.p
    counts = {}
    for o, c in zip(*np.unique(G.element_orders, return_counts=True)):
        if o == 1:
            continue
        m = ilog(int(o), p)
        unit = p ** (m - 1) * (p - 1)
        if c % unit:
            raise DivisibilityViolation(f"{c} elements of order {o} is not a multiple of {unit}")
        counts[m] = int(c) // unit
    return Decomposition(p, G.order, counts)


@dataclass(frozen=True)
class ProductReport:
    product_values: tuple[int, ...]
    factor_values: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.product_values == self.factor_values


def product_check(G: GroupTable, H: GroupTable, GH: GroupTable | None = None) -> ProductReport:
    """l_n(G x H) against l_n(G) * l_n(H) for n up to the exponent of G x H."""
    if G.p is not None and H.p is not None and G.p != H.p:
        raise PrimeMismatch(f"{G.p} != {H.p}")
    GH = direct_product(G, H) if GH is None else GH
    r = ilog(exponent(GH), GH.p) if GH.order > 1 else 0
    lg = l_values_direct(G, r) if G.order > 1 else (1,) * (r + 1)
    lh = l_values_direct(H, r) if H.order > 1 else (1,) * (r + 1)
    lgh = l_values_direct(GH, r) if GH.order > 1 else (1,)
    return ProductReport(tuple(lgh), tuple(a * b for a, b in zip(lg, lh)))


class OrbitCountTable:
    """O(m, n): number of orbits of x -> (1+p^n) x on Z/p^m, by enumeration."""

    def __init__(self, p: int, m_max: int, n_max: int):
        self.p = p
        self.m_max = m_max
        self.n_max = n_max
        self._table = {(m, n): self._count(p, m, n) for m in range(m_max + 1) for n in range(1, n_max + 1)}

    @staticmethod
    def _count(p, m, n):
        mod = p**m
        mult = (1 + p**n) % mod
        seen = bytearray(mod)
        orbits = 0
        for x in range(mod):
            if seen[x]:
                continue
            orbits += 1
            y = x
            while not seen[y]:
                seen[y] = 1
                y = y * mult % mod
        return orbits

    def __getitem__(self, key):
        return self._table[key]

    def closed_form(self, m, n) -> int:
        """p^min(m,n) + max(0, m-n) p^(n-1) (p-1); only trusted after comparison with the table."""
        p = self.p
        return p ** min(m, n) + max(0, m - n) * p ** (n - 1) * (p - 1)


@dataclass(frozen=True)
class RankReport:
    observed: tuple[int, ...]
    predicted: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.observed == self.predicted


def rank_consistency(G: GroupTable, d: Decomposition) -> RankReport:
    """Invariant-space dimension L_n(G) against 1 + sum_m a_m (O(m,n) - O(m-1,n)), n = 1..r."""
    if G.order == 1:
        return RankReport((), ())
    p = G.p
    r = ilog(exponent(G), p)
    m_max = max(d.multiplicities, default=0)
    table = OrbitCountTable(p, max(m_max, 1), r)
    observed, predicted = [], []
    for n in range(1, r + 1):
        observed.append(fn_space(G, n).orbit_count)
        predicted.append(1 + sum(a * (table[m, n] - table[m - 1, n]) for m, a in d.multiplicities.items()))
    return RankReport(tuple(observed), tuple(predicted))
