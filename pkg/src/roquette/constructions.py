"""A one-line language for naming p-groups, and builders for each construction.

Grammar (whitespace is ignored outside paths)::

    spec := term { "x" term }
    term := "C(" q ")" | "EA(" p "," r ")" | "Ab(" p ",[" m {"," m} "])"
          | "ES+(" p ")" | "M(" p "," k ")" | "SD(" p "," m "," k "," u ")"
          | "perm:" path | "table:" path

A path runs up to the next whitespace. ``Ab(p,[m1,...])`` lists exponents, so
``Ab(3,[2,1])`` is C_9 x C_3.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
import re

from .errors import BadParameter, PrimeMismatch, SpecSyntaxError
from .groups import (
    DEFAULT_CAP,
    GroupTable,
    Permutation,
    close_generators,
    direct_product,
    group_from_table,
    prime_power,
)


def _is_prime(n):
    pp = prime_power(n)
    return pp is not None and pp[1] == 1


@dataclass(frozen=True)
class Cyclic:
    q: int


@dataclass(frozen=True)
class Abelian:
    p: int
    exponents: tuple[int, ...]


@dataclass(frozen=True)
class ElemAbelian:
    p: int
    r: int


@dataclass(frozen=True)
class ExtraspecialExpP:
    p: int


@dataclass(frozen=True)
class Modular:
    p: int
    k: int


@dataclass(frozen=True)
class SemidirectCyclic:
    p: int
    m: int
    k: int
    u: int


@dataclass(frozen=True)
class Product:
    left: object
    right: object


@dataclass(frozen=True)
class PermFile:
    path: str


@dataclass(frozen=True)
class TableFile:
    path: str


GroupSpecAst = Cyclic | Abelian | ElemAbelian | ExtraspecialExpP | Modular | SemidirectCyclic | Product | PermFile | TableFile


def modular_as_semidirect(node: Modular) -> SemidirectCyclic:
    p, k = node.p, node.k
    return SemidirectCyclic(p, k - 1, 1, 1 + p ** (k - 2))


def leaf_prime(node) -> int | None:
    """The prime of a leaf or product; None for C(1) and file leaves."""
    match node:
        case Cyclic(q):
            return prime_power(q)[0]
        case Abelian(p, _) | ElemAbelian(p, _) | ExtraspecialExpP(p) | Modular(p, _) | SemidirectCyclic(p, _, _, _):
            return p
        case Product(left, right):
            a, b = leaf_prime(left), leaf_prime(right)
            return a if a is not None else b
    return None


def validate(node) -> None:
    """Check the arithmetic side conditions of every node, raising BadParameter."""
    match node:
        case Cyclic(q):
            if prime_power(q) is None:
                raise BadParameter(f"C({q}): {q} is not a prime power")
        case Abelian(p, exps):
            if not _is_prime(p):
                raise BadParameter(f"Ab: {p} is not prime")
            if not exps or any(m < 1 for m in exps):
                raise BadParameter("Ab: exponents must be positive")
        case ElemAbelian(p, r):
            if not _is_prime(p):
                raise BadParameter(f"EA: {p} is not prime")
            if r < 0:
                raise BadParameter("EA: rank must be nonnegative")
        case ExtraspecialExpP(p):
            if not _is_prime(p) or p == 2:
                raise BadParameter(f"ES+: {p} must be an odd prime")
        case Modular(p, k):
            if not _is_prime(p):
                raise BadParameter(f"M: {p} is not prime")
            if k < 3:
                raise BadParameter("M(p,k) needs k >= 3")
            validate(modular_as_semidirect(node))
        case SemidirectCyclic(p, m, k, u):
            if not _is_prime(p):
                raise BadParameter(f"SD: {p} is not prime")
            if m < 1 or k < 0:
                raise BadParameter("SD: need m >= 1 and k >= 0")
            pm = p**m
            if u % p == 0:
                raise BadParameter(f"SD: {u} is not a unit mod {pm}")
            if pow(u, p**k, pm) != 1 % pm:
                raise BadParameter(f"SD: {u}^({p}^{k}) is not 1 mod {pm}")
            if k > 0 and u % pm == 1 % pm:
                raise BadParameter("SD: u = 1 gives a direct product; use 'x'")
        case Product(left, right):
            validate(left)
            validate(right)
            a, b = leaf_prime(left), leaf_prime(right)
            if a is not None and b is not None and a != b:
                raise BadParameter(f"product of a {a}-group and a {b}-group")
        case PermFile() | TableFile():
            pass
        case _:
            raise TypeError(f"not a spec node: {node!r}")


_TERM_ARITY = {"C": 1, "EA": 2, "ES+": 1, "M": 2, "SD": 4}


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s):
        self.skip()
        return self.text.startswith(s, self.pos)

    def expect(self, s):
        if not self.peek(s):
            raise SpecSyntaxError(f"expected {s!r}", self.pos)
        self.pos += len(s)

    def integer(self):
        self.skip()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            raise SpecSyntaxError("expected an integer", self.pos)
        self.pos = m.end()
        return int(m.group())

    def path(self):
        self.skip()
        m = re.compile(r"\S+").match(self.text, self.pos)
        if not m:
            raise SpecSyntaxError("expected a path", self.pos)
        self.pos = m.end()
        return m.group()

    def spec(self):
        node = self.term()
        while self.peek("x"):
            self.pos += 1
            node = Product(node, self.term())
        self.skip()
        if self.pos != len(self.text):
            raise SpecSyntaxError("unexpected trailing text", self.pos)
        return node

    def term(self):
        self.skip()
        start = self.pos
        for kw, cls in (("perm:", PermFile), ("table:", TableFile)):
            if self.text.startswith(kw, self.pos):
                self.pos += len(kw)
                return cls(self.path())
        m = re.compile(r"(ES\+|EA|Ab|SD|C|M)\s*\(").match(self.text, self.pos)
        if not m:
            raise SpecSyntaxError("expected a group term", start)
        name = m.group(1)
        self.pos = m.end()
        if name == "Ab":
            p = self.integer()
            self.expect(",")
            self.expect("[")
            exps = [self.integer()]
            while self.peek(","):
                self.pos += 1
                exps.append(self.integer())
            self.expect("]")
            self.expect(")")
            return Abelian(p, tuple(exps))
        args = [self.integer()]
        for _ in range(_TERM_ARITY[name] - 1):
            self.expect(",")
            args.append(self.integer())
        self.expect(")")
        return {"C": Cyclic, "EA": ElemAbelian, "ES+": ExtraspecialExpP, "M": Modular, "SD": SemidirectCyclic}[name](*args)


def parse_spec(text: str):
    """Parse and validate a group spec. Modular terms are expanded to SD."""
    node = _Parser(text).spec()
    validate(node)
    return _expand(node)


def _expand(node):
    if isinstance(node, Modular):
        return modular_as_semidirect(node)
    if isinstance(node, Product):
        return Product(_expand(node.left), _expand(node.right))
    return node


def render(node) -> str:
    match node:
        case Cyclic(q):
            return f"C({q})"
        case Abelian(p, exps):
            return f"Ab({p},[{','.join(map(str, exps))}])"
        case ElemAbelian(p, r):
            return f"EA({p},{r})"
        case ExtraspecialExpP(p):
            return f"ES+({p})"
        case Modular(p, k):
            return f"M({p},{k})"
        case SemidirectCyclic(p, m, k, u):
            return f"SD({p},{m},{k},{u})"
        case Product(left, right):
            return f"{render(left)} x {render(right)}"
        case PermFile(path):
            return f"perm:{path}"
        case TableFile(path):
            return f"table:{path}"
    raise TypeError(f"not a spec node: {node!r}")


# -- external file formats ----------------------------------------------------

_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(line: str) -> list[list[int]]:
    """``(1 2 3)(4 5)`` -> 0-based cycles. Commas are accepted as separators."""
    stripped = _CYCLE.sub("", line).strip()
    if stripped:
        raise ValueError(f"bad cycle notation: {line!r}")
    cycles = []
    for body in _CYCLE.findall(line):
        pts = [int(t) - 1 for t in body.replace(",", " ").split()]
        if any(t < 0 for t in pts):
            raise ValueError(f"points are 1-based: {line!r}")
        if pts:
            cycles.append(pts)
    return cycles


def read_perm_file(path) -> list[Permutation]:
    cycle_lists = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            cycle_lists.append(parse_cycles(line))
    degree = max((max(c) + 1 for cs in cycle_lists for c in cs), default=0)
    return [Permutation.from_cycles(cs, degree) for cs in cycle_lists]


def read_table_file(path) -> list[list[int]]:
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty table file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "order":
        raise ValueError("first line must be 'order N'")
    n = int(head[1])
    rows = [[int(t) for t in ln.split()] for ln in lines[1:]]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"expected {n} rows of {n} entries")
    return rows


def write_table_file(G: GroupTable, path) -> None:
    n = G.order
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"order {n}\n")
        for row in G.cayley:
            fh.write(" ".join(map(str, row.tolist())) + "\n")


# -- builders -----------------------------------------------------------------


def _cycle_perm(length, degree=None, shift=0):
    degree = length if degree is None else degree
    return Permutation.from_cycles([[shift + i for i in range(length)]] if length > 1 else [], degree)


def _disjoint_cycles(lengths):
    degree = sum(lengths)
    gens, shift = [], 0
    for n in lengths:
        gens.append(_cycle_perm(n, degree, shift))
        shift += n
    return gens, degree


def semidirect_generators(p, m, k, u) -> tuple[Permutation, Permutation]:
    """Generators a, b of <a, b | a^(p^m), b^(p^k), b a b^-1 = a^u>.

    a acts as x -> x+1 on Z/p^m; b acts as x -> u^-1 x there (products are
    left to right) and as a p^k-cycle on p^k extra points, which keeps the
    action faithful when u has smaller order than p^k.
    """
    pm, pk = p**m, p**k
    uinv = pow(u, -1, pm)
    degree = pm + pk
    a = [(x + 1) % pm for x in range(pm)] + list(range(pm, degree))
    b = [(uinv * x) % pm for x in range(pm)] + [pm + (j + 1) % pk for j in range(pk)]
    return Permutation(tuple(a)), Permutation(tuple(b))


def heisenberg_generators(p) -> list[Permutation]:
    """Right regular representation of the exponent-p extraspecial group of order p^3.

    Elements are triples with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
    """
    els = [(a, b, c) for a in range(p) for b in range(p) for c in range(p)]
    index = {e: i for i, e in enumerate(els)}

    def mult(x, y):
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)

    return [Permutation(tuple(index[mult(x, g)] for x in els)) for g in ((1, 0, 0), (0, 1, 0))]


def build(node, cap: int = DEFAULT_CAP) -> GroupTable:
    match node:
        case Cyclic(q):
            p = prime_power(q)[0]
            if q == 1:
                return close_generators([], None, cap=cap)
            return close_generators([_cycle_perm(q)], p, cap=cap)
        case Abelian(p, exps):
            gens, degree = _disjoint_cycles([p**m for m in exps])
            return close_generators(gens, p, degree=degree, cap=cap)
        case ElemAbelian(p, r):
            gens, degree = _disjoint_cycles([p] * r)
            return close_generators(gens, p, degree=degree, cap=cap)
        case ExtraspecialExpP(p):
            return close_generators(heisenberg_generators(p), p, cap=cap)
        case Modular():
            return build(modular_as_semidirect(node), cap)
        case SemidirectCyclic(p, m, k, u):
            return close_generators(list(semidirect_generators(p, m, k, u)), p, cap=cap)
        case Product(left, right):
            G, H = build(left, cap), build(right, cap)
            if G.p is not None and H.p is not None and G.p != H.p:
                raise PrimeMismatch(f"product of a {G.p}-group and a {H.p}-group")
            return direct_product(G, H, cap=cap)
        case PermFile(path):
            gens = read_perm_file(path)
            return close_generators(gens, None, cap=cap)
        case TableFile(path):
            return group_from_table(read_table_file(path), cap=cap)
    raise TypeError(f"not a spec node: {node!r}")


def group_from_spec(text: str, cap: int = DEFAULT_CAP) -> GroupTable:
    return build(parse_spec(text), cap)
