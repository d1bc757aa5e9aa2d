import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import brute
from roquette.constructions import heisenberg_generators, write_table_file, read_table_file
from roquette.errors import (
    DegreeMismatch,
    NotAPGroup,
    NotElementaryAbelian,
    NotNormal,
    NotSubgroup,
    PrimeMismatch,
    SizeLimit,
)
from roquette.groups import (
    Permutation,
    Subgroup,
    center,
    centralizer,
    close_generators,
    conjugacy_classes,
    direct_product,
    element_order,
    elementary_abelian_subgroups,
    exponent,
    group_from_table,
    omega1_center,
    power,
    quotient,
)

SMALLISH = ["C(9)", "EA(3,3)", "ES+(3)", "M(3,3)", "SD(3,3,1,10)", "ES+(3) x C(3)", "M(5,3)", "Ab(3,[2,1])"]


def as_tuples(G):
    return {tuple(int(v) for v in row) for row in G.perms}


# -- Permutation ------------------------------------------------------------------


def test_permutation_cycles_roundtrip():
    x = Permutation.from_cycles([[0, 1, 2], [3, 4, 5]])
    assert str(x) == "(1 2 3)(4 5 6)"
    assert x.images == (1, 2, 0, 4, 5, 3)
    assert str(Permutation.identity(4)) == "()"


def test_permutation_product_is_left_to_right():
    a = Permutation.from_cycles([[0, 1]], 3)
    b = Permutation.from_cycles([[1, 2]], 3)
    # apply a then b: 0 -> 1 -> 2
    assert (a * b).images[0] == 2


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


# -- close_generators ----------------------------------------------------------------


def test_trivial_closure():
    G = close_generators([], 3)
    assert G.order == 1 and G.p == 3


def test_nine_cycle():
    G = close_generators([Permutation.from_cycles([list(range(9))])], 3)
    assert G.order == 9
    assert exponent(G) == 9


def test_extraspecial_closure_matches_brute_force():
    gens = heisenberg_generators(3)
    G = close_generators(gens, 3)
    assert G.order == 27
    assert as_tuples(G) == brute.closure([g.images for g in gens], 27)


def test_identity_first_and_elements_distinct(group):
    for spec in SMALLISH:
        G = group(spec)
        assert G.elements[0] == Permutation.identity(G.degree)
        assert len(as_tuples(G)) == G.order
        for i in range(0, G.order, max(1, G.order // 10)):
            assert G.index_of(G.elements[i]) == i


def test_every_element_reached_from_generators(group):
    G = group("SD(3,3,1,10)")
    gens = [G.elements[g].images for g in G.generator_indices]
    assert as_tuples(G) == brute.closure(gens, G.degree)


def test_closure_errors():
    with pytest.raises(DegreeMismatch):
        close_generators([Permutation.identity(3), Permutation.identity(4)], 3)
    s3 = [Permutation.from_cycles([[0, 1, 2]]), Permutation.from_cycles([[0, 1]], 3)]
    with pytest.raises(NotAPGroup):
        close_generators(s3)
    with pytest.raises(NotAPGroup):
        close_generators([Permutation.from_cycles([[0, 1, 2]])], 5)
    with pytest.raises(SizeLimit):
        close_generators([Permutation.from_cycles([list(range(27))])], 3, cap=20)


def test_p_inferred():
    G = close_generators([Permutation.from_cycles([[0, 1, 2, 3, 4]])])
    assert G.p == 5


# -- classes ---------------------------------------------------------------------


def test_abelian_classes_are_singletons(group):
    cl = conjugacy_classes(group("Ab(3,[2,1])"))
    assert len(cl) == 27 and set(cl.sizes) == {1}


def test_extraspecial_classes(group):
    cl = conjugacy_classes(group("ES+(3)"))
    assert sorted(cl.sizes) == [1, 1, 1, 3, 3, 3, 3, 3, 3, 3, 3]


def test_semidirect_class_count(group):
    assert len(group("SD(3,3,1,10)").classes) == 33


@pytest.mark.parametrize("spec", SMALLISH)
def test_classes_match_brute_force(group, spec):
    G = group(spec)
    cl = G.classes
    ours = {frozenset(tuple(int(v) for v in G.perms[i]) for i in cl.members(c)) for c in range(len(cl))}
    assert ours == set(brute.classes(as_tuples(G)))


@pytest.mark.parametrize("spec", SMALLISH)
def test_class_ordering_and_invariants(group, spec):
    G = group(spec)
    cl = G.classes
    assert cl.reps[0] == 0 and cl.sizes[0] == 1
    assert list(cl.reps) == sorted(cl.reps)
    assert all(cl.reps[c] == cl.members(c).min() for c in range(len(cl)))
    assert sum(cl.sizes) == G.order
    for s in cl.sizes:
        assert G.order % s == 0
    for g in G.generator_indices:
        conj = G.conjugation_map(g)
        assert np.array_equal(cl.class_of[conj], cl.class_of)


# -- powers and orders ---------------------------------------------------------------


def test_power_examples(group):
    C9, C81 = group("C(9)"), group("C(81)")
    g9, g81 = C9.generator_indices[0], C81.generator_indices[0]
    assert power(C9, 0, 17) == 0
    assert power(C9, g9, 4) != g9
    assert power(C81, g81, 82) == g81
    assert power(C81, g81, 0) == 0
    assert power(C81, g81, -1) == C81.inv(g81)


def test_power_matches_repeated_products(group):
    G = group("SD(3,3,1,10)")
    rng = random.Random(1)
    for _ in range(30):
        i, e = rng.randrange(G.order), rng.randrange(0, 40)
        x = 0
        for _ in range(e):
            x = G.mul(x, i)
        assert power(G, i, e) == x


def test_element_orders(group):
    C81 = group("C(81)")
    assert element_order(C81, 0) == 1
    assert element_order(C81, C81.generator_indices[0]) == 81
    E = group("ES+(3)")
    Z = center(E)
    for i in range(E.order):
        if i not in Z:
            assert element_order(E, i) == 3
    assert list(E.element_orders) == [element_order(E, i) for i in range(E.order)]


def test_exponents(group):
    assert exponent(group("C(81)")) == 81
    assert exponent(group("EA(3,4)")) == 3
    G = group("SD(3,3,1,10)")
    assert exponent(G) == 27 == max(brute.order(t) for t in as_tuples(G))


# -- centers and centralizers -------------------------------------------------------


def test_center_examples(group):
    A = group("Ab(3,[2,1])")
    assert center(A).order == A.order
    E = group("ES+(3)")
    assert center(E).order == 3
    assert centralizer(E, center(E)).order == 27
    assert omega1_center(group("C(9) x C(3)")).order == 9


def test_centralizer_brute(group):
    G = group("SD(3,3,1,10)")
    a = G.generator_indices[0]
    S = Subgroup.generated_by(G, [a])
    C = centralizer(G, S)
    expected = [x for x in range(G.order) if all(G.mul(x, s) == G.mul(s, x) for s in S.member_indices)]
    assert list(C.member_indices) == expected


def test_subgroup_validation(group):
    G = group("C(9)")
    g = G.generator_indices[0]
    with pytest.raises(NotSubgroup):
        Subgroup(G, [0, g])
    with pytest.raises(NotSubgroup):
        Subgroup(G, [g])
    cube = power(G, g, 3)
    H = Subgroup(G, [0, cube, power(G, g, 6)])
    assert H.order == 3 and cube in H
    for x in range(G.order):
        assert G.order % Subgroup.generated_by(G, [x]).order == 0


# -- quotients ------------------------------------------------------------------


def test_quotient_examples(group):
    G = group("ES+(3)")
    assert quotient(G, Subgroup.whole(G)).quotient.order == 1
    same = quotient(G, Subgroup.trivial(G)).quotient
    assert same.order == 27 and sorted(same.classes.sizes) == sorted(G.classes.sizes)
    Q = quotient(G, center(G)).quotient
    assert Q.order == 9 and exponent(Q) == 3 and Q.is_abelian


@pytest.mark.parametrize("spec", ["ES+(3)", "SD(3,3,1,10)", "M(3,3)"])
def test_projection_is_homomorphism_with_right_kernel(group, spec):
    G = group(spec)
    N = center(G)
    qr = quotient(G, N)
    pi, Q = qr.projection, qr.quotient
    for x in range(G.order):
        for y in range(G.order):
            assert pi[G.mul(x, y)] == Q.mul(int(pi[x]), int(pi[y]))
    assert set(np.flatnonzero(pi == 0)) == set(N.member_indices)
    assert set(pi.tolist()) == set(range(Q.order))


def test_quotient_not_normal(group):
    G = group("ES+(3)")
    x = next(i for i in range(G.order) if i not in center(G))
    with pytest.raises(NotNormal):
        quotient(G, Subgroup.generated_by(G, [x]))


# -- products ---------------------------------------------------------------------


def test_direct_product_examples(group):
    G = group("SD(3,3,1,10)")
    T = close_generators([], 3)
    assert direct_product(G, T).order == 81
    C3 = group("C(3)")
    P = direct_product(C3, C3)
    assert P.order == 9 and exponent(P) == 3
    assert len(direct_product(G, C3).classes) == 99
    with pytest.raises(PrimeMismatch):
        direct_product(C3, group("C(5)"))


def test_product_class_counts_multiply(group):
    for a, b in [("ES+(3)", "M(3,3)"), ("C(9)", "SD(3,3,1,10)")]:
        G, H = group(a), group(b)
        assert len(direct_product(G, H).classes) == len(G.classes) * len(H.classes)


# -- elementary abelian subgroups ---------------------------------------------------


@pytest.mark.parametrize("spec,count", [("C(3)", 2), ("EA(3,2)", 6), ("EA(3,3)", 28)])
def test_subspace_counts(group, spec, count):
    subs = elementary_abelian_subgroups(group(spec))
    assert len(subs) == count
    assert len({S.member_indices for S, _ in subs}) == count


@pytest.mark.parametrize("spec,maxgens", [("EA(3,2)", 2), ("EA(3,3)", 3)])
def test_subspaces_match_generation_oracle(group, spec, maxgens):
    G = group(spec)
    ours = {frozenset(tuple(int(v) for v in G.perms[i]) for i in S.member_indices) for S, _ in elementary_abelian_subgroups(G)}
    assert ours == brute.all_subgroups_by_generation(as_tuples(G), maxgens)


def test_subspace_ranks(group):
    subs = elementary_abelian_subgroups(group("EA(5,2)"))
    assert [r for _, r in subs].count(1) == 6
    assert all(S.order == 5**r for S, r in subs)


def test_not_elementary_abelian(group):
    with pytest.raises(NotElementaryAbelian):
        elementary_abelian_subgroups(group("C(9)"))
    with pytest.raises(NotElementaryAbelian):
        elementary_abelian_subgroups(group("ES+(3)"))


# -- tables -----------------------------------------------------------------------


def test_table_roundtrip(group, tmp_path):
    G = group("SD(3,3,1,10)")
    path = tmp_path / "g.txt"
    write_table_file(G, path)
    H = group_from_table(read_table_file(path))
    assert H.order == 81 and len(H.classes) == 33 and exponent(H) == 27


def test_bad_tables():
    with pytest.raises(ValueError):
        group_from_table([[0, 1], [1, 1]])
    with pytest.raises(ValueError):
        group_from_table([[1, 0], [0, 1]])
    # a latin square that is not associative (a loop of order 5)
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(ValueError):
        group_from_table(loop)


# -- properties -------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALLISH), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_associativity_and_closure(spec, i, j, k):
    from conftest import cached_group

    G = cached_group(spec)
    i, j, k = i % G.order, j % G.order, k % G.order
    assert G.mul(G.mul(i, j), k) == G.mul(i, G.mul(j, k))
    assert G.mul(i, G.inv(i)) == 0
    expected = brute.mul(tuple(G.perms[i].tolist()), tuple(G.perms[j].tolist()))
    assert G.index_of(expected) == G.mul(i, j)


@pytest.mark.parametrize("spec", ["C(1)", "C(27)", "SD(3,3,1,10)", "M(5,3)"])
def test_pth_power_map(spec, group):
    G = group(spec)
    assert [int(x) for x in G.pth_power] == [power(G, i, G.p or 1) for i in range(G.order)]
