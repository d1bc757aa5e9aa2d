import pytest
from hypothesis import given, strategies as st

from roquette.constructions import (
    Abelian,
    Cyclic,
    ElemAbelian,
    ExtraspecialExpP,
    PermFile,
    Product,
    SemidirectCyclic,
    TableFile,
    build,
    parse_cycles,
    parse_spec,
    render,
    write_table_file,
)
from roquette.decomposition import decompose
from roquette.errors import BadParameter, NotAPGroup, SpecSyntaxError
from roquette.groups import center, direct_product, exponent, power


def test_parse_examples():
    assert parse_spec("C(81)") == Cyclic(81)
    assert parse_spec("M(3,4)") == SemidirectCyclic(3, 3, 1, 10)
    assert parse_spec("EA(3,4) x C(9)") == Product(ElemAbelian(3, 4), Cyclic(9))


def test_parse_other_terms():
    assert parse_spec("Ab(3,[2,1,1])") == Abelian(3, (2, 1, 1))
    assert parse_spec(" ES+( 5 ) ") == ExtraspecialExpP(5)
    assert parse_spec("C(3)xC(3)xC(9)") == Product(Product(Cyclic(3), Cyclic(3)), Cyclic(9))
    assert parse_spec("perm:gens.txt x C(3)") == Product(PermFile("gens.txt"), Cyclic(3))
    assert parse_spec("table:/tmp/t.txt") == TableFile("/tmp/t.txt")


@pytest.mark.parametrize(
    "text,pos",
    [("", 0), ("C(", 2), ("C(3", 3), ("Q(3)", 0), ("C(3) y", 5), ("SD(3,3,1)", 8), ("Ab(3,2)", 5)],
)
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec(text)
    assert info.value.pos == pos


@pytest.mark.parametrize(
    "text",
    ["C(6)", "C(0)", "EA(4,2)", "ES+(2)", "M(3,2)", "SD(3,2,1,3)", "SD(3,2,1,2)", "SD(3,2,1,1)", "C(3) x C(5)", "Ab(3,[0])"],
)
def test_bad_parameters(text):
    with pytest.raises(BadParameter):
        parse_spec(text)


def test_even_prime_accepted_at_parse_time():
    assert parse_spec("C(4)") == Cyclic(4)
    assert parse_spec("EA(2,3)") == ElemAbelian(2, 3)


def test_trivial_semidirect_allowed_with_k0():
    assert parse_spec("SD(3,2,0,1)") == SemidirectCyclic(3, 2, 0, 1)
    assert build(parse_spec("SD(3,2,0,1)")).order == 9


leaves = st.one_of(
    st.sampled_from([3, 5, 7]).flatmap(lambda p: st.integers(0, 3).map(lambda m: Cyclic(p**m))),
    st.builds(ElemAbelian, st.just(3), st.integers(0, 4)),
    st.builds(Abelian, st.just(3), st.lists(st.integers(1, 3), min_size=1, max_size=3).map(tuple)),
    st.builds(ExtraspecialExpP, st.sampled_from([3, 5])),
    st.sampled_from([SemidirectCyclic(3, 3, 1, 10), SemidirectCyclic(3, 2, 2, 4), SemidirectCyclic(5, 2, 1, 6)]),
)
trees = st.recursive(leaves, lambda kids: st.builds(Product, kids, kids), max_leaves=4)


def factors(node):
    if isinstance(node, Product):
        return factors(node.left) + factors(node.right)
    return [node]


@given(trees)
def test_render_roundtrip(ast):
    # products are flat in the text form, so only the factor sequence survives
    try:
        parsed = parse_spec(render(ast))
    except BadParameter:
        # mixed primes inside a random product
        return
    assert factors(parsed) == factors(ast)
    assert parse_spec(render(parsed)) == parsed


def test_build_examples(group):
    C81 = build(Cyclic(81))
    assert C81.order == 81 and exponent(C81) == 81 and C81.is_abelian
    G = build(SemidirectCyclic(3, 3, 1, 10))
    assert G.order == 81 and not G.is_abelian and exponent(G) == 27 and len(G.classes) == 33
    E = build(ExtraspecialExpP(3))
    assert E.order == 27 and exponent(E) == 3 and center(E).order == 3


def test_extraspecial_degree_is_regular():
    assert build(ExtraspecialExpP(3)).degree == 27


def test_product_matches_direct_product():
    for left, right in [(ExtraspecialExpP(3), Cyclic(9)), (SemidirectCyclic(3, 3, 1, 10), Cyclic(3))]:
        P = build(Product(left, right))
        D = direct_product(build(left), build(right))
        assert (P.order, len(P.classes), exponent(P)) == (D.order, len(D.classes), exponent(D))
        assert decompose(P) == decompose(D)


@pytest.mark.parametrize("p,m", [(3, 1), (3, 3), (5, 2)])
def test_abelian_single_factor_is_cyclic(p, m):
    A, C = build(Abelian(p, (m,))), build(Cyclic(p**m))
    assert A.order == C.order and exponent(A) == exponent(C)


@pytest.mark.parametrize("p,m,k,u", [(3, 3, 1, 10), (3, 2, 2, 4), (3, 3, 2, 4), (5, 2, 1, 6), (7, 2, 1, 8), (3, 4, 2, 10)])
def test_semidirect_relation(p, m, k, u):
    G = build(SemidirectCyclic(p, m, k, u))
    a, b = G.generator_indices
    assert G.order == p ** (m + k)
    assert G.mul(G.mul(b, a), G.inv(b)) == power(G, a, u)
    assert power(G, a, p**m) == 0 and power(G, a, p ** (m - 1)) != 0
    assert power(G, b, p**k) == 0 and power(G, b, p ** (k - 1)) != 0


def test_parse_cycles():
    assert parse_cycles("(1 2 3)(4 5 6)") == [[0, 1, 2], [3, 4, 5]]
    assert parse_cycles("(1,2,3)") == [[0, 1, 2]]
    with pytest.raises(ValueError):
        parse_cycles("1 2 3")


def test_perm_file(tmp_path):
    path = tmp_path / "gens.txt"
    path.write_text("# C27 : C3 on 30 points\n(1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17 18 19 20 21 22 23 24 25 26 27)\n\n")
    G = build(parse_spec(f"perm:{path}"))
    assert G.order == 27 and G.p == 3


def test_perm_file_not_a_p_group(tmp_path):
    path = tmp_path / "s3.txt"
    path.write_text("(1 2 3)\n(1 2)\n")
    with pytest.raises(NotAPGroup):
        build(parse_spec(f"perm:{path}"))


def test_table_file(tmp_path, group):
    path = tmp_path / "t.txt"
    write_table_file(group("ES+(3)"), path)
    G = build(parse_spec(f"table:{path}"))
    assert G.order == 27 and len(G.classes) == 11
    P = build(parse_spec(f"table:{path} x C(3)"))
    assert len(P.classes) == 33


def test_bad_table_file(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("order 2\n0 1\n")
    with pytest.raises(ValueError):
        build(parse_spec(f"table:{path}"))
    path.write_text("size 1\n0\n")
    with pytest.raises(ValueError):
        build(parse_spec(f"table:{path}"))
