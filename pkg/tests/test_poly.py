import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmdist.algebra import QQ, PrimeField
from lmdist.families import imm_poly, ImmParams
from lmdist.poly import (
    Monomial,
    SparsePoly,
    VarTable,
    mono_distance,
    parse_monomial,
    parse_poly,
    simple_table,
)
from oracles import imm_paths_restricted

T6 = simple_table(6)


def mono(text, table=T6):
    return parse_monomial(text, table)


# ---------------------------------------------------------------------------
# distance


def test_distance_worked_example():
    # multisets {x1,x1,x2,x3,x3,x4} vs {x1,x2,x2,x3,x5,x6}: shared 3, both size 6
    assert mono_distance(mono("x1^2*x2*x3^2*x4"), mono("x1*x2^2*x3*x5*x6")) == 3


def test_distance_identical_and_disjoint():
    m = mono("x1^2*x4")
    assert mono_distance(m, m) == 0
    assert mono_distance(mono("x1^3"), mono("x2^2")) == 2


def test_distance_table_mismatch():
    other = simple_table(3)
    with pytest.raises(ValueError):
        mono_distance(mono("x1"), parse_monomial("x1", other))


@st.composite
def monomials(draw, table=T6, max_deg=6):
    deg = draw(st.integers(0, max_deg))
    exps: dict[int, int] = {}
    for _ in range(deg):
        v = draw(st.integers(0, len(table) - 1))
        exps[v] = exps.get(v, 0) + 1
    return Monomial(table, exps.items())


@given(monomials(), monomials())
def test_distance_symmetry_and_bound(m1, m2):
    d = mono_distance(m1, m2)
    assert d == mono_distance(m2, m1)
    assert 0 <= d <= max(m1.deg, m2.deg)
    if not set(m1.variables()) & set(m2.variables()):
        assert d == min(m1.deg, m2.deg)


# ---------------------------------------------------------------------------
# leading monomials


def test_leading_monomial_examples():
    t = simple_table(3)
    assert parse_poly("x1 + x2", t).leading_monomial() == mono("x1", t)
    # pure lex ignores total degree
    assert parse_poly("x2^2 + x1", t).leading_monomial() == mono("x1", t)
    assert parse_poly("x1*x2 + x1*x3", t).leading_monomial() == mono("x1*x2", t)
    with pytest.raises(ValueError):
        SparsePoly.zero(t).leading_monomial()


@st.composite
def field_polys(draw, table=T6, max_terms=5, max_deg=4):
    field = PrimeField()
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        m = draw(monomials(table, max_deg))
        terms[m] = draw(st.integers(1, 10**6))
    return SparsePoly(table, field, {m: field.embed(c) for m, c in terms.items()})


@settings(max_examples=60)
@given(field_polys(), field_polys())
def test_lm_multiplicative(f, g):
    prod = f * g
    assert not prod.is_zero()  # prime field: no zero divisors
    assert prod.leading_monomial() == f.leading_monomial() * g.leading_monomial()


# ---------------------------------------------------------------------------
# calculus


def test_derive_examples():
    t = simple_table(3)
    f = parse_poly("x1^2*x2", t)
    assert f.derive(mono("x1", t)) == parse_poly("2*x1*x2", t)
    g = parse_poly("x1*x2 + x2*x3", t)
    assert g.derive(mono("x2", t)) == parse_poly("x1 + x3", t)


def test_derive_mod2_kills_square():
    t = simple_table(1)
    gf2 = PrimeField(2)
    f = parse_poly("x1^2", t, gf2)
    assert f.derive(parse_monomial("x1", t)).is_zero()


@given(field_polys(), st.integers(0, 5), st.integers(0, 5))
def test_derive_commutes(f, va, vb):
    ma, mb = Monomial.var(T6, va), Monomial.var(T6, vb)
    assert f.derive(ma).derive(mb) == f.derive(mb).derive(ma)


def test_restrict_examples():
    t = simple_table(3)
    f = parse_poly("x1*x2 + x3", t)
    assert f.restrict({0: 0}) == parse_poly("x3", t)
    g = parse_poly("x1*x2", t)
    assert g.restrict({0: 1, 1: 1}) == parse_poly("1", t)


@given(field_polys(), st.data())
def test_restrict_then_evaluate(f, data):
    point = {v: data.draw(st.integers(0, 50)) for v in range(len(T6))}
    partial = {v: point[v] for v in range(3)}
    restricted = f.restrict(partial)
    assert restricted.evaluate(point) == f.evaluate(point)


def test_evaluate_examples():
    t = simple_table(2)
    assert parse_poly("x1 + x2", t).evaluate({0: 1, 1: 1}) == 2
    assert parse_poly("x1*x2^2", t).evaluate({0: 2, 1: 3}) == 18
    with pytest.raises(ValueError):
        parse_poly("x1*x2", t).evaluate({0: 1})


def test_imm_23_restriction_matches_path_enumeration():
    params = ImmParams(2, 3)
    f = imm_poly(params)
    table = f.table

    def zeroed(t, i, j):
        return t == 2 and i != j  # freeze off-diagonals of the middle matrix

    assignment = {
        table.id_of_label((q, i, j)): 0
        for q in (2,)
        for i in (1, 2)
        for j in (1, 2)
        if i != j
    }
    assert f.restrict(assignment) == imm_paths_restricted(2, 3, table, zeroed)


# ---------------------------------------------------------------------------
# tables and parsing


def test_var_table_invariants():
    with pytest.raises(ValueError):
        VarTable(["a", "a"])
    with pytest.raises(ValueError):
        VarTable(["a", "b"], labels=[(1,)])
    t = VarTable(["a", "b"], labels=[(0, 1), (0, 2)])
    assert t.id_of_label((0, 2)) == 1
    assert t.label_of(0) == (0, 1)


def test_parse_rejects_unknown_and_reports_position():
    t = simple_table(2)
    with pytest.raises(ValueError, match="term 1"):
        parse_poly("x1 + y7", t)
    with pytest.raises(ValueError, match="unknown variable"):
        parse_monomial("zz", t)


def test_parse_round_trip_and_whitespace():
    t = simple_table(4)
    f = parse_poly("  3*x1^2*x2 +  x3\t+ -2*x4 ", t)
    assert f.terms[mono("x1^2*x2", t)] == 3
    assert f.terms[mono("x4", t)] == -2
    assert parse_poly(f.to_text(), t) == f
    assert parse_poly("0", t).is_zero()


def test_coefficient_merge_and_cancellation():
    t = simple_table(2)
    assert parse_poly("x1 + x1", t) == parse_poly("2*x1", t)
    assert parse_poly("x1 + -1*x1", t).is_zero()
