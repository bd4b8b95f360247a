from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as o
from cosyx import complex as cx
from cosyx import expansion as ex
from cosyx import zoo
from cosyx.errors import BudgetExceeded, InputError
from cosyx.tensor import tensor


@st.composite
def complexes(draw, max_n=6):
    n = draw(st.integers(3, max_n))
    facets = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=2, max_size=3), min_size=2, max_size=7))
    return cx.from_facets([sorted(f) for f in facets])


def dense_pair(X, k, co):
    """(H1, H2) with the searched space ker H1 and the trivial part rowspace H2."""
    down = o.boundary_of(X, k)
    up = o.boundary_of(X, k + 1)
    if co:
        return up.T, down
    return down, up.T


@given(complexes(), st.data())
def test_systole_span_mitm_oracle(X, data):
    k = data.draw(st.integers(0, X.dim))
    for co, fn in ((False, ex.systole), (True, ex.cosystole)):
        s = fn(X, k, method="span")
        m = fn(X, k, method="mitm")
        H1, H2 = dense_pair(X, k, co)
        want = o.min_outside(H1, H2)
        if want is None:
            assert s is None and m is None
            continue
        assert s.value == m.value == want
        # witnesses are genuine nontrivial (co)cycles
        for w in (s.witness, m.witness):
            assert w.size == want
            if co:
                assert X.delta(k, w.bits) == 0
            else:
                assert X.partial(k, w.bits) == 0


def test_cycle_systoles():
    X = zoo.cycle(6)
    assert ex.systole(X, 1).value == 6
    assert ex.cosystole(X, 1).value == 1
    assert ex.cosystole(X, 0).value == 6
    assert ex.cosystolic_bound(X, 1) == Fraction(1, 6)


def test_weighted_cosystole_normalized():
    X = zoo.cycle(4)
    assert ex.cosystole(X, 1, cx.NORMALIZED).value == Fraction(1, 4)


def test_budget_refusal():
    P = tensor(zoo.cycle(4), zoo.cycle(4))
    with pytest.raises(BudgetExceeded):
        ex.cosystole(P, 1, budget=4, method="span")
    with pytest.raises(BudgetExceeded):
        ex.cofilling(zoo.simplex_skeleton(8, 2), 1, budget=10)


def test_unknown_method():
    with pytest.raises(InputError):
        ex.systole(zoo.cycle(3), 1, method="guess")


@given(complexes(max_n=5), st.data())
def test_cofilling_matches_oracle(X, data):
    k = data.draw(st.integers(0, X.dim - 1))
    if X.n(k) > 10:
        return
    ones_k, ones_k1 = [1] * X.n(k), [1] * X.n(k + 1)
    res = ex.collective_cofilling(X, k, m_max=2)
    for m in (1, 2):
        assert res.values[m] == o.brute_collective(X, k, ones_k, 1, ones_k1, 1, m)


@given(complexes(max_n=5), st.data())
def test_collective_monotone(X, data):
    k = data.draw(st.integers(0, X.dim - 1))
    res = ex.collective_cofilling(X, k, m_max=3, adaptive=True)
    vals = [res.values[m] for m in range(1, res.m_max + 1)]
    assert vals == sorted(vals)
    assert res.mu == vals[0]


def test_cofilling_witness_is_consistent():
    X = zoo.simplex_skeleton(5, 2)
    r = ex.cofilling(X, 0)
    assert X.delta(0, r.beta.bits) == r.alpha.bits
    assert Fraction(r.beta.size, r.alpha.size) == r.value


def test_collective_witness_union_ratio():
    X = zoo.cycle(3)
    res = ex.collective_cofilling(X, 0, m_max=2)
    betas, pres = res.witnesses[2]
    assert len(betas) == 2
    for b, p in zip(betas, pres):
        assert X.delta(0, p.bits) == b.bits
    assert ex.union_ratio(X, betas, pres) == res.values[2] == Fraction(2, 3)


def test_expansion_report_lines():
    rep = ex.expansion_report(zoo.cycle(3), 0, m_max=2)
    lines = rep.lines()
    assert "mu=1/2" in lines and "mu_coll_2=2/3" in lines
    assert "sys=1" in lines and "cosys=3" in lines


def test_product_constants_l1():
    pc = ex.product_constants([1, 1], [1, 1], [2, 2], [3], {1: 2}, 1)
    assert pc.b == [1, 6]
    assert pc.lambda_l == Fraction(1, 6)
    assert pc.nu_l == 3
    assert pc.nu_l_proof == 3 + 6 * 2
    assert pc.chain_ok


def test_product_constants_input_checks():
    with pytest.raises(InputError):
        ex.product_constants([0, 1], [1, 1], [1], [1], {1: 1}, 1)
    with pytest.raises(InputError):
        ex.product_constants([1, 1], [1, 1], [1], [1], {}, 1)


def test_verify_product_small():
    v = ex.verify_product_theorem(zoo.cycle(3), zoo.cycle(3), 1)
    assert v.ok, v.lines()
    assert v.h_l == 2 and v.cosys == 3


@pytest.mark.parametrize("a,b", [(3, 3), (3, 4), (4, 3)])
def test_product_mu_matches_split_table_oracle(a, b):
    P = tensor(zoo.cycle(a), zoo.cycle(b))
    for k in (0, 1):
        assert ex.cofilling(P, k).value == o.brute_mu(P, k)


def test_c3_c4_degree_one_value():
    assert ex.cofilling(tensor(zoo.cycle(3), zoo.cycle(4)), 1).value == Fraction(3, 2)


I = zoo.simplex_skeleton(2, 1)
T = zoo.simplex_skeleton(3, 2)
P3 = cx.from_facets([[0, 1], [1, 2]])


@pytest.mark.parametrize(
    "X,Y",
    [(zoo.cycle(3), zoo.cycle(4)), (zoo.cycle(4), zoo.cycle(3)), (zoo.cycle(3), I), (T, zoo.cycle(3)),
     (I, I), (T, T), (P3, zoo.cycle(4)), (zoo.cycle(6), I)],
)
def test_product_theorem_proof_form(X, Y):
    """(a), the chain condition and the per-block bounds on μ_{l-1}, μ̄_{l-1} all hold."""
    v = ex.verify_product_theorem(X, Y, 1)
    assert v.ok, v.lines()
    assert v.constants.nu_l <= v.constants.nu_l_proof
