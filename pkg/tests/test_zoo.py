from __future__ import annotations

from math import comb

import pytest

import oracles as o
from cosyx import zoo
from cosyx.errors import InputError


def test_cycle():
    X = zoo.cycle(7)
    assert X.counts() == (7, 7)
    assert [o.betti(X, k) for k in (0, 1)] == [1, 1]


@pytest.mark.parametrize("N,k", [(4, 1), (5, 2), (6, 3), (3, 2)])
def test_simplex_skeleton_counts(N, k):
    X = zoo.simplex_skeleton(N, k)
    assert X.counts() == tuple(comb(N, r + 1) for r in range(k + 1))
    assert X.is_pure and X.is_simplicial


def test_skeleton_augmented():
    X = zoo.simplex_skeleton(4, 3, augmented=True)
    assert X.kmin == -1 and X.n(-1) == 1


def test_lm_random_deterministic():
    a = zoo.lm_random(8, 2, 0.4, seed=11)
    b = zoo.lm_random(8, 2, 0.4, seed=11)
    c = zoo.lm_random(8, 2, 0.4, seed=12)
    assert a == b
    assert a.n(1) == comb(8, 2)
    assert a != c or a.n(2) in (0, comb(8, 3))


def test_lm_random_extremes():
    assert zoo.lm_random(6, 2, 0.0, 1).n(2) == 0
    assert zoo.lm_random(6, 2, 1.0, 1).n(2) == comb(6, 3)


def test_uniform_draws_range_and_repeatability():
    u = zoo.uniform_draws(3, 1000)
    assert ((u >= 0) & (u < 1)).all()
    assert (u == zoo.uniform_draws(3, 1000)).all()


@pytest.mark.parametrize("q", [2, 3, 4])
def test_flag_pg2_incidence(q):
    N = q * q + q + 1
    X = zoo.flag_pg2(q)
    assert X.counts() == (2 * N, N * (q + 1))
    lines = [set(l) for l in zoo.pg2_lines(q)]
    # two points lie on exactly one line
    for a in range(N):
        for b in range(a + 1, N):
            assert sum(1 for l in lines if a in l and b in l) == 1
    r = X.validate()
    assert r.upper[0] == q + 1


def test_parse_spec_and_header():
    spec = zoo.parse_spec(["lm", "6", "2", "0.5", "3"])
    assert spec.kind == "lm_random"
    assert spec.header().startswith("# gen lm_random 6 2 0.5 3 prng=")
    assert zoo.generate(zoo.parse_spec(["skeleton", "4", "2"])).counts() == (4, 6, 4)


@pytest.mark.parametrize("tokens", [["nope"], ["cycle", "x"], ["cycle"], ["cycle", "2"], ["pg2", "5"]])
def test_bad_specs(tokens):
    with pytest.raises(InputError):
        zoo.generate(zoo.parse_spec(tokens))
