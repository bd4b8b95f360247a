"""Frozen reference values, produced by the brute-force oracles alone."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

import oracles as o
from cosyx import zoo

# frozen before the search code was written; these must never be edited to
# match the package
TORIC = {3: (18, 2, 3, 3), 4: (32, 2, 4, 4), 5: (50, 2, 5, 5)}
MU0_C3 = Fraction(1, 2)
MUBAR0_C3 = {1: Fraction(1, 2), 2: Fraction(2, 3), 3: Fraction(2, 3)}
RHO_K4 = Fraction(0)


@pytest.mark.parametrize("L", [3, 4, 5])
def test_toric_oracle(L):
    assert o.toric_parameters(L) == TORIC[L]


def test_cycle3_cofilling_oracle():
    X = zoo.cycle(3)
    got = {m: o.brute_collective(X, 0, [1] * 3, 1, [1] * 3, 1, m) for m in (1, 2, 3)}
    assert got[1] == MU0_C3
    assert got == MUBAR0_C3


def test_k4_rho_oracle():
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert o.brute_rho([0, 1, 2, 3], edges, [3] * 4, 12, [1] * 6, 6) == RHO_K4


def test_dense_rank_small():
    assert o.dense_rank(np.eye(4, dtype=np.uint8)) == 4
    assert o.dense_rank([[1, 1], [1, 1]]) == 1
    assert o.dense_rank(np.zeros((3, 5))) == 0
