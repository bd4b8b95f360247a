from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as o
from cosyx import gf2
from cosyx.errors import InputError
from cosyx.gf2 import Gf2Matrix, Gf2Vector


@st.composite
def matrices(draw, max_rows=9, max_cols=9):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r))
    return Gf2Matrix(r, c, tuple(rows))


@given(matrices())
def test_rank_matches_dense_oracle(m):
    assert gf2.rank(m) == o.dense_rank(m.to_dense())


@given(matrices())
def test_kernel_basis(m):
    ker = gf2.kernel_basis(m)
    assert len(ker) == m.ncols - gf2.rank(m)
    for v in ker:
        assert m.matvec(v) == 0
    assert gf2.rank(ker) == len(ker)


@given(matrices(), st.data())
def test_solve_roundtrip(m, data):
    x0 = data.draw(st.integers(0, (1 << m.ncols) - 1))
    b = m.matvec(x0)
    x, ker = gf2.solve(m, b)
    assert m.matvec(x) == b
    assert len(ker) == m.ncols - gf2.rank(m)


def test_solve_inconsistent():
    m = Gf2Matrix.from_dense([[1, 0], [1, 0]])
    assert gf2.solve(m, 0b01) is None


@given(matrices(), matrices())
def test_matmul_matches_numpy(a, b):
    b = Gf2Matrix(a.ncols, b.ncols, tuple(r & ((1 << b.ncols) - 1) for r in (list(b.rows) + [0] * a.ncols)[: a.ncols]))
    want = (a.to_dense().astype(int) @ b.to_dense().astype(int)) % 2
    assert np.array_equal((a @ b).to_dense(), want)


@given(matrices())
def test_transpose_involution(m):
    assert m.T.T == m


@given(st.lists(st.integers(0, 255), max_size=8), st.lists(st.integers(0, 255), max_size=8))
def test_quotient_basis(z, extra):
    b = gf2.span_basis(z[: len(z) // 2])
    reps = gf2.quotient_basis(z, b)
    assert len(reps) == gf2.rank(z) - gf2.rank(b)
    assert gf2.rank(list(b) + reps) == gf2.rank(z)


def test_quotient_requires_containment():
    with pytest.raises(InputError):
        gf2.quotient_basis([0b01], [0b10])


def test_echelon_is_reduced():
    piv = gf2.echelon([0b111, 0b011, 0b110])
    for p, r in piv.items():
        assert (r >> p) & 1
        for q in piv:
            if q != p:
                assert not (r >> q) & 1


def test_vector_basics():
    v = Gf2Vector.from_support(5, [0, 3])
    assert v.support == [0, 3] and v.weight == 2
    assert (v ^ v).bits == 0
    assert list(v.to_dense()) == [1, 0, 0, 1, 0]
    with pytest.raises(InputError):
        Gf2Vector(2, 0b100)


@given(matrices())
def test_dense_text_roundtrip(m):
    assert gf2.loads_dense(gf2.dumps_dense(m)) == m


def test_dense_text_errors():
    with pytest.raises(InputError):
        gf2.loads_dense("2 2\n10\n")
    with pytest.raises(InputError):
        gf2.loads_dense("1 2\n1x\n")
